"""
Tests for GP certification, Gorenstein transposes and the constructions.
"""
import pytest

from conftest import DATA_DIR
from exceptions import CertificationError, MissingDataError, ModeMismatchError
from fpmod import (
    TAG_FREE,
    TAG_GP_BOUNDED,
    TAG_PROJECTIVE,
    ModuleMap,
    certify,
    free_module,
    identity_map,
    image_factorization,
    is_exact,
    is_projective,
    zero_map,
    zero_module,
)
from gorenstein import (
    MODE_BOUNDED,
    VERDICT_GP,
    VERDICT_GP_BOUNDED,
    VERDICT_NOT_GP,
    GPMode,
    certify_gpresentation,
    construct_cor25,
    construct_prop22,
    construct_thm24_fwd,
    construct_thm26,
    cor35_report,
    free_gpresentation,
    gorenstein_star_report,
    gorenstein_transpose,
    gp_embedding,
    gp_test,
    lemma21_check,
    precover_check,
    prop34_report,
    thm31_embed,
    zero_transpose_presentation,
)
from homology import transpose
from linalg import FpMatrix
from oracle import recheck
from spec_loader import SpecLoader


@pytest.fixture(scope="module")
def loader():
    return SpecLoader()


@pytest.fixture(scope="module")
def dual2_file(loader):
    """The dual numbers as declared in data/, named so diagrams resolve."""
    return loader.load_ring(str(DATA_DIR / "dual2.ring"))


def load_sequence(loader, ring, name):
    return loader.load_diagram(str(DATA_DIR / name), ring).sequence(0)


BOUNDED = GPMode.bounded(2)


class TestModes:
    """Choosing between Gorenstein-ring and bounded mode."""

    def test_ring_mode_from_declaration(self, dual2):
        assert GPMode.for_algebra(dual2, "ring") == GPMode.ring(0)

    def test_ring_mode_needs_declaration(self, local3):
        with pytest.raises(ModeMismatchError):
            GPMode.for_algebra(local3, "ring")

    def test_bounded_mode(self, local3):
        mode = GPMode.for_algebra(local3, "bounded", 3)
        assert mode.kind == MODE_BOUNDED
        assert mode.degree == 3
        assert not mode.definitive

    def test_gp_test_verifies_ring_mode(self, k_local):
        with pytest.raises(ModeMismatchError):
            gp_test(k_local, GPMode.ring(1))


class TestGPTest:
    """Ext-vanishing certificates."""

    def test_simple_over_self_injective(self, k_dual):
        cert = gp_test(k_dual, GPMode.ring(0))
        assert cert.verdict == VERDICT_GP
        assert cert.definitive

    def test_bounded_verdict(self, k_dual):
        cert = gp_test(k_dual, BOUNDED)
        assert cert.verdict == VERDICT_GP_BOUNDED
        assert cert.ext_table == (0, 0)
        assert cert.transpose_table == (0, 0)
        assert cert.tag == TAG_GP_BOUNDED

    def test_projective_shortcut(self, regular_dual):
        cert = gp_test(regular_dual, BOUNDED)
        assert cert.verdict == VERDICT_GP
        assert cert.projective

    def test_not_gp_witness(self, k_local):
        cert = gp_test(k_local, BOUNDED)
        assert cert.verdict == VERDICT_NOT_GP
        assert cert.witness_degree == 1
        assert cert.witness_side == "module"
        assert cert.definitive

    def test_hereditary_simples(self, s1_path, s2_path):
        mode = GPMode.ring(1)
        assert gp_test(s1_path, mode).is_gp
        cert = gp_test(s2_path, mode)
        assert not cert.is_gp
        assert cert.witness_degree == 1


class TestGorensteinTranspose:
    """Gorenstein projective presentations and their transposes."""

    def test_free_presentation_gives_transpose(self, k_dual):
        pi = free_gpresentation(k_dual, BOUNDED)
        assert pi.x0.is_free() and pi.x1.is_free()
        assert gorenstein_transpose(k_dual, pi).dim == transpose(k_dual).dim

    def test_gp_presentation_from_file(self, loader, dual2_file):
        g, eps = load_sequence(loader, dual2_file, "pres_k_gp.dia")
        pi = certify_gpresentation(g, eps, BOUNDED)
        assert pi.sequence.tags[0] == TAG_GP_BOUNDED
        assert gorenstein_transpose(pi.module, pi).is_zero()

    def test_zero_transpose_of_gp_module(self, k_dual):
        pi = zero_transpose_presentation(k_dual, BOUNDED)
        assert gorenstein_transpose(k_dual, pi).is_zero()

    def test_zero_transpose_needs_gp(self, k_local):
        with pytest.raises(CertificationError):
            zero_transpose_presentation(k_local, BOUNDED)

    def test_non_exact_presentation(self, dual2, k_dual, regular_dual):
        eps = ModuleMap(regular_dual, k_dual, FpMatrix.from_rows(2, [[1, 0]]))
        with pytest.raises(CertificationError):
            certify_gpresentation(zero_map(zero_module(dual2), regular_dual), eps, BOUNDED)

    def test_presentation_module_mismatch(self, k_dual):
        pi = free_gpresentation(k_dual, BOUNDED)
        other = free_module(k_dual.algebra, 1)
        with pytest.raises(CertificationError):
            gorenstein_transpose(other, pi)


class TestEmbeddings:
    """Projective embeddings of GP modules."""

    def test_embedding_of_simple(self, k_dual):
        emb = gp_embedding(k_dual, BOUNDED)
        assert is_projective(emb.target)
        assert emb.cokernel.dim == 1

    def test_projective_embeds_into_itself(self, regular_dual):
        emb = gp_embedding(regular_dual, BOUNDED)
        assert emb.cokernel.is_zero()

    def test_non_torsionless(self, s2_path):
        with pytest.raises(MissingDataError):
            gp_embedding(s2_path, GPMode.ring(1))


class TestConstructions:
    """Sequence constructions, each rechecked independently."""

    def test_prop22(self, loader, dual2_file):
        seq = is_exact(load_sequence(loader, dual2_file, "thm24_dual2.dia"))
        first, second = construct_prop22(seq, BOUNDED)
        assert first.tags[2] in (TAG_FREE, TAG_PROJECTIVE)
        assert second.tags[3] in (TAG_FREE, TAG_PROJECTIVE)
        assert recheck(first).passed
        assert recheck(second).passed

    def test_thm24_moves_gp_term(self, k_dual):
        seq = is_exact([identity_map(k_dual), zero_map(k_dual, zero_module(k_dual.algebra))])
        proj_seq, comp_seq = construct_thm24_fwd(seq, BOUNDED)
        assert is_projective(proj_seq.inner_objects[1])
        assert comp_seq.inner_objects[2].dim == 1
        assert recheck(proj_seq).passed

    def test_thm24_rejects_non_gp(self, k_local):
        seq = is_exact([identity_map(k_local), zero_map(k_local, zero_module(k_local.algebra))])
        with pytest.raises(CertificationError):
            construct_thm24_fwd(seq, BOUNDED)

    def test_cor25_gp_module(self, k_dual):
        res = construct_cor25(k_dual, 2, BOUNDED)
        assert res.gpd == 0
        assert is_projective(res.cover_module)

    def test_cor25_hereditary(self, s2_path):
        res = construct_cor25(s2_path, 2, GPMode.ring(1))
        assert res.gpd == 1
        assert res.pd.value == 1

    def test_thm26_slot_zero(self, s2_path):
        seq = construct_thm26(s2_path, 0, 1, GPMode.ring(1))
        assert seq
        assert recheck(seq).passed
        _, _, inc = image_factorization(seq.inner_maps[-2])
        cover = seq.inner_maps[-1]
        x0 = cover.source
        testset = [free_module(s2_path.algebra, 1, name="A"), free_module(s2_path.algebra, 2, name="A2"), x0]
        assert precover_check(certify([inc, cover], name="precover"), testset).passed

    def test_thm26_bad_slot(self, s2_path):
        with pytest.raises(ValueError):
            construct_thm26(s2_path, 2, 1, GPMode.ring(1))

    def test_thm31_embed_free_presentation(self, k_dual):
        emb = thm31_embed(k_dual, free_gpresentation(k_dual, BOUNDED), BOUNDED, bound=2)
        assert emb.ext_tables[0] == emb.ext_tables[1]
        assert emb.gorenstein_transpose.dim == 1


class TestChecks:
    """Consistency reports."""

    def test_lemma21(self, loader, dual2_file):
        seq = is_exact(load_sequence(loader, dual2_file, "ses_k.dia"))
        assert lemma21_check(seq, 2, BOUNDED).passed

    def test_precover(self, loader, dual2_file):
        seq = is_exact(load_sequence(loader, dual2_file, "ses_k.dia"))
        a, k = seq.inner_objects[1], seq.inner_objects[0]
        assert precover_check(seq, [a]).passed
        assert not precover_check(seq, [k]).passed

    def test_prop34_and_cor35(self, k_dual):
        pi = free_gpresentation(k_dual, BOUNDED)
        assert prop34_report(k_dual, pi, 2, BOUNDED).passed
        assert cor35_report(k_dual, pi, bound=2, mode=BOUNDED).passed

    def test_gorenstein_star(self, k_dual):
        assert gorenstein_star_report(k_dual, free_gpresentation(k_dual, BOUNDED)).passed
