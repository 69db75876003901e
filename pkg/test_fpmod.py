"""
Tests for presented modules, maps, limits and exactness.
"""
import numpy as np
import pytest

from exceptions import ModuleAxiomError, NotAModuleMapError
from fpmod import (
    ModuleMap,
    cokernel,
    direct_sum,
    dual,
    dual_map,
    free_module,
    from_presentation,
    from_representation,
    generator_lower_bound,
    generators_verified_minimal,
    hom_dim,
    identity_map,
    image,
    is_exact,
    is_projective,
    iso_probe,
    kernel,
    pullback,
    pushout,
    sigma,
    zero_map,
    zero_module,
)
from linalg import FpMatrix


def times_x(dual2):
    """Right multiplication by x on the regular module: 1 -> x, x -> 0."""
    a = free_module(dual2, 1, name="A")
    return ModuleMap(a, a, FpMatrix.from_rows(2, [[0, 0], [1, 0]]), "x")


def socle_sequence(dual2, k):
    """0 -> k -> A -> k -> 0."""
    a = free_module(dual2, 1, name="A")
    inc = ModuleMap(k, a, FpMatrix.from_rows(2, [[0], [1]]), "incl")
    proj = ModuleMap(a, k, FpMatrix.from_rows(2, [[1, 0]]), "proj")
    return inc, proj


class TestConstruction:
    """Presentations and representations."""

    def test_free_module(self, dual2):
        m = free_module(dual2, 1)
        assert m.dim == 2
        assert m.is_free()

    def test_simple_from_presentation(self, k_dual):
        assert k_dual.dim == 1
        assert k_dual.num_generators == 1

    def test_unit_relation_kills(self, dual2):
        assert from_presentation(dual2, np.array([[[1, 0]]])).is_zero()

    def test_representation_of_simple(self, dual2):
        m = from_representation(dual2, [FpMatrix.identity(2, 1), FpMatrix.zeros(2, 1, 1)])
        assert m.num_generators == 1
        assert m.num_relations >= 1
        assert m.dim == 1

    def test_regular_representation_is_free(self, dual2):
        m = from_representation(dual2, list(dual2.left_regular))
        assert m.num_generators == 1
        assert m.num_relations == 0

    def test_bad_action_rejected(self, dual2):
        # x acting as the identity violates x * x = 0
        with pytest.raises(ModuleAxiomError):
            from_representation(dual2, [FpMatrix.identity(2, 1), FpMatrix.identity(2, 1)])

    def test_non_linear_map_rejected(self, dual2, k_dual):
        a = free_module(dual2, 1)
        with pytest.raises(NotAModuleMapError):
            ModuleMap(k_dual, a, FpMatrix.from_rows(2, [[1], [0]]))


class TestHomAndDuals:
    """Hom spaces, duals and the evaluation map."""

    def test_hom_dims(self, dual2, k_dual, regular_dual):
        assert hom_dim(k_dual, k_dual) == 1
        assert hom_dim(k_dual, regular_dual) == 1
        assert hom_dim(regular_dual, k_dual) == k_dual.dim

    def test_dual_of_free(self, dual2):
        d = dual(free_module(dual2, 2))
        assert d.dim == 4
        assert d.side == "right"

    def test_dual_of_simple_and_zero(self, dual2, k_dual):
        assert dual(k_dual).dim == 1
        assert dual(zero_module(dual2)).is_zero()

    def test_dual_of_identity(self, k_dual):
        f = dual_map(identity_map(k_dual))
        assert f.is_iso()

    def test_dual_of_times_x_has_rank_one(self, dual2):
        assert dual_map(times_x(dual2)).rank == 1

    def test_sigma(self, dual2, k_dual, regular_dual):
        assert sigma(regular_dual).is_iso()
        assert sigma(k_dual).is_iso()


class TestKernelsAndLimits:
    """Kernels, images, cokernels, sums, pushouts and pullbacks."""

    def test_kernel_of_identity(self, k_dual):
        ker, _ = kernel(identity_map(k_dual))
        assert ker.is_zero()

    def test_image_of_times_x(self, dual2):
        im, inc = image(times_x(dual2))
        assert im.dim == 1
        assert inc.is_injective()

    def test_cokernel_of_zero_map(self, k_dual, regular_dual):
        cok, proj = cokernel(zero_map(k_dual, regular_dual))
        assert cok.dim == regular_dual.dim
        assert proj.is_iso()

    def test_direct_sums(self, dual2, k_dual):
        kk = direct_sum([k_dual, k_dual]).module
        assert kk.dim == 2
        assert kk.act([0, 1]).is_zero()
        ff = direct_sum([free_module(dual2, 1), free_module(dual2, 1)]).module
        assert ff.dim == 4
        assert is_projective(ff)

    def test_pushout_of_identities(self, k_dual):
        po = pushout(identity_map(k_dual), identity_map(k_dual))
        assert po.module.dim == k_dual.dim

    def test_pushout_along_zero_is_cokernel(self, dual2, k_dual):
        inc, _ = socle_sequence(dual2, k_dual)
        po = pushout(inc, zero_map(k_dual, zero_module(dual2)))
        assert po.module.dim == 1

    def test_pullback_of_projections(self, dual2):
        a = free_module(dual2, 1)
        ds = direct_sum([a, a])
        pb = pullback(ds.projections[0], ds.projections[0])
        assert pb.module.dim == 4 + 4 - 2

    def test_pullback_along_zero_is_kernel(self, dual2):
        f = times_x(dual2)
        pb = pullback(f, zero_map(zero_module(dual2), f.target))
        assert pb.module.dim == 1


class TestExactness:
    """Exactness certificates."""

    def test_identity(self, k_dual):
        seq = is_exact([identity_map(k_dual)])
        assert seq
        assert len(seq.nodes) == 2

    def test_socle_sequence(self, dual2, k_dual):
        seq = is_exact(list(socle_sequence(dual2, k_dual)), name="ses")
        assert seq
        assert [m.dim for m in seq.objects] == [0, 1, 2, 1, 0]
        assert seq.tags[2] == "free"
        assert seq.revalidate()

    def test_times_x_not_exact(self, dual2):
        failure = is_exact([times_x(dual2)])
        assert not failure
        assert failure.node == 1


class TestProjectivityAndIso:
    """Split test and isomorphism probing."""

    def test_free_is_projective(self, dual2):
        verdict = is_projective(free_module(dual2, 2))
        assert verdict
        assert verdict.splitting is not None

    def test_simple_over_dual_not_projective(self, k_dual):
        assert not is_projective(k_dual)

    def test_simples_over_path(self, s1_path, s2_path):
        assert is_projective(s1_path)
        assert not is_projective(s2_path)

    def test_self_iso(self, k_dual):
        assert iso_probe(k_dual, k_dual).isomorphic

    def test_dimension_invariant(self, k_dual, regular_dual):
        verdict = iso_probe(k_dual, regular_dual)
        assert verdict.status == "not-isomorphic"

    def test_swapped_sum(self, k_dual, regular_dual):
        left = direct_sum([k_dual, regular_dual]).module
        right = direct_sum([regular_dual, k_dual]).module
        assert iso_probe(left, right, seed=3).isomorphic


class TestGeneratorMinimality:
    """Lower bounds on generator counts and the minimality flag."""

    def test_lower_bound(self, path2, local3):
        assert generator_lower_bound(path2, 2) == 1
        assert generator_lower_bound(path2, 3) == 2
        assert generator_lower_bound(local3, 4) == 4
        assert generator_lower_bound(local3, 0) == 0

    def test_simple_is_verified(self, k_dual):
        assert generators_verified_minimal(k_dual)

    def test_top_basis_lift_not_verified(self, path2):
        m = from_representation(path2, list(path2.left_regular), minimal=False)
        assert m.num_generators == 2
        assert not generators_verified_minimal(m)
