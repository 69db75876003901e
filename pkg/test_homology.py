"""
Tests for resolutions, Ext, transposes and the evaluation map.
"""
import pytest

from fpmod import free_module, is_projective, iso_probe
from homology import (
    ext,
    ext_dims,
    free_resolution,
    gpd_bounded,
    n_torsionfree,
    pd_bounded,
    star_sequence,
    syzygy,
    transpose,
)


class TestResolution:
    """Minimal free resolutions and syzygies."""

    def test_ranks_over_dual_numbers(self, k_dual):
        assert free_resolution(k_dual, 4).ranks == (1, 1, 1, 1, 1)

    def test_ranks_over_local3(self, k_local):
        assert free_resolution(k_local, 3).ranks == (1, 2, 4, 8)

    def test_resolution_is_exact(self, k_local):
        assert free_resolution(k_local, 2).certify()

    def test_syzygy_of_simple(self, k_dual, k_local):
        assert iso_probe(syzygy(k_dual, 1), k_dual).isomorphic
        omega = syzygy(k_local, 1)
        assert omega.dim == 2
        assert omega.num_generators == 2

    def test_free_module_has_no_syzygy(self, dual2):
        assert syzygy(free_module(dual2, 2), 1).is_zero()

    def test_bad_arguments(self, k_dual):
        with pytest.raises(ValueError):
            free_resolution(k_dual, -1)
        with pytest.raises(ValueError):
            syzygy(k_dual, 0)


class TestExt:
    """Ext^i(M, R)."""

    def test_self_injective_vanishing(self, k_dual):
        assert ext_dims(k_dual, 3) == [0, 0, 0]

    def test_hom_into_ring(self, k_dual):
        ext0 = ext(k_dual, 0)
        assert ext0.dim == 1
        assert ext0.value.side == "right"

    def test_local3_nonvanishing(self, k_local):
        assert ext_dims(k_local, 1)[0] > 0

    def test_ext_group_matches_table(self, k_local):
        assert ext(k_local, 1).dim == ext_dims(k_local, 1)[0]

    def test_hereditary_simple(self, s2_path):
        assert ext_dims(s2_path, 2) == [1, 0]

    def test_empty_range(self, k_dual):
        assert ext_dims(k_dual, 0) == []


class TestTranspose:
    """Auslander-Bridger transposes."""

    def test_transpose_of_simple(self, k_dual):
        tr = transpose(k_dual)
        assert tr.side == "right"
        assert tr.dim == 1

    def test_transpose_of_free_is_zero(self, dual2):
        assert transpose(free_module(dual2, 2)).is_zero()

    def test_double_transpose(self, k_local):
        tr = transpose(k_local)
        assert iso_probe(transpose(tr), k_local).isomorphic


class TestDimensions:
    """Projective and Gorenstein projective dimension."""

    def test_pd_of_projectives(self, s1_path, regular_dual):
        assert pd_bounded(s1_path, 2).value == 0
        assert pd_bounded(regular_dual, 2).value == 0

    def test_pd_of_simple(self, s2_path):
        assert is_projective(syzygy(s2_path, 1))
        assert pd_bounded(s2_path, 2).value == 1

    def test_infinite_pd(self, k_dual):
        verdict = pd_bounded(k_dual, 3)
        assert not verdict.bounded
        assert str(verdict) == "> 3"

    def test_gpd(self, k_dual, s2_path):
        assert gpd_bounded(k_dual, 2).value == 0
        assert gpd_bounded(s2_path, 2).value == 1


class TestEvaluation:
    """The evaluation sequence and torsionfreeness."""

    def test_star_sequence_of_reflexive(self, k_dual):
        star = star_sequence(k_dual)
        assert star.kernel_dim == 0
        assert star.cokernel_dim == 0
        assert star.consistent

    def test_star_sequence_of_non_torsionless(self, s2_path):
        star = star_sequence(s2_path)
        assert star.kernel_dim == 1
        assert star.consistent

    def test_reflexive_simple(self, k_dual):
        verdict = n_torsionfree(k_dual, 2)
        assert verdict.holds
        assert verdict.sigma_injective and verdict.sigma_surjective
        assert verdict.consistent

    def test_not_torsionless(self, s2_path):
        verdict = n_torsionfree(s2_path, 1)
        assert not verdict.holds
        assert not verdict.sigma_injective
        assert verdict.consistent

    def test_bad_n(self, k_dual):
        with pytest.raises(ValueError):
            n_torsionfree(k_dual, 0)
