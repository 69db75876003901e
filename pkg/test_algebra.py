"""
Tests for algebras: parsing, validation, opposites, radicals and injective dimension.
"""
import numpy as np
import pytest

from algebra import build_named, parse_algebra
from exceptions import AlgebraValidationError, SpecParseError


DUAL_SPEC = """
ring dual2 p=2 dim=2
basis 1 x
unit 1 0
mul 0 0 = 1 0
mul 0 1 = 0 1
mul 1 0 = 0 1
"""


class TestParseAlgebra:
    """Ring-spec parsing."""

    def test_dual_numbers(self, dual2):
        a = parse_algebra(DUAL_SPEC)
        assert a.dim == 2
        assert a.p == 2
        assert a == dual2

    def test_field(self, data_dir):
        a = parse_algebra((data_dir / "field2.ring").read_text())
        assert a.dim == 1
        assert a.radical_dim == 0

    def test_data_files_load(self, data_dir):
        for name in ("dual2", "local3", "pathA2"):
            a = parse_algebra((data_dir / f"{name}.ring").read_text(), source=name)
            assert a.name == name

    def test_broken_unit_law(self):
        text = "ring bad p=2 dim=2\nbasis 1 x\nunit 1 0\nmul 0 0 = 1 0\nmul 1 1 = 0 1\n"
        with pytest.raises(AlgebraValidationError, match="Unit law"):
            parse_algebra(text)

    def test_bad_header_reports_line(self):
        with pytest.raises(SpecParseError) as info:
            parse_algebra("ring broken\n")
        assert info.value.line == 1

    def test_unknown_key_reports_line(self):
        with pytest.raises(SpecParseError) as info:
            parse_algebra("ring r p=2 dim=1\nbasis 1\nfoo 3\n", source="r.ring")
        assert info.value.line == 3
        assert "r.ring" in str(info.value)

    def test_non_prime_rejected(self):
        with pytest.raises(SpecParseError):
            parse_algebra("ring r p=4 dim=1\nbasis 1\nunit 1\nmul 0 0 = 1\n")

    def test_spec_text_round_trip(self, path2, tri_dual):
        for a in (path2, tri_dual):
            assert parse_algebra(a.to_spec_text()) == a


class TestOpposite:
    """Opposite algebras."""

    def test_commutative_is_self_opposite(self, dual2):
        assert np.array_equal(dual2.opposite().constants, dual2.constants)

    def test_transposed_table(self, path2):
        op = path2.opposite()
        assert np.array_equal(op.constants, np.swapaxes(path2.constants, 0, 1))
        assert op.side == "right"

    def test_involution(self, path2, local3):
        for a in (path2, local3):
            assert a.opposite().opposite() == a
            assert a.opposite().base == a


class TestRadical:
    """Radical and its dimension."""

    def test_dimensions(self, field2, dual2, local3, path2):
        assert field2.radical_dim == 0
        assert dual2.radical_dim == 1
        assert local3.radical_dim == 2
        assert path2.radical_dim == 1

    def test_dual_radical_is_x(self, dual2):
        assert dual2.radical_basis.to_list() == [[0, 1]]

    def test_computed_matches_declared(self, local3):
        assert local3.compute_radical() == local3.radical_basis


class TestInjectiveDimension:
    """Bounded injective dimension."""

    def test_self_injective(self, dual2):
        assert dual2.injdim_bounded(3).value == 0

    def test_field(self, field2):
        assert field2.injdim_bounded(0).value == 0

    def test_hereditary(self, path2):
        assert path2.injdim_bounded(3).value == 1

    def test_not_gorenstein(self, local3):
        verdict = local3.injdim_bounded(2)
        assert not verdict.bounded
        assert str(verdict) == "> 2"

    def test_triangular_over_dual(self, tri_dual):
        assert tri_dual.injdim_bounded(2).value == 1


class TestBuilders:
    """Named builders."""

    def test_build_named(self):
        assert build_named("tri_dual").dim == 6
        assert build_named("local3", 3).p == 3

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            build_named("nope")
