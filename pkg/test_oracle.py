"""
Tests for the brute-force oracle: Ext tables, enumeration and certificate rechecks.
"""
import numpy as np
import pytest

import oracle
from algebra import Algebra
from certificates import parse_certificate, write_certificate
from conftest import DATA_DIR
from exceptions import GtransError
from fpmod import ModuleMap, free_module, is_exact
from gorenstein import GPMode, gp_test
from homology import ext_dims, transpose
from linalg import FpMatrix
from oracle import (
    DEDUP_ISO,
    EnumerationSpec,
    enumerate_modules,
    ext_oracle,
    ext_oracle_table,
    mutation_sweep,
    oracle_radical,
    oracle_transpose,
    recheck,
    recheck_record,
)
from spec_loader import SpecLoader


@pytest.fixture
def golden():
    loader = SpecLoader()
    return {name: loader.load_certificate(str(DATA_DIR / "golden" / f"{name}.cert")) for name in ("gp_k", "ses_k")}


class TestExtOracle:
    """The oracle agrees with the engine on small modules."""

    def test_simple_over_dual(self, dual2, k_dual):
        assert ext_oracle_table(dual2, k_dual.actions, 3) == [0, 0, 0]
        assert ext_oracle(k_dual, 0) == 1

    def test_local3(self, k_local):
        assert ext_oracle(k_local, 1) == ext_dims(k_local, 1)[0]
        assert ext_oracle(k_local, 2) == ext_dims(k_local, 2)[1]

    def test_hereditary(self, path2, s2_path):
        assert ext_oracle_table(path2, s2_path.actions, 2) == ext_dims(s2_path, 2)

    def test_transpose_dimension(self, k_local):
        _, actions = oracle_transpose(k_local.algebra, k_local.actions)
        assert actions[0].shape[0] == transpose(k_local).dim

    def test_degree_out_of_range(self, k_dual):
        with pytest.raises(ValueError):
            ext_oracle(k_dual, 9)


class TestEnumeration:
    """Exhaustive module enumeration."""

    def test_prime_field(self, field2):
        assert len(list(enumerate_modules(EnumerationSpec(field2, 2)))) == 3

    def test_dual_numbers_raw(self, dual2):
        # the zero module, k, and the four square-zero 2x2 matrices
        assert len(list(enumerate_modules(EnumerationSpec(dual2, 2)))) == 6

    def test_dual_numbers_up_to_iso(self, dual2):
        mods = list(enumerate_modules(EnumerationSpec(dual2, 2, dedup=DEDUP_ISO)))
        assert sorted(m.dim for m in mods) == [0, 1, 2, 2]

    def test_min_dim(self, dual2):
        mods = list(enumerate_modules(EnumerationSpec(dual2, 1, min_dim=1)))
        assert [m.dim for m in mods] == [1]

    def test_limits(self, dual2):
        with pytest.raises(ValueError):
            EnumerationSpec(dual2, 6)
        with pytest.raises(ValueError):
            EnumerationSpec(dual2, 2, dedup="fuzzy")


class TestRecheck:
    """Independent revalidation of certificates."""

    def test_golden_certificates(self, golden):
        for rec in golden.values():
            result = recheck_record(rec)
            assert result.passed, result.diffs

    def test_fresh_sequence(self, dual2, k_dual):
        a = free_module(dual2, 1)
        inc = ModuleMap(k_dual, a, FpMatrix.from_rows(2, [[0], [1]]))
        proj = ModuleMap(a, k_dual, FpMatrix.from_rows(2, [[1, 0]]))
        assert recheck(is_exact([inc, proj])).passed

    def test_tampered_map(self, golden):
        rec = golden["ses_k"].copy()
        rec.maps[1][0, 0] = 1
        result = recheck_record(rec)
        assert not result.passed
        assert any("map 1" in d for d in result.diffs)

    def test_tampered_gp_table(self, golden):
        rec = golden["gp_k"].copy()
        rec.objects[0].gp.ext_table[0] = 1
        assert not recheck_record(rec).passed

    def test_mutation_sweep(self, golden):
        summary = mutation_sweep(golden["ses_k"], count=20, seed=1)
        assert summary["mutations"] == 20
        assert summary["detected"] + summary["benign"] == 20
        assert summary["detected"] > 0


class TestOracleRadical:
    """The radical found by element search."""

    def test_matches_engine(self, field2, dual2, local3, path2, tri_dual):
        for algebra in (field2, dual2, local3, path2, tri_dual):
            assert np.array_equal(oracle_radical(algebra), algebra.radical_basis.ints), algebra.name

    def test_size_limit(self, monkeypatch, dual2):
        oracle_radical.cache_clear()
        monkeypatch.setattr(oracle, "MAX_RADICAL_ELEMENTS", 2)
        with pytest.raises(GtransError):
            oracle_radical(dual2)
        oracle_radical.cache_clear()

    def test_recheck_without_declared_radical(self, monkeypatch, k_local):
        text = write_certificate(gp_test(k_local, GPMode.bounded(2)))
        text = "".join(line for line in text.splitlines(keepends=True) if not line.startswith("radical "))

        def no_engine_radical(self):
            raise AssertionError("engine radical used")

        monkeypatch.setattr(Algebra, "compute_radical", no_engine_radical)
        oracle_radical.cache_clear()
        result = recheck_record(parse_certificate(text))
        assert result.passed, result.diffs


def ring_mode_certificate(module, degree: int) -> str:
    text = write_certificate(gp_test(module, GPMode.bounded(degree)))
    return text.replace(f"gp bounded {degree} ", f"gp gorenstein-ring {degree} ")


class TestRingModeRecheck:
    """Ring-mode claims need the injective dimension of the ring."""

    def test_verified_at_lower_degree(self, k_dual):
        text = write_certificate(gp_test(k_dual, GPMode.ring(8)))
        assert "gp gorenstein-ring 8 GP" in text
        assert recheck_record(parse_certificate(text)).passed

    def test_claim_exceeds_injdim(self, local3):
        text = ring_mode_certificate(free_module(local3, 1, name="A"), 1)
        result = recheck_record(parse_certificate(text))
        assert not result.passed
        assert any("injective dimension exceeds 1" in d for d in result.diffs)

    def test_claim_beyond_computable_degree(self, monkeypatch, local3):
        text = ring_mode_certificate(free_module(local3, 1, name="A"), 2)
        monkeypatch.setattr(oracle, "MAX_EXT_DEGREE", 2)
        result = recheck_record(parse_certificate(text))
        assert not result.passed
        assert any("not verifiable beyond degree 2" in d for d in result.diffs)
