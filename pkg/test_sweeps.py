"""
Tests for the seeded generators and sweeps, kept to small counts.
"""
import numpy as np

import sweeps
from exceptions import MissingDataError
from fpmod import ModuleMap, certify, free_module
from gorenstein import GPMode
from linalg import FpMatrix
from sweeps import Sweeper, gp_module, insert_contractible, random_module


BOUNDED = GPMode.bounded(2)


class TestGenerators:
    """Seeded instance generators."""

    def test_random_module_is_seeded(self, local3):
        a = random_module(local3, np.random.default_rng([0, 5]))
        b = random_module(local3, np.random.default_rng([0, 5]))
        assert np.array_equal(a.relations, b.relations)

    def test_no_gp_module_without_injdim(self, local3):
        assert gp_module(local3, np.random.default_rng(0), BOUNDED) is None

    def test_gp_module_over_self_injective(self, dual2):
        g = gp_module(dual2, np.random.default_rng(0), BOUNDED, attempts=16)
        assert g is None or not g.is_zero()

    def test_contractible_summand_keeps_exactness(self, dual2, k_dual):
        a = free_module(dual2, 1, name="A")
        inc = ModuleMap(k_dual, a, FpMatrix.from_rows(2, [[0], [1]]))
        proj = ModuleMap(a, k_dual, FpMatrix.from_rows(2, [[1, 0]]))
        maps = insert_contractible([inc, proj], 0, k_dual)
        seq = certify(maps)
        assert [m.dim for m in seq.objects] == [0, 2, 3, 1, 0]


class TestSweeper:
    """Small sweeps over the dual numbers."""

    def test_ext_oracle_sweep(self, dual2):
        report = Sweeper(dual2, count=1, bound=2, dim_max=1).ext_oracle_sweep()
        assert report.passed
        assert report.notes["ext tables"]["count"] == 2
        assert report.notes["ext tables"]["max_entry"] == 0

    def test_zero_transpose_check(self, dual2):
        assert Sweeper(dual2, count=1, bound=2).zero_transpose_check().passed

    def test_question33_never_fails(self, dual2):
        report = Sweeper(dual2, count=2, bound=2).question33_sweep()
        assert report.passed
        assert report.notes["instances"] <= 2

    def test_run_selected(self, dual2):
        sweeper = Sweeper(dual2, count=1, bound=2, dim_max=1, seed=3)
        report = sweeper.run_all(only=["ext-oracle"])
        assert report.command == "sweep"
        assert report.verdict == "pass"
        assert report.bounds["seed"] == 3
        assert list(sweeper.results) == ["ext-oracle"]

    def test_thm24_sweep_certifies_every_instance(self, dual2):
        report = Sweeper(dual2, count=2, bound=2).thm24_sweep(max_n=1)
        assert report.notes.get("skipped", 0) == 0
        assert report.passed
        assert report.items

    def test_error_after_generation_is_a_failure(self, monkeypatch, dual2):
        def lost(seq, mode):
            raise MissingDataError("kernel lost")

        monkeypatch.setattr(sweeps, "construct_thm24_fwd", lost)
        report = Sweeper(dual2, count=1, bound=2).thm24_sweep(max_n=1)
        assert report.notes.get("skipped", 0) == 0
        assert not report.passed
        assert "MissingDataError: kernel lost" in report.failures[0].observed
