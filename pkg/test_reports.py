"""
Tests for report models and the formatting helpers.
"""
import numpy as np

from reports import EVIDENCE_EXPLICIT, CheckReport, Report
from utils import create_summary_stats, describe_module, digest_text, format_matrix, format_table


class TestCheckReport:
    """Comparisons and failures."""

    def test_equal_values_pass(self):
        check = CheckReport(name="demo")
        assert check.add("dim", 2, 2)
        assert check.passed

    def test_explicit_pass_flag(self):
        check = CheckReport(name="demo")
        check.add("iso", "A", "B", EVIDENCE_EXPLICIT, passed=True)
        assert check.passed
        assert check.items[0].evidence == EVIDENCE_EXPLICIT

    def test_failure_lines(self):
        check = CheckReport(name="demo")
        check.add("Ext^1", 0, 1)
        assert not check.passed
        assert check.failure_lines() == ["demo: Ext^1: expected 0, observed 1"]


class TestReport:
    """CLI reports."""

    def test_absorb_sets_exit_code(self):
        report = Report(command="check")
        ok = CheckReport(name="good")
        ok.add("x", 1, 1)
        report.absorb(ok)
        assert report.exit_code == 0
        bad = CheckReport(name="bad", notes={"why": "test"})
        bad.add("y", 1, 2)
        report.absorb(bad)
        assert report.exit_code == 4
        assert report.tables["bad.notes"] == {"why": "test"}

    def test_json_round_trip(self):
        report = Report(command="ext", verdict="computed", tables={"ext": [0, 1]}, bounds={"ext": 2})
        again = Report.from_json(report.to_json())
        assert again == report

    def test_text_rendering(self):
        report = Report(command="gp", verdict="not-GP", inputs={"mod": "ab" * 32}, failures=["boom"])
        text = report.to_text()
        assert "verdict: not-GP" in text
        assert "input mod: sha256 abababababababab" in text
        assert "FAILURE: boom" in text


class TestUtils:
    """Formatting and summaries."""

    def test_digest_is_stable(self):
        assert digest_text("ring") == digest_text("ring")
        assert len(digest_text("")) == 64

    def test_format_matrix(self):
        assert format_matrix(np.array([[1, 10], [0, 2]])) == " 1 10\n 0  2"
        assert format_matrix(np.zeros((0, 3), dtype=np.int64)) == "(empty 0x3)"

    def test_format_table(self):
        assert format_table([0, 1]) == "Ext^1=0 Ext^2=1"
        assert format_table([1], start=0, label="dim") == "dim^0=1"

    def test_describe_module(self, k_local):
        info = describe_module(k_local)
        assert info["dim"] == 1
        assert info["radical_layers"] == [0]

    def test_summary_stats(self):
        assert create_summary_stats([]) == {"count": 0, "all_zero": 0, "max_entry": 0}
        stats = create_summary_stats([[0, 0], [0, 3], []])
        assert stats == {"count": 3, "all_zero": 2, "max_entry": 3}
