"""
Tests for certificate serialization.
"""
import numpy as np
import pytest

from certificates import KIND_GP, KIND_SEQUENCE, parse_certificate, to_record, write_certificate
from conftest import DATA_DIR
from exceptions import SpecParseError
from fpmod import ModuleMap, free_module, is_exact
from gorenstein import GPMode, gp_test
from linalg import FpMatrix
from oracle import recheck_record


@pytest.fixture
def ses(dual2, k_dual):
    a = free_module(dual2, 1, name="A")
    inc = ModuleMap(k_dual, a, FpMatrix.from_rows(2, [[0], [1]]))
    proj = ModuleMap(a, k_dual, FpMatrix.from_rows(2, [[1, 0]]))
    return is_exact([inc, proj], name="ses")


class TestWrite:
    """Writing certificates from engine values."""

    def test_sequence_layout(self, ses):
        text = write_certificate(ses)
        lines = text.splitlines()
        assert lines[0] == "gtranscert v1"
        assert "kind sequence" in lines
        assert "objects 5" in lines
        assert "object 2 dim 2 tag free" in lines
        assert lines[-1] == "end"

    def test_gp_line(self, k_dual):
        text = write_certificate(gp_test(k_dual, GPMode.bounded(2)))
        assert "gp bounded 2 GP-up-to-bound - - ext 2 0 0 tr 2 0 0" in text.splitlines()

    def test_not_gp_witness(self, k_local):
        text = write_certificate(gp_test(k_local, GPMode.bounded(2)))
        gp_line = next(line for line in text.splitlines() if line.startswith("gp "))
        assert gp_line.split()[3:5] == ["1", "module"]

    def test_unsupported_value(self):
        with pytest.raises(TypeError):
            to_record("not a certificate")


class TestParse:
    """Reading certificates back."""

    def test_written_sequence_rechecks(self, ses):
        rec = parse_certificate(write_certificate(ses))
        assert rec.kind == KIND_SEQUENCE
        assert len(rec.objects) == 5
        assert len(rec.nodes) == 3
        assert np.array_equal(rec.maps[1], [[0], [1]])
        assert recheck_record(rec).passed

    def test_golden_gp(self):
        rec = parse_certificate((DATA_DIR / "golden" / "gp_k.cert").read_text())
        assert rec.kind == KIND_GP
        assert rec.objects[0].gp.verdict == "GP-up-to-bound"
        assert rec.algebra().name == "dual2"

    def test_missing_header(self):
        with pytest.raises(SpecParseError) as info:
            parse_certificate("kind gp\nend\n")
        assert info.value.line == 1

    def test_unknown_key(self):
        text = (DATA_DIR / "golden" / "gp_k.cert").read_text().replace("maps 0", "bogus 0")
        with pytest.raises(SpecParseError, match="bogus"):
            parse_certificate(text)

    def test_missing_end(self):
        text = (DATA_DIR / "golden" / "gp_k.cert").read_text().replace("\nend\n", "\n")
        with pytest.raises(SpecParseError, match="end"):
            parse_certificate(text)

    def test_short_matrix(self):
        text = (DATA_DIR / "golden" / "ses_k.cert").read_text().replace("map 1 2 1 0 1", "map 1 2 1 0")
        with pytest.raises(SpecParseError):
            parse_certificate(text)
