"""
End-to-end tests of the command-line front end through run() and main().
"""
import main as cli
from conftest import DATA_DIR
from exceptions import TheoremFailure
from main import EXIT_FAILURE, EXIT_INPUT, EXIT_OK, EXIT_USAGE, run
from reports import Report

DUAL = str(DATA_DIR / "dual2.ring")
LOCAL = str(DATA_DIR / "local3.ring")
K = str(DATA_DIR / "k.mod")
LOCAL_K = str(DATA_DIR / "local3_k.mod")


class TestRingAndModules:
    """Information commands."""

    def test_ring_check(self):
        report, code = run(["ring", "check", DUAL])
        assert code == EXIT_OK
        assert report.verdict == "valid"
        assert report.tables["ring"]["dim"] == 2
        assert report.tables["ring"]["radical_dim"] == 1
        assert "ring" in report.inputs
        assert report.bounds["ext_bound"] == 6

    def test_ring_info(self):
        report, code = run(["ring", "info", DUAL, "--bound", "2"])
        assert code == EXIT_OK
        assert report.tables["injdim"] == "<= 0"

    def test_resolve(self):
        report, code = run(["resolve", "--ring", LOCAL, "--mod", LOCAL_K, "--length", "2", "--minimal"])
        assert code == EXIT_OK
        assert report.tables["ranks"] == [1, 2, 4]
        assert len(report.certificates) == 1
        assert report.evidence["generators_minimal"] == "verified"

    def test_mod_info(self):
        report, code = run(["mod", "info", "--ring", LOCAL, "--mod", LOCAL_K])
        assert code == EXIT_OK
        assert report.tables["minimal_generators"] == 1
        assert report.evidence["generators_minimal"] == "verified"
        assert report.tables["projective"] is False

    def test_ext(self):
        report, code = run(["ext", "--ring", DUAL, "--mod", K, "-i", "1"])
        assert code == EXIT_OK
        assert report.verdict == "dim Ext^1 = 0"

    def test_transpose(self):
        report, code = run(["transpose", "--ring", DUAL, "--mod", K])
        assert code == EXIT_OK
        assert report.verdict == "Tr k, dim 1, side right"


class TestGorensteinCommands:
    """gp and gtranspose."""

    def test_not_gp(self):
        report, code = run(["gp", "--ring", LOCAL, "--mod", LOCAL_K, "--bound", "2"])
        assert code == EXIT_OK
        assert report.verdict == "not-GP"
        assert report.tables["witness_degree"] == 1
        assert report.certificates
        assert not report.failures

    def test_ring_mode(self):
        report, code = run(["gp", "--ring", DUAL, "--mod", K, "--mode", "ring"])
        assert code == EXIT_OK
        assert report.verdict == "GP"
        assert report.evidence["gp_mode"] == "gorenstein-ring(0)"

    def test_ring_mode_without_injdim(self):
        _, code = run(["gp", "--ring", LOCAL, "--mod", LOCAL_K, "--mode", "ring"])
        assert code == EXIT_INPUT

    def test_gtranspose_zero(self):
        pres = str(DATA_DIR / "pres_k_gp.dia")
        report, code = run(["gtranspose", "--ring", DUAL, "--pres", pres, "--bound", "2"])
        assert code == EXIT_OK
        assert report.tables["gorenstein_transpose"]["dim"] == 0
        assert report.tables["transpose_dim"] == 1


class TestConstructAndCheck:
    """Constructions embed rechecked certificates; checks set the exit code."""

    def test_prop22_saves_certificates(self, tmp_path):
        seq = str(DATA_DIR / "thm24_dual2.dia")
        report, code = run(["construct", "prop22", "--ring", DUAL, "--seq", seq, "--bound", "2",
                            "--save", str(tmp_path)])
        assert code == EXIT_OK
        assert report.verdict == "certified"
        assert len(report.certificates) == 2
        assert sorted(p.name for p in tmp_path.iterdir()) == ["construct-0.cert", "construct-1.cert"]
        saved = run(["verify", str(tmp_path / "construct-0.cert")])[1]
        assert saved == EXIT_OK

    def test_construct_needs_sequence(self):
        _, code = run(["construct", "thm24fwd", "--ring", DUAL])
        assert code == EXIT_USAGE

    def test_lemma21(self):
        report, code = run(["check", "lemma21", "--ring", DUAL, "--seq", str(DATA_DIR / "ses_k.dia"), "--bound", "2"])
        assert code == EXIT_OK
        assert report.verdict == "pass"

    def test_precover_failure(self):
        args = ["check", "precover", "--ring", DUAL, "--seq", str(DATA_DIR / "ses_k.dia"),
                "--testset", str(DATA_DIR / "gp_testset"), "--bound", "2"]
        report, code = run(args)
        assert code == EXIT_FAILURE
        assert report.verdict == "FAILURE"
        assert "testset" in report.inputs


class TestVerify:
    """Certificate verification."""

    def test_golden(self):
        for name in ("gp_k", "ses_k"):
            report, code = run(["verify", str(DATA_DIR / "golden" / f"{name}.cert")])
            assert code == EXIT_OK
            assert report.verdict == "valid"

    def test_tampered(self, tmp_path):
        text = (DATA_DIR / "golden" / "ses_k.cert").read_text().replace("map 1 2 1 0 1", "map 1 2 1 1 1")
        path = tmp_path / "bad.cert"
        path.write_text(text)
        report, code = run(["verify", str(path)])
        assert code == EXIT_INPUT
        assert report.verdict == "invalid"
        assert report.tables["diffs"]


class TestExitCodes:
    """Usage, input and failure paths."""

    def test_no_command(self):
        assert run([])[1] == EXIT_USAGE

    def test_missing_required_option(self):
        assert run(["ext", "--ring", DUAL, "--mod", K])[1] == EXIT_USAGE

    def test_missing_file(self):
        report, code = run(["ext", "--ring", str(DATA_DIR / "missing.ring"), "--mod", K, "-i", "1"])
        assert code == EXIT_INPUT
        assert report.verdict.startswith("invalid input")

    def test_theorem_failure(self, monkeypatch):
        def broken(session):
            raise TheoremFailure("constructed sequence not exact")

        monkeypatch.setitem(cli.HANDLERS, "transpose", broken)
        report, code = run(["transpose", "--ring", DUAL, "--mod", K])
        assert code == EXIT_FAILURE
        assert report.failures == ["constructed sequence not exact"]

    def test_sweep(self):
        report, code = run(["sweep", "--algebra", "dual", "--dim-max", "1", "--count", "1", "--bound", "2",
                            "--only", "ext-oracle"])
        assert code == EXIT_OK
        assert report.verdict == "pass"
        assert "algebra" in report.inputs


class TestMain:
    """Printed output."""

    def test_json_output(self, capsys):
        assert cli.main(["ring", "check", DUAL, "--json"]) == EXIT_OK
        report = Report.from_json(capsys.readouterr().out)
        assert report.verdict == "valid"
        assert report.bounds == {"ext_bound": 6, "seed": 0, "sweep_count": 200, "dim_max": 5}

    def test_repeated_runs_match(self):
        args = ["gp", "--ring", LOCAL, "--mod", LOCAL_K, "--bound", "2", "--seed", "7"]
        assert run(args)[0].to_json() == run(args)[0].to_json()

    def test_text_output(self, capsys):
        cli.main(["ring", "check", DUAL])
        assert "verdict: valid" in capsys.readouterr().out
