import csv
import json

import pytest

from hardylab.cli import RunConfig, build_parser, main

SMALL = ["--grid-n", "3,4", "--grid-p", "2", "--grid-beta", "0", "--grid-b", "0,1",
         "--corpus", "bump:R=1,m=4"]


def run(argv, capsys=None):
    return main(argv)


class TestConstantsCommand:
    def test_hardy(self, capsys):
        assert main(["constants", "--case", "hardy", "--n", "4", "--p", "2",
                     "--beta", "0"]) == 0
        out = capsys.readouterr().out
        assert "constant=1.0" in out
        assert "beta < 2" in out

    def test_c_even(self, capsys):
        assert main(["constants", "--case", "c_even", "--n", "9", "--l", "2",
                     "--beta", "0", "--p", "2"]) == 0
        out = capsys.readouterr().out
        value = float(out.split("constant=")[1].splitlines()[0])
        assert value == pytest.approx(7.4805e-4, rel=1e-4)

    def test_critical_odd(self, capsys):
        assert main(["constants", "--case", "critical_odd", "--n", "6", "--l", "1",
                     "--p", "2"]) == 0
        assert "constant=0.0625" in capsys.readouterr().out

    def test_invalid_params_exit_2(self):
        assert main(["constants", "--case", "hardy", "--n", "4", "--p", "2",
                     "--beta", "2"]) == 2

    def test_unknown_case_exit_2(self):
        assert main(["constants", "--case", "nope"]) == 2


class TestVerifyCommand:
    def test_small_suite_passes(self, tmp_path):
        out = tmp_path / "report.csv"
        code = main(["verify", "--cases", "HARDY_SUB,ONETWO,RELLICH_12",
                     *SMALL, "--out", str(out)])
        assert code == 0
        rows = list(csv.DictReader(open(out)))
        assert rows and all(r["status"] in ("pass",) or
                            r["status"].startswith("skipped") for r in rows)
        header = open(out).readline().strip()
        assert header == ("case,n,p,beta,b,l,corpus_id,lhs,rhs,constant,slack,"
                          "residual,quad_error,status")

    def test_deterministic_reports(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["verify", "--cases", "HARDY_SUB,CRIT_HARDY", *SMALL]
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b), "--jobs", "2"]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_invalid_cell_recorded_as_skip(self, tmp_path):
        out = tmp_path / "r.csv"
        code = main(["verify", "--cases", "HARDY_SUB", "--grid-n", "3",
                     "--grid-p", "2", "--grid-beta", "1", "--grid-b", "0",
                     "--corpus", "bump:R=1,m=4", "--out", str(out)])
        assert code == 0  # skipped cells never affect the exit code
        rows = list(csv.DictReader(open(out)))
        assert len(rows) == 1
        assert rows[0]["status"].startswith("skipped")
        assert "beta < n-p" in rows[0]["status"]

    def test_forced_failure_fixture(self, tmp_path):
        out = tmp_path / "r.csv"
        code = main(["verify", "--cases", "HARDY_SUB", *SMALL,
                     "--perturb-constant", "1e-3", "--out", str(out)])
        assert code == 1
        rows = list(csv.DictReader(open(out)))
        assert any(r["status"] == "fail" for r in rows)

    def test_identity_alias(self, tmp_path):
        out = tmp_path / "r.csv"
        code = main(["identity", *SMALL, "--out", str(out)])
        assert code == 0
        cases = {r["case"] for r in csv.DictReader(open(out))}
        assert cases == {"HARDY_SUB", "CRIT_HARDY", "ONETWO"}

    def test_json_format(self, tmp_path):
        out = tmp_path / "r.json"
        code = main(["verify", "--cases", "HARDY_SUB", *SMALL,
                     "--format", "json", "--out", str(out)])
        assert code == 0
        rows = json.loads(out.read_text())
        assert rows and rows[0]["case"] == "HARDY_SUB"


class TestRunConfig:
    def test_schema_required(self, tmp_path):
        p = tmp_path / "cfg.json"
        p.write_text(json.dumps({"cases": ["HARDY_SUB"]}))
        with pytest.raises(ValueError, match="schema"):
            RunConfig.from_json(str(p))

    def test_unknown_keys_rejected(self, tmp_path):
        p = tmp_path / "cfg.json"
        p.write_text(json.dumps({"schema": "1", "surprise": 1}))
        with pytest.raises(ValueError, match="unknown config keys"):
            RunConfig.from_json(str(p))

    def test_unknown_grid_keys_rejected(self, tmp_path):
        p = tmp_path / "cfg.json"
        p.write_text(json.dumps({"schema": "1", "grid": {"q": [1]}}))
        with pytest.raises(ValueError, match="unknown grid keys"):
            RunConfig.from_json(str(p))

    def test_roundtrip_config(self, tmp_path):
        p = tmp_path / "cfg.json"
        p.write_text(json.dumps({
            "schema": "1",
            "cases": ["HARDY_SUB"],
            "grid": {"n": [3], "p": [2.0], "beta": [0.0], "b": [0.0], "l": [1]},
            "corpus": ["bump:R=1,m=4"],
            "tolerances": {"rel": 1e-9, "abs": 1e-12},
        }))
        cfg = RunConfig.from_json(str(p))
        assert cfg.resolve_cases() == ["HARDY_SUB"]
        assert cfg.rel_tol == 1e-9

    def test_bad_config_exit_2(self, tmp_path):
        p = tmp_path / "cfg.json"
        p.write_text(json.dumps({"schema": "2"}))
        assert main(["verify", "--config", str(p)]) == 2

    def test_unknown_case_exit_2(self):
        assert main(["verify", "--cases", "NOT_A_CASE", *SMALL]) == 2


class TestSharpnessCommand:
    def test_hardy_trend(self, capsys):
        code = main(["sharpness", "--family", "hardy", "--n", "4", "--p", "2",
                     "--beta", "0", "--scales", "1e-1,1e-3,1e-5"])
        assert code == 0
        out = capsys.readouterr().out
        assert out.startswith("scale,quotient,gap")

    def test_critical_trend(self):
        assert main(["sharpness", "--family", "critical", "--n", "3", "--p", "2",
                     "--scales", "0.2,0.1,0.05"]) == 0

    def test_bad_family_params(self):
        assert main(["sharpness", "--family", "hardy", "--n", "4", "--p", "2",
                     "--beta", "5", "--scales", "1e-2"]) == 2


class TestMowCommand:
    def test_small_grid(self, capsys):
        code = main(["mow", "--n", "5", "--beta", "0", "--k-max", "2",
                     "--l-max", "20", "--grid-points", "500"])
        assert code == 0
        out = capsys.readouterr().out
        assert "mode_form" in out and "pointwise_min" in out

    def test_out_of_range_beta_skipped(self, capsys):
        code = main(["mow", "--n", "4", "--beta", "3", "--k-max", "1",
                     "--l-max", "5", "--grid-points", "200"])
        assert code == 0
        assert "skipped" in capsys.readouterr().out


def test_parser_builds():
    parser = build_parser()
    args = parser.parse_args(["constants", "--case", "hardy"])
    assert args.case == "hardy"


def test_jobs_env_default(monkeypatch):
    monkeypatch.setenv("HARDYLAB_JOBS", "3")
    args = build_parser().parse_args(["verify"])
    assert args.jobs == 3
    monkeypatch.setenv("HARDYLAB_JOBS", "junk")
    args = build_parser().parse_args(["verify"])
    assert args.jobs == 1
