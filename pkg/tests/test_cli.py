import json
import subprocess
import sys
from pathlib import Path

import pytest

from dongcheck import scenarios
from dongcheck.cli import AlgebraRegistry, SpecError, main, parse_distribution
from dongcheck.scenarios import CATALOG, Params, Report, UnknownScenarioError, run_all, run_scenario

SAMPLES = Path(__file__).parent.parent / "sample_inputs"


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestScenarios:
    def test_catalog_names(self):
        assert len(CATALOG) == 14
        assert {"weyl-table", "prelie", "oracle-agreement"} <= set(CATALOG)

    def test_report_shape(self):
        r = run_scenario("varieties", Params())
        d = r.to_dict()
        assert d["pass"] and d["name"] == "varieties"
        assert "wall_time" not in d
        assert "wall_time" in r.to_dict(timing=True)
        assert all(c["status"] == "pass" for c in d["checks"])

    def test_failed_check_fails_report(self):
        r = Report("x", {})
        r.add("holds", True)
        r.add("broken", False, witness="(0,0)")
        assert not r.passed
        assert "witness: (0,0)" in r.to_text()
        assert not Report("empty", {}).passed

    def test_counterexamples_with_zero_nmax(self):
        p = Params(nmax=0)
        assert run_scenario("preassoc-counterexample", p).passed
        assert run_scenario("prelie", p).passed

    def test_unknown(self):
        with pytest.raises(UnknownScenarioError):
            run_all(Params(), ["nope"])

    def test_parallel_matches_serial(self):
        names = ["varieties", "doubling"]
        serial = [r.to_dict() for r in run_all(Params(), names)]
        parallel = [r.to_dict() for r in run_all(Params(), names, jobs=2)]
        assert serial == parallel

    def test_extra_model_is_picked_up(self):
        r = run_scenario("laurent-lie", Params(model=str(SAMPLES / "trunc_model.yaml")))
        assert r.passed
        assert len([c for c in r.checks if "generator pairs" in c.ref]) == 3


class TestCommands:
    def test_list(self, capsys):
        code, out, _ = run_cli(capsys, "list")
        assert code == 0
        assert len(out.strip().splitlines()) == len(CATALOG)

    def test_run_json_is_deterministic(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for path in (a, b):
            code, out, _ = run_cli(capsys, "run", "varieties", "--json", str(path))
            assert code == 0
            assert "1/1 scenarios passed" in out
        assert a.read_text() == b.read_text()
        data = json.loads(a.read_text())
        assert data[0]["pass"] is True

    def test_json_to_stdout_with_timing(self, capsys):
        code, out, err = run_cli(capsys, "run", "varieties", "--json", "-", "--timing")
        assert code == 0
        assert "1/1 scenarios passed" in err
        payload = json.loads(out)
        assert "wall_time" in payload[0]

    def test_config_file(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.yaml"
        cfg.write_text("nmax: 0\nscenarios: [preassoc-counterexample, varieties]\n")
        code, out, _ = run_cli(capsys, "run", "all", "--config", str(cfg))
        assert code == 0
        assert "2/2 scenarios passed" in out

    def test_unknown_scenario_is_a_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["run", "nope"])
        assert exc.value.code == 2
        assert "unknown scenario" in capsys.readouterr().err

    def test_failing_scenario_gives_exit_one(self, capsys, monkeypatch):
        def broken(p):
            r = Report("broken", {})
            r.add("always fails", False, witness="(0,0)")
            return r

        monkeypatch.setitem(scenarios.CATALOG, "broken", (broken, "fails on purpose"))
        code, out, _ = run_cli(capsys, "run", "broken")
        assert code == 1
        assert "failed: broken" in out

    def test_reduce(self, capsys):
        code, out, _ = run_cli(capsys, "reduce", "preassoc", "(a(2) * a(3))", "--window", "6")
        assert code == 0
        assert "normal form: (a(0) * a(5))" in out
        assert "agrees" in out

    def test_reduce_to_zero(self, capsys):
        code, out, _ = run_cli(capsys, "reduce", "prelie",
                               "((a(0) o a(3)) o a(1)) - ((a(0) o a(1)) o a(3))")
        assert code == 0 and "normal form: 0" in out

    def test_reduce_custom_file(self, capsys):
        code, out, _ = run_cli(capsys, "reduce", str(SAMPLES / "prelie_pairs.pres"), "(a(3) o a(-1))")
        assert code == 0
        assert "window-oracle only" in out

    def test_reduce_parse_error(self, capsys):
        code, _, err = run_cli(capsys, "reduce", "preassoc", "(a(2) *")
        assert code == 2 and err.startswith("error:")

    def test_locality(self, capsys):
        code, out, _ = run_cli(capsys, "locality", "{family: 'weyl:1'}", "{family: 'weyl:0'}",
                               "--op", "star", "--window", "6")
        assert code == 0
        assert "locality value on window 6: 2" in out
        assert "(n,m)=(0,0)" in out

    def test_locality_not_local(self, capsys):
        code, out, _ = run_cli(capsys, "locality", "{family: 'gen:prelie'}",
                               "{finite: {0: '(a(0) o a(0))'}, algebra: prelie}",
                               "--op", "circ", "--window", "3", "--nmax", "2")
        assert code == 0
        assert "not local on window 3" in out

    def test_locality_laurent_with_derivative(self, capsys):
        code, out, _ = run_cli(capsys, "locality", "{family: 'laurent:virasoro:e', derivative: 1}",
                               "{family: 'laurent:virasoro:e'}", "--op", "bracket", "--window", "5")
        assert code == 0
        assert "locality value on window 5: 3" in out

    def test_bad_spec(self, capsys):
        code, _, err = run_cli(capsys, "locality", "{family: 'nope'}", "{family: 'weyl:0'}",
                               "--op", "star")
        assert code == 2 and "unknown family" in err


def test_parse_distribution_errors():
    reg = AlgebraRegistry()
    with pytest.raises(SpecError):
        parse_distribution("[1, 2]", reg, 10)
    with pytest.raises(SpecError):
        parse_distribution("{window: 3}", reg, 10)
    d = parse_distribution("{family: 'gen:preassoc', window: 12}", reg, 10)
    assert (d.lo, d.hi) == (-12, 12)
    assert reg.get("preassoc") is d.algebra


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "dongcheck", "list"], capture_output=True, text=True)
    assert out.returncode == 0
    assert "weyl-table" in out.stdout
