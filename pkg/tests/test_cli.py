import json

from vertexirf import ModuliConfig, list_suites, run_suite
from vertexirf.cli import main, report_to_dict


def test_list_suites_contains_builtins():
    names = [s.name for s in list_suites()]
    for expected in ("theta", "felder", "belavin", "vertex-irf", "lemma1",
                     "functors", "intertwiners", "full"):
        assert expected in names


def test_every_listed_suite_resolves():
    from vertexirf.suites import CHECKS
    for spec in list_suites():
        for check in spec.checks:
            assert check in CHECKS, (spec.name, check)


def test_run_suite_unknown_name():
    import pytest
    with pytest.raises(KeyError):
        run_suite("nonsense", ModuliConfig())


def test_report_schema():
    cfg = ModuliConfig(samples=10)
    report = run_suite("theta", cfg)
    doc = report_to_dict(report)
    assert set(doc) == {"config", "checks", "pass"}
    assert doc["pass"] is True
    for c in doc["checks"]:
        assert set(c) == {"name", "paper_ref", "samples", "max_abs",
                          "max_rel", "worst_point", "pass", "ms"}
    # complex values serialize as {re, im}
    tau = doc["config"]["tau"]
    assert set(tau) == {"re", "im"}
    text = json.dumps(doc)
    assert json.loads(text) == doc


def test_cli_pass_run(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["--suite", "theta", "--samples", "20", "--no-timing",
                 "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["pass"] is True
    captured = capsys.readouterr().out
    assert "overall: PASS" in captured


def test_cli_failure_exit_code(tmp_path):
    code = main(["--suite", "felder", "--samples", "20", "--no-timing",
                 "--corrupt-beta", "1e-4", "--out",
                 str(tmp_path / "bad.json")])
    assert code == 1


def test_cli_config_errors():
    assert main(["--suite", "theta", "--tau", "nonsense"]) == 2
    assert main(["--suite", "theta", "--tau", "0.3-1.1i"]) == 2
    assert main(["--suite", "doesnotexist"]) == 2


def test_cli_reports_are_byte_identical_for_fixed_seed(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["--suite", "theta", "--samples", "20", "--seed", "42",
            "--no-timing"]
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_cli_list_suites(capsys):
    assert main(["--list-suites"]) == 0
    out = capsys.readouterr().out
    assert "full" in out and "vertex-irf" in out


def test_cli_w_flag(tmp_path):
    code = main(["--suite", "theta", "--samples", "10", "--no-timing",
                 "--w", "0.2+0.4i", "--w", "0.9+0.1i",
                 "--out", str(tmp_path / "w.json")])
    assert code == 0
    doc = json.loads((tmp_path / "w.json").read_text())
    assert doc["config"]["w"][0] == {"re": 0.2, "im": 0.4}
