import json

import jsonschema
import pytest

from diffdual import cli
from diffdual.diffop import MatrixDiffOp, parse_operator
from diffdual.report import REPORT_SCHEMA, build_report, failed, to_json, to_markdown, validate
from diffdual.sheaves import GlobalDiffOp, projective_space, structure_sheaf, twist
from diffdual.suites import SUITES, A, Check, check_two_term, run_check


def _run(**kw):
    cfg = dict(cli.DEFAULTS)
    cfg.update(kw)
    return cli.run(cfg)


def _strip_timing(report):
    return [{k: v for k, v in c.items() if k != "ms"} for c in report["checks"]]


@pytest.fixture(scope="module")
def derham_report():
    return _run(suite=["derham", "serre"])


def test_json_round_trip(derham_report):
    text = to_json(derham_report)
    back = json.loads(text)
    validate(back)
    assert back == json.loads(to_json(back))


def test_schema_rejects_bad_verdict(derham_report):
    bad = json.loads(to_json(derham_report))
    bad["checks"][0]["verdict"] = "maybe"
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(bad, REPORT_SCHEMA)


def test_markdown_has_one_row_per_check(derham_report):
    md = to_markdown(derham_report)
    rows = [ln for ln in md.splitlines() if ln.startswith("| ") and not ln.startswith("| check ")]
    assert len(rows) == len(derham_report["checks"])
    assert "## derham" in md and "## serre" in md


def test_checks_unique_and_sorted(derham_report):
    names = [c["name"] for c in derham_report["checks"]]
    assert names == sorted(set(names))


def test_derham_suite_on_p1(derham_report):
    checks = {c["name"]: c for c in derham_report["checks"]}
    assert checks["derham.betti"]["message"].startswith("hypercohomology [1, 0, 1]")
    assert checks["derham.duality"]["verdict"] == "pass"
    assert not failed(derham_report)


def test_anchors_are_descriptive(derham_report):
    for c in derham_report["checks"]:
        assert c["anchor"] in A.values()
        assert "§" not in c["anchor"]


def test_adjoint_sweep():
    report = _run(suite=["adjoint"], seed=1, count=200)
    assert [c["verdict"] for c in report["checks"]] == ["pass"] * 5


def test_full_run_in_characteristic_five():
    report = _run(field="F5", suite=list(SUITES))
    assert not failed(report)
    assert {c["name"].split(".")[0] for c in report["checks"]} == set(SUITES)


def test_determinism():
    a = _run(suite=["adjoint", "tau"], seed=7, count=20)
    b = _run(suite=["adjoint", "tau"], seed=7, count=20)
    assert _strip_timing(a) == _strip_timing(b)
    assert a["meta"] == b["meta"]


def _corrupted_check():
    X = projective_space(1)
    R0, R1 = X.charts
    ops = [MatrixDiffOp(R0, [[parse_operator("d[1]", R0)]], 1, 1),
           MatrixDiffOp(R1, [[parse_operator("%s^3*d[1]" % R1.names[0], R1)]], 1, 1)]
    make = lambda: GlobalDiffOp(structure_sheaf(X), twist(X, 1), ops, name="corrupted")
    return Check("well-defined.corrupted", A["well-defined"], {"D": "corrupted"}, lambda: check_two_term(make()))


def test_failure_witness_carries_discrepancy():
    res = run_check("well-defined", _corrupted_check())
    assert res.verdict == "fail"
    assert res.witness == {"overlap": ["U0", "U1"], "discrepancy": "[2*d[1]]"}
    report = build_report([res], "Q", "P1", 0, ["well-defined"])
    assert report["checks"][0]["witness"]["discrepancy"] == "[2*d[1]]"
    assert "[2*d[1]]" in to_markdown(report)


def test_exit_code_nonzero_on_failure(monkeypatch, capsys):
    monkeypatch.setattr(cli, "run_suites", lambda suites, ctx: [run_check("well-defined", _corrupted_check())])
    assert cli.main(["--suite", "well-defined"]) == 1
    out = json.loads(capsys.readouterr().out)
    assert out["checks"][0]["verdict"] == "fail"


def test_exit_code_zero(tmp_path):
    out = tmp_path / "r.md"
    assert cli.main(["--suite", "derham", "--format", "markdown", "--out", str(out)]) == 0
    assert out.read_text().startswith("# Verification report")


def test_config_file_and_overrides(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"suite": "tau", "field": "F5", "scheme": "P2"}))
    assert cli.main(["--config", str(cfg), "--scheme", "P1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["meta"]["scheme"] == "P1" and out["meta"]["field"] == "F5"
    assert out["meta"]["suites"] == ["tau"]


def test_invalid_config(tmp_path):
    with pytest.raises(SystemExit):
        cli.main(["--scheme", "Q7"])
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"colour": "red"}))
    with pytest.raises(SystemExit):
        cli.main(["--config", str(cfg)])
    with pytest.raises(SystemExit):
        cli.main(["--suite", "nonsense"])


def test_skips_are_reported():
    report = _run(scheme="A2", suite=["coevaluation"])
    assert {c["verdict"] for c in report["checks"]} == {"skip"}
    assert not failed(report)
