"""Report assembly, JSON schema validation and Markdown rendering."""

from __future__ import annotations

import json
from collections import OrderedDict

import jsonschema

from .suites import CheckResult

SCHEMA_VERSION = "1.0"

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["meta", "checks"],
    "additionalProperties": False,
    "properties": {
        "meta": {
            "type": "object",
            "required": ["field", "scheme", "seed", "version"],
            "additionalProperties": False,
            "properties": {
                "field": {"type": "string"},
                "scheme": {"type": "string"},
                "seed": {"type": "integer"},
                "version": {"type": "string"},
                "suites": {"type": "array", "items": {"type": "string"}},
            },
        },
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "anchor", "verdict", "ms"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "anchor": {"type": "string"},
                    "verdict": {"enum": ["pass", "fail", "skip"]},
                    "inputs": {"type": "object"},
                    "message": {"type": "string"},
                    "witness": {"type": "object"},
                    "ms": {"type": "integer", "minimum": 0},
                },
            },
        },
    },
}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    return str(x)


def build_report(results: list, field: str, scheme: str, seed: int, suites: list) -> dict:
    from . import __version__

    checks = []
    for r in sorted(results, key=lambda r: r.name):
        rec = OrderedDict(name=r.name, anchor=r.anchor, verdict=r.verdict,
                          inputs=_jsonable(r.inputs), message=r.message)
        if r.witness and r.verdict == "fail":
            rec["witness"] = _jsonable(r.witness)
        rec["ms"] = r.ms
        checks.append(rec)
    report = {"meta": {"field": field, "scheme": scheme, "seed": seed,
                       "version": "%s (schema %s)" % (__version__, SCHEMA_VERSION), "suites": list(suites)},
              "checks": checks}
    validate(report)
    return report


def validate(report: dict) -> None:
    jsonschema.validate(report, REPORT_SCHEMA)


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def to_markdown(report: dict) -> str:
    meta = report["meta"]
    lines = ["# Verification report", "",
             "field `%s`, scheme `%s`, seed %d, version %s" % (meta["field"], meta["scheme"], meta["seed"],
                                                              meta["version"]), ""]
    by_suite: dict = {}
    for c in report["checks"]:
        by_suite.setdefault(c["name"].split(".", 1)[0], []).append(c)
    for suite in sorted(by_suite):
        lines += ["## %s" % suite, "", "| check | anchor | verdict | detail | ms |", "|---|---|---|---|---|"]
        for c in by_suite[suite]:
            detail = c.get("message", "")
            if "witness" in c:
                detail += " " + json.dumps(c["witness"], ensure_ascii=False, sort_keys=True)
            lines.append("| %s | %s | %s | %s | %d |" % (_cell(c["name"]), _cell(c["anchor"]), c["verdict"],
                                                          _cell(detail), c["ms"]))
        lines.append("")
    return "\n".join(lines)


def _cell(s: str) -> str:
    return s.replace("|", "\\|").replace("\n", " ")


def failed(report: dict) -> bool:
    return any(c["verdict"] == "fail" for c in report["checks"])


__all__ = ["REPORT_SCHEMA", "build_report", "validate", "to_json", "to_markdown", "failed", "CheckResult"]
