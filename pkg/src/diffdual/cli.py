"""diffdual command line: run verification suites and write a JSON or Markdown report."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .report import build_report, failed, to_json, to_markdown
from .ring.field import field_from_name
from .sheaves import scheme_from_name
from .suites import SUITES, Context, run_suites

DEFAULTS = {"field": "Q", "scheme": "P1", "suite": ["all"], "seed": 0, "count": 200, "window": None,
            "out": None, "format": "json"}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="diffdual", description=__doc__)
    p.add_argument("--config", type=Path, help="JSON file with any of the options below")
    p.add_argument("--field", help="Q or Fp(p), e.g. F5, GF(5) (default Q)")
    p.add_argument("--scheme", help="P1, P2, A2 or P1xP1-selfproduct (default P1)")
    p.add_argument("--suite", action="append", choices=SUITES + ("all",),
                   help="suite to run; repeat for several (default all)")
    p.add_argument("--seed", type=int, help="seed for randomized checks (default 0)")
    p.add_argument("--count", type=int, help="number of random cases per sweep (default 200)")
    p.add_argument("--window", type=int, help="weight window for the cohomology and kunneth suites")
    p.add_argument("--out", type=Path, help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "markdown"), help="report format (default json)")
    return p


def resolve_config(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if args.config is not None:
        data = json.loads(args.config.read_text())
        unknown = set(data) - set(DEFAULTS)
        if unknown:
            raise ValueError("unknown config keys: %s" % ", ".join(sorted(unknown)))
        if isinstance(data.get("suite"), str):
            data["suite"] = [data["suite"]]
        cfg.update(data)
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    suites = []
    for s in cfg["suite"]:
        if s == "all":
            suites.extend(SUITES)
        elif s in SUITES:
            suites.append(s)
        else:
            raise ValueError("unknown suite %r" % s)
    cfg["suite"] = list(dict.fromkeys(suites))
    if cfg["format"] not in ("json", "markdown"):
        raise ValueError("unknown format %r" % cfg["format"])
    return cfg


def run(cfg: dict) -> dict:
    fld = field_from_name(cfg["field"])
    X = scheme_from_name(cfg["scheme"], fld)
    ctx = Context(X, fld, seed=cfg["seed"], count=cfg["count"], window=cfg["window"])
    results = run_suites(cfg["suite"], ctx)
    return build_report(results, str(fld), cfg["scheme"], cfg["seed"], cfg["suite"])


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        report = run(cfg)
    except ValueError as exc:
        parser.error(str(exc))
    text = to_json(report) if cfg["format"] == "json" else to_markdown(report)
    if cfg["out"] is not None:
        Path(cfg["out"]).write_text(text)
    else:
        sys.stdout.write(text)
    return 1 if failed(report) else 0


if __name__ == "__main__":
    sys.exit(main())
