"""Command-line front end.

Exit codes: 0 everything holds, 1 a violation or failed expectation was found
(witnesses are in the report), 2 the configuration is invalid.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from dataclasses import asdict, dataclass, field
from typing import Optional

from . import oracles
from .conditions import CONDITIONS, ConditionNotApplicable, applicable, run_condition
from .domains import ConvexDomain, DomainSamplingError
from .estimation import EstimationError, estimate_constant, verify_implication_matrix
from .gallery import SCENARIOS, UnknownScenarioError, run_scenario
from .spaces import NormedSpace

EXIT_OK, EXIT_FINDING, EXIT_USAGE = 0, 1, 2


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    oracle: dict = field(default_factory=lambda: {"name": "half_sq_norm", "params": {}})
    space: dict = field(default_factory=lambda: {"norm": "euclidean"})
    domain: dict = field(default_factory=lambda: {"kind": "all"})
    conditions: list = field(default_factory=lambda: ["all"])
    L: list = field(default_factory=lambda: [1.0])
    budget: int = 10_000
    seed: int = 0
    output: Optional[str] = None
    format: str = "json"
    names: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)


def _json_or(text: str, shorthand):
    text = text.strip()
    if text.startswith("{"):
        try:
            return json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"bad JSON {text!r}: {e}") from None
    return shorthand(text)


def parse_space(text: str) -> dict:
    """``linf``, ``l1``, ``euclidean``, ``l3`` (lp with p=3), each optionally ``:DIM``; or JSON."""

    def short(s):
        kind, _, dim = s.partition(":")
        d = {}
        if dim:
            d["dim"] = int(dim)
        m = re.fullmatch(r"l(?:p)?(\d+(?:\.\d+)?)", kind)
        if kind in ("linf", "l1", "euclidean"):
            d["norm"] = kind
        elif kind == "l2":
            d["norm"] = "euclidean"
        elif m:
            d.update(norm="lp", p=float(m.group(1)))
        else:
            raise ConfigError(f"unknown space {s!r}")
        return d

    return _json_or(text, short)


def parse_oracle(text: str) -> dict:
    return _json_or(text, lambda s: {"name": s, "params": {}})


def parse_domain(text: str) -> dict:
    return _json_or(text, lambda s: {"kind": s})


def build(cfg: RunConfig):
    """Instantiate oracle, space and domain from their descriptors."""
    try:
        sd = dict(cfg.space)
        od = dict(cfg.oracle)
        f = oracles.from_descriptor(od, dim=sd.get("dim"))
        sd.setdefault("dim", f.dim)
        space = NormedSpace.from_descriptor(sd)
        if space.dim != f.dim:
            raise ConfigError(f"oracle dimension {f.dim} differs from space dimension {space.dim}")
        domain = ConvexDomain.from_descriptor(cfg.domain, space)
    except (KeyError, ValueError, TypeError) as e:
        raise ConfigError(str(e)) from None
    return f, space, domain


def _conditions(cfg, f, space):
    if cfg.conditions in (["all"], "all", []):
        return [c for c in CONDITIONS if applicable(f, space, c) is None]
    for c in cfg.conditions:
        reason = applicable(f, space, c)
        if reason is not None:
            raise ConfigError(f"condition {c} is not applicable: {reason}")
    return list(cfg.conditions)


def _header(cmd, cfg, f, space, domain):
    return {
        "command": cmd,
        "oracle": f.to_descriptor(),
        "space": space.to_descriptor(),
        "domain": domain.to_descriptor(),
        "seed": cfg.seed,
        "budget": cfg.budget,
    }


def _flat_witness(row: dict, w: dict) -> dict:
    row = dict(row)
    for k, v in enumerate(w.get("x", [])):
        row[f"x{k}"] = v
    for k, v in enumerate(w.get("y", [])):
        row[f"y{k}"] = v
    row["lambda"] = w.get("lambda")
    return row


def cmd_check(cfg: RunConfig):
    f, space, domain = build(cfg)
    conds = _conditions(cfg, f, space)
    verdicts = []
    for c in conds:
        for L in cfg.L:
            try:
                verdicts.append(run_condition(f, space, domain, c, float(L), cfg.budget, cfg.seed))
            except ConditionNotApplicable as e:
                raise ConfigError(str(e)) from None
            except ValueError as e:
                raise ConfigError(f"{c} at L={L}: {e}") from None
    report = _header("check", cfg, f, space, domain)
    report["verdicts"] = [v.to_dict() for v in verdicts]
    report["all_hold"] = all(v.holds for v in verdicts)
    table = [
        _flat_witness({"condition": v.condition, "L": v.L, "holds": v.holds, "worst_margin": v.worst_margin}, v.witness)
        for v in verdicts
    ]
    return (EXIT_OK if report["all_hold"] else EXIT_FINDING), report, table


def _estimate_rows(estimates):
    return [
        _flat_witness(
            {"condition": e.condition, "L_hat": None if e.unbounded else e.L_hat, "unbounded": e.unbounded},
            e.witness,
        )
        for e in estimates
    ]


def cmd_estimate(cfg: RunConfig):
    f, space, domain = build(cfg)
    conds = _conditions(cfg, f, space)
    ests = [estimate_constant(f, space, domain, c, cfg.budget, cfg.seed) for c in conds]
    report = _header("estimate", cfg, f, space, domain)
    report["estimates"] = [e.to_dict() for e in ests]
    report["degenerate"] = all(e.L_hat == 0 for e in ests)
    return EXIT_OK, report, _estimate_rows(ests)


def cmd_matrix(cfg: RunConfig):
    f, space, domain = build(cfg)
    try:
        rep = verify_implication_matrix(f, space, domain, cfg.budget, cfg.seed)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    report = _header("matrix", cfg, f, space, domain)
    body = rep.to_dict()
    report["estimates"] = body.pop("estimates")
    report.update(body)
    return (EXIT_OK if rep.verified else EXIT_FINDING), report, _estimate_rows(rep.estimates.values())


def cmd_gallery(cfg: RunConfig):
    names = list(cfg.names) or sorted(SCENARIOS)
    try:
        reports = [run_scenario(n, cfg.budget, cfg.seed) for n in names]
    except UnknownScenarioError as e:
        raise ConfigError(str(e.args[0])) from None
    report = {
        "command": "gallery",
        "seed": cfg.seed,
        "budget": cfg.budget,
        "scenarios": [r.to_dict() for r in reports],
        "passed": all(r.passed for r in reports),
    }
    table = []
    for r in reports:
        for e in r.expectations:
            obs = e.observed
            table.append(
                {"scenario": r.name, "label": e.label, "relation": e.relation, "ok": e.ok,
                 "observed": obs if isinstance(obs, (int, float)) else json.dumps(obs)}
            )
    return (EXIT_OK if report["passed"] else EXIT_FINDING), report, table


COMMANDS = {"check": cmd_check, "estimate": cmd_estimate, "matrix": cmd_matrix, "gallery": cmd_gallery}


def _clean(obj):
    """Replace non-finite floats by ``None`` so the output is strict JSON."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def dumps_json(report: dict) -> str:
    # repr of a float is its shortest exact round-trip form
    return json.dumps(_clean(report), indent=2) + "\n"


def dumps_csv(table: list) -> str:
    buf = io.StringIO()
    fields = []
    for row in table:
        fields += [k for k in row if k not in fields]
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for row in _clean(table):
        w.writerow({k: ("" if v is None else repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bhcheck", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
        s.add_argument("--oracle", help="oracle name or JSON descriptor")
        s.add_argument("--space", help="linf | l1 | euclidean | l<p>, optionally :DIM, or JSON descriptor")
        s.add_argument("--domain", help="all, or JSON descriptor")
        s.add_argument("--condition", action="append", help="condition tag, repeatable; 'all' for every applicable one")
        s.add_argument("--L", action="append", type=float, help="constant to check, repeatable")
        s.add_argument("--budget", type=int)
        s.add_argument("--seed", type=int)
        s.add_argument("--out", help="report path (default stdout)")
        s.add_argument("--format", choices=("json", "csv"))
        if name == "gallery":
            s.add_argument("names", nargs="*", help=f"scenarios (default all): {', '.join(sorted(SCENARIOS))}")
    return p


def config_from_args(args) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        try:
            with open(args.config) as fh:
                cfg = RunConfig.from_dict(json.load(fh))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config {args.config}: {e}") from None
    if args.oracle:
        cfg.oracle = parse_oracle(args.oracle)
    if args.space:
        cfg.space = parse_space(args.space)
    if args.domain:
        cfg.domain = parse_domain(args.domain)
    if args.condition:
        cfg.conditions = args.condition
    if args.L:
        cfg.L = args.L
    if args.budget is not None:
        cfg.budget = args.budget
    if args.seed is not None:
        cfg.seed = args.seed
    if args.out:
        cfg.output = args.out
    if args.format:
        cfg.format = args.format
    if getattr(args, "names", None):
        cfg.names = args.names
    if cfg.budget < 1 or cfg.seed < 0:
        raise ConfigError("budget must be positive and seed nonnegative")
    return cfg


def run(cfg: RunConfig, command: str) -> int:
    try:
        code, report, table = COMMANDS[command](cfg)
    except (ConfigError, DomainSamplingError, EstimationError) as e:
        print(f"bhcheck {command}: {e}", file=sys.stderr)
        return EXIT_USAGE
    text = dumps_csv(table) if cfg.format == "csv" else dumps_json(report)
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ConfigError as e:
        print(f"bhcheck: {e}", file=sys.stderr)
        return EXIT_USAGE
    return run(cfg, args.command)


if __name__ == "__main__":
    sys.exit(main())
