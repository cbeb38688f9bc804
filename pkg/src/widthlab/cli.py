"""Command line front end: ``widthlab <command> ...``.

Exit status 0 on success, 2 on precondition errors, 3 when a count would
exceed the configured ceiling.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
from dataclasses import dataclass
from typing import Optional

from . import approx as ax
from . import gevrey as gv
from . import tractability as tr
from .constants import DEFAULT_CONSTANTS, BoundConstants
from .entropy import entropy_bounds
from .errors import CountCeilingError, PreconditionError, WidthlabError
from .lattice import DEFAULT_CEILING, grid_count_hyperbolic, grid_count_pball
from .weights import WeightSpec, format_p, gevrey, isotropic, parse_p

log = logging.getLogger("widthlab")


@dataclass
class RunConfig:
    command: str
    precision: float = 1e-10
    count_ceiling: int = DEFAULT_CEILING
    constants_file: Optional[str] = None
    output: str = "json"

    def __post_init__(self):
        if not 0 < self.precision <= 1e-3:
            raise PreconditionError("precision must lie in (0, 1e-3]")
        if self.count_ceiling < 2**20:
            raise PreconditionError("count ceiling must be at least 2^20")
        if self.output not in ("json", "csv", "pretty"):
            raise PreconditionError(f"unknown output format {self.output!r}")

    def constants(self) -> BoundConstants:
        if self.constants_file:
            return BoundConstants.load(self.constants_file)
        return DEFAULT_CONSTANTS


# deterministic emission ------------------------------------------------------------

def fmt_real(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def dumps(obj) -> str:
    """JSON with sorted keys and reals printed to 17 significant digits."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt_real(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        return "{" + ",".join(f"{json.dumps(str(k))}:{dumps(obj[k])}" for k in sorted(obj, key=str)) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(dumps(v) for v in obj) + "]"
    if hasattr(obj, "item"):
        return dumps(obj.item())
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt_real(v).strip('"')
    return str(v)


class Emitter:
    def __init__(self, cfg: RunConfig, out):
        self.cfg, self.out = cfg, out
        self.header = None
        self.csv = csv.writer(out, lineterminator="\n") if cfg.output == "csv" else None

    def row(self, obj: dict, columns: Optional[list] = None):
        if self.cfg.output == "csv":
            cols = columns or sorted(obj)
            if self.header is None:
                self.header = cols
                self.csv.writerow(cols)
            self.csv.writerow([csv_cell(obj.get(c)) for c in self.header])
        elif self.cfg.output == "pretty":
            self.out.write(json.dumps(json.loads(dumps(obj)), indent=2, sort_keys=True) + "\n")
        else:
            self.out.write(dumps(obj) + "\n")


# argument helpers ----------------------------------------------------------------

def parse_spec(text: str) -> WeightSpec:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PreconditionError(f"malformed spec JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise PreconditionError("spec JSON must be an object")
    return WeightSpec.from_json(obj)


def parse_params(text: str) -> dict:
    out = {}
    for part in filter(None, text.split(",")):
        if "=" not in part:
            raise PreconditionError(f"parameter {part!r} is not key=value")
        k, v = part.split("=", 1)
        out[k.strip()] = parse_p(v.strip())
    return out


def parse_range(text: str) -> list:
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise PreconditionError("range must be a:b or a:b:step")
    a, b = int(parts[0]), int(parts[1])
    step = int(parts[2]) if len(parts) == 3 else 1
    if a < 1 or b < a or step < 1:
        raise PreconditionError("range needs 1 <= a <= b and step >= 1")
    return list(range(a, b + 1, step))


def log_grid(n_max: int, per_decade: int = 4) -> list:
    grid, k = set(), 0
    while True:
        n = int(round(10 ** (k / per_decade)))
        if n > n_max:
            break
        grid.add(n)
        k += 1
    grid.add(int(n_max))
    return sorted(grid)


# commands ------------------------------------------------------------------------

def cmd_grid_count(args, cfg, em):
    if args.shape == "hyperbolic":
        res = grid_count_hyperbolic(args.r, args.d, cfg.count_ceiling)
    else:
        if args.p is None:
            raise PreconditionError("--p is required for pball")
        res = grid_count_pball(parse_p(args.p), args.r, args.d, cfg.count_ceiling, strict=args.strict)
    em.row(res.to_json())


def _approx_row(spec, n, target, cfg):
    if target == "linf":
        res = ax.approx_number_linf(spec, n, max(cfg.precision, 1e-6), cfg.count_ceiling)
    else:
        res = ax.approx_number(spec, n, cfg.count_ceiling)
    out = res.to_json()
    out["spec"] = spec.to_json()
    out["target"] = "Linf" if target == "linf" else "L2"
    return out


def cmd_approx(args, cfg, em):
    spec = parse_spec(args.spec)
    ns = parse_range(args.n_range) if args.n_range else [args.n]
    if ns == [None]:
        raise PreconditionError("give --n or --n-range")
    for n in ns:
        row = _approx_row(spec, n, args.target, cfg)
        if cfg.output == "csv":
            regime = ax.regime_of(n, spec.d)
            em.row({"n": n, "a_n": row["value"], "lower": row["lower"], "upper": row["upper"], "regime": regime},
                   ["n", "a_n", "lower", "upper", "regime"])
        else:
            em.row(row)


def cmd_entropy(args, cfg, em):
    em.row(entropy_bounds(args.n, args.d, parse_p(args.p)).to_json())


def cmd_bounds(args, cfg, em):
    spec = parse_spec(args.spec)
    n = args.n
    exact = ax.approx_number(spec, n, cfg.count_ceiling).value
    out = {"spec": spec.to_json(), "n": str(n), "exact": exact, "theorem": args.theorem}
    if args.theorem == "generalized":
        out["bounds"] = ax.characterization_bounds(spec, n).to_json()
    elif args.theorem == "base":
        lo, a, hi = ax.base_sandwich(n, spec.d)
        out["bounds"] = {"lower": lo, "upper": hi, "provenance": "base-characterization", "certified": True}
    else:
        if spec.kind != "Isotropic":
            raise PreconditionError("regime bounds are defined for Isotropic specs")
        regime, pair = ax.regime_bounds_iso(spec.s, spec.p, spec.d, n, cfg.constants())
        out["regime"] = regime
        out["bounds"] = pair.to_json()
    em.row(out)


def cmd_gevrey_compare(args, cfg, em):
    rows = gv.mixed_vs_gevrey_compare(args.s, args.d, log_grid(args.n_max))
    cols = ["n", "a_mixed", "a_gevrey", "ksu15_lower", "ksu15_upper", "ratio", "dominated"]
    for r in rows:
        em.row(r if cfg.output != "csv" else {c: r[c] for c in cols}, cols)


def cmd_tract(args, cfg, em):
    prm = parse_params(args.params)
    try:
        if args.problem == "iso":
            v = tr.classify_iso(prm["s"], prm["p"])
        else:
            v = tr.classify_gevrey(prm["alpha"], prm["beta"], prm["p"])
    except KeyError as exc:
        raise PreconditionError(f"missing parameter {exc}") from None
    em.row(v.to_json())


def cmd_info(args, cfg, em):
    spec = parse_spec(args.spec)
    if args.lemma:
        if spec.kind != "Isotropic":
            raise PreconditionError("lemma bounds are defined for Isotropic specs")
        rep = tr.info_complexity_bounds_iso(spec.s, spec.p, args.eps, spec.d, cfg.constants(), args.gamma)
        em.row(rep.to_json())
        return
    em.row(tr.info_complexity_exact(spec, args.eps, ceiling=cfg.count_ceiling).to_json())


def cmd_limits(args, cfg, em):
    spec = parse_spec(args.spec)
    rep = ax.limit_diagnostic(spec, log_grid(args.n_max), cfg.count_ceiling)
    for n, val, target in rep.rows:
        em.row({"n": n, "normalised": val, "target": target, "ratio": val / target}, ["n", "normalised", "target", "ratio"])
    if cfg.output != "csv":
        em.row({"verdict": rep.verdict, "strict": rep.strict})


def cmd_calibrate(args, cfg, em):
    from .calibrate import calibrate

    grid = json.loads(open(args.grid).read())
    report = calibrate(grid)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(dumps(report["registry"]) + "\n")
    em.row(report)


def cmd_acceptance(args, cfg, em):
    from .acceptance import run_all

    results = run_all(quick=args.quick)
    for r in results:
        em.row(r.to_json(), ["criterion", "status", "detail"])


def build_parser() -> argparse.ArgumentParser:
    def add_globals(parser, suppress):
        dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        parser.add_argument("--output", choices=("json", "csv", "pretty"), default=dflt("json"))
        parser.add_argument("--precision", type=float, default=dflt(1e-10))
        parser.add_argument("--ceiling", type=int, default=dflt(DEFAULT_CEILING))
        parser.add_argument("--constants", default=dflt(None), help="calibration registry JSON")

    ap = argparse.ArgumentParser(prog="widthlab", description="approximation numbers of weighted embeddings")
    add_globals(ap, False)
    # global flags are also accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    add_globals(common, True)
    subs = ap.add_subparsers(dest="command", required=True)

    class _Sub:
        def add_parser(self, name):
            return subs.add_parser(name, parents=[common])

    sub = _Sub()

    p = sub.add_parser("grid-count")
    p.add_argument("--shape", choices=("pball", "hyperbolic"), required=True)
    p.add_argument("--p")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--strict", action="store_true", help="fail on boundary ties instead of reporting them")
    p.set_defaults(func=cmd_grid_count)

    p = sub.add_parser("approx")
    p.add_argument("--spec", required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--n-range")
    p.add_argument("--target", choices=("l2", "linf"), default="l2")
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("entropy")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--p", required=True)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("bounds")
    p.add_argument("--spec", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--theorem", choices=("base", "generalized", "regime"), default="generalized")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("gevrey-compare")
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.set_defaults(func=cmd_gevrey_compare)

    p = sub.add_parser("tract")
    p.add_argument("--problem", choices=("iso", "gevrey"), required=True)
    p.add_argument("--params", required=True)
    p.set_defaults(func=cmd_tract)

    p = sub.add_parser("info-complexity")
    p.add_argument("--spec", required=True)
    p.add_argument("--eps", type=float, required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exact", action="store_true", default=True)
    g.add_argument("--lemma", action="store_true")
    p.add_argument("--gamma", type=float, default=0.0)
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("limits")
    p.add_argument("--spec", required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.set_defaults(func=cmd_limits)

    p = sub.add_parser("calibrate")
    p.add_argument("--grid", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("acceptance")
    p.add_argument("--quick", action="store_true")
    p.set_defaults(func=cmd_acceptance)
    return ap


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    level = os.environ.get("WIDTHLAB_LOG", "error").upper()
    logging.basicConfig(level=getattr(logging, level, logging.ERROR), stream=sys.stderr)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        cfg = RunConfig(args.command, args.precision, args.ceiling, args.constants, args.output)
        args.func(args, cfg, Emitter(cfg, out))
    except CountCeilingError as exc:
        print(f"widthlab: {exc}", file=sys.stderr)
        return 3
    except (PreconditionError, ValueError, KeyError) as exc:
        print(f"widthlab: {exc}", file=sys.stderr)
        return 2
    except WidthlabError as exc:
        print(f"widthlab: {exc}", file=sys.stderr)
        return 2
    return 0


def main():
    sys.exit(run())
