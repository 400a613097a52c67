"""Command-line front end: parse functions, run convexity checks, evaluate
any bound, sweep the order parameter, and search for counterexamples.

Exit codes: 0 when every evaluated instance is satisfied (or a check
passes), 2 on a violation, 1 on any input error.  Output is deterministic
for a fixed invocation (including the seed); numbers are serialized with 17
significant digits so doubles round-trip losslessly.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass

import numpy as np

from . import bounds
from .bounds import (
    ALL_THEOREMS,
    CHAIN_1_4,
    DERIVED,
    HOLDER_THEOREMS,
    PAIR_THEOREMS,
    PRINTED,
    THEOREMS_1D,
    T1_1,
    T1_2,
    T1_3,
    T2_1,
    T2_4,
    T2_7,
    BoundReport,
)
from .convexity import (
    GridSpec,
    check_coordinated_r_convex,
    check_jointly_r_convex,
    check_r_convex_1d,
    generate_coordinated_r_convex_2d,
    generate_r_convex_1d,
)
from .funcmodel import Interval, PositiveFunction, RConvexError, Rectangle
from .quadrature import QuadratureConfig

BOUND_THEOREMS = tuple(t for t in ALL_THEOREMS if t != CHAIN_1_4)


class InputError(ValueError):
    """Malformed invocation; maps to exit code 1."""


# ---------------------------------------------------------------------------
# deterministic serialization


def fmt_num(x: float) -> str:
    return format(float(x), ".17g")


def _json_escape(s: str) -> str:
    out = []
    for ch in s:
        if ch in ('"', "\\"):
            out.append("\\" + ch)
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    return "".join(out)


def dumps(obj) -> str:
    """Minimal JSON writer with fixed key order and 17-digit floats."""
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        return f'"{_json_escape(obj)}"'
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt_num(obj)
    if isinstance(obj, dict):
        items = ", ".join(f'"{_json_escape(k)}": {dumps(v)}' for k, v in obj.items())
        return "{" + items + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else fmt_num(v) if isinstance(v, float)
                         else str(v).lower() if isinstance(v, bool) else str(v)
                         for v in row])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# run specification


@dataclass(frozen=True)
class RunSpec:
    command: str
    f_text: str | None = None
    g_text: str | None = None
    domain: tuple = ()
    theorem: str | None = None
    r1: float | None = None
    r2: float | None = None
    r_grid: tuple = ()
    variant: str = PRINTED
    nodes: int = 8
    panels: int = 4
    seed: int = 0
    fmt: str = "json"
    joint: bool = False
    grid_points: int = 17
    count: int = 200
    bilinear: bool = False

    def config(self) -> QuadratureConfig:
        return QuadratureConfig(self.nodes, self.panels)

    def interval(self) -> Interval:
        if len(self.domain) != 2:
            raise InputError("--domain must be 'a,b' for interval commands")
        return Interval(self.domain[0], self.domain[1])

    def rectangle(self) -> Rectangle:
        if len(self.domain) != 4:
            raise InputError("--domain must be 'a,b,c,d' for rectangle commands")
        return Rectangle(Interval(self.domain[0], self.domain[1]),
                         Interval(self.domain[2], self.domain[3]))

    def function(self, text: str | None, name: str):
        if text is None:
            raise InputError(f"--{name} is required for this command")
        dom = self.interval() if len(self.domain) == 2 else self.rectangle()
        return PositiveFunction.from_text(text, dom)


def _parse_domain(text: str) -> tuple:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) not in (2, 4):
        raise InputError("--domain expects 'a,b' or 'a,b,c,d'")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise InputError(f"bad domain value: {exc}") from None


def _parse_r_grid(text: str) -> tuple:
    parts = text.split(":")
    if len(parts) != 3:
        raise InputError("--r-grid expects 'lo:hi:n'")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise InputError(f"bad r-grid: {exc}") from None
    if n < 1:
        raise InputError("r-grid is empty")
    return tuple(float(v) for v in np.linspace(lo, hi, n))


# ---------------------------------------------------------------------------
# command implementations


def _theorem_params(spec: RunSpec) -> tuple[float, float | None]:
    """Resolve (r1, r2) for the requested theorem; Hoelder pairs default to the
    conjugate of r1, other pair bounds default to r2 = r1."""
    if spec.r1 is None:
        raise InputError("--r is required")
    r1 = spec.r1
    r2 = spec.r2
    if spec.theorem in HOLDER_THEOREMS and r2 is None:
        if r1 <= 1.0:
            raise InputError(f"{spec.theorem} requires r > 1")
        r2 = r1 / (r1 - 1.0)
    elif spec.theorem in PAIR_THEOREMS and r2 is None:
        r2 = r1
    return r1, r2


def _evaluate_bound(spec: RunSpec, theorem: str, f, g, r1: float, r2: float | None,
                    variant: str) -> BoundReport:
    cfg = spec.config()
    if theorem == T1_1:
        return bounds.hadamard_r_1d(f, None, r1, cfg, variant)
    if theorem == T1_2:
        return bounds.product_rs_1d(f, g, None, r1, r2, cfg, variant)
    if theorem == T1_3:
        return bounds.holder_rs_1d(f, g, None, r1, r2, cfg)
    if theorem == T2_1:
        return bounds.coord_r(f, None, r1, cfg, variant)
    if theorem == T2_4:
        return bounds.coord_product(f, g, None, r1, r2, cfg, variant)
    if theorem == T2_7:
        return bounds.coord_holder(f, g, None, r1, r2, cfg)
    raise InputError(f"theorem {theorem} is not a two-sided bound")


def _load_functions(spec: RunSpec):
    f = spec.function(spec.f_text, "f")
    g = None
    if spec.theorem in PAIR_THEOREMS:
        # g defaults to f, reproducing the squared corollary instances
        g = spec.function(spec.g_text, "g") if spec.g_text else f
    return f, g


def _grid_meta(spec: RunSpec) -> dict:
    return {"nodes": spec.nodes, "panels": spec.panels}


def _params_meta(spec: RunSpec, r1, r2) -> dict:
    return {
        "f": spec.f_text,
        "g": spec.g_text,
        "domain": [float(v) for v in spec.domain],
        "r1": None if r1 is None else float(r1),
        "r2": None if r2 is None else float(r2),
    }


def run_verify(spec: RunSpec) -> tuple[int, str]:
    if spec.theorem is None:
        raise InputError("--theorem is required")
    r1, r2 = _theorem_params(spec)
    f, g = _load_functions(spec)
    report = _evaluate_bound(spec, spec.theorem, f, g, r1, r2, spec.variant)
    if spec.fmt == "csv":
        text = _csv_text(
            ["theorem", "variant", "r1", "r2", "lhs", "rhs", "slack", "quad_error", "satisfied"],
            [[report.theorem_id, report.variant, r1, r2, report.lhs, report.rhs,
              report.slack, report.quad_error, report.satisfied]])
    else:
        text = dumps({
            "theorem": report.theorem_id,
            "variant": report.variant,
            "params": _params_meta(spec, r1, r2),
            "lhs": report.lhs,
            "rhs": report.rhs,
            "slack": report.slack,
            "quad_error": report.quad_error,
            "satisfied": report.satisfied,
            "grid": _grid_meta(spec),
        }) + "\n"
    return (0 if report.satisfied else 2), text


def run_chain(spec: RunSpec) -> tuple[int, str]:
    f = spec.function(spec.f_text, "f")
    if f.arity != 2:
        raise InputError("chain needs a rectangle domain 'a,b,c,d'")
    report = bounds.dragomir_chain(f, None, spec.config())
    if spec.fmt == "csv":
        text = _csv_text(
            ["theorem", "e1", "e2", "e3", "e4", "e5", "slack", "quad_error", "satisfied"],
            [[report.theorem_id, *report.chain, report.slack, report.quad_error,
              report.satisfied]])
    else:
        text = dumps({
            "theorem": report.theorem_id,
            "variant": report.variant,
            "params": _params_meta(spec, None, None),
            "chain": list(report.chain),
            "slack": report.slack,
            "quad_error": report.quad_error,
            "satisfied": report.satisfied,
            "grid": _grid_meta(spec),
        }) + "\n"
    return (0 if report.satisfied else 2), text


def run_check(spec: RunSpec) -> tuple[int, str]:
    if spec.r1 is None:
        raise InputError("--r is required")
    f = spec.function(spec.f_text, "f")
    grid = GridSpec(points_per_axis=spec.grid_points)
    if f.arity == 1:
        notion = "interval"
        verdict = check_r_convex_1d(f, spec.r1, grid)
    elif spec.joint:
        notion = "joint"
        verdict = check_jointly_r_convex(f, spec.r1, grid)
    else:
        notion = "coordinated"
        verdict = check_coordinated_r_convex(f, spec.r1, grid)
    witness = None
    if verdict.witness is not None:
        w = verdict.witness
        witness = {
            "first": list(w.first),
            "t": w.t,
            "second": None if w.second is None else list(w.second),
            "lam": w.lam,
            "axis": w.axis,
            "fixed": w.fixed,
            "lhs": w.lhs,
            "rhs": w.rhs,
        }
    if spec.fmt == "csv":
        text = _csv_text(["notion", "r", "passed", "tolerance"],
                         [[notion, float(spec.r1), verdict.passed, verdict.tolerance]])
    else:
        text = dumps({
            "command": "check",
            "notion": notion,
            "params": {
                "f": spec.f_text,
                "domain": [float(v) for v in spec.domain],
                "r": float(spec.r1),
                "grid_points": grid.points_per_axis,
                "grid_weights": list(grid.weights),
            },
            "passed": verdict.passed,
            "tolerance": verdict.tolerance,
            "witness": witness,
        }) + "\n"
    return (0 if verdict.passed else 2), text


def run_sweep(spec: RunSpec) -> tuple[int, str]:
    if spec.theorem is None:
        raise InputError("--theorem is required")
    if not spec.r_grid:
        raise InputError("--r-grid is required for sweep")
    f, g = _load_functions(spec)
    rows = []
    all_ok = True
    for r1 in spec.r_grid:
        if spec.theorem in HOLDER_THEOREMS:
            if r1 <= 1.0:
                raise InputError(f"{spec.theorem} requires every grid value > 1")
            r2 = r1 / (r1 - 1.0)
        elif spec.theorem in PAIR_THEOREMS:
            r2 = spec.r2 if spec.r2 is not None else r1
        else:
            r2 = None
        printed = _evaluate_bound(spec, spec.theorem, f, g, r1, r2, PRINTED)
        if spec.theorem in HOLDER_THEOREMS:
            derived = printed
        else:
            derived = _evaluate_bound(spec, spec.theorem, f, g, r1, r2, DERIVED)
        all_ok = all_ok and printed.satisfied and derived.satisfied
        rows.append({
            "r1": float(r1),
            "r2": None if r2 is None else float(r2),
            "lhs": printed.lhs,
            "rhs_printed": printed.rhs,
            "rhs_derived": derived.rhs,
            "slack_printed": printed.slack,
            "slack_derived": derived.slack,
            "quad_error": max(printed.quad_error, derived.quad_error),
            "satisfied_printed": printed.satisfied,
            "satisfied_derived": derived.satisfied,
        })
    if spec.fmt == "json":
        text = dumps({
            "theorem": spec.theorem,
            "params": _params_meta(spec, None, spec.r2),
            "grid": _grid_meta(spec),
            "rows": rows,
        }) + "\n"
    else:
        header = ["theorem", "r1", "r2", "lhs", "rhs_printed", "rhs_derived",
                  "slack_printed", "slack_derived", "quad_error",
                  "satisfied_printed", "satisfied_derived"]
        text = _csv_text(header, [[spec.theorem, row["r1"], row["r2"], row["lhs"],
                                   row["rhs_printed"], row["rhs_derived"],
                                   row["slack_printed"], row["slack_derived"],
                                   row["quad_error"], row["satisfied_printed"],
                                   row["satisfied_derived"]] for row in rows])
    return (0 if all_ok else 2), text


def _search_conjugate(theorem: str, r1: float, r2_flag: float | None) -> float | None:
    if theorem in HOLDER_THEOREMS:
        if r1 <= 1.0:
            raise InputError(f"{theorem} requires every grid value > 1")
        return r1 / (r1 - 1.0)
    if theorem in PAIR_THEOREMS:
        return r2_flag if r2_flag is not None else r1
    return None


def search_instances(spec: RunSpec):
    """Deterministically generate class members per grid order and evaluate
    the chosen bound on each; yields (f_desc, g_desc, r1, r2, report).

    The default corpus draws constants, positive quadratics, and exponentials
    of affine maps.  --bilinear additionally admits positive bilinear bases,
    whose correlated boundary means genuinely violate the printed
    two-variable Hoelder bound.
    """
    if spec.theorem is None or spec.theorem == CHAIN_1_4:
        raise InputError("--theorem must name a two-sided bound")
    rng = np.random.default_rng(spec.seed)
    one_dim = spec.theorem in THEOREMS_1D
    dom = spec.interval() if one_dim else spec.rectangle()
    for r1 in spec.r_grid:
        r2 = _search_conjugate(spec.theorem, r1, spec.r2)
        if one_dim:
            fs = generate_r_convex_1d(rng, dom, spec.count, r1)
            gs = generate_r_convex_1d(rng, dom, spec.count, r2) if r2 is not None else [None] * spec.count
        else:
            fs = generate_coordinated_r_convex_2d(rng, dom, spec.count, r1,
                                                  bilinear=spec.bilinear)
            gs = (generate_coordinated_r_convex_2d(rng, dom, spec.count, r2,
                                                   bilinear=spec.bilinear)
                  if r2 is not None else [None] * spec.count)
        for f, g in zip(fs, gs):
            report = _evaluate_bound(spec, spec.theorem, f, g, r1, r2, spec.variant)
            yield f.describe(), None if g is None else g.describe(), r1, r2, report


def run_search(spec: RunSpec) -> tuple[int, str]:
    if not spec.r_grid:
        raise InputError("--r-grid is required for search")
    if spec.count < 1:
        raise InputError("--count must be >= 1")
    tried = 0
    violations = []
    for f_desc, g_desc, r1, r2, report in search_instances(spec):
        tried += 1
        if not report.satisfied:
            violations.append({
                "f": f_desc,
                "g": g_desc,
                "r1": float(r1),
                "r2": None if r2 is None else float(r2),
                "lhs": report.lhs,
                "rhs": report.rhs,
                "slack": report.slack,
                "quad_error": report.quad_error,
                "satisfied": report.satisfied,
            })
    minimal = min(violations, key=lambda v: v["slack"]) if violations else None
    if spec.fmt == "csv":
        header = ["f", "g", "r1", "r2", "lhs", "rhs", "slack", "quad_error", "satisfied"]
        text = _csv_text(header, [[v["f"], v["g"], v["r1"], v["r2"], v["lhs"], v["rhs"],
                                   v["slack"], v["quad_error"], v["satisfied"]]
                                  for v in violations])
    else:
        text = dumps({
            "theorem": spec.theorem,
            "variant": spec.variant,
            "params": {
                "domain": [float(v) for v in spec.domain],
                "r_grid": [float(v) for v in spec.r_grid],
                "r2": spec.r2,
                "count": spec.count,
                "seed": spec.seed,
                "bilinear": spec.bilinear,
            },
            "grid": _grid_meta(spec),
            "instances_tried": tried,
            "violations": violations,
            "minimal_violation": minimal,
        }) + "\n"
    return (0 if not violations else 2), text


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="rconvex", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "check": "grid-check r-convexity of a function",
        "verify": "evaluate both sides of one bound",
        "sweep": "evaluate a bound over a grid of orders",
        "search": "seeded counterexample search over generated class members",
        "chain": "evaluate the five-term rectangle chain",
    }
    for name, help_text in specs.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--f", dest="f_text", metavar="EXPR")
        p.add_argument("--g", dest="g_text", metavar="EXPR")
        p.add_argument("--domain", required=True, metavar="a,b[,c,d]")
        p.add_argument("--theorem", choices=BOUND_THEOREMS)
        p.add_argument("--r", dest="r1", type=float, metavar="V")
        p.add_argument("--r2", dest="r2", type=float, metavar="V")
        p.add_argument("--r-grid", dest="r_grid", metavar="lo:hi:n")
        p.add_argument("--variant", choices=["printed", "derived"], default="printed")
        p.add_argument("--nodes", type=int, default=8)
        p.add_argument("--panels", type=int, default=4)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", dest="fmt", choices=["json", "csv"], default="json")
        p.add_argument("--joint", action="store_true",
                       help="check the four-corner rectangle inequality instead of "
                            "the coordinate-wise one")
        p.add_argument("--grid-points", dest="grid_points", type=int, default=17)
        p.add_argument("--count", type=int, default=200,
                       help="instances generated per grid order (search)")
        p.add_argument("--bilinear", action="store_true",
                       help="admit positive bilinear bases into the search corpus")
    return parser


def build_spec(argv) -> RunSpec:
    args = _build_parser().parse_args(argv)
    return RunSpec(
        command=args.command,
        f_text=args.f_text,
        g_text=args.g_text,
        domain=_parse_domain(args.domain),
        theorem=args.theorem,
        r1=args.r1,
        r2=args.r2,
        r_grid=_parse_r_grid(args.r_grid) if args.r_grid else (),
        variant=DERIVED if args.variant == "derived" else PRINTED,
        nodes=args.nodes,
        panels=args.panels,
        seed=args.seed,
        fmt=args.fmt,
        joint=args.joint,
        grid_points=args.grid_points,
        count=args.count,
        bilinear=args.bilinear,
    )


_RUNNERS = {
    "check": run_check,
    "verify": run_verify,
    "sweep": run_sweep,
    "search": run_search,
    "chain": run_chain,
}


def main(argv=None) -> int:
    try:
        spec = build_spec(argv)
        code, text = _RUNNERS[spec.command](spec)
    except (RConvexError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(text)
    return code


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
