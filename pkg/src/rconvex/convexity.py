"""Grid-based r-convexity checks, certified class-member generators, and the
harness confirming that the joint rectangle property implies the
coordinate-wise one.

A "pass" means no violation was found at the grid resolution recorded in the
verdict; universal quantification over blends is not decidable for black-box
functions.  Generators, by contrast, produce exact class members by
construction (power and exp transforms of convex bases), giving ground truth
that does not depend on the checkers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import kernels
from .funcmodel import (
    ArityError,
    Const,
    ExpNode,
    Expr,
    Interval,
    PositiveFunction,
    Pow,
    Prod,
    Rectangle,
    Sum,
    Var,
    Axis,
    partial_map,
)
from .means import RParam, as_rparam

TOL_SCALE = 1e-9  # additive tolerance is TOL_SCALE * (1 + max sampled |f|)


@dataclass(frozen=True)
class GridSpec:
    points_per_axis: int = 17
    weights: tuple = (0.1, 0.25, 0.5, 0.75, 0.9)

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if self.points_per_axis < 3:
            raise ValueError("points_per_axis must be >= 3")
        if not self.weights:
            raise ValueError("weight list must be nonempty")
        for w in self.weights:
            if not 0.0 < w < 1.0:
                raise ValueError(f"grid weight {w} outside (0, 1)")
        if 0.5 not in self.weights:
            raise ValueError("grid weights must include 0.5")


DEFAULT_GRID = GridSpec()


@dataclass(frozen=True)
class Witness:
    """A grid combination that violates the defining inequality.

    ``first`` is the endpoint pair blended by t.  For rectangle checks
    ``second`` is the pair on the other axis blended by ``lam``.  For
    coordinate-wise checks, ``axis`` names the free axis of the failing
    partial map and ``fixed`` the frozen coordinate.
    """

    first: tuple
    t: float
    lhs: float
    rhs: float
    second: tuple | None = None
    lam: float | None = None
    axis: str | None = None
    fixed: float | None = None


@dataclass(frozen=True)
class ConvexityVerdict:
    passed: bool
    witness: Witness | None
    r: float
    grid: GridSpec
    tolerance: float


def _require_interval(f: PositiveFunction):
    if f.arity != 1:
        raise ArityError("expected a one-variable function on an interval")


def _require_rectangle(f: PositiveFunction):
    if f.arity != 2:
        raise ArityError("expected a two-variable function on a rectangle")


def _blend_matrix(xs: np.ndarray, ts: np.ndarray) -> np.ndarray:
    # (n, n, T): t*x_i + (1-t)*x_j, computed once so both backends see
    # identical coordinates
    return ts[None, None, :] * xs[:, None, None] + (1.0 - ts)[None, None, :] * xs[None, :, None]


def check_r_convex_1d(f: PositiveFunction, r, grid: GridSpec = DEFAULT_GRID) -> ConvexityVerdict:
    """Test the one-variable defining inequality on all grid pairs and blend
    weights; the first violation in (i, j, t) order becomes the witness."""
    _require_interval(f)
    r = as_rparam(r)
    iv = f.domain
    xs = np.linspace(iv.lo, iv.hi, grid.points_per_axis)
    ts = np.asarray(grid.weights, dtype=np.float64)
    gv = f.values(xs)
    bv = f.values(_blend_matrix(xs, ts).ravel()).reshape(xs.size, xs.size, ts.size)
    tol = TOL_SCALE * (1.0 + max(float(np.abs(gv).max()), float(np.abs(bv).max())))
    mode = kernels.select_mode(float(gv.min()), float(gv.max()), r.effective)
    hit = kernels.scan_1d(gv, bv, ts, r.effective, tol, mode)
    if hit is None:
        return ConvexityVerdict(True, None, r.r, grid, tol)
    i, j, k, lhs, rhs = hit
    witness = Witness(first=(float(xs[i]), float(xs[j])), t=float(ts[k]), lhs=lhs, rhs=rhs)
    return ConvexityVerdict(False, witness, r.r, grid, tol)


def check_coordinated_r_convex(f: PositiveFunction, r, grid: GridSpec = DEFAULT_GRID) -> ConvexityVerdict:
    """Check every partial map along x (y frozen on the grid) and then along
    y; the first failing partial map supplies the witness."""
    _require_rectangle(f)
    r = as_rparam(r)
    rect = f.domain
    ys = np.linspace(rect.y.lo, rect.y.hi, grid.points_per_axis)
    for fixed in ys:
        verdict = check_r_convex_1d(partial_map(f, Axis.X, float(fixed)), r, grid)
        if not verdict.passed:
            w = verdict.witness
            witness = Witness(first=w.first, t=w.t, lhs=w.lhs, rhs=w.rhs,
                              axis="x", fixed=float(fixed))
            return ConvexityVerdict(False, witness, r.r, grid, verdict.tolerance)
    xs = np.linspace(rect.x.lo, rect.x.hi, grid.points_per_axis)
    last_tol = 0.0
    for fixed in xs:
        verdict = check_r_convex_1d(partial_map(f, Axis.Y, float(fixed)), r, grid)
        last_tol = verdict.tolerance
        if not verdict.passed:
            w = verdict.witness
            witness = Witness(first=w.first, t=w.t, lhs=w.lhs, rhs=w.rhs,
                              axis="y", fixed=float(fixed))
            return ConvexityVerdict(False, witness, r.r, grid, verdict.tolerance)
    return ConvexityVerdict(True, None, r.r, grid, last_tol)


def check_jointly_r_convex(f: PositiveFunction, r, grid: GridSpec = DEFAULT_GRID) -> ConvexityVerdict:
    """Test the four-corner rectangle inequality on all grid pairs along both
    axes and all (t, lam) weights; scan order is (i, j, t, k, l, lam)."""
    _require_rectangle(f)
    r = as_rparam(r)
    rect = f.domain
    n = grid.points_per_axis
    xs = np.linspace(rect.x.lo, rect.x.hi, n)
    us = np.linspace(rect.y.lo, rect.y.hi, n)
    ts = np.asarray(grid.weights, dtype=np.float64)
    ls = ts

    gv = f.values_outer(xs, us)
    xb = _blend_matrix(xs, ts).ravel()
    ub = _blend_matrix(us, ls).ravel()
    bv = f.values_outer(xb, ub)
    tol = TOL_SCALE * (1.0 + max(float(np.abs(gv).max()), float(np.abs(bv).max())))
    mode = kernels.select_mode(float(gv.min()), float(gv.max()), r.effective)
    hit = kernels.scan_2d(gv, bv, ts, ls, r.effective, tol, mode)
    if hit is None:
        return ConvexityVerdict(True, None, r.r, grid, tol)
    i, j, ti, k, l, li, lhs, rhs = hit
    witness = Witness(first=(float(xs[i]), float(xs[j])), t=float(ts[ti]),
                      second=(float(us[k]), float(us[l])), lam=float(ls[li]),
                      lhs=lhs, rhs=rhs)
    return ConvexityVerdict(False, witness, r.r, grid, tol)


# ---------------------------------------------------------------------------
# generators: exact class members by construction


def power_transform(f: PositiveFunction, p: float) -> PositiveFunction:
    """f**p with the same domain (no simplification of expression bodies)."""
    if p == 1.0:
        return f
    if isinstance(f.body, Expr):
        return PositiveFunction(Pow(f.body, float(p)), f.domain, f.floor)
    base = f.body
    if f.arity == 1:
        return PositiveFunction(lambda x, _g=base, _p=p: _g(x) ** _p, f.domain, f.floor)
    return PositiveFunction(lambda x, y, _g=base, _p=p: _g(x, y) ** _p, f.domain, f.floor)


def exp_transform(f: PositiveFunction) -> PositiveFunction:
    if isinstance(f.body, Expr):
        return PositiveFunction(ExpNode(f.body), f.domain, f.floor)
    base = f.body
    if f.arity == 1:
        return PositiveFunction(lambda x, _g=base: math.exp(_g(x)), f.domain, f.floor)
    return PositiveFunction(lambda x, y, _g=base: math.exp(_g(x, y)), f.domain, f.floor)


def make_r_convex_1d(g: PositiveFunction, r, grid: GridSpec = DEFAULT_GRID,
                     validate: bool = True) -> PositiveFunction:
    """Turn a convex positive base into an r-convex member: g**(1/r) for
    r > 0 (identity at r = 1), exp(g) for r = 0.

    With validate=True the base is first checked for ordinary convexity on
    the grid; corpus generators pass validate=False because their bases are
    convex by construction.
    """
    _require_interval(g)
    r = as_rparam(r)
    if validate:
        verdict = check_r_convex_1d(g, RParam(1.0), grid)
        if not verdict.passed:
            raise ValueError(f"base {g.describe()} failed the convexity check: {verdict.witness}")
    if r.is_geometric:
        return exp_transform(g)
    return power_transform(g, 1.0 / r.r)


def make_coordinated_r_convex_2d(g: PositiveFunction, r, grid: GridSpec = DEFAULT_GRID,
                                 validate: bool = True) -> PositiveFunction:
    """Rectangle analogue of make_r_convex_1d; the base must have convex
    partial maps along both axes."""
    _require_rectangle(g)
    r = as_rparam(r)
    if validate:
        verdict = check_coordinated_r_convex(g, RParam(1.0), grid)
        if not verdict.passed:
            raise ValueError(
                f"base {g.describe()} failed the coordinate-wise convexity check: {verdict.witness}")
    if r.is_geometric:
        return exp_transform(g)
    return power_transform(g, 1.0 / r.r)


# ---------------------------------------------------------------------------
# seeded corpora


def _affine(name: str, coeff: float, shift: float) -> Expr:
    return Sum(Prod(Const(coeff), Var(name)), Const(shift))


def _shifted_square(name: str, a: float, m: float) -> Expr:
    # a * (var - m)^2
    return Prod(Const(a), Pow(Sum(Var(name), Const(-m)), 2.0))


def random_convex_base_1d(rng: np.random.Generator, iv: Interval) -> PositiveFunction:
    """Seeded convex positive base: constant, positive quadratic a(x-m)^2+c,
    or exp of an affine map."""
    kind = int(rng.integers(0, 3))
    if kind == 0:
        body: Expr = Const(float(rng.uniform(0.5, 3.0)))
    elif kind == 1:
        a = float(rng.uniform(0.2, 2.0))
        m = float(rng.uniform(iv.lo, iv.hi))
        c = float(rng.uniform(0.3, 2.0))
        body = Sum(_shifted_square("x", a, m), Const(c))
    else:
        alpha = float(rng.uniform(-1.2, 1.2))
        gamma = float(rng.uniform(-0.5, 0.5))
        body = ExpNode(_affine("x", alpha, gamma))
    return PositiveFunction(body, iv)


def random_coordinated_base_2d(rng: np.random.Generator, rect: Rectangle,
                               bilinear: bool = True) -> PositiveFunction:
    """Seeded base with convex positive partial maps: constant, separable
    quadratic, exp of affine, and (optionally) a positive bilinear term whose
    partial maps are affine but which is not jointly convex."""
    kind = int(rng.integers(0, 4 if bilinear else 3))
    if kind == 0:
        body: Expr = Const(float(rng.uniform(0.5, 3.0)))
    elif kind == 1:
        a = float(rng.uniform(0.2, 1.5))
        b = float(rng.uniform(0.2, 1.5))
        mx = float(rng.uniform(rect.x.lo, rect.x.hi))
        my = float(rng.uniform(rect.y.lo, rect.y.hi))
        c = float(rng.uniform(0.3, 2.0))
        body = Sum(Sum(_shifted_square("x", a, mx), _shifted_square("y", b, my)), Const(c))
    elif kind == 2:
        alpha = float(rng.uniform(-1.0, 1.0))
        beta = float(rng.uniform(-1.0, 1.0))
        gamma = float(rng.uniform(-0.5, 0.5))
        body = ExpNode(Sum(Sum(Prod(Const(alpha), Var("x")), Prod(Const(beta), Var("y"))),
                           Const(gamma)))
    else:
        s = float(rng.uniform(0.3, 1.5))
        corners = [xi * yj for xi in (rect.x.lo, rect.x.hi) for yj in (rect.y.lo, rect.y.hi)]
        c = float(rng.uniform(0.3, 1.5)) + max(0.0, -s * min(corners))
        body = Sum(Prod(Const(s), Prod(Var("x"), Var("y"))), Const(c))
    return PositiveFunction(body, rect)


def random_joint_base_2d(rng: np.random.Generator, rect: Rectangle) -> PositiveFunction:
    """Like random_coordinated_base_2d but restricted to jointly convex bases
    (no bilinear term, whose Hessian is indefinite)."""
    return random_coordinated_base_2d(rng, rect, bilinear=False)


def generate_r_convex_1d(rng: np.random.Generator, iv: Interval, count: int, r) -> list[PositiveFunction]:
    """count exact r-convex members on iv; the constant 1 is always included
    first (the extremal probe for the printed constants)."""
    r = as_rparam(r)
    members = [make_r_convex_1d(PositiveFunction(Const(1.0), iv), r, validate=False)]
    while len(members) < count:
        base = random_convex_base_1d(rng, iv)
        members.append(make_r_convex_1d(base, r, validate=False))
    return members[:count]


def generate_coordinated_r_convex_2d(rng: np.random.Generator, rect: Rectangle, count: int, r,
                                     bilinear: bool = True) -> list[PositiveFunction]:
    r = as_rparam(r)
    members = [make_coordinated_r_convex_2d(PositiveFunction(Const(1.0), rect), r, validate=False)]
    while len(members) < count:
        base = random_coordinated_base_2d(rng, rect, bilinear=bilinear)
        members.append(make_coordinated_r_convex_2d(base, r, validate=False))
    return members[:count]


def generate_jointly_r_convex_2d(rng: np.random.Generator, rect: Rectangle, count: int, r) -> list[PositiveFunction]:
    return generate_coordinated_r_convex_2d(rng, rect, count, r, bilinear=False)


# ---------------------------------------------------------------------------
# joint => coordinate-wise harness


@dataclass(frozen=True)
class HarnessReport:
    requested: int
    admitted: int
    skipped: tuple
    violations: tuple

    @property
    def clean(self) -> bool:
        return not self.violations


HARNESS_GRID = GridSpec(points_per_axis=9)


def joint_implies_coordinated(count: int, r_values: Sequence[Union[float, RParam]],
                              rect: Rectangle | None = None,
                              grid: GridSpec = HARNESS_GRID,
                              seed: int = 0) -> HarnessReport:
    """Generate jointly r-convex members, admit those passing the joint
    check, and assert each also passes the coordinate-wise check.

    Any violation would indicate a checker bug: the implication is a theorem,
    not an empirical claim.  The converse is deliberately not asserted
    (coordinate-convex corpora built from bilinear terms are excluded here).
    The default grid is coarser than the checkers' default because the joint
    admission scan grows as points**4.
    """
    rect = rect or Rectangle(Interval(0.0, 1.0), Interval(0.0, 1.0))
    rng = np.random.default_rng(seed)
    rs = [as_rparam(r) for r in r_values]
    per = count // len(rs)
    extra = count % len(rs)
    admitted = 0
    skipped = []
    violations = []
    for idx, r in enumerate(rs):
        quota = per + (1 if idx < extra else 0)
        for f in generate_jointly_r_convex_2d(rng, rect, quota, r):
            joint = check_jointly_r_convex(f, r, grid)
            if not joint.passed:
                skipped.append((f.describe(), r.r, joint.witness))
                continue
            admitted += 1
            coord = check_coordinated_r_convex(f, r, grid)
            if not coord.passed:
                violations.append((f.describe(), r.r, coord.witness))
    return HarnessReport(count, admitted, tuple(skipped), tuple(violations))
