"""Evaluators for both sides of every integral bound, plus the five-term
chain for coordinate-wise convex functions on a rectangle.

Each evaluator supports two right-hand-side variants.  ``printed`` uses the
constants (r/(r+1))**(1/r) and (r/(r+2))**(2/r) exactly as stated for the
endpoint bounds; constant functions violate those forms away from r=1
(resp. r=2), so a ``derived_constant`` variant replacing them by r/(r+1)
and r/(r+2) (the chord-integral constants, which agree at the boundary
exponents) is evaluated alongside and labeled as such.  Hypothesis ranges
produce warnings, not errors, so sweeps can probe outside them; structural
impossibilities (r = 0, non-conjugate exponent pairs) raise.

A report counts as violated only when the gap exceeds the quadrature error
estimate plus a scale-aware epsilon, separating genuine counterexamples
from numerical noise.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .funcmodel import Axis, DomainError, Interval, PositiveFunction, Rectangle, partial_map
from .means import RParam, as_rparam, pow_mean_pair, pow_sum_pair
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, average_1d, average_2d

T1_1 = "T1_1"
T1_2 = "T1_2"
T1_3 = "T1_3"
T2_1 = "T2_1"
T2_4 = "T2_4"
T2_7 = "T2_7"
CHAIN_1_4 = "CHAIN_1_4"

THEOREMS_1D = (T1_1, T1_2, T1_3)
THEOREMS_2D = (T2_1, T2_4, T2_7)
PAIR_THEOREMS = (T1_2, T1_3, T2_4, T2_7)
HOLDER_THEOREMS = (T1_3, T2_7)
ALL_THEOREMS = THEOREMS_1D + THEOREMS_2D + (CHAIN_1_4,)

PRINTED = "printed"
DERIVED = "derived_constant"

SLACK_EPS = 1e-9
CONJUGACY_TOL = 1e-12


class HypothesisRangeWarning(UserWarning):
    """An exponent lies outside the range the bound is stated for."""


@dataclass(frozen=True)
class BoundReport:
    theorem_id: str
    variant: str
    lhs: float | None
    rhs: float | None
    slack: float
    quad_error: float
    satisfied: bool
    chain: tuple | None = None


def _is_satisfied(slack: float, quad_error: float, scale: float) -> bool:
    return slack >= -(quad_error + SLACK_EPS * (1.0 + abs(scale)))


def _report(theorem: str, variant: str, lhs: float, rhs: float, quad_error: float) -> BoundReport:
    slack = rhs - lhs
    return BoundReport(theorem, variant, lhs, rhs, slack, quad_error,
                       _is_satisfied(slack, quad_error, lhs))


def _check_variant(variant: str):
    if variant not in (PRINTED, DERIVED):
        raise ValueError(f"variant must be '{PRINTED}' or '{DERIVED}', got {variant!r}")


def _positive_order(r, name: str) -> RParam:
    r = as_rparam(r)
    if r.is_geometric:
        raise ValueError(f"{name} = 0 selects the logarithmic branch, which no bound covers")
    return r


def _warn_range(r: float, hi: float, name: str, theorem: str):
    if r > hi:
        warnings.warn(f"{theorem} is stated for 0 < {name} <= {hi}; evaluating at {name}={r}",
                      HypothesisRangeWarning, stacklevel=3)


def _check_conjugate(r1: RParam, r2: RParam, theorem: str):
    if r1.r <= 1.0:
        raise ValueError(f"{theorem} needs the first exponent > 1, got {r1.r}")
    if abs(1.0 / r1.r + 1.0 / r2.r - 1.0) > CONJUGACY_TOL:
        raise ValueError(f"{theorem} needs conjugate exponents, got ({r1.r}, {r2.r})")


def _resolve_interval(f: PositiveFunction, iv: Interval | None) -> Interval:
    if f.arity != 1:
        raise DomainError("this bound needs one-variable functions")
    dom = f.domain
    if iv is None:
        return dom
    if not (dom.lo <= iv.lo and iv.hi <= dom.hi):
        raise DomainError(f"interval [{iv.lo}, {iv.hi}] not contained in the function domain")
    return iv


def _resolve_rectangle(f: PositiveFunction, rect: Rectangle | None) -> Rectangle:
    if f.arity != 2:
        raise DomainError("this bound needs two-variable functions")
    dom = f.domain
    if rect is None:
        return dom
    ok = (dom.x.lo <= rect.x.lo and rect.x.hi <= dom.x.hi
          and dom.y.lo <= rect.y.lo and rect.y.hi <= dom.y.hi)
    if not ok:
        raise DomainError("rectangle not contained in the function domain")
    return rect


def _c1(r: float, variant: str) -> float:
    base = r / (r + 1.0)
    return base ** (1.0 / r) if variant == PRINTED else base


def _c2(r: float, variant: str) -> float:
    base = r / (r + 2.0)
    return base ** (2.0 / r) if variant == PRINTED else base


# adapters so composed integrands (products, endpoint power sums) flow
# through the same quadrature as plain functions


@dataclass(frozen=True)
class _EdgeFunc:
    fn: Callable[[np.ndarray], np.ndarray]
    domain: Interval

    def values(self, xs: np.ndarray) -> np.ndarray:
        return self.fn(xs)


@dataclass(frozen=True)
class _Product1D:
    f: PositiveFunction
    g: PositiveFunction
    domain: Interval

    def values(self, xs: np.ndarray) -> np.ndarray:
        return self.f.values(xs) * self.g.values(xs)


@dataclass(frozen=True)
class _Product2D:
    f: PositiveFunction
    g: PositiveFunction
    domain: Rectangle

    def values_outer(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        return self.f.values_outer(xs, ys) * self.g.values_outer(xs, ys)


def _edge_pair_x(f: PositiveFunction, rect: Rectangle) -> tuple[PositiveFunction, PositiveFunction]:
    """The two horizontal boundary traces x -> f(x, c) and x -> f(x, d)."""
    return (partial_map(f, Axis.X, rect.y.lo), partial_map(f, Axis.X, rect.y.hi))


def _edge_pair_y(f: PositiveFunction, rect: Rectangle) -> tuple[PositiveFunction, PositiveFunction]:
    """The two vertical boundary traces y -> f(a, y) and y -> f(b, y)."""
    return (partial_map(f, Axis.Y, rect.x.lo), partial_map(f, Axis.Y, rect.x.hi))


def _edge_average(lo: PositiveFunction, hi: PositiveFunction, iv: Interval,
                  combine: Callable[[np.ndarray, np.ndarray], np.ndarray],
                  cfg: QuadratureConfig) -> tuple[float, float]:
    edge = _EdgeFunc(lambda xs: combine(lo.values(xs), hi.values(xs)), iv)
    return average_1d(edge, iv, cfg)


# ---------------------------------------------------------------------------
# one-variable bounds


def hadamard_r_1d(f: PositiveFunction, iv: Interval | None = None, r=1.0,
                  cfg: QuadratureConfig = DEFAULT_CONFIG, variant: str = PRINTED) -> BoundReport:
    """Average of f against the endpoint power sum scaled by the order
    constant; stated for 0 < r <= 1."""
    _check_variant(variant)
    r = _positive_order(r, "r")
    iv = _resolve_interval(f, iv)
    _warn_range(r.r, 1.0, "r", T1_1)
    lhs, err_lhs = average_1d(f, iv, cfg)
    rhs = _c1(r.r, variant) * float(pow_sum_pair(f.eval(iv.lo), f.eval(iv.hi), r.r, 1.0))
    return _report(T1_1, variant, lhs, rhs, err_lhs)


def product_rs_1d(f: PositiveFunction, g: PositiveFunction, iv: Interval | None = None,
                  r=2.0, s=2.0, cfg: QuadratureConfig = DEFAULT_CONFIG,
                  variant: str = PRINTED) -> BoundReport:
    """Average of f*g against half-sums of squared endpoint power sums;
    stated for 0 < r, s <= 2."""
    _check_variant(variant)
    r = _positive_order(r, "r")
    s = _positive_order(s, "s")
    iv = _resolve_interval(f, iv)
    _resolve_interval(g, iv)
    _warn_range(r.r, 2.0, "r", T1_2)
    _warn_range(s.r, 2.0, "s", T1_2)
    lhs, err_lhs = average_1d(_Product1D(f, g, iv), iv, cfg)
    rhs = (0.5 * _c2(r.r, variant) * float(pow_sum_pair(f.eval(iv.lo), f.eval(iv.hi), r.r, 2.0))
           + 0.5 * _c2(s.r, variant) * float(pow_sum_pair(g.eval(iv.lo), g.eval(iv.hi), s.r, 2.0)))
    return _report(T1_2, variant, lhs, rhs, err_lhs)


def holder_rs_1d(f: PositiveFunction, g: PositiveFunction, iv: Interval | None = None,
                 r=2.0, s=2.0, cfg: QuadratureConfig = DEFAULT_CONFIG) -> BoundReport:
    """Average of f*g against the product of endpoint power means at
    conjugate exponents (r > 1, 1/r + 1/s = 1); holds as stated, so there is
    no derived-constant variant."""
    r = _positive_order(r, "r")
    s = _positive_order(s, "s")
    _check_conjugate(r, s, T1_3)
    iv = _resolve_interval(f, iv)
    _resolve_interval(g, iv)
    lhs, err_lhs = average_1d(_Product1D(f, g, iv), iv, cfg)
    rhs = (float(pow_mean_pair(f.eval(iv.lo), f.eval(iv.hi), r.r))
           * float(pow_mean_pair(g.eval(iv.lo), g.eval(iv.hi), s.r)))
    return _report(T1_3, PRINTED, lhs, rhs, err_lhs)


# ---------------------------------------------------------------------------
# rectangle bounds


def coord_r(f: PositiveFunction, rect: Rectangle | None = None, r=1.0,
            cfg: QuadratureConfig = DEFAULT_CONFIG, variant: str = PRINTED) -> BoundReport:
    """Rectangle analogue of hadamard_r_1d: the double-integral average
    against averaged boundary power sums along both axis directions."""
    _check_variant(variant)
    r = _positive_order(r, "r")
    rect = _resolve_rectangle(f, rect)
    _warn_range(r.r, 1.0, "r", T2_1)
    lhs, err_lhs = average_2d(f, rect, cfg)
    fc, fd = _edge_pair_x(f, rect)
    fa, fb = _edge_pair_y(f, rect)
    combine = lambda lo, hi: pow_sum_pair(lo, hi, r.r, 1.0)
    ax, ex = _edge_average(fc, fd, rect.x, combine, cfg)
    ay, ey = _edge_average(fa, fb, rect.y, combine, cfg)
    c = _c1(r.r, variant)
    rhs = 0.5 * c * (ax + ay)
    return _report(T2_1, variant, lhs, rhs, err_lhs + 0.5 * c * (ex + ey))


def coord_product(f: PositiveFunction, g: PositiveFunction, rect: Rectangle | None = None,
                  r1=2.0, r2=2.0, cfg: QuadratureConfig = DEFAULT_CONFIG,
                  variant: str = PRINTED) -> BoundReport:
    """Rectangle analogue of product_rs_1d: four quarter-terms built from the
    squared boundary power sums of f and g along both axis directions."""
    _check_variant(variant)
    r1 = _positive_order(r1, "r1")
    r2 = _positive_order(r2, "r2")
    rect = _resolve_rectangle(f, rect)
    _resolve_rectangle(g, rect)
    _warn_range(r1.r, 2.0, "r1", T2_4)
    _warn_range(r2.r, 2.0, "r2", T2_4)
    lhs, err_lhs = average_2d(_Product2D(f, g, rect), rect, cfg)
    terms = []
    for func, order in ((f, r1.r), (g, r2.r)):
        combine = lambda lo, hi, _r=order: pow_sum_pair(lo, hi, _r, 2.0)
        lo, hi = _edge_pair_x(func, rect)
        terms.append((order, *_edge_average(lo, hi, rect.x, combine, cfg)))
    for func, order in ((f, r1.r), (g, r2.r)):
        combine = lambda lo, hi, _r=order: pow_sum_pair(lo, hi, _r, 2.0)
        lo, hi = _edge_pair_y(func, rect)
        terms.append((order, *_edge_average(lo, hi, rect.y, combine, cfg)))
    rhs = 0.0
    err_rhs = 0.0
    for order, avg, err in terms:
        c = 0.25 * _c2(order, variant)
        rhs += c * avg
        err_rhs += c * err
    return _report(T2_4, variant, lhs, rhs, err_lhs + err_rhs)


def coord_holder(f: PositiveFunction, g: PositiveFunction, rect: Rectangle | None = None,
                 r1=2.0, r2=2.0, cfg: QuadratureConfig = DEFAULT_CONFIG) -> BoundReport:
    """Rectangle analogue of holder_rs_1d: half the product of the averaged
    boundary power means along x plus the same along y."""
    r1 = _positive_order(r1, "r1")
    r2 = _positive_order(r2, "r2")
    _check_conjugate(r1, r2, T2_7)
    rect = _resolve_rectangle(f, rect)
    _resolve_rectangle(g, rect)
    lhs, err_lhs = average_2d(_Product2D(f, g, rect), rect, cfg)

    def mean_avg(func: PositiveFunction, order: float, along_x: bool) -> tuple[float, float]:
        pair = _edge_pair_x(func, rect) if along_x else _edge_pair_y(func, rect)
        iv = rect.x if along_x else rect.y
        return _edge_average(pair[0], pair[1], iv,
                             lambda lo, hi, _r=order: pow_mean_pair(lo, hi, _r), cfg)

    fx, efx = mean_avg(f, r1.r, True)
    gx, egx = mean_avg(g, r2.r, True)
    fy, efy = mean_avg(f, r1.r, False)
    gy, egy = mean_avg(g, r2.r, False)
    rhs = 0.5 * (fx * gx + fy * gy)
    err_rhs = 0.5 * (abs(fx) * egx + abs(gx) * efx + abs(fy) * egy + abs(gy) * efy)
    return _report(T2_7, PRINTED, lhs, rhs, err_lhs + err_rhs)


def dragomir_chain(f: PositiveFunction, rect: Rectangle | None = None,
                   cfg: QuadratureConfig = DEFAULT_CONFIG) -> BoundReport:
    """The five nested expressions for a coordinate-wise convex function:
    center value, half-sum of mid-line averages, double-integral average,
    quarter-sum of boundary averages, four-corner average.  Satisfied means
    the chain is non-decreasing within quadrature tolerance; the reported
    slack is the smallest consecutive difference."""
    rect = _resolve_rectangle(f, rect)
    mx, my = rect.x.midpoint, rect.y.midpoint
    e1 = f.eval((mx, my))

    a2x, err2x = average_1d(partial_map(f, Axis.X, my), rect.x, cfg)
    a2y, err2y = average_1d(partial_map(f, Axis.Y, mx), rect.y, cfg)
    e2 = 0.5 * (a2x + a2y)

    e3, err3 = average_2d(f, rect, cfg)

    fc, fd = _edge_pair_x(f, rect)
    fa, fb = _edge_pair_y(f, rect)
    avgs = [average_1d(fc, rect.x, cfg), average_1d(fd, rect.x, cfg),
            average_1d(fa, rect.y, cfg), average_1d(fb, rect.y, cfg)]
    e4 = 0.25 * sum(a for a, _ in avgs)
    err4 = 0.25 * sum(e for _, e in avgs)

    corners = [f.eval((px, py)) for px in (rect.x.lo, rect.x.hi) for py in (rect.y.lo, rect.y.hi)]
    e5 = 0.25 * sum(corners)

    chain = (e1, e2, e3, e4, e5)
    quad_error = 0.5 * (err2x + err2y) + err3 + err4
    slack = min(b - a for a, b in zip(chain, chain[1:]))
    scale = max(abs(v) for v in chain)
    return BoundReport(CHAIN_1_4, PRINTED, None, None, slack, quad_error,
                       _is_satisfied(slack, quad_error, scale), chain=chain)
