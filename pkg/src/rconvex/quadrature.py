"""Composite Gauss-Legendre quadrature over intervals and rectangles.

Nodes and weights are computed once per order by Newton iteration on the
Legendre recurrence (to 1e-15) and cached, avoiding transcription errors
from hard-coded tables.  Error estimates compare against a coarsened rule:
half the panels, or half the nodes when there is only one panel.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .funcmodel import Interval, Rectangle

MIN_NODES = 2
MAX_NODES = 64


@dataclass(frozen=True)
class QuadratureConfig:
    nodes_per_panel: int = 8
    panels_per_axis: int = 4

    def __post_init__(self):
        if not MIN_NODES <= self.nodes_per_panel <= MAX_NODES:
            raise ValueError(f"nodes_per_panel must lie in [{MIN_NODES}, {MAX_NODES}]")
        if self.panels_per_axis < 1:
            raise ValueError("panels_per_axis must be >= 1")

    def coarsened(self) -> "QuadratureConfig":
        if self.panels_per_axis >= 2:
            return QuadratureConfig(self.nodes_per_panel, self.panels_per_axis // 2)
        return QuadratureConfig(max(MIN_NODES, self.nodes_per_panel // 2), 1)


DEFAULT_CONFIG = QuadratureConfig()


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error_estimate: float


@lru_cache(maxsize=None)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the n-point rule on [-1, 1], ascending."""
    if not MIN_NODES <= n <= MAX_NODES:
        raise ValueError(f"order must lie in [{MIN_NODES}, {MAX_NODES}]")
    x = np.cos(np.pi * (np.arange(n) + 0.75) / (n + 0.5))
    dp = np.empty_like(x)
    for _ in range(100):
        p0 = np.ones_like(x)
        p1 = x.copy()
        for k in range(2, n + 1):
            p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
        dp = n * (x * p1 - p0) / (x * x - 1.0)
        step = p1 / dp
        x -= step
        if np.max(np.abs(step)) < 1e-15:
            break
    else:
        raise RuntimeError(f"Legendre root iteration did not converge for order {n}")
    # one clean derivative evaluation at the converged nodes for the weights
    p0 = np.ones_like(x)
    p1 = x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    order = np.argsort(x)
    x = np.ascontiguousarray(x[order])
    w = np.ascontiguousarray(w[order])
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_points(iv: Interval, cfg: QuadratureConfig) -> tuple[np.ndarray, np.ndarray]:
    """All evaluation points and weights for the composite rule on iv."""
    nodes, weights = gauss_legendre(cfg.nodes_per_panel)
    edges = np.linspace(iv.lo, iv.hi, cfg.panels_per_axis + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    halves = 0.5 * (edges[1:] - edges[:-1])
    pts = (mids[:, None] + halves[:, None] * nodes[None, :]).ravel()
    wts = (halves[:, None] * weights[None, :]).ravel()
    return pts, wts


def _value_1d(f, iv: Interval, cfg: QuadratureConfig) -> float:
    pts, wts = panel_points(iv, cfg)
    return float(wts @ f.values(pts))


def integrate_1d(f, iv: Interval | None = None, cfg: QuadratureConfig = DEFAULT_CONFIG) -> IntegralResult:
    """Integral of a one-variable function over iv (default: its domain)."""
    iv = iv or f.domain
    value = _value_1d(f, iv, cfg)
    coarse = _value_1d(f, iv, cfg.coarsened())
    return IntegralResult(value, abs(value - coarse))


def _value_2d(f, rect: Rectangle, cfg: QuadratureConfig) -> float:
    px, wx = panel_points(rect.x, cfg)
    py, wy = panel_points(rect.y, cfg)
    grid = f.values_outer(px, py)
    return float(wx @ grid @ wy)


def integrate_2d(f, rect: Rectangle | None = None, cfg: QuadratureConfig = DEFAULT_CONFIG) -> IntegralResult:
    """Tensor-product integral of a two-variable function over rect."""
    rect = rect or f.domain
    value = _value_2d(f, rect, cfg)
    coarse = _value_2d(f, rect, cfg.coarsened())
    return IntegralResult(value, abs(value - coarse))


def average_1d(f, iv: Interval | None = None, cfg: QuadratureConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """(integral / width, scaled error): the normalized form the bounds use."""
    iv = iv or f.domain
    res = integrate_1d(f, iv, cfg)
    return res.value / iv.width, res.error_estimate / iv.width


def average_2d(f, rect: Rectangle | None = None, cfg: QuadratureConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    rect = rect or f.domain
    res = integrate_2d(f, rect, cfg)
    area = rect.x.width * rect.y.width
    return res.value / area, res.error_estimate / area
