"""Weighted power means and the blend combinations defining r-convexity.

The order parameter r >= 0 selects the mean: positive r gives
(sum w_i * v_i**r)**(1/r), r = 0 the weighted geometric mean.  Evaluation
factors out the largest value and works on logs, so extreme values and tiny
positive r neither overflow nor underflow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

# Below this the power formula has no significant digits left; the geometric
# branch takes over (continuity at r -> 0 justifies the switch).
GEOMETRIC_THRESHOLD = 1e-12
WEIGHT_SUM_TOL = 1e-12


@dataclass(frozen=True)
class RParam:
    """Convexity order r >= 0; r = 0 denotes the geometric/logarithmic branch."""

    r: float

    def __post_init__(self):
        r = float(self.r)
        if not math.isfinite(r):
            raise ValueError("r must be finite")
        if r < 0:
            raise ValueError(f"negative order r={r} is not supported")
        object.__setattr__(self, "r", r)

    @property
    def is_geometric(self) -> bool:
        return self.r < GEOMETRIC_THRESHOLD

    @property
    def effective(self) -> float:
        """The value the kernels branch on: exactly 0.0 on the geometric side."""
        return 0.0 if self.is_geometric else self.r


def as_rparam(r: Union[RParam, float, int]) -> RParam:
    return r if isinstance(r, RParam) else RParam(float(r))


@dataclass(frozen=True)
class WeightVector:
    weights: tuple
    values: tuple

    def __post_init__(self):
        w = tuple(float(v) for v in self.weights)
        v = tuple(float(x) for x in self.values)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "values", v)
        if len(w) != len(v) or not w:
            raise ValueError("weights and values must have equal, nonzero length")
        for wi in w:
            if not 0.0 <= wi <= 1.0:
                raise ValueError(f"weight {wi} outside [0, 1]")
        total = math.fsum(w)
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            # renormalizing here would mask caller bugs; refuse instead
            raise ValueError(f"weights sum to {total}, not 1")
        for vi in v:
            if not (math.isfinite(vi) and vi > 0.0):
                raise ValueError(f"value {vi} is not a positive finite real")


def weighted_power_mean(r: Union[RParam, float], wv: WeightVector) -> float:
    """M_r of the weight vector; lies in [min values, max values]."""
    r = as_rparam(r)
    if r.is_geometric:
        return math.exp(math.fsum(w * math.log(v) for w, v in zip(wv.weights, wv.values)))
    support = [(w, v) for w, v in zip(wv.weights, wv.values) if w > 0.0]
    m = max(v for _, v in support)
    lm = math.log(m)
    s = math.fsum(w * math.exp(r.r * (math.log(v) - lm)) for w, v in support)
    return m * math.exp(math.log(s) / r.r)


def r_combination_1d(r: Union[RParam, float], t: float, fa: float, fb: float) -> float:
    """Right-hand side of the one-variable defining inequality at blend t."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"blend weight t={t} outside [0, 1]")
    return weighted_power_mean(r, WeightVector((t, 1.0 - t), (fa, fb)))


def r_combination_2d(r: Union[RParam, float], t: float, lam: float,
                     v_xu: float, v_xv: float, v_yu: float, v_yv: float) -> float:
    """Four-corner combination with weights (t*lam, t*(1-lam), (1-t)*lam,
    (1-t)*(1-lam)); the rectangle analogue of r_combination_1d."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"blend weight t={t} outside [0, 1]")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"blend weight lam={lam} outside [0, 1]")
    weights = (t * lam, t * (1.0 - lam), (1.0 - t) * lam, (1.0 - t) * (1.0 - lam))
    return weighted_power_mean(r, WeightVector(weights, (v_xu, v_xv, v_yu, v_yv)))


# ---------------------------------------------------------------------------
# vectorized helpers for the boundary integrands of the bounds module


def pow_sum_pair(a: np.ndarray, b: np.ndarray, r: float, p: float) -> np.ndarray:
    """(a**r + b**r)**(p/r) elementwise, factored by max(a, b) for stability."""
    if r <= 0:
        raise ValueError("pow_sum_pair needs r > 0")
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    m = np.maximum(a, b)
    s = np.power(a / m, r) + np.power(b / m, r)
    return np.power(m, p) * np.power(s, p / r)


def pow_mean_pair(a: np.ndarray, b: np.ndarray, r: float) -> np.ndarray:
    """((a**r + b**r) / 2)**(1/r) elementwise: the equal-weight power mean."""
    if r <= 0:
        raise ValueError("pow_mean_pair needs r > 0")
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    m = np.maximum(a, b)
    s = 0.5 * (np.power(a / m, r) + np.power(b / m, r))
    return m * np.power(s, 1.0 / r)
