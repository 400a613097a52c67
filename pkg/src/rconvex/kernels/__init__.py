"""Kernel backend selection.

The hot inner loops exist twice: a Cython extension (``_native``) and a
NumPy fallback.  They implement one contract, agree to libm rounding, and
scan in the same order, so they return identical first witnesses.

The default ``auto`` selection is per kernel, following the benchmark in
benchmarks/bench_backends.py: bulk expression evaluation stays on NumPy
(vectorized transcendentals beat a per-point interpreter), while the
convexity scans use the compiled loops (early exit and no large
temporaries).  Set ``RCONVEX_BACKEND`` to ``native`` or ``fallback`` to
force one implementation everywhere; ``auto`` without the extension built
degrades to the fallback for everything.
"""
from __future__ import annotations

import math
import os
from contextlib import contextmanager

from . import fallback
from .fallback import MODE_GEOMETRIC, MODE_LOGSTABLE, MODE_POWER

try:
    from . import _native
except ImportError:
    _native = None

_MODES = ("auto", "native", "fallback")


def _resolve(name: str) -> dict:
    if name == "fallback":
        return {"eval": fallback, "scan": fallback, "name": "fallback"}
    if name == "native":
        if _native is None:
            raise RuntimeError("compiled extension not available")
        return {"eval": _native, "scan": _native, "name": "native"}
    if name == "auto":
        return {"eval": fallback, "scan": _native or fallback, "name": "auto"}
    raise ValueError(f"unknown backend {name!r}; expected one of {_MODES}")


_requested = os.environ.get("RCONVEX_BACKEND") or "auto"
if _requested not in _MODES:
    raise RuntimeError(f"RCONVEX_BACKEND must be one of {_MODES}, got {_requested!r}")
_active = _resolve(_requested)


def backend_name() -> str:
    return _active["name"]


def active_kernels() -> dict:
    """Which implementation serves each kernel group right now."""
    return {"eval": _active["eval"].NAME, "scan": _active["scan"].NAME}


def available_backends() -> tuple[str, ...]:
    return ("native", "fallback") if _native is not None else ("fallback",)


def get_backend(name: str):
    if name == "fallback":
        return fallback
    if name == "native":
        if _native is None:
            raise RuntimeError("compiled extension not available")
        return _native
    raise ValueError(f"unknown backend {name!r}")


@contextmanager
def use_backend(name: str):
    """Temporarily force a backend selection (tests and benchmarks)."""
    global _active
    previous = _active
    _active = _resolve(name)
    try:
        yield
    finally:
        _active = previous


def select_mode(vmin: float, vmax: float, r: float) -> int:
    """Pick the scan formula: geometric branch at r=0, direct powers while
    v**r stays comfortably inside double range, else the log-stable form."""
    if r == 0.0:
        return MODE_GEOMETRIC
    bound = max(abs(math.log(vmin)), abs(math.log(vmax)))
    return MODE_POWER if r * bound < 600.0 else MODE_LOGSTABLE


def eval_elementwise(program, xs, ys=None):
    return _active["eval"].eval_elementwise(program.ops, program.args, program.consts, xs, ys)


def eval_outer(program, xs, ys):
    return _active["eval"].eval_outer(program.ops, program.args, program.consts, xs, ys)


def scan_1d(gv, bv, ts, r, tol, mode):
    return _active["scan"].scan_1d(gv, bv, ts, r, tol, mode)


def scan_2d(gv, bv, ts, ls, r, tol, mode):
    return _active["scan"].scan_2d(gv, bv, ts, ls, r, tol, mode)
