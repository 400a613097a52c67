"""Pure-NumPy implementations of the hot kernels.

This is the reference backend: the compiled extension must agree with it up
to floating-point rounding.  All functions receive plain ndarrays plus the
raw program fields, so the module stays importable without the extension.
"""
from __future__ import annotations

import numpy as np

from ..program import OP_ADD, OP_CONST, OP_EXP, OP_MUL, OP_POW, OP_X, OP_Y

# How the scan kernels combine endpoint values into the bound side:
MODE_GEOMETRIC = 0  # r = 0: exp of the weighted sum of logs
MODE_POWER = 1      # r > 0, values in safe range: direct powers
MODE_LOGSTABLE = 2  # r > 0, extreme values: max-factored log-domain form

NAME = "fallback"


def _run_vm(ops, args, consts, x, y):
    stack = []
    with np.errstate(all="ignore"):
        for k in range(len(ops)):
            op = ops[k]
            if op == OP_CONST:
                stack.append(consts[args[k]])
            elif op == OP_X:
                stack.append(x)
            elif op == OP_Y:
                stack.append(y)
            elif op == OP_ADD:
                b = stack.pop()
                stack[-1] = stack[-1] + b
            elif op == OP_MUL:
                b = stack.pop()
                stack[-1] = stack[-1] * b
            elif op == OP_POW:
                stack[-1] = np.power(stack[-1], consts[args[k]])
            elif op == OP_EXP:
                stack[-1] = np.exp(stack[-1])
            else:
                stack[-1] = np.log(stack[-1])
    return stack[0]


def eval_elementwise(ops, args, consts, xs, ys=None):
    out = _run_vm(ops, args, consts, xs, ys if ys is not None else xs)
    out = np.asarray(out, dtype=np.float64)
    if out.shape != xs.shape:
        out = np.broadcast_to(out, xs.shape).copy()
    return out


def eval_outer(ops, args, consts, xs, ys):
    out = _run_vm(ops, args, consts, xs[:, None], ys[None, :])
    out = np.asarray(out, dtype=np.float64)
    shape = (xs.shape[0], ys.shape[0])
    if out.shape != shape:
        out = np.broadcast_to(out, shape).copy()
    return out


def _first_violation(blend, rhs, tol):
    mask = blend > rhs + tol
    if not mask.any():
        return None
    return int(np.argmax(mask.ravel()))


def scan_1d(gv, bv, ts, r, tol, mode):
    """First grid triple where f(t*x_i + (1-t)*x_j) exceeds the r-combination
    of f(x_i), f(x_j) by more than tol; scan order is (i, j, t)."""
    t = ts[None, None, :]
    if mode == MODE_GEOMETRIC:
        lg = np.log(gv)
        rhs = np.exp(t * lg[:, None, None] + (1.0 - t) * lg[None, :, None])
    elif mode == MODE_POWER:
        p = np.power(gv, r)
        s = t * p[:, None, None] + (1.0 - t) * p[None, :, None]
        rhs = np.power(s, 1.0 / r)
    else:
        lg = np.log(gv)
        li = lg[:, None, None]
        lj = lg[None, :, None]
        m = np.maximum(li, lj)
        s = t * np.exp(r * (li - m)) + (1.0 - t) * np.exp(r * (lj - m))
        rhs = np.exp(m + np.log(s) / r)
    flat = _first_violation(bv, rhs, tol)
    if flat is None:
        return None
    i, j, k = np.unravel_index(flat, bv.shape)
    return int(i), int(j), int(k), float(bv[i, j, k]), float(rhs[i, j, k])


def scan_2d(gv, bv, ts, ls, r, tol, mode):
    """Rectangle analogue of scan_1d: four endpoint values per combination.

    bv has shape (P, Q) with P enumerating (i, j, t) and Q enumerating
    (k, l, lam), both in C order, which fixes the witness ordering.
    """
    n, m = gv.shape
    nt = ts.shape[0]
    nl = ls.shape[0]

    i_idx = np.repeat(np.arange(n), n * nt)
    j_idx = np.tile(np.repeat(np.arange(n), nt), n)
    tw = np.tile(ts, n * n)
    k_idx = np.repeat(np.arange(m), m * nl)
    l_idx = np.tile(np.repeat(np.arange(m), nl), m)
    lw = np.tile(ls, m * m)

    if mode == MODE_LOGSTABLE:
        lg = np.log(gv)
        a = lg[:, k_idx]  # (n, Q): log f at (x_i, u_k)
        b = lg[:, l_idx]
        mm = np.maximum(a, b)
        big = np.maximum(mm[i_idx], mm[j_idx])  # (P, Q)
        s = tw[:, None] * (lw[None, :] * np.exp(r * (a[i_idx] - big))
                           + (1.0 - lw)[None, :] * np.exp(r * (b[i_idx] - big)))
        s += (1.0 - tw)[:, None] * (lw[None, :] * np.exp(r * (a[j_idx] - big))
                                    + (1.0 - lw)[None, :] * np.exp(r * (b[j_idx] - big)))
        rhs = np.exp(big + np.log(s) / r)
    else:
        g = np.log(gv) if mode == MODE_GEOMETRIC else np.power(gv, r)
        nt_tab = lw[None, :] * g[:, k_idx] + (1.0 - lw)[None, :] * g[:, l_idx]  # (n, Q)
        s = tw[:, None] * nt_tab[i_idx] + (1.0 - tw)[:, None] * nt_tab[j_idx]
        rhs = np.exp(s) if mode == MODE_GEOMETRIC else np.power(s, 1.0 / r)

    flat = _first_violation(bv, rhs, tol)
    if flat is None:
        return None
    p, q = np.unravel_index(flat, bv.shape)
    i, j, ti = np.unravel_index(p, (n, n, nt))
    k, l, li = np.unravel_index(q, (m, m, nl))
    return (int(i), int(j), int(ti), int(k), int(l), int(li),
            float(bv[p, q]), float(rhs[p, q]))
