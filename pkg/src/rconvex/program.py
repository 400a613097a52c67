"""Flat postfix programs: the compiled form of expression trees.

A ``Program`` is a postorder encoding of an expression: one opcode per
instruction, an optional constant argument, and the constant pool.  Both
evaluation backends (the compiled extension and the NumPy fallback) execute
this same encoding, so their results agree to floating-point rounding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

OP_CONST = 0  # push consts[arg]
OP_X = 1      # push the first coordinate
OP_Y = 2      # push the second coordinate
OP_ADD = 3
OP_MUL = 4
OP_POW = 5    # raise top of stack to the constant exponent consts[arg]
OP_EXP = 6
OP_LOG = 7

# Hard cap shared with the compiled backend, which uses a fixed-size stack.
MAX_STACK = 64


@dataclass(frozen=True)
class Program:
    ops: np.ndarray     # int32 opcodes
    args: np.ndarray    # int32 const-pool indices (-1 where unused)
    consts: np.ndarray  # float64 constant pool
    stack_need: int
    uses_x: bool
    uses_y: bool

    def __post_init__(self):
        for arr in (self.ops, self.args, self.consts):
            arr.setflags(write=False)


def build(instructions: list[tuple[int, int]], consts: list[float]) -> Program:
    """Assemble and sanity-check an instruction list produced by a compiler."""
    ops = np.asarray([op for op, _ in instructions], dtype=np.int32)
    args = np.asarray([arg for _, arg in instructions], dtype=np.int32)
    pool = np.asarray(consts, dtype=np.float64)

    depth = 0
    peak = 0
    uses_x = False
    uses_y = False
    for op, arg in instructions:
        if op in (OP_CONST, OP_X, OP_Y):
            depth += 1
            uses_x = uses_x or op == OP_X
            uses_y = uses_y or op == OP_Y
        elif op in (OP_ADD, OP_MUL):
            depth -= 1
        elif op not in (OP_POW, OP_EXP, OP_LOG):
            raise ValueError(f"unknown opcode {op}")
        if op in (OP_CONST, OP_POW) and not 0 <= arg < len(pool):
            raise ValueError("constant index out of range")
        if depth <= 0:
            raise ValueError("malformed program: stack underflow")
        peak = max(peak, depth)
    if depth != 1:
        raise ValueError("malformed program: does not reduce to one value")
    if peak > MAX_STACK:
        raise ValueError(f"expression too deep for evaluation stack ({peak} > {MAX_STACK})")
    return Program(ops, args, pool, peak, uses_x, uses_y)


def _pow(a: float, c: float) -> float:
    try:
        return math.pow(a, c)
    except OverflowError:
        return math.inf
    except ValueError:
        # mirror IEEE pow: 0^negative diverges, negative^fractional is undefined
        return math.inf if a == 0.0 else math.nan


def _exp(a: float) -> float:
    try:
        return math.exp(a)
    except OverflowError:
        return math.inf


def _log(a: float) -> float:
    if a > 0.0:
        return math.log(a)
    return -math.inf if a == 0.0 else math.nan


def run_scalar(prog: Program, x: float = 0.0, y: float = 0.0) -> float:
    """Execute a program at a single point (pure; bit-stable across calls)."""
    stack: list[float] = []
    ops = prog.ops
    args = prog.args
    consts = prog.consts
    for k in range(len(ops)):
        op = ops[k]
        if op == OP_CONST:
            stack.append(float(consts[args[k]]))
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
            stack[-1] = _pow(stack[-1], float(consts[args[k]]))
        elif op == OP_EXP:
            stack[-1] = _exp(stack[-1])
        else:  # OP_LOG
            stack[-1] = _log(stack[-1])
    return stack[0]
