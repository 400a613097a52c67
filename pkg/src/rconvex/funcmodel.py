"""Domains and positive functions: parsed expressions, generated closures,
and the partial maps obtained by freezing one coordinate.

Expression grammar (whitespace insignificant)::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | atom ('^' ['-'] number)?
    atom   := number | 'x' | 'y' | 'e' | '(' expr ')' | ('exp'|'log') '(' expr ')'

Power binds tighter than unary minus, which binds tighter than '*' and '/'.
Subtraction, division and unary minus are desugared at parse time into the
core node set (sum, product, power with constant exponent); the printer
restores the sugared spelling, so ``parse(str(e)) == e`` structurally.
"""
from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from . import kernels
from .program import (
    OP_ADD,
    OP_CONST,
    OP_EXP,
    OP_LOG,
    OP_MUL,
    OP_POW,
    OP_X,
    OP_Y,
    Program,
    build,
    run_scalar,
)


class RConvexError(Exception):
    """Base class for domain-model errors raised by this package."""


class ExprSyntaxError(RConvexError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownIdentifierError(ExprSyntaxError):
    pass


class ArityError(RConvexError):
    pass


class DomainError(RConvexError):
    pass


class PositivityError(RConvexError):
    pass


# ---------------------------------------------------------------------------
# domains


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("interval endpoints must be finite")
        if not self.lo < self.hi:
            raise ValueError(f"interval endpoints must satisfy lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi


@dataclass(frozen=True)
class Rectangle:
    x: Interval
    y: Interval

    def contains(self, p) -> bool:
        px, py = p
        return self.x.contains(px) and self.y.contains(py)


class Axis(enum.Enum):
    """The axis along which a partial map stays free."""

    X = "x"
    Y = "y"


# ---------------------------------------------------------------------------
# expression nodes


class Expr:
    """Base class for expression nodes; subclasses are frozen and hashable."""

    def __str__(self) -> str:
        return _render(self, _CTX_SUM)


@dataclass(frozen=True)
class Const(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    name: str  # 'x' or 'y'


@dataclass(frozen=True)
class Sum(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Prod(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: float  # literal constant only, keeps evaluation single-valued


@dataclass(frozen=True)
class ExpNode(Expr):
    arg: Expr


@dataclass(frozen=True)
class LogNode(Expr):
    arg: Expr


def uses_variable(e: Expr, name: str) -> bool:
    if isinstance(e, Var):
        return e.name == name
    if isinstance(e, (Sum, Prod)):
        return uses_variable(e.left, name) or uses_variable(e.right, name)
    if isinstance(e, Pow):
        return uses_variable(e.base, name)
    if isinstance(e, (ExpNode, LogNode)):
        return uses_variable(e.arg, name)
    return False


def substitute(e: Expr, mapping: dict[str, Expr]) -> Expr:
    """Replace variables by expressions; never simplifies, so evaluation of
    the result reproduces the original op sequence bit for bit."""
    if isinstance(e, Var):
        return mapping.get(e.name, e)
    if isinstance(e, Sum):
        return Sum(substitute(e.left, mapping), substitute(e.right, mapping))
    if isinstance(e, Prod):
        return Prod(substitute(e.left, mapping), substitute(e.right, mapping))
    if isinstance(e, Pow):
        return Pow(substitute(e.base, mapping), e.exponent)
    if isinstance(e, ExpNode):
        return ExpNode(substitute(e.arg, mapping))
    if isinstance(e, LogNode):
        return LogNode(substitute(e.arg, mapping))
    return e


# ---------------------------------------------------------------------------
# parsing

_NUM_RE = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_IDENT_RE = re.compile(r"[A-Za-z_]+")


def _negate(e: Expr) -> Expr:
    if isinstance(e, Const):
        return Const(-e.value)
    return Prod(Const(-1.0), e)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def parse(self) -> Expr:
        e = self.expr()
        self.skip_ws()
        if self.pos < len(self.text):
            raise ExprSyntaxError("unexpected input", self.pos)
        return e

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expr(self) -> Expr:
        left = self.term()
        while self.peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            right = self.term()
            left = Sum(left, right if op == "+" else _negate(right))
        return left

    def term(self) -> Expr:
        left = self.factor()
        while self.peek() in ("*", "/"):
            op = self.text[self.pos]
            self.pos += 1
            right = self.factor()
            left = Prod(left, right if op == "*" else Pow(right, -1.0))
        return left

    def factor(self) -> Expr:
        if self.peek() == "-":
            self.pos += 1
            return _negate(self.factor())
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            return Pow(base, self.exponent())
        return base

    def exponent(self) -> float:
        self.skip_ws()
        sign = 1.0
        if self.peek() == "-":
            sign = -1.0
            self.pos += 1
        self.skip_ws()
        m = _NUM_RE.match(self.text, self.pos)
        if not m:
            raise ExprSyntaxError("expected a numeric exponent after '^'", self.pos)
        self.pos = m.end()
        return sign * float(m.group())

    def atom(self) -> Expr:
        ch = self.peek()
        if ch == "":
            raise ExprSyntaxError("unexpected end of input", self.pos)
        if ch == "(":
            self.pos += 1
            inner = self.expr()
            self.expect(")")
            return inner
        m = _NUM_RE.match(self.text, self.pos)
        if m:
            self.pos = m.end()
            return Const(float(m.group()))
        m = _IDENT_RE.match(self.text, self.pos)
        if m:
            name = m.group()
            start = self.pos
            self.pos = m.end()
            if name in ("x", "y"):
                return Var(name)
            if name == "e":
                return Const(math.e)
            if name in ("exp", "log"):
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                return ExpNode(inner) if name == "exp" else LogNode(inner)
            raise UnknownIdentifierError(f"unknown identifier '{name}'", start)
        raise ExprSyntaxError(f"unexpected character '{ch}'", self.pos)

    def expect(self, ch: str):
        if self.peek() != ch:
            raise ExprSyntaxError(f"expected '{ch}'", self.pos)
        self.pos += 1


def parse_expr(text: str) -> Expr:
    """Parse an expression under the package grammar.

    Raises ExprSyntaxError (with a byte offset) on malformed input and
    UnknownIdentifierError for identifiers outside {x, y, e, exp, log}.
    """
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# printing (canonical; parse(str(e)) == e structurally)

_CTX_SUM, _CTX_PROD, _CTX_NEG, _CTX_ATOM = 0, 1, 2, 4


def _level(e: Expr) -> int:
    if isinstance(e, Const):
        return _CTX_ATOM if e.value >= 0 else _CTX_NEG
    if isinstance(e, Sum):
        return _CTX_SUM
    if isinstance(e, Prod):
        if (isinstance(e.left, Const) and e.left.value == -1.0
                and not isinstance(e.right, Const)):
            return _CTX_NEG
        return _CTX_PROD
    if isinstance(e, Pow):
        return 3
    return _CTX_ATOM


def _num(v: float) -> str:
    return repr(float(v))


def _render(e: Expr, ctx: int) -> str:
    text = _render_bare(e)
    if _level(e) < ctx:
        return f"({text})"
    return text


def _render_bare(e: Expr) -> str:
    if isinstance(e, Const):
        return _num(e.value) if e.value >= 0 else f"-{_num(-e.value)}"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Sum):
        left = _render(e.left, _CTX_SUM)
        r = e.right
        if isinstance(r, Const) and r.value < 0:
            return f"{left} - {_num(-r.value)}"
        # a bare-constant operand must not take the subtraction sugar, or it
        # would re-parse as a folded negative literal
        if (isinstance(r, Prod) and isinstance(r.left, Const) and r.left.value == -1.0
                and not isinstance(r.right, Const)):
            return f"{left} - {_render(r.right, _CTX_PROD)}"
        return f"{left} + {_render(r, _CTX_PROD)}"
    if isinstance(e, Prod):
        if (isinstance(e.left, Const) and e.left.value == -1.0
                and not isinstance(e.right, Const)):
            return f"-{_render(e.right, _CTX_NEG)}"
        if isinstance(e.right, Pow) and e.right.exponent == -1.0:
            return f"{_render(e.left, _CTX_PROD)} / {_render(e.right.base, _CTX_NEG)}"
        return f"{_render(e.left, _CTX_PROD)} * {_render(e.right, _CTX_NEG)}"
    if isinstance(e, Pow):
        exp = e.exponent
        exp_text = _num(exp) if exp >= 0 else f"-{_num(-exp)}"
        return f"{_render(e.base, _CTX_ATOM)}^{exp_text}"
    if isinstance(e, ExpNode):
        return f"exp({_render(e.arg, _CTX_SUM)})"
    if isinstance(e, LogNode):
        return f"log({_render(e.arg, _CTX_SUM)})"
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# compilation


def compile_expr(expr: Expr) -> Program:
    instrs: list[tuple[int, int]] = []
    consts: list[float] = []

    def emit_const(v: float) -> int:
        consts.append(float(v))
        return len(consts) - 1

    def walk(e: Expr):
        if isinstance(e, Const):
            instrs.append((OP_CONST, emit_const(e.value)))
        elif isinstance(e, Var):
            instrs.append((OP_X if e.name == "x" else OP_Y, -1))
        elif isinstance(e, Sum):
            walk(e.left)
            walk(e.right)
            instrs.append((OP_ADD, -1))
        elif isinstance(e, Prod):
            walk(e.left)
            walk(e.right)
            instrs.append((OP_MUL, -1))
        elif isinstance(e, Pow):
            walk(e.base)
            instrs.append((OP_POW, emit_const(e.exponent)))
        elif isinstance(e, ExpNode):
            walk(e.arg)
            instrs.append((OP_EXP, -1))
        elif isinstance(e, LogNode):
            walk(e.arg)
            instrs.append((OP_LOG, -1))
        else:
            raise TypeError(f"not an expression node: {e!r}")

    walk(expr)
    return build(instrs, consts)


# ---------------------------------------------------------------------------
# positive functions

Body = Union[Expr, Callable]
DEFAULT_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class PositiveFunction:
    """A function into (0, inf) on a declared interval or rectangle.

    The body is either a parsed/constructed expression or a plain Python
    callable (one float argument per coordinate); both share this interface,
    so downstream evaluators never care about provenance.  Positivity is
    enforced at every sampling site against ``floor``.
    """

    body: Body
    domain: Union[Interval, Rectangle]
    floor: float = DEFAULT_FLOOR

    def __post_init__(self):
        if not 0 < self.floor < 1:
            raise ValueError("positivity floor must lie in (0, 1)")
        program = None
        if isinstance(self.body, Expr):
            if self.arity == 1 and uses_variable(self.body, "y"):
                raise ArityError("'y' used in a one-variable function")
            program = compile_expr(self.body)
        elif not callable(self.body):
            raise TypeError("body must be an expression or a callable")
        object.__setattr__(self, "_program", program)

    @classmethod
    def from_text(cls, text: str, domain: Union[Interval, Rectangle],
                  floor: float = DEFAULT_FLOOR) -> "PositiveFunction":
        return cls(parse_expr(text), domain, floor)

    @property
    def arity(self) -> int:
        return 1 if isinstance(self.domain, Interval) else 2

    @property
    def expr(self) -> Expr:
        if not isinstance(self.body, Expr):
            raise TypeError("function body is a closure, not an expression")
        return self.body

    @property
    def program(self) -> Program:
        return self._program

    def describe(self) -> str:
        if isinstance(self.body, Expr):
            return str(self.body)
        return getattr(self.body, "__name__", "<closure>")

    def __str__(self) -> str:
        return self.describe()

    # -- scalar evaluation ---------------------------------------------------

    def eval(self, p) -> float:
        """Evaluate at a point of the domain; rejects out-of-domain points and
        values below the positivity floor."""
        if self.arity == 1:
            x = float(p)
            if not self.domain.contains(x):
                raise DomainError(f"point {x} outside interval [{self.domain.lo}, {self.domain.hi}]")
            v = run_scalar(self._program, x) if self._program is not None else float(self.body(x))
            return self._check_scalar(v, x)
        px, py = (float(p[0]), float(p[1]))
        if not self.domain.contains((px, py)):
            raise DomainError(f"point ({px}, {py}) outside rectangle")
        if self._program is not None:
            v = run_scalar(self._program, px, py)
        else:
            v = float(self.body(px, py))
        return self._check_scalar(v, (px, py))

    def _check_scalar(self, v: float, p) -> float:
        if not math.isfinite(v):
            raise PositivityError(f"non-finite value {v} at {p} for {self.describe()}")
        if v < self.floor:
            raise PositivityError(
                f"value {v} at {p} below positivity floor {self.floor} for {self.describe()}")
        return v

    # -- vectorized evaluation (points are produced inside the domain by the
    #    callers: quadrature panels and convexity grids) ----------------------

    def values(self, xs: np.ndarray, ys: np.ndarray | None = None) -> np.ndarray:
        xs = np.ascontiguousarray(xs, dtype=np.float64)
        if self.arity == 1:
            if ys is not None:
                raise ArityError("one-variable function evaluated with two coordinate arrays")
            if self._program is not None:
                out = kernels.eval_elementwise(self._program, xs.ravel()).reshape(xs.shape)
            else:
                out = np.array([self.body(float(v)) for v in xs.ravel()],
                               dtype=np.float64).reshape(xs.shape)
        else:
            if ys is None:
                raise ArityError("two-variable function needs both coordinate arrays")
            ys = np.ascontiguousarray(ys, dtype=np.float64)
            if ys.shape != xs.shape:
                raise ArityError("coordinate arrays must have matching shapes")
            if self._program is not None:
                out = kernels.eval_elementwise(self._program, xs.ravel(),
                                               ys.ravel()).reshape(xs.shape)
            else:
                out = np.array([self.body(float(a), float(b))
                                for a, b in zip(xs.ravel(), ys.ravel())],
                               dtype=np.float64).reshape(xs.shape)
        self._check_array(out, xs, ys)
        return out

    def values_outer(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Evaluate a two-variable function on the grid xs × ys."""
        if self.arity != 2:
            raise ArityError("outer-grid evaluation needs a two-variable function")
        xs = np.ascontiguousarray(xs, dtype=np.float64)
        ys = np.ascontiguousarray(ys, dtype=np.float64)
        if self._program is not None:
            out = kernels.eval_outer(self._program, xs, ys)
        else:
            out = np.array([[self.body(float(a), float(b)) for b in ys] for a in xs],
                           dtype=np.float64)
        self._check_array(out, xs[:, None], ys[None, :])
        return out

    def _check_array(self, vals: np.ndarray, xs, ys):
        bad = ~np.isfinite(vals)
        low = np.zeros_like(bad)
        np.less(vals, self.floor, out=low, where=~bad)
        if bad.any() or low.any():
            idx = np.unravel_index(int(np.argmax(bad | low)), vals.shape)
            px = float(np.broadcast_to(xs, vals.shape)[idx])
            point = px if ys is None else (px, float(np.broadcast_to(ys, vals.shape)[idx]))
            v = vals[idx]
            if not np.isfinite(v):
                raise PositivityError(f"non-finite value {v} at {point} for {self.describe()}")
            raise PositivityError(
                f"value {v} at {point} below positivity floor {self.floor} for {self.describe()}")


def evaluate(f: PositiveFunction, p) -> float:
    return f.eval(p)


def partial_map(f: PositiveFunction, axis: Axis, fixed: float) -> PositiveFunction:
    """Freeze one coordinate of a two-variable function.

    ``axis`` names the coordinate that stays free: ``Axis.X`` fixes y and
    returns a function on the x-interval, ``Axis.Y`` the converse.  Values
    agree with the parent bit for bit because expression bodies are
    substituted, never simplified.
    """
    if f.arity != 2:
        raise ArityError("partial maps require a two-variable function")
    rect = f.domain
    fixed = float(fixed)
    if axis == Axis.X:
        comp = rect.y
        if not comp.contains(fixed):
            raise DomainError(f"fixed y={fixed} outside [{comp.lo}, {comp.hi}]")
        if isinstance(f.body, Expr):
            body: Body = substitute(f.body, {"y": Const(fixed)})
        else:
            parent = f.body
            body = lambda u, _g=parent, _v=fixed: _g(u, _v)
        return PositiveFunction(body, rect.x, f.floor)
    comp = rect.x
    if not comp.contains(fixed):
        raise DomainError(f"fixed x={fixed} outside [{comp.lo}, {comp.hi}]")
    if isinstance(f.body, Expr):
        body = substitute(f.body, {"x": Const(fixed), "y": Var("x")})
    else:
        parent = f.body
        body = lambda v, _g=parent, _u=fixed: _g(_u, v)
    return PositiveFunction(body, rect.y, f.floor)
