"""Analytic expressions on the unit disk and their order-3 jets.

Expressions are small immutable trees.  Evaluation is forward jet arithmetic:
every node returns the value and the first three complex derivatives at the
sample points, combined with the sum, product, reciprocal and Faa di Bruno
chain rules.  The evaluator is vectorized over numpy arrays of points; bad
points (vanishing denominators, log near its cut, compositions leaving the
disk) are tracked in a status mask instead of raising, and the scalar entry
point :func:`eval_jet` turns a non-zero status into the matching exception.

Grammar (whitespace insignificant)::

    expr   := term {("+"|"-") term}
    term   := unary {("*"|"/") unary}
    unary  := "-" unary | factor
    factor := base ["^" ["-"] integer]
    base   := "z" | literal | ident "(" expr ")" | "(" expr ")"
    ident  := exp | log | koebe
    literal:= real | real "i"

A literal such as ``0.5+0.25i`` is read as the sum of two literals, which
evaluates to the same complex constant.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import (
    ExprSyntaxError,
    MathDomainError,
    NonAnalyticConstruct,
    OutsideDisk,
    RangeViolation,
    UnknownIdentifier,
)

DENOM_EPS = 1e-14
LOG_CUT_EPS = 1e-9

# status bits
OK = 0
DOMAIN = 1
RANGE = 2
OUTSIDE = 4

BUILTINS = ("exp", "log", "koebe")
NON_ANALYTIC = frozenset(
    {"conj", "conjugate", "abs", "re", "im", "real", "imag", "arg", "zbar", "Re", "Im"}
)


# --------------------------------------------------------------------------
# tree


class AnalyticExpr:
    """Base class of expression nodes.  Nodes are frozen dataclasses."""

    __slots__ = ()

    def __add__(self, other):
        return Add(self, as_expr(other))

    def __radd__(self, other):
        return Add(as_expr(other), self)

    def __sub__(self, other):
        return Sub(self, as_expr(other))

    def __rsub__(self, other):
        return Sub(as_expr(other), self)

    def __mul__(self, other):
        return Mul(self, as_expr(other))

    def __rmul__(self, other):
        return Mul(as_expr(other), self)

    def __truediv__(self, other):
        return Div(self, as_expr(other))

    def __rtruediv__(self, other):
        return Div(as_expr(other), self)

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("only integer powers are analytic on the disk")
        return Pow(self, n)

    def __neg__(self):
        return Neg(self)

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True, repr=False)
class Const(AnalyticExpr):
    value: complex

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))

    def __repr__(self):
        return f"Const({self.value!r})"


@dataclass(frozen=True, repr=False)
class Var(AnalyticExpr):
    def __repr__(self):
        return "Var()"


@dataclass(frozen=True)
class Add(AnalyticExpr):
    left: AnalyticExpr
    right: AnalyticExpr


@dataclass(frozen=True)
class Sub(AnalyticExpr):
    left: AnalyticExpr
    right: AnalyticExpr


@dataclass(frozen=True)
class Mul(AnalyticExpr):
    left: AnalyticExpr
    right: AnalyticExpr


@dataclass(frozen=True)
class Div(AnalyticExpr):
    left: AnalyticExpr
    right: AnalyticExpr
    guarded: bool = True  # denominator is checked at every evaluation point


@dataclass(frozen=True)
class Neg(AnalyticExpr):
    arg: AnalyticExpr


@dataclass(frozen=True)
class Pow(AnalyticExpr):
    base: AnalyticExpr
    n: int


@dataclass(frozen=True)
class Call(AnalyticExpr):
    name: str
    arg: AnalyticExpr

    def __post_init__(self):
        if self.name not in BUILTINS:
            raise UnknownIdentifier(f"unknown function {self.name!r}", 0)


@dataclass(frozen=True)
class Compose(AnalyticExpr):
    """``outer(inner(z))`` with the inner map required to stay in the disk."""

    outer: AnalyticExpr
    inner: AnalyticExpr


Z = Var()


def as_expr(x) -> AnalyticExpr:
    if isinstance(x, AnalyticExpr):
        return x
    if isinstance(x, (int, float, complex, np.number)):
        return Const(complex(x))
    if isinstance(x, str):
        return parse(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an expression")


def compose(f: AnalyticExpr, phi: AnalyticExpr) -> AnalyticExpr:
    """Return ``f o phi``.  ``|phi| < 1`` is checked lazily at evaluation."""
    return Compose(f, phi)


def koebe(arg: AnalyticExpr = Z) -> AnalyticExpr:
    return Call("koebe", arg)


def automorphism(a: complex, theta: float = 0.0) -> AnalyticExpr:
    """Disk automorphism ``e^{i theta} (z - a) / (1 - conj(a) z)``."""
    a = complex(a)
    if abs(a) >= 1:
        raise ValueError("automorphism needs |a| < 1")
    rot = complex(math.cos(theta), math.sin(theta))
    return Const(rot) * (Z - Const(a)) / (Const(1) - Const(a.conjugate()) * Z)


def mobius(a: complex, b: complex, c: complex, d: complex) -> AnalyticExpr:
    """General Moebius map ``(a z + b) / (c z + d)``."""
    return (Const(a) * Z + Const(b)) / (Const(c) * Z + Const(d))


# --------------------------------------------------------------------------
# printing


def _fmt_real(x: float) -> str:
    return repr(float(x))


def _fmt_const(c: complex) -> str:
    re_part = _fmt_real(c.real)
    im = c.imag
    if math.copysign(1.0, im) < 0:
        return f"({re_part}-{_fmt_real(-im)}i)"
    return f"({re_part}+{_fmt_real(im)}i)"


def to_text(f: AnalyticExpr, var: str = "z") -> str:
    """Serialize to grammar text.  Compositions are printed by substitution."""
    if isinstance(f, Const):
        return _fmt_const(f.value)
    if isinstance(f, Var):
        return var
    if isinstance(f, Add):
        return f"({to_text(f.left, var)} + {to_text(f.right, var)})"
    if isinstance(f, Sub):
        return f"({to_text(f.left, var)} - {to_text(f.right, var)})"
    if isinstance(f, Mul):
        return f"({to_text(f.left, var)} * {to_text(f.right, var)})"
    if isinstance(f, Div):
        return f"({to_text(f.left, var)} / {to_text(f.right, var)})"
    if isinstance(f, Neg):
        return f"(-{to_text(f.arg, var)})"
    if isinstance(f, Pow):
        return f"({to_text(f.base, var)})^{f.n}"
    if isinstance(f, Call):
        return f"{f.name}({to_text(f.arg, var)})"
    if isinstance(f, Compose):
        return to_text(f.outer, f"({to_text(f.inner, var)})")
    raise TypeError(f"not an expression node: {f!r}")


# --------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?(?:i(?![A-Za-z0-9_]))?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
  | (?P<bar>\|)
  """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int  # character index


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = self._lex(text)
        self.i = 0

    def _offset(self, pos: int) -> int:
        return len(self.text[:pos].encode("utf-8"))

    def _lex(self, text):
        toks = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                raise ExprSyntaxError(f"unexpected character {text[pos]!r}", self._offset(pos))
            kind = m.lastgroup
            if kind == "bar":
                raise NonAnalyticConstruct("absolute value is not analytic", self._offset(pos))
            if kind != "ws":
                toks.append(_Tok(kind, m.group(), pos))
            pos = m.end()
        toks.append(_Tok("eof", "", len(text)))
        return toks

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, text):
        tok = self.take()
        if tok.text != text:
            found = tok.text or "end of input"
            raise ExprSyntaxError(f"expected {text!r}, found {found!r}", self._offset(tok.pos))
        return tok

    def parse(self) -> AnalyticExpr:
        node = self.expr()
        tok = self.peek()
        if tok.kind != "eof":
            raise ExprSyntaxError(f"unexpected {tok.text!r}", self._offset(tok.pos))
        return node

    def expr(self):
        node = self.term()
        while self.peek().text in ("+", "-"):
            op = self.take().text
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self):
        node = self.unary()
        while self.peek().text in ("*", "/"):
            op = self.take().text
            rhs = self.unary()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def unary(self):
        if self.peek().text == "-":
            self.take()
            return Neg(self.unary())
        return self.factor()

    def factor(self):
        node = self.base()
        if self.peek().text == "^":
            self.take()
            sign = 1
            if self.peek().text == "-":
                self.take()
                sign = -1
            tok = self.take()
            if tok.kind != "num" or not tok.text.isdigit():
                raise ExprSyntaxError("exponent must be an integer", self._offset(tok.pos))
            node = Pow(node, sign * int(tok.text))
        return node

    def base(self):
        tok = self.take()
        if tok.kind == "num":
            if tok.text.endswith("i"):
                return Const(complex(0.0, float(tok.text[:-1])))
            return Const(complex(float(tok.text), 0.0))
        if tok.kind == "ident":
            if tok.text == "z":
                return Var()
            if tok.text in NON_ANALYTIC:
                raise NonAnalyticConstruct(f"{tok.text!r} is not analytic", self._offset(tok.pos))
            if tok.text not in BUILTINS:
                raise UnknownIdentifier(f"unknown identifier {tok.text!r}", self._offset(tok.pos))
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return Call(tok.text, arg)
        if tok.text == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = tok.text or "end of input"
        raise ExprSyntaxError(f"unexpected {found!r}", self._offset(tok.pos))


def parse(text: str) -> AnalyticExpr:
    """Parse grammar text into an expression tree."""
    return _Parser(text).parse()


# --------------------------------------------------------------------------
# jets


@dataclass(frozen=True)
class Jet3:
    """Value and first three derivatives; entries are complex or arrays."""

    f0: complex
    f1: complex
    f2: complex
    f3: complex

    def as_tuple(self):
        return (self.f0, self.f1, self.f2, self.f3)


def _ipow(x, m: int):
    """x**m for m >= 0 by repeated squaring (exact for dyadic inputs)."""
    result = np.ones_like(x)
    base = x
    while m:
        if m & 1:
            result = result * base
        m >>= 1
        if m:
            base = base * base
    return result


def _mul(a, b):
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return (
        a0 * b0,
        a1 * b0 + a0 * b1,
        a2 * b0 + 2 * a1 * b1 + a0 * b2,
        a3 * b0 + 3 * a2 * b1 + 3 * a1 * b2 + a0 * b3,
    )


def _chain(F, g):
    """Faa di Bruno to order 3: F holds outer derivatives at g0."""
    F0, F1, F2, F3 = F
    _, g1, g2, g3 = g
    return (
        F0,
        F1 * g1,
        F2 * g1 * g1 + F1 * g2,
        F3 * g1 * g1 * g1 + 3 * F2 * g1 * g2 + F1 * g3,
    )


def _guard(x, bad, status):
    """Mark ``bad`` points and substitute a harmless value there."""
    if np.any(bad):
        status |= np.where(bad, DOMAIN, OK).astype(status.dtype)
        x = np.where(bad, 1.0 + 0j, x)
    return x


def _recip(b, status):
    b0 = _guard(b[0], np.abs(b[0]) < DENOM_EPS, status)
    u = 1.0 / b0
    return _chain((u, -u * u, 2 * u * u * u, -6 * u * u * u * u), b)


def _power(b, n: int, status):
    x = b[0]
    if n >= 0:
        F = []
        for k in range(4):
            coef = 1
            for j in range(k):
                coef *= n - j
            F.append(coef * _ipow(x, n - k) if coef != 0 else np.zeros_like(x))
        return _chain(tuple(F), b)
    x = _guard(x, np.abs(x) < DENOM_EPS, status)
    u = 1.0 / x
    F = []
    for k in range(4):
        coef = 1
        for j in range(k):
            coef *= n - j
        F.append(coef * _ipow(u, k - n))
    return _chain(tuple(F), b)


def _builtin(name, g, status):
    x = g[0]
    if name == "exp":
        e = np.exp(x)
        return _chain((e, e, e, e), g)
    if name == "log":
        dist = np.where(x.real < 0, np.abs(x.imag), np.abs(x))
        x = _guard(x, dist < LOG_CUT_EPS, status)
        u = 1.0 / x
        return _chain((np.log(x), u, -u * u, 2 * u * u * u), g)
    if name == "koebe":
        d = _guard(1.0 - x, np.abs(1.0 - x) < DENOM_EPS, status)
        u = 1.0 / d
        u2 = u * u
        u3 = u2 * u
        return _chain((x * u2, (1 + x) * u3, (2 * x + 4) * u3 * u, (6 * x + 18) * u3 * u2), g)
    raise UnknownIdentifier(f"unknown function {name!r}", 0)


def _jet(f, z, status):
    if isinstance(f, Var):
        one = np.ones_like(z)
        zero = np.zeros_like(z)
        return (z, one, zero, zero)
    if isinstance(f, Const):
        zero = np.zeros_like(z)
        return (np.full_like(z, f.value), zero, zero, zero)
    if isinstance(f, Add):
        a, b = _jet(f.left, z, status), _jet(f.right, z, status)
        return tuple(x + y for x, y in zip(a, b))
    if isinstance(f, Sub):
        a, b = _jet(f.left, z, status), _jet(f.right, z, status)
        return tuple(x - y for x, y in zip(a, b))
    if isinstance(f, Neg):
        return tuple(-x for x in _jet(f.arg, z, status))
    if isinstance(f, Mul):
        return _mul(_jet(f.left, z, status), _jet(f.right, z, status))
    if isinstance(f, Div):
        a = _jet(f.left, z, status)
        return _mul(a, _recip(_jet(f.right, z, status), status))
    if isinstance(f, Pow):
        return _power(_jet(f.base, z, status), f.n, status)
    if isinstance(f, Call):
        return _builtin(f.name, _jet(f.arg, z, status), status)
    if isinstance(f, Compose):
        g = _jet(f.inner, z, status)
        out = np.abs(g[0]) >= 1.0
        inner0 = g[0]
        if np.any(out):
            status |= np.where(out, RANGE, OK).astype(status.dtype)
            inner0 = np.where(out, 0.0 + 0j, inner0)
        return _chain(_jet(f.outer, inner0, status), g)
    raise TypeError(f"not an expression node: {f!r}")


def jet_array(f: AnalyticExpr, z) -> tuple[Jet3, np.ndarray]:
    """Evaluate jets at an array of points.

    Returns the jet (arrays shaped like ``z``) and an int8 status array of
    OR-ed flags (DOMAIN, RANGE, OUTSIDE).  Entries at flagged points are NaN.
    """
    z = np.asarray(z, dtype=complex)
    status = np.zeros(z.shape, dtype=np.int8)
    outside = np.abs(z) >= 1.0
    if np.any(outside):
        status |= np.where(outside, OUTSIDE, OK).astype(np.int8)
        z = np.where(outside, 0.0 + 0j, z)
    with np.errstate(all="ignore"):
        parts = _jet(f, z, status)
    if np.any(status):
        bad = status != OK
        parts = tuple(np.where(bad, np.nan + 0j, p) for p in parts)
    return Jet3(*parts), status


def raise_for_status(code: int, where) -> None:
    if code & OUTSIDE:
        raise OutsideDisk(f"point {where} is not in the open unit disk")
    if code & RANGE:
        raise RangeViolation(f"inner map leaves the unit disk at z={where}")
    if code & DOMAIN:
        raise MathDomainError(f"vanishing denominator or log branch cut at z={where}")


def eval_jet(f: AnalyticExpr, z: complex) -> Jet3:
    """Value and first three derivatives of ``f`` at a point of the disk."""
    z = complex(z)
    if abs(z) >= 1.0:
        raise OutsideDisk(f"point {z} is not in the open unit disk")
    jet, status = jet_array(f, np.array([z]))
    raise_for_status(int(status[0]), z)
    return Jet3(*(complex(p[0]) for p in jet.as_tuple()))


def evaluate(f: AnalyticExpr, z) -> np.ndarray:
    """Values only, NaN at flagged points."""
    return jet_array(f, z)[0].f0
