"""Sparse polynomials over Q with a positive even weighted grading.

Monomials are exponent tuples. A polynomial maps exponent tuples to nonzero
``Fraction`` coefficients and is immutable once built.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping


class RingError(ValueError):
    """Structural misuse: mismatched contexts, bad indices, bad weights."""


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", column: int | None = None):
        self.text = text
        self.column = column
        self.message = message
        if column is not None:
            message = f"{message} (column {column + 1})"
        super().__init__(message)


@dataclass(frozen=True)
class GradedContext:
    """Ordered generator names with positive even weights (non-decreasing)."""

    names: tuple[str, ...]
    weights: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if len(self.names) != len(self.weights):
            raise RingError("one weight per variable is required")
        if len(set(self.names)) != len(self.names):
            raise RingError("variable names must be distinct")
        for name, w in zip(self.names, self.weights):
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name):
                raise RingError(f"invalid variable name {name!r}")
            if w < 2 or w % 2:
                raise RingError(f"weight of {name} must be positive even, got {w}")
        if any(a > b for a, b in zip(self.weights, self.weights[1:])):
            raise RingError("weights must be non-decreasing")

    @classmethod
    def from_weights(cls, weights: Iterable[int], prefix: str = "x") -> GradedContext:
        weights = tuple(weights)
        return cls(tuple(f"{prefix}{i + 1}" for i in range(len(weights))), weights)

    @property
    def nvars(self) -> int:
        return len(self.weights)

    def var(self, i: int) -> Polynomial:
        """The generator with 0-based index ``i``."""
        self.check_index(i)
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): 1})

    def gens(self) -> list[Polynomial]:
        return [self.var(i) for i in range(self.nvars)]

    def zero(self) -> Polynomial:
        return Polynomial(self, {})

    def one(self) -> Polynomial:
        return self.const(1)

    def const(self, c) -> Polynomial:
        return Polynomial(self, {(0,) * self.nvars: c})

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise RingError(f"unknown variable {name!r}") from None

    def check_index(self, i: int) -> None:
        if not 0 <= i < self.nvars:
            raise RingError(f"variable index {i} out of range for {self.nvars} variables")

    def parse(self, text: str) -> Polynomial:
        return parse_polynomial(self, text)


def weighted_degree(ctx: GradedContext, m: tuple[int, ...]) -> int:
    if len(m) != ctx.nvars:
        raise RingError(f"monomial {m} has {len(m)} exponents, context has {ctx.nvars}")
    return sum(e * w for e, w in zip(m, ctx.weights))


def monomial_key(ctx: GradedContext, m: tuple[int, ...]):
    """Canonical order: higher weighted degree first, then lex with x1 > x2 > ..."""
    return (-weighted_degree(ctx, m), tuple(-e for e in m))


def monomial_basis(ctx: GradedContext, n: int) -> list[tuple[int, ...]]:
    """All monomials of weighted degree exactly ``n`` in canonical order."""
    return list(_basis(ctx.weights, n))


@lru_cache(maxsize=4096)
def _basis(weights: tuple[int, ...], n: int) -> tuple[tuple[int, ...], ...]:
    if n < 0 or n % 2:
        return ()
    out = []

    def rec(i, remaining, prefix):
        if i == len(weights) - 1:
            if remaining % weights[i] == 0:
                out.append(prefix + (remaining // weights[i],))
            return
        # largest exponent first gives descending lex order
        for e in range(remaining // weights[i], -1, -1):
            rec(i + 1, remaining - e * weights[i], prefix + (e,))

    if not weights:
        return ((),) if n == 0 else ()
    rec(0, n, ())
    return tuple(out)


def _coerce(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, str)):
        return Fraction(c)
    raise TypeError(f"unsupported coefficient {c!r}")


class Polynomial:
    """Immutable sparse polynomial in a fixed :class:`GradedContext`."""

    __slots__ = ("ctx", "terms", "_hash")

    def __init__(self, ctx: GradedContext, terms: Mapping[tuple[int, ...], object] | None = None):
        self.ctx = ctx
        clean = {}
        for m, c in (terms or {}).items():
            m = tuple(m)
            if len(m) != ctx.nvars:
                raise RingError(f"monomial {m} does not match {ctx.nvars} variables")
            c = _coerce(c)
            if c:
                clean[m] = clean.get(m, 0) + c
        self.terms = {m: c for m, c in clean.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, ctx, terms):
        # trusted constructor: keys are valid tuples, values nonzero Fractions
        p = cls.__new__(cls)
        p.ctx = ctx
        p.terms = terms
        p._hash = None
        return p

    def _check(self, other: Polynomial) -> None:
        if self.ctx != other.ctx:
            raise RingError("polynomials live in different contexts")

    def _lift(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx.const(other)
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx, frozenset(self.terms.items())))
        return self._hash

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ctx, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _coerce(other)
            if not c:
                return self.ctx.zero()
            return Polynomial._raw(self.ctx, {m: v * c for m, v in self.terms.items()})
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial._raw(self.ctx, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise RingError("negative powers are not polynomials")
        result, base = self.ctx.one(), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def coefficient(self, m: tuple[int, ...]) -> Fraction:
        return self.terms.get(tuple(m), Fraction(0))

    def monomials(self) -> list[tuple[int, ...]]:
        return sorted(self.terms, key=lambda m: monomial_key(self.ctx, m))

    def scale_to_integers(self) -> Polynomial:
        """Positive rational multiple with coprime integer coefficients."""
        from math import gcd, lcm

        if not self.terms:
            return self
        den = lcm(*(c.denominator for c in self.terms.values()))
        ints = [int(c * den) for c in self.terms.values()]
        g = gcd(*ints)
        return self * Fraction(den, g)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"

    def __str__(self):
        return format_polynomial(self)


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    p._check(q)
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    p._check(q)
    return p * q


class Zero:
    """Marker returned for the homogeneous degree of the zero polynomial."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ZERO"


ZERO = Zero()


def homogeneous_degree(ctx: GradedContext, p: Polynomial) -> int | Zero | None:
    """Common weighted degree of all terms; ``ZERO`` for 0, ``None`` if mixed."""
    if p.ctx != ctx:
        raise RingError("polynomial does not belong to this context")
    degrees = {weighted_degree(ctx, m) for m in p.terms}
    if not degrees:
        return ZERO
    if len(degrees) > 1:
        return None
    return degrees.pop()


def total_degree(m: tuple[int, ...]) -> int:
    return sum(m)


def partial_derivative(p: Polynomial, i: int) -> Polynomial:
    p.ctx.check_index(i)
    out = {}
    for m, c in p.terms.items():
        e = m[i]
        if e:
            out[m[:i] + (e - 1,) + m[i + 1:]] = c * e
    return Polynomial._raw(p.ctx, out)


def substitute(p: Polynomial, i: int, q: Polynomial) -> Polynomial:
    """Replace ``x_i`` by ``q`` everywhere in ``p``."""
    p.ctx.check_index(i)
    p._check(q)
    images = p.ctx.gens()
    images[i] = q
    return compose(p, images)


def compose(p: Polynomial, images: list[Polynomial], target: GradedContext | None = None) -> Polynomial:
    """Simultaneous substitution ``x_j -> images[j]``; images live in ``target``."""
    ctx = target or p.ctx
    if len(images) != p.ctx.nvars:
        raise RingError("need one image per variable")
    powers: dict[tuple[int, int], Polynomial] = {}

    def power(j, e):
        if (j, e) not in powers:
            powers[(j, e)] = images[j] ** e
        return powers[(j, e)]

    out = ctx.zero()
    for m, c in p.terms.items():
        term = ctx.const(c)
        for j, e in enumerate(m):
            if e:
                term = term * power(j, e)
        out = out + term
    return out


def random_homogeneous(ctx: GradedContext, n: int, rng, bound: int, min_total_degree: int = 0) -> Polynomial:
    """Random integer combination of the degree-``n`` monomials.

    Coefficients are uniform in ``[-bound, bound]``; monomials with fewer than
    ``min_total_degree`` factors are left out.
    """
    terms = {}
    for m in monomial_basis(ctx, n):
        if sum(m) >= min_total_degree:
            terms[m] = rng.randint(-bound, bound)
    return Polynomial(ctx, terms)


# -- text form ---------------------------------------------------------------

def _format_monomial(ctx: GradedContext, m: tuple[int, ...]) -> str:
    parts = []
    for name, e in zip(ctx.names, m):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_polynomial(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    chunks = []
    for m in p.monomials():
        c = p.terms[m]
        mono = _format_monomial(p.ctx, m)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not chunks:
            chunks.append(body if c > 0 else f"-{body}")
        else:
            chunks.append(("+ " if c > 0 else "- ") + body)
    return " ".join(chunks)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^]))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        mt = _TOKEN.match(text, pos)
        if not mt:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[col]!r}", text, col)
        kind = mt.lastgroup
        start = mt.start(kind)
        tokens.append((kind, mt.group(kind), start))
        pos = mt.end()
    return tokens


def parse_polynomial(ctx: GradedContext, text: str) -> Polynomial:
    """Parse e.g. ``x1^2 - 1/2*x2^2``; whitespace is insignificant."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty polynomial", text, 0)
    i = 0
    terms: dict = {}

    def peek():
        return tokens[i] if i < len(tokens) else (None, None, len(text))

    def parse_factor(exps):
        nonlocal i
        kind, val, col = peek()
        if kind != "name":
            raise ParseError("expected a variable", text, col)
        try:
            j = ctx.index(val)
        except RingError:
            raise ParseError(f"unknown variable {val!r}", text, col) from None
        i += 1
        e = 1
        if peek()[1] == "^":
            i += 1
            kind, val, col = peek()
            if kind != "num" or "/" in val:
                raise ParseError("expected a non-negative integer exponent", text, col)
            e = int(val)
            i += 1
        exps[j] += e

    sign = 1
    kind, val, col = peek()
    if val in ("+", "-"):
        sign = -1 if val == "-" else 1
        i += 1
    while True:
        coeff = Fraction(1)
        exps = [0] * ctx.nvars
        kind, val, col = peek()
        if kind == "num":
            coeff = Fraction(val)
            i += 1
            if peek()[1] == "*":
                i += 1
                parse_factor(exps)
        elif kind == "name":
            parse_factor(exps)
        else:
            raise ParseError("expected a term", text, col)
        while peek()[1] == "*":
            i += 1
            parse_factor(exps)
        m = tuple(exps)
        terms[m] = terms.get(m, 0) + sign * coeff
        kind, val, col = peek()
        if kind is None:
            break
        if val not in ("+", "-"):
            raise ParseError(f"unexpected {val!r}", text, col)
        sign = -1 if val == "-" else 1
        i += 1
    return Polynomial(ctx, terms)
