"""Graded quotients ``Q[x1..xk]/(u1..uk)`` analysed degree by degree.

Every question about the quotient is answered by exact linear algebra on the
finite-dimensional slices ``A^n`` and ``I^n = I cap A^n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import combinations
from math import prod
from typing import Iterable, Sequence

from .linalg import Echelon, fast_rank, left_nullspace
from .ring import (
    ZERO,
    compose,
    GradedContext,
    Polynomial,
    RingError,
    format_polynomial,
    homogeneous_degree,
    monomial_basis,
    parse_polynomial,
    partial_derivative,
    weighted_degree,
)


class PresentationError(ValueError):
    pass


class InconsistentDegreeType(ValueError):
    pass


class PreconditionError(ValueError):
    pass


# -- degree types ------------------------------------------------------------

@dataclass(frozen=True, order=True)
class DegreeType:
    """Generator degrees ``A`` and relation degrees ``B``."""

    A: tuple[int, ...]
    B: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "A", tuple(int(a) for a in self.A))
        object.__setattr__(self, "B", tuple(int(b) for b in self.B))
        if len(self.A) != len(self.B):
            raise ValueError(f"length mismatch: {len(self.A)} generator degrees, {len(self.B)} relation degrees")
        if not self.A:
            raise ValueError("a degree type needs at least one generator")
        for seq, what in ((self.A, "generator"), (self.B, "relation")):
            for d in seq:
                if d < 2 or d % 2:
                    raise ValueError(f"{what} degree {d} must be positive even")
            if any(a > b for a, b in zip(seq, seq[1:])):
                raise ValueError(f"{what} degrees must be non-decreasing")

    @property
    def k(self) -> int:
        return len(self.A)

    @property
    def fd(self) -> int:
        return formal_dimension(self)

    def __str__(self):
        return f"({','.join(map(str, self.A))};{','.join(map(str, self.B))})"

    def literal(self) -> str:
        """The ``2,2:4,4`` form accepted on the command line."""
        return f"{','.join(map(str, self.A))}:{','.join(map(str, self.B))}"

    def as_dict(self) -> dict:
        return {"A": list(self.A), "B": list(self.B)}


def formal_dimension(dt: DegreeType) -> int:
    return sum(b - a for a, b in zip(dt.A, dt.B))


def _series_mul(p: list[int], q: list[int], n: int) -> list[int]:
    out = [0] * (n + 1)
    for i, a in enumerate(p[: n + 1]):
        if a:
            for j, b in enumerate(q[: n + 1 - i]):
                out[i + j] += a * b
    return out


def expected_hilbert(dt: DegreeType) -> list[int]:
    """Coefficients of ``prod (1 - t^B) / (1 - t^A)`` in degrees ``0..fd``.

    Raises :class:`InconsistentDegreeType` when the quotient is not a
    polynomial.
    """
    top = sum(dt.B)
    num = [1] + [0] * top
    for b in dt.B:
        factor = [0] * (b + 1)
        factor[0], factor[b] = 1, -1
        num = _series_mul(num, factor, top)
    series = num
    for a in dt.A:
        # multiply by 1/(1 - t^a)
        series = list(series)
        for n in range(a, top + 1):
            series[n] += series[n - a]
    fd = formal_dimension(dt)
    if fd < 0 or any(series[fd + 1:]):
        raise InconsistentDegreeType(f"inconsistent degree type {dt}: quotient series is not a polynomial")
    return series[: fd + 1]


# -- presentations -----------------------------------------------------------

@dataclass(frozen=True)
class Presentation:
    """A context with one homogeneous relation per generator."""

    ctx: GradedContext
    relations: tuple[Polynomial, ...]

    def __post_init__(self):
        rels = tuple(self.relations)
        object.__setattr__(self, "relations", rels)
        if len(rels) != self.ctx.nvars:
            raise PresentationError(
                f"{len(rels)} relations for {self.ctx.nvars} generators; counts must agree"
            )
        degrees = []
        for j, u in enumerate(rels, 1):
            if u.ctx != self.ctx:
                raise PresentationError(f"relation {j} lives in another context")
            d = homogeneous_degree(self.ctx, u)
            if d is ZERO:
                raise PresentationError(f"relation {j} is zero")
            if d is None:
                raise PresentationError(f"relation {j} not homogeneous")
            if d <= 0 or d % 2:
                raise PresentationError(f"relation {j} has degree {d}; must be positive even")
            degrees.append(d)
        if any(a > b for a, b in zip(degrees, degrees[1:])):
            raise PresentationError("relation degrees must be non-decreasing")

    @classmethod
    def sorted(cls, ctx: GradedContext, relations: Iterable[Polynomial]) -> Presentation:
        """Like the constructor but orders relations by degree (stable)."""
        rels = list(relations)
        for j, u in enumerate(rels, 1):
            d = homogeneous_degree(ctx, u)
            if d is ZERO:
                raise PresentationError(f"relation {j} is zero")
            if d is None:
                raise PresentationError(f"relation {j} not homogeneous")
        rels.sort(key=lambda u: homogeneous_degree(ctx, u))
        return cls(ctx, tuple(rels))

    @classmethod
    def parse(cls, weights: Sequence[int], relations: Sequence[str]) -> Presentation:
        ctx = GradedContext.from_weights(weights)
        return cls.sorted(ctx, [parse_polynomial(ctx, r) for r in relations])

    @property
    def k(self) -> int:
        return self.ctx.nvars

    @property
    def relation_degrees(self) -> tuple[int, ...]:
        return tuple(homogeneous_degree(self.ctx, u) for u in self.relations)

    def to_text(self) -> str:
        vars_line = " ".join(f"{n}:{w}" for n, w in zip(self.ctx.names, self.ctx.weights))
        rels_line = " ; ".join(format_polynomial(u) for u in self.relations)
        return f"vars: {vars_line}\nrels: {rels_line}\n"

    def __str__(self):
        gens = ", ".join(self.ctx.names)
        return f"Q[{gens}]/({', '.join(map(str, self.relations))})"


def degree_type_of(p: Presentation) -> DegreeType:
    return DegreeType(p.ctx.weights, p.relation_degrees)


# -- degree slices -----------------------------------------------------------

@dataclass
class Slice:
    """``I cap A^n`` as a row-reduced subspace of coordinates over ``A^n``."""

    degree: int
    monomials: tuple[tuple[int, ...], ...]
    echelon: Echelon
    index: dict = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.monomials)

    @property
    def rank(self) -> int:
        return self.echelon.rank

    def coordinates(self, f: Polynomial) -> dict[int, Fraction]:
        out = {}
        for m, c in f.terms.items():
            try:
                out[self.index[m]] = c
            except KeyError:
                raise PresentationError(f"term of degree {weighted_degree(f.ctx, m)} in a degree-{self.degree} slice") from None
        return out

    def basis(self) -> list[list[int]]:
        """Dense fully reduced basis rows (pivot = first nonzero column)."""
        rows = []
        for r in self.echelon.basis():
            dense = [0] * self.dim
            for c, v in r.items():
                dense[c] = v
            rows.append(dense)
        return rows

    def normal_form(self, vec: dict) -> dict[int, Fraction]:
        return self.echelon.normal_form(vec)

    def reduce(self, f: Polynomial) -> dict[int, Fraction]:
        return self.normal_form(self.coordinates(f))


def _shift_vector(rel_terms, m, index):
    return {index[tuple(a + b for a, b in zip(e, m))]: c for e, c in rel_terms}


@lru_cache(maxsize=4096)
def ideal_slice(p: Presentation, n: int) -> Slice:
    """Span of all ``m * u_j`` with total degree ``n`` (direct construction)."""
    mons = tuple(monomial_basis(p.ctx, n))
    index = {m: i for i, m in enumerate(mons)}
    ech = Echelon(len(mons))
    if mons:
        for u, b in zip(p.relations, p.relation_degrees):
            if b > n:
                continue
            terms = list(u.terms.items())
            for m in monomial_basis(p.ctx, n - b):
                if ech.full:
                    break
                ech.insert(_shift_vector(terms, m, index))
    return Slice(n, mons, ech, index)


def ideal_slice_incremental(p: Presentation, n: int, below: dict[int, Slice]) -> Slice:
    """``I^n = sum_i x_i I^(n - w_i) + span{u_j : |u_j| = n}``, reusing ``below``."""
    mons = tuple(monomial_basis(p.ctx, n))
    index = {m: i for i, m in enumerate(mons)}
    ech = Echelon(len(mons))
    if mons:
        for u, b in zip(p.relations, p.relation_degrees):
            if b == n:
                ech.insert(p_coords(u, index))
        for i, w in enumerate(p.ctx.weights):
            prev = below.get(n - w)
            if prev is None or not prev.rank:
                continue
            for r in prev.echelon.rows.values():
                if ech.full:
                    break
                vec = {}
                for c, v in r.items():
                    m = list(prev.monomials[c])
                    m[i] += 1
                    vec[index[tuple(m)]] = v
                ech.insert(vec)
    return Slice(n, mons, ech, index)


def p_coords(f: Polynomial, index: dict) -> dict:
    return {index[m]: c for m, c in f.terms.items()}


@dataclass(frozen=True)
class HilbertData:
    dims: tuple[int, ...]
    bound: int

    @property
    def total(self) -> int:
        return sum(self.dims)


def hilbert_function(p: Presentation, bound: int, incremental: bool = False, exact: bool = False) -> HilbertData:
    """``dims[n] = dim A^n - rank I^n`` for ``0 <= n <= bound``.

    By default slice ranks come from the integer rank routine; ``exact`` (or
    ``incremental``) builds the rational echelon forms instead.
    """
    if bound < 0:
        raise ValueError("bound must be non-negative")
    dims = []
    if not (exact or incremental):
        for n in range(bound + 1):
            r, d = slice_rank(p, n)
            dims.append(d - r)
    elif incremental:
        slices: dict[int, Slice] = {}
        for n in range(bound + 1):
            s = ideal_slice_incremental(p, n, slices)
            slices[n] = s
            dims.append(s.dim - s.rank)
    else:
        for n in range(bound + 1):
            s = ideal_slice(p, n)
            dims.append(s.dim - s.rank)
    return HilbertData(tuple(dims), bound)


def reduce_mod_ideal(p: Presentation, f: Polynomial, degree: int | None = None) -> tuple[Fraction, ...]:
    """Residue coordinates of homogeneous ``f`` over ``monomial_basis(n)``.

    The zero vector means ``f`` lies in the ideal. For ``f = 0`` pass
    ``degree`` to get a zero vector of the right length.
    """
    d = homogeneous_degree(p.ctx, f)
    if d is None:
        raise PresentationError("cannot reduce a non-homogeneous polynomial")
    if d is ZERO:
        if degree is None:
            return ()
        d = degree
    elif degree is not None and degree != d:
        raise PresentationError(f"polynomial has degree {d}, not {degree}")
    s = ideal_slice(p, d)
    res = s.reduce(f)
    out = [Fraction(0)] * s.dim
    for c, v in res.items():
        out[c] = v
    return tuple(out)


def normal_form(p: Presentation, f: Polynomial) -> Polynomial:
    """Canonical representative of ``f`` modulo the ideal (degree by degree)."""
    parts: dict[int, dict] = {}
    for m, c in f.terms.items():
        parts.setdefault(weighted_degree(p.ctx, m), {})[m] = c
    terms = {}
    for n, t in parts.items():
        s = ideal_slice(p, n)
        for col, v in s.reduce(Polynomial(p.ctx, t)).items():
            terms[s.monomials[col]] = v
    return Polynomial(p.ctx, terms)


# -- ellipticity -------------------------------------------------------------

@dataclass(frozen=True)
class EllipticityReport:
    elliptic: bool
    fd: int
    window: tuple[int, int]
    hilbert: HilbertData
    matches_expected: bool | None

    def __bool__(self):
        return self.elliptic

    def as_dict(self) -> dict:
        return {
            "elliptic": self.elliptic,
            "fd": self.fd,
            "window": list(self.window),
            "hilbert": list(self.hilbert.dims),
            "matches_expected": self.matches_expected,
        }


def _slice_rows(p: Presentation, n: int) -> tuple[list[dict], dict]:
    mons = monomial_basis(p.ctx, n)
    index = {m: i for i, m in enumerate(mons)}
    rows = []
    for u, b in zip(p.relations, p.relation_degrees):
        if b > n:
            continue
        terms = list(u.terms.items())
        rows.extend(_shift_vector(terms, m, index) for m in monomial_basis(p.ctx, n - b))
    return rows, index


def slice_rank(p: Presentation, n: int) -> tuple[int, int]:
    """Exact ``(rank, dim)`` of ``I^n`` inside ``A^n``."""
    rows, index = _slice_rows(p, n)
    return fast_rank(rows, len(index)), len(index)


def in_ideal(p: Presentation, f: Polynomial, n: int) -> bool:
    """Whether homogeneous ``f`` of degree ``n`` lies in ``I^n`` (rank test)."""
    rows, index = _slice_rows(p, n)
    vec = {index[m]: c for m, c in f.terms.items()}
    return fast_rank(rows + [vec], len(index)) == fast_rank(rows, len(index))


def window(p: Presentation) -> tuple[int, int]:
    fd = formal_dimension(degree_type_of(p))
    return fd + 1, fd + max(p.ctx.weights)


def window_vanishes(p: Presentation) -> bool:
    """True iff ``H^n = 0`` for every ``n`` in ``(F, F + W]``, i.e. ``p`` is elliptic."""
    lo, hi = window(p)
    for n in range(lo + (lo % 2), hi + 1, 2):
        r, d = slice_rank(p, n)
        if r < d:
            return False
    return True


@lru_cache(maxsize=1024)
def is_positively_elliptic(p: Presentation, exact: bool = False) -> EllipticityReport:
    """Decide finite dimensionality from the vanishing window ``(F, F + W]``.

    Any monomial of degree above ``F + W`` has a divisor whose degree falls in
    the window, so vanishing there forces vanishing everywhere above ``F``.

    Slice ranks come from FLINT by default; ``exact=True`` instead runs the
    pure-Python echelon used for normal forms. Both are exact over Q.
    """
    dt = degree_type_of(p)
    fd = formal_dimension(dt)
    top = fd + max(p.ctx.weights)
    if exact:
        hd = hilbert_function(p, top, exact=True)
    else:
        dims = []
        for n in range(top + 1):
            r, d = slice_rank(p, n) if n % 2 == 0 else (0, 0)
            dims.append(d - r)
        hd = HilbertData(tuple(dims), top)
    elliptic = all(d == 0 for d in hd.dims[fd + 1:])
    matches = None
    if elliptic:
        matches = list(hd.dims[: fd + 1]) == expected_hilbert(dt)
    return EllipticityReport(elliptic, fd, (fd + 1, top), hd, matches)


def require_elliptic(p: Presentation) -> EllipticityReport:
    rep = is_positively_elliptic(p)
    if not rep.elliptic:
        raise PreconditionError(f"{p} is not positively elliptic")
    return rep


def poincare_check(p: Presentation) -> bool:
    rep = require_elliptic(p)
    dims = rep.hilbert.dims[: rep.fd + 1]
    return dims[-1] == 1 and all(dims[i] == dims[rep.fd - i] for i in range(rep.fd + 1))


def determinant(matrix: list[list[Polynomial]], ctx: GradedContext) -> Polynomial:
    """Laplace expansion along rows with memoised column subsets."""
    k = len(matrix)
    memo: dict[int, Polynomial] = {0: ctx.one()}

    def minor(mask: int) -> Polynomial:
        # rows k - popcount(mask) .. k-1 against columns in mask
        if mask in memo:
            return memo[mask]
        row = k - bin(mask).count("1")
        total = ctx.zero()
        sign = 1
        for c in range(k):
            if mask >> c & 1:
                entry = matrix[row][c]
                if entry:
                    sub = minor(mask & ~(1 << c))
                    if sub:
                        total = total + entry * sub * sign
                sign = -sign
        memo[mask] = total
        return total

    return minor((1 << k) - 1)


def jacobian(p: Presentation) -> Polynomial:
    mat = [[partial_derivative(u, j) for j in range(p.k)] for u in p.relations]
    return determinant(mat, p.ctx)


def jacobian_class(p: Presentation) -> tuple[Polynomial, bool]:
    """Jacobian determinant and whether its class is nonzero in degree ``F``."""
    jac = jacobian(p)
    if jac.is_zero():
        return jac, False
    d = homogeneous_degree(p.ctx, jac)
    return jac, not in_ideal(p, jac, d)


# -- pure models -------------------------------------------------------------

def _linear_term(u: Polynomial) -> tuple[int, Fraction] | None:
    """First variable (canonical order) occurring linearly in ``u``."""
    for m in u.monomials():
        if sum(m) == 1:
            return m.index(1), u.terms[m]
    return None


def _restrict(ctx: GradedContext, keep: list[int]) -> GradedContext:
    return GradedContext(tuple(ctx.names[i] for i in keep), tuple(ctx.weights[i] for i in keep))


def _drop_variable(f: Polynomial, i: int, target: GradedContext) -> Polynomial:
    terms = {}
    for m, c in f.terms.items():
        if m[i]:
            raise PresentationError("variable still present after elimination")
        terms[m[:i] + m[i + 1:]] = c
    return Polynomial(target, terms)


def reduce_to_pure_model(ctx: GradedContext, relations: Sequence[Polynomial]) -> Presentation:
    """Eliminate generators that occur linearly in a relation.

    While some relation has a term ``c * x_i``, solve it for ``x_i``,
    substitute into the other relations and drop both. Relations are scanned
    in the given order and the first linear term in canonical order is used.
    """
    rels = list(relations)
    if len(rels) != ctx.nvars:
        raise PresentationError("degenerate presentation: relation count differs from generator count")
    for j, u in enumerate(rels, 1):
        d = homogeneous_degree(ctx, u)
        if d is ZERO or d is None:
            raise PresentationError(f"relation {j} must be nonzero and homogeneous")
    while True:
        for j, u in enumerate(rels):
            hit = _linear_term(u)
            if hit is not None:
                break
        else:
            break
        i, c = hit
        # the other terms of u have degree |x_i| with >= 2 factors or other
        # variables, so they never involve x_i
        solution = (u - ctx.var(i) * c) * (-1 / c)
        images = ctx.gens()
        images[i] = solution
        keep = [v for v in range(ctx.nvars) if v != i]
        new_ctx = _restrict(ctx, keep)
        new_rels = []
        for jj, w in enumerate(rels):
            if jj == j:
                continue
            w2 = _drop_variable(compose(w, images), i, new_ctx)
            if w2.is_zero():
                raise PresentationError("degenerate presentation: elimination produced a zero relation")
            new_rels.append(w2)
        ctx, rels = new_ctx, new_rels
        if not rels:
            raise PresentationError("degenerate presentation: every generator was eliminated")
    return Presentation.sorted(ctx, rels)


def is_pure(p: Presentation) -> bool:
    return all(sum(m) >= 2 for u in p.relations for m in u.terms)


def pure_model_violations(p: Presentation) -> list[int]:
    """1-based indices ``i`` with ``|u_i| < 2|x_i|``."""
    return [i + 1 for i, (a, b) in enumerate(zip(p.ctx.weights, p.relation_degrees)) if b < 2 * a]


# -- adapted splittings ------------------------------------------------------

@dataclass(frozen=True)
class Splitting:
    subset: tuple[int, ...]
    sub_presentation: Presentation
    relations: tuple[Polynomial, ...]

    def names(self) -> tuple[str, ...]:
        return self.sub_presentation.ctx.names


def _intersect_with_subring(rels: list[Polynomial], ctx: GradedContext, subset: set[int], n: int):
    """Combinations of ``rels`` (all of degree ``n``) lying in ``Q[subset]``."""
    mons = monomial_basis(ctx, n)
    outside = {m: c for c, m in enumerate(mons) if any(m[i] for i in range(ctx.nvars) if i not in subset)}
    rows = [{outside[m]: v for m, v in u.terms.items() if m in outside} for u in rels]
    combos = left_nullspace(rows, len(rels)) if outside else [{b: 1} for b in range(len(rels))]
    out = []
    for y in combos:
        f = reduce(lambda acc, bv: acc + rels[bv[0]] * bv[1], y.items(), ctx.zero())
        out.append(f)
    return out


def detect_adapted_splitting(p: Presentation) -> Splitting | None:
    """Search generator subsets ``S`` with ``|S|`` relations living in ``Q[S]``.

    Relations of equal degree may be recombined linearly. ``None`` means no
    adapted splitting was found; other splittings are not searched for.
    """
    require_elliptic(p)
    by_degree: dict[int, list[int]] = {}
    for j, d in enumerate(p.relation_degrees):
        by_degree.setdefault(d, []).append(j)
    for size in range(1, p.k):
        for subset in combinations(range(p.k), size):
            s = set(subset)
            found = []
            for d, idx in sorted(by_degree.items()):
                found.extend(_intersect_with_subring([p.relations[j] for j in idx], p.ctx, s, d))
            if len(found) != size:
                continue
            sub_ctx = _restrict(p.ctx, list(subset))
            sub_rels = [_project(f, subset, sub_ctx) for f in found]
            try:
                sub = Presentation.sorted(sub_ctx, sub_rels)
            except PresentationError:
                continue
            if not is_positively_elliptic(sub).elliptic:
                continue
            return Splitting(subset, sub, tuple(_complete(p, found)))
    return None


def _project(f: Polynomial, subset: tuple[int, ...], target: GradedContext) -> Polynomial:
    return Polynomial(target, {tuple(m[i] for i in subset): c for m, c in f.terms.items()})


def _complete(p: Presentation, found: list[Polynomial]) -> list[Polynomial]:
    """``found`` followed by original relations extending it to a basis per degree."""
    out = list(found)
    for d in sorted(set(p.relation_degrees)):
        mons = monomial_basis(p.ctx, d)
        index = {m: i for i, m in enumerate(mons)}
        ech = Echelon(len(mons))
        for f in found:
            if homogeneous_degree(p.ctx, f) == d:
                ech.insert(p_coords(f, index))
        for u, b in zip(p.relations, p.relation_degrees):
            if b == d and ech.insert(p_coords(u, index)):
                out.append(u)
    return out


def total_dimension_formula(dt: DegreeType) -> Fraction:
    return Fraction(prod(dt.B), prod(dt.A))


__all__ = [
    "DegreeType",
    "EllipticityReport",
    "HilbertData",
    "InconsistentDegreeType",
    "PreconditionError",
    "Presentation",
    "PresentationError",
    "RingError",
    "Slice",
    "Splitting",
    "degree_type_of",
    "detect_adapted_splitting",
    "expected_hilbert",
    "formal_dimension",
    "hilbert_function",
    "ideal_slice",
    "ideal_slice_incremental",
    "is_positively_elliptic",
    "jacobian",
    "jacobian_class",
    "normal_form",
    "poincare_check",
    "reduce_mod_ideal",
    "reduce_to_pure_model",
]
