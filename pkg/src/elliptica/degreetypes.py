"""Degree types: realizability (SAC), enumeration, case filtering, sampling.

A degree type ``(A; B)`` lists generator degrees ``A`` and relation degrees
``B``. Realizable types are characterized by the strong algebraic condition:
for every subsequence ``S`` of ``A`` at least ``|S|`` of the ``B_j`` are
non-negative integer combinations of ``S`` with coefficient sum at least 2.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import NamedTuple

from .quotient import (
    DegreeType,
    PreconditionError,
    Presentation,
    window_vanishes,
    formal_dimension,
)
from .ring import GradedContext, random_homogeneous


class SamplingError(RuntimeError):
    pass


# -- SAC ---------------------------------------------------------------------

@lru_cache(maxsize=None)
def _reachable(gens: tuple[int, ...], limit: int) -> tuple[bool, ...]:
    # coin-problem table: reach[n] iff n is a non-negative combination of gens
    reach = [False] * (limit + 1)
    reach[0] = True
    for n in range(1, limit + 1):
        reach[n] = any(n >= g and reach[n - g] for g in gens)
    return tuple(reach)


def representable(b: int, s) -> bool:
    """``b = sum lambda_m s_m`` with ``lambda_m >= 0`` and ``sum lambda_m >= 2``.

    Peel off two (possibly equal) elements, then ask the coin table whether
    the remainder is reachable with any coefficient sum.
    """
    gens = tuple(sorted(set(s)))
    if not gens:
        raise ValueError("need at least one generator degree")
    if b < 2 * gens[0]:
        return False
    reach = _reachable(gens, b)
    for i, x in enumerate(gens):
        for y in gens[i:]:
            rest = b - x - y
            if rest >= 0 and reach[rest]:
                return True
    return False


@dataclass(frozen=True)
class SacReport:
    passed: bool
    failing_subsets: tuple[tuple[tuple[int, ...], int], ...]

    def __bool__(self):
        return self.passed

    def as_dict(self) -> dict:
        return {
            "sac": self.passed,
            "failing_subsets": [{"subset": list(s), "representable": c} for s, c in self.failing_subsets],
        }


def sac_check(dt: DegreeType) -> SacReport:
    """Check SAC on every subsequence of ``A``; report each failing one once."""
    failing = []
    seen = set()
    for size in range(1, dt.k + 1):
        for idx in combinations(range(dt.k), size):
            values = tuple(dt.A[i] for i in idx)
            if values in seen:
                continue
            seen.add(values)
            count = sum(1 for b in dt.B if representable(b, values))
            if count < size:
                failing.append((values, count))
    return SacReport(not failing, tuple(failing))


# -- enumeration ---------------------------------------------------------------

def _canonical_key(dt: DegreeType):
    return (dt.k, dt.A, dt.B)


def _extend(prefix_a, prefix_b, remaining):
    if remaining == 0:
        if prefix_a:
            yield tuple(prefix_a), tuple(prefix_b)
        return
    lo_a = prefix_a[-1] if prefix_a else 2
    lo_b = prefix_b[-1] if prefix_b else 0
    for a in range(lo_a, remaining + 1, 2):
        # B - A >= A, so each generator uses at least ``a`` of the budget
        for b in range(max(lo_b, 2 * a), a + remaining + 1, 2):
            yield from _extend(prefix_a + [a], prefix_b + [b], remaining - (b - a))


def _types_with_first(args):
    fd, a, b = args
    out = []
    for A, B in _extend([a], [b], fd - (b - a)):
        dt = DegreeType(A, B)
        if sac_check(dt).passed:
            out.append(dt)
    return out


def enumerate_degree_types(fd: int, jobs: int = 1) -> list[DegreeType]:
    """All SAC types of formal dimension ``fd`` with ``B_i >= 2 A_i``.

    Ordered by number of generators, then ``A``, then ``B``. Work is split by
    the first (A_1, B_1) pair; the merged result does not depend on ``jobs``.
    """
    if fd % 2 or not 2 <= fd <= 30:
        raise ValueError(f"formal dimension must be even and in [2, 30], got {fd}")
    heads = [(fd, a, b) for a in range(2, fd + 1, 2) for b in range(2 * a, a + fd + 1, 2)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            chunks = list(ex.map(_types_with_first, heads))
    else:
        chunks = [_types_with_first(h) for h in heads]
    found = {dt for chunk in chunks for dt in chunk}
    return sorted(found, key=_canonical_key)


# -- filter pipeline ------------------------------------------------------------

OUTCOMES = (
    "excluded-sac",
    "excluded-fd-exceeds",
    "excluded-inequality",
    "exceptional-candidate",
    "out-of-sector",
)

FD_LIMIT = 20


@dataclass(frozen=True)
class FilterVerdict:
    outcome: str
    citations: tuple[str, ...]
    sector: int | None
    reason: str = ""

    def __post_init__(self):
        if self.outcome not in OUTCOMES:
            raise ValueError(f"unknown outcome {self.outcome!r}")

    @property
    def sector_label(self) -> str | None:
        return sector_label(self.sector)


def sector_label(sector: int | None) -> str | None:
    if sector is None:
        return None
    if sector <= 8:
        return "<=8"
    if sector == 10:
        return "=10"
    return ">=12"


def _min_relations(lower: list[int]) -> list[int]:
    """Smallest non-decreasing sequence dominating ``lower`` entrywise."""
    out = []
    for x in lower:
        out.append(max(x, out[-1]) if out else x)
    return out


def _entry_bounds(A: tuple[int, ...]) -> list[int]:
    # pure model: B_i >= 2 A_i; non-split: B_i >= A_1 + A_{i+1} for i < k
    k = len(A)
    return [max(2 * A[i], A[0] + A[i + 1]) if i < k - 1 else 2 * A[i] for i in range(k)]


class _Verdicts:
    """Accumulates citations while a sector's bounds are applied."""

    def __init__(self, dt: DegreeType, sector: int):
        self.dt = dt
        self.sector = sector
        self.cites: list[str] = []

    def cite(self, *tags):
        for t in tags:
            if t not in self.cites:
                self.cites.append(t)

    def verdict(self, outcome, reason="", *tags):
        self.cite(*tags)
        return FilterVerdict(outcome, tuple(self.cites), self.sector, reason)

    def check_bounds(self, lower: list[int], *tags):
        """fd-exceeds if even the least admissible B overshoots; else entrywise check."""
        self.cite(*tags)
        least = _min_relations(lower)
        floor = sum(least) - sum(self.dt.A)
        if floor > FD_LIMIT:
            return self.verdict("excluded-fd-exceeds", f"every admissible B gives fd >= {floor}")
        for i, (b, lo) in enumerate(zip(self.dt.B, lower), 1):
            if b < lo:
                return self.verdict("excluded-inequality", f"B_{i} = {b} < {lo}")
        return None


def filter_pipeline(dt: DegreeType) -> FilterVerdict:
    """Classify ``dt`` assuming a non-split algebra with a nonzero negative derivation.

    The sector is ``A_{k-1} + A_k``. Each exclusion names the lemmas whose
    bounds it applies; survivors are the exceptional candidates that need a
    separate argument.
    """
    fd = formal_dimension(dt)
    if fd > FD_LIMIT:
        raise PreconditionError(f"filter pipeline covers fd <= {FD_LIMIT}, got {fd}")
    A, B, k = dt.A, dt.B, dt.k
    sector = A[-2] + A[-1] if k >= 2 else None
    sac = sac_check(dt)
    if not sac.passed:
        subset = ",".join(map(str, sac.failing_subsets[0][0]))
        return FilterVerdict("excluded-sac", ("sac",), sector, f"fails SAC({subset})")
    if k == 1:
        return FilterVerdict(
            "out-of-sector", ("land-in-zero",), None, "one generator: every negative derivation lands in degree 0"
        )
    v = _Verdicts(dt, sector)
    if any(b < 2 * a for a, b in zip(A, B)):
        return v.verdict("excluded-inequality", "B_i < 2 A_i", "pure-model")
    # generators of the lowest degree map to H^0, hence to 0; k-1 needs two more
    if A[-2] <= A[0]:
        return v.verdict("excluded-inequality", "fewer than two generators above the lowest degree", "land-in-zero", "k-1")
    if sector <= 8:
        return _sector_small(v)
    if sector == 10:
        return _sector_ten(v)
    return _sector_large(v)


def _sector_small(v: _Verdicts) -> FilterVerdict:
    dt = v.dt
    A, B, k = dt.A, dt.B, dt.k
    v.cite("sector<=8")
    # here A_{k-1} = A_k = 4 and A_1 = 2; delta: H^4 -> H^2 needs rank m >= 2
    g2 = A.count(2)
    if g2 < 2:
        return v.verdict("excluded-inequality", "rank of H^4 -> H^2 is at most g_2 < 2", "land-in-zero", "k-1")
    lower = _entry_bounds(A)
    lower[-1] = max(lower[-1], 12)
    hit = v.check_bounds(lower, "pure-model", "degree-inequality-1", "large-relations-1")
    if hit:
        return hit
    # r_12 + r_16 + ... >= max(1, m - r_4), weakest at m = 2
    r4 = B.count(4)
    big = sum(1 for b in B if b >= 12 and b % 4 == 0)
    need = max(1, 2 - r4)
    if big < need:
        return v.verdict("excluded-inequality", f"r_12 + r_16 + ... = {big} < {need}")
    return v.verdict("exceptional-candidate", "not excluded by the sector <= 8 bounds")


def _sector_ten(v: _Verdicts) -> FilterVerdict:
    dt = v.dt
    A, B, k = dt.A, dt.B, dt.k
    v.cite("sector=10")
    # A_{k-1} = 4, A_k = 6, A_1 = 2, delta(x_{k-1}) = x_1
    if B[-1] > 12:
        # SAC(6) forces B_{k-1} >= 12 or B_k >= 18; take the cheaper option
        lower = _entry_bounds(A)
        if k == 3:
            lower[0] = max(lower[0], A[0] + A[2])
        lower[-1] = max(lower[-1], 14)
        options = []
        for extra in ((-2, 12), (-1, 18)):
            lo = list(lower)
            lo[extra[0]] = max(lo[extra[0]], extra[1])
            options.append(lo)
        least = min(options, key=lambda lo: sum(_min_relations(lo)))
        hit = v.check_bounds(least, "pure-model", "degree-inequality-1", "degree-inequality-2", "sac(6)")
        if hit:
            return hit
        return v.verdict("excluded-inequality", "|u_k| > 12 forces k = 3 with |u_1| < |x_1| + |x_3|", "degree-inequality-2")
    v.cite("top-to-bottom")
    if k == 3:
        return v.verdict("excluded-inequality", "delta^2(x_k) = 0 leaves delta(x_k) no room when k = 3", "k-1")
    # second case of the large relations bound: r_10 + r_12 + ... >= 1 + max(1, m - r_4), m >= 1
    lower = _entry_bounds(A)
    lower[-2] = max(lower[-2], 10)
    hit = v.check_bounds(lower, "pure-model", "degree-inequality-1", "large-relations-2")
    if hit:
        return hit
    high = sum(1 for b in B if b >= 10)
    need = (k - A.count(2) - A.count(4)) + max(1, 1 - B.count(4))
    if high < need:
        return v.verdict("excluded-inequality", f"r_10 + r_12 + ... = {high} < {need}")
    if k == 4:
        return v.verdict(
            "excluded-inequality",
            "k = 4: a relation x_{k-1}^2 + r or x_{k-1}^3 + r forces a splitting",
            "land-in-zero",
        )
    return v.verdict("exceptional-candidate", "not excluded by the sector = 10 bounds")


def _sector_large(v: _Verdicts) -> FilterVerdict:
    dt = v.dt
    A, B, k = dt.A, dt.B, dt.k
    v.cite("sector>=12")
    lower = _entry_bounds(A)
    if k == 3:
        # delta(x_2), delta(x_3) independent forces A_1 < A_2 < A_3, and then
        # delta(x_2) is a power of x_1
        if not A[0] < A[1] < A[2]:
            return v.verdict("excluded-inequality", "images of x_2, x_3 must be independent", "land-in-zero", "k-1")
        lower[0] = max(lower[0], A[0] + A[2])
        tags = ("pure-model", "degree-inequality-1", "degree-inequality-2")
    else:
        tags = ("pure-model", "degree-inequality-1")
    hit = v.check_bounds(lower, *tags)
    if hit:
        return hit
    return v.verdict("exceptional-candidate", "not excluded by the sector >= 12 bounds")


# -- sampling -------------------------------------------------------------------

class SampledPresentation(NamedTuple):
    presentation: Presentation
    attempts: int


def sample_presentation(
    dt: DegreeType, seed: int, coeff_bound: int = 5, max_attempts: int = 200
) -> SampledPresentation:
    """Random pure presentation of type ``dt`` that is certified elliptic.

    Each relation is a random integer combination (coefficients uniform in
    ``[-coeff_bound, coeff_bound]``) of the monomials of its degree with at
    least two factors. Draws repeat until the vanishing window test passes.
    """
    if coeff_bound < 1:
        raise ValueError("coeff_bound must be at least 1")
    if not sac_check(dt).passed:
        raise SamplingError(f"no elliptic sample found: {dt} fails SAC and is not realizable")
    ctx = GradedContext.from_weights(dt.A)
    rng = random.Random(f"{dt.literal()}|{seed}|{coeff_bound}")
    for attempt in range(1, max_attempts + 1):
        rels = tuple(random_homogeneous(ctx, b, rng, coeff_bound, min_total_degree=2) for b in dt.B)
        if any(u.is_zero() for u in rels):
            continue
        p = Presentation(ctx, rels)
        if window_vanishes(p):
            return SampledPresentation(p, attempt)
    raise SamplingError(f"no elliptic sample found for {dt} after {max_attempts} attempts")


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("ELLIPTICA_JOBS", "1")))
    except ValueError:
        return 1
