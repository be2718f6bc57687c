"""Derivations of a positively elliptic algebra via ideal-preserving lifts.

A derivation of ``H = A/I`` of degree ``d`` is represented by its values on
the generators, ``delta(x_i)`` in ``A^(|x_i| + d)``. Such a lift induces a
derivation of ``H`` exactly when ``delta(u_j)`` lies in ``I`` for every
relation. Lifts whose images all lie in ``I`` induce zero; those form the
trivial subspace.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import left_nullspace, nullspace
from .quotient import (
    PreconditionError,
    Presentation,
    PresentationError,
    ideal_slice,
    is_positively_elliptic,
)
from .ring import (
    ZERO,
    Polynomial,
    format_polynomial,
    homogeneous_degree,
    monomial_basis,
    partial_derivative,
)


@dataclass(frozen=True)
class Derivation:
    degree: int
    images: tuple[Polynomial, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        for i, f in enumerate(self.images):
            d = homogeneous_degree(f.ctx, f)
            if d is ZERO:
                continue
            want = f.ctx.weights[i] + self.degree
            if d != want:
                raise PresentationError(f"image of generator {i + 1} has degree {d}, expected {want}")

    def as_strings(self) -> list[str]:
        return [format_polynomial(f) for f in self.images]


def apply(p: Presentation, d: Derivation, f: Polynomial) -> Polynomial:
    """``delta(f) = sum_i df/dx_i * delta(x_i)``; every sign is +1 in even degrees."""
    if len(d.images) != p.k:
        raise PresentationError("derivation needs one image per generator")
    out = p.ctx.zero()
    for i, img in enumerate(d.images):
        if img:
            df = partial_derivative(f, i)
            if df:
                out = out + df * img
    return out


@dataclass
class DerivationSpace:
    degree: int
    lift_basis: list[Derivation]
    trivial_dim: int
    # coefficient vectors of the lift basis over ``unknowns``
    vectors: list[dict[int, int]] = field(default_factory=list, repr=False)
    unknowns: list[tuple[int, tuple[int, ...]]] = field(default_factory=list, repr=False)

    @property
    def lift_dim(self) -> int:
        return len(self.lift_basis)

    @property
    def induced_dim(self) -> int:
        return self.lift_dim - self.trivial_dim

    def as_dict(self) -> dict:
        return {"lift_dim": self.lift_dim, "trivial_dim": self.trivial_dim, "induced_dim": self.induced_dim}


def _unknowns(p: Presentation, degree: int):
    out = []
    for i, w in enumerate(p.ctx.weights):
        for m in monomial_basis(p.ctx, w + degree):
            out.append((i, m))
    return out


def derivation_space(p: Presentation, degree: int, check: bool = True) -> DerivationSpace:
    """All ideal-preserving lifts of the given degree and their trivial part.

    Unknowns are the coefficients of each ``delta(x_i)`` over the monomials
    of degree ``|x_i| + degree``. For every relation the residue of
    ``delta(u_j)`` modulo the ideal slice must vanish, which is linear in the
    unknowns. ``check=False`` skips the ellipticity precondition for callers
    that have already established it.
    """
    if check and not is_positively_elliptic(p).elliptic:
        raise PreconditionError(f"{p} is not positively elliptic")
    if degree % 2:
        return DerivationSpace(degree, [], 0)
    unknowns = _unknowns(p, degree)
    partials = [[partial_derivative(u, i) for i in range(p.k)] for u in p.relations]
    rows: dict[tuple[int, int], dict[int, Fraction]] = {}
    for j, (u, b) in enumerate(zip(p.relations, p.relation_degrees)):
        t = b + degree
        if t < 0:
            continue
        s = ideal_slice(p, t)
        for col, (i, m) in enumerate(unknowns):
            du = partials[j][i]
            if not du:
                continue
            shifted = {tuple(a + e for a, e in zip(mm, m)): c for mm, c in du.terms.items()}
            res = s.normal_form({s.index[mm]: c for mm, c in shifted.items()})
            for r, v in res.items():
                rows.setdefault((j, r), {})[col] = v
    vectors = nullspace(list(rows.values()), len(unknowns))
    basis = [_to_derivation(p, degree, unknowns, v) for v in vectors]
    trivial = sum(ideal_slice(p, w + degree).rank for w in p.ctx.weights if w + degree >= 0)
    space = DerivationSpace(degree, basis, trivial, vectors, unknowns)
    if space.induced_dim < 0:
        raise AssertionError("trivial lifts exceed the solution space")
    return space


def _to_derivation(p: Presentation, degree: int, unknowns, vec) -> Derivation:
    terms: list[dict] = [{} for _ in range(p.k)]
    for col, c in vec.items():
        i, m = unknowns[col]
        terms[i][m] = c
    return Derivation(degree, tuple(Polynomial(p.ctx, t) for t in terms))


def residues(p: Presentation, d: Derivation) -> list[dict[int, Fraction]]:
    """Normal form of every image; all empty iff ``d`` induces zero on H."""
    out = []
    for i, img in enumerate(d.images):
        n = p.ctx.weights[i] + d.degree
        if n < 0 or not img:
            out.append({})
            continue
        out.append(ideal_slice(p, n).reduce(img))
    return out


def witness(p: Presentation, space: DerivationSpace) -> Derivation | None:
    """A lift basis element that induces a nonzero derivation, if any."""
    for d in space.lift_basis:
        if any(residues(p, d)):
            return d
    return None


# -- checkable consequences ---------------------------------------------------

def preserves_ideal(p: Presentation, d: Derivation) -> bool:
    for u, b in zip(p.relations, p.relation_degrees):
        img = apply(p, d, u)
        if img and any(ideal_slice(p, b + d.degree).reduce(img).values()):
            return False
    return True


def land_in_zero_holds(p: Presentation, space: DerivationSpace) -> bool:
    """In negative degree every image landing in degree 0 is the zero constant."""
    if space.degree >= 0:
        return True
    for d in space.lift_basis:
        for i, img in enumerate(d.images):
            if p.ctx.weights[i] + space.degree == 0 and img:
                return False
    return True


def k_minus_one_holds(p: Presentation, space: DerivationSpace) -> bool:
    """A lift killing ``k - 1`` generators modulo I kills the last one too."""
    if space.degree >= 0 or not space.lift_basis:
        return True
    res = [residues(p, d) for d in space.lift_basis]
    # flatten residues per generator into disjoint column ranges
    offsets, widths = [], []
    total = 0
    for i, w in enumerate(p.ctx.weights):
        n = w + space.degree
        size = len(monomial_basis(p.ctx, n)) if n >= 0 else 0
        offsets.append(total)
        widths.append(size)
        total += size
    for i in range(p.k):
        others = [
            {offsets[g] + c: v for g in range(p.k) if g != i for c, v in r[g].items()}
            for r in res
        ]
        for y in left_nullspace(others, total):
            combo: dict[int, Fraction] = {}
            for b, coef in y.items():
                for c, v in res[b][i].items():
                    combo[c] = combo.get(c, 0) + coef * v
            if any(combo.values()):
                return False
    return True


def leibniz_holds(p: Presentation, d: Derivation, f: Polynomial, g: Polynomial) -> bool:
    return apply(p, d, f * g) == apply(p, d, f) * g + f * apply(p, d, g)


# -- Halperin check -----------------------------------------------------------

@dataclass
class HalperinReport:
    degrees: dict[int, DerivationSpace]
    verdict: str
    witness: Derivation | None = None

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"

    def as_dict(self) -> dict:
        out = {
            "degrees": {str(d): s.as_dict() for d, s in sorted(self.degrees.items(), reverse=True)},
            "verdict": self.verdict,
        }
        if self.witness is not None:
            out["witness"] = self.witness.as_strings()
        return out


def halperin_degrees(p: Presentation) -> list[int]:
    """Even degrees ``-2, -4, ..., -(W - 2)``; lower degrees can only hit H^0."""
    w = max(p.ctx.weights)
    return list(range(-2, -(w - 2) - 1, -2))


def halperin_check(p: Presentation, check: bool = True, verify: bool = False) -> HalperinReport:
    """Negative-degree derivation spaces and the PASS/FAIL verdict.

    ``verify=True`` also asserts ideal preservation, Land in Zero and the
    k-1 property on every computed space.
    """
    if check and not is_positively_elliptic(p).elliptic:
        raise PreconditionError(f"{p} is not positively elliptic")
    spaces = {}
    found = None
    for d in halperin_degrees(p):
        space = derivation_space(p, d, check=False)
        spaces[d] = space
        if verify:
            verify_space(p, space)
        if space.induced_dim and found is None:
            found = witness(p, space)
    verdict = "FAIL" if any(s.induced_dim for s in spaces.values()) else "PASS"
    return HalperinReport(spaces, verdict, found)


def verify_space(p: Presentation, space: DerivationSpace, rng: random.Random | None = None) -> None:
    """Raise AssertionError if a solver invariant fails on ``space``."""
    for d in space.lift_basis:
        if not preserves_ideal(p, d):
            raise AssertionError(f"lift does not preserve the ideal: {d.as_strings()}")
    if not land_in_zero_holds(p, space):
        raise AssertionError("a negative-degree lift has a nonzero constant image")
    if not k_minus_one_holds(p, space):
        raise AssertionError("k-1 property violated")
    if rng is not None and space.lift_basis:
        from .ring import random_homogeneous

        for d in space.lift_basis[:3]:
            f = random_homogeneous(p.ctx, 2 * rng.randint(1, 3), rng, 3)
            g = random_homogeneous(p.ctx, 2 * rng.randint(1, 3), rng, 3)
            if not leibniz_holds(p, d, f, g):
                raise AssertionError("Leibniz rule fails")
