"""Exact sparse linear algebra over Q.

Vectors are dicts ``column -> coefficient``. Rows are stored fraction-free as
primitive integer vectors; the pivot of a row is its first nonzero column.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

import flint


def primitive(vec: dict) -> dict[int, int]:
    """Integer multiple of ``vec`` with coprime entries and positive lead."""
    vec = {c: v for c, v in vec.items() if v}
    if not vec:
        return {}
    den = 1
    for v in vec.values():
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    ints = {c: int(v * den) for c, v in vec.items()}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
    if ints[min(ints)] < 0:
        g = -g
    return {c: v // g for c, v in ints.items()}


class Echelon:
    """Incrementally built row echelon form.

    ``insert`` keeps rows in semi-echelon form, which is all rank queries
    need. ``normal_form`` needs the fully reduced form and builds it lazily.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: dict[int, dict[int, int]] = {}
        self._reduced = True

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def full(self) -> bool:
        return len(self.rows) == self.ncols

    def insert(self, vec: dict) -> bool:
        """Add ``vec`` to the row space; True iff the rank grew."""
        v = primitive(vec)
        rows = self.rows
        while v:
            c = min(v)
            p = rows.get(c)
            if p is None:
                rows[c] = v
                self._reduced = False
                return True
            a, b = p[c], v[c]
            g = gcd(a, b)
            a, b = a // g, b // g
            out = {k: a * x for k, x in v.items()}
            for k, x in p.items():
                y = out.get(k, 0) - b * x
                if y:
                    out[k] = y
                else:
                    out.pop(k, None)
            v = primitive(out)
        return False

    def reduce_fully(self) -> None:
        if self._reduced:
            return
        rows = self.rows
        leads = sorted(rows)
        for c in reversed(leads):
            r = rows[c]
            for c2 in leads:
                if c2 >= c:
                    break
                q = rows[c2]
                b = q.get(c)
                if not b:
                    continue
                a = r[c]
                g = gcd(a, b)
                a, b = a // g, b // g
                out = {k: a * x for k, x in q.items()}
                for k, x in r.items():
                    y = out.get(k, 0) - b * x
                    if y:
                        out[k] = y
                    else:
                        out.pop(k, None)
                rows[c2] = primitive(out)
        self._reduced = True

    def normal_form(self, vec: dict) -> dict[int, Fraction]:
        """Exact residue of ``vec``; linear in ``vec`` and zero on pivots."""
        self.reduce_fully()
        out = {c: Fraction(v) for c, v in vec.items() if v}
        for c in [c for c in out if c in self.rows]:
            coef = out.get(c)
            if not coef:
                continue
            r = self.rows[c]
            f = coef / r[c]
            for k, x in r.items():
                y = out.get(k, 0) - f * x
                if y:
                    out[k] = y
                else:
                    out.pop(k, None)
        return out

    def contains(self, vec: dict) -> bool:
        return not self.normal_form(vec)

    def basis(self) -> list[dict[int, int]]:
        """Fully reduced integer rows ordered by pivot column."""
        self.reduce_fully()
        return [dict(sorted(self.rows[c].items())) for c in sorted(self.rows)]

    def pivots(self) -> list[int]:
        return sorted(self.rows)


def rank(rows: list[dict], ncols: int) -> int:
    e = Echelon(ncols)
    for r in rows:
        e.insert(r)
    return e.rank


def nullspace(rows: list[dict], ncols: int) -> list[dict[int, int]]:
    """Basis of ``{x : r . x = 0 for all rows r}`` as primitive integer vectors.

    One basis vector per free (non-pivot) column, in column order.
    """
    e = Echelon(ncols)
    for r in rows:
        e.insert(r)
    e.reduce_fully()
    pivot_rows = [(c, e.rows[c]) for c in sorted(e.rows)]
    out = []
    for f in range(ncols):
        if f in e.rows:
            continue
        x = {f: Fraction(1)}
        for c, r in pivot_rows:
            v = r.get(f)
            if v:
                x[c] = Fraction(-v, r[c])
        out.append(primitive(x))
    return out


def left_nullspace(rows: list[dict], ncols: int) -> list[dict[int, int]]:
    """Combinations ``y`` of the rows with ``sum y_b rows[b] = 0``."""
    cols: dict[int, dict[int, object]] = {}
    for b, r in enumerate(rows):
        for c, v in r.items():
            if v:
                cols.setdefault(c, {})[b] = v
    return nullspace(list(cols.values()), len(rows))


def fast_rank(rows: list[dict], ncols: int) -> int:
    """Exact rank over Q using FLINT's integer matrices.

    Same answer as :func:`rank`; much faster on the dense slices that show
    up in vanishing-window checks.
    """
    if not rows or not ncols:
        return 0
    dense = []
    for vec in rows:
        line = [0] * ncols
        for c, v in primitive(vec).items():
            line[c] = v
        dense.append(line)
    return flint.fmpz_mat(dense).rank()
