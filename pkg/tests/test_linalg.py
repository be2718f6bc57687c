from fractions import Fraction

import sympy
from hypothesis import given
from hypothesis import strategies as st

from elliptica.linalg import Echelon, fast_rank, left_nullspace, nullspace, primitive, rank

matrices = st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=1, max_size=6)
)


def sparse(rows):
    return [{c: v for c, v in enumerate(r) if v} for r in rows]


def test_primitive():
    assert primitive({0: Fraction(-2, 3), 2: Fraction(4, 3)}) == {0: 1, 2: -2}
    assert primitive({3: 6, 5: 9}) == {3: 2, 5: 3}
    assert primitive({1: 0}) == {}


@given(matrices)
def test_rank_matches_sympy(rows):
    n = len(rows[0])
    expected = sympy.Matrix(rows).rank()
    assert rank(sparse(rows), n) == expected
    assert fast_rank(sparse(rows), n) == expected


@given(matrices)
def test_nullspace(rows):
    n = len(rows[0])
    null = nullspace(sparse(rows), n)
    assert len(null) == n - sympy.Matrix(rows).rank()
    for v in null:
        for r in rows:
            assert sum(r[c] * x for c, x in v.items()) == 0
    assert rank(null, n) == len(null) if null else True


@given(matrices)
def test_left_nullspace(rows):
    n = len(rows[0])
    for y in left_nullspace(sparse(rows), n):
        assert all(sum(y.get(b, 0) * rows[b][c] for b in range(len(rows))) == 0 for c in range(n))


@given(matrices, st.lists(st.integers(-3, 3), min_size=6, max_size=6))
def test_normal_form_is_canonical(rows, vec):
    n = len(rows[0])
    e = Echelon(n)
    for r in sparse(rows):
        e.insert(r)
    v = {c: x for c, x in enumerate(vec[:n]) if x}
    nf = e.normal_form(v)
    assert not set(nf) & set(e.pivots())
    # adding any row leaves the normal form unchanged
    for r in sparse(rows):
        shifted = dict(v)
        for c, x in r.items():
            shifted[c] = shifted.get(c, 0) + 5 * x
        assert e.normal_form(shifted) == nf
    assert e.contains(sparse(rows)[0]) if sparse(rows)[0] else True
