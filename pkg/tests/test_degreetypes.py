import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elliptica.degreetypes import (
    FilterVerdict,
    SamplingError,
    enumerate_degree_types,
    filter_pipeline,
    representable,
    sac_check,
    sample_presentation,
)
from elliptica.quotient import DegreeType, PreconditionError, is_positively_elliptic
from oracles import brute_degree_types, representable_exhaustive, sac_literal


@pytest.mark.parametrize("b,s,expected", [(4, [2], True), (10, [4], False), (10, [2, 4], True), (2, [2], False), (12, [4], True), (8, [8], False)])
def test_representable_examples(b, s, expected):
    assert representable(b, s) is expected


@given(st.integers(2, 30), st.lists(st.sampled_from(range(2, 18, 2)), min_size=1, max_size=4))
def test_representable_matches_exhaustive(b, s):
    assert representable(b, s) == representable_exhaustive(b, s)


def test_sac_examples():
    rep = sac_check(DegreeType((2, 4), (4, 10)))
    assert not rep.passed and rep.failing_subsets[0][0] == (4,)
    rep = sac_check(DegreeType((2, 2, 4, 4), (4, 6, 8, 10)))
    assert not rep.passed and (4, 4) in [s for s, _ in rep.failing_subsets]
    assert sac_check(DegreeType((2,), (4,))).passed
    assert rep.as_dict()["sac"] is False


def test_sac_failing_subsets_listed_once():
    rep = sac_check(DegreeType((2, 4, 4), (4, 8, 10)))
    subsets = [s for s, _ in rep.failing_subsets]
    assert len(subsets) == len(set(subsets))


type_lists = st.integers(1, 4).flatmap(
    lambda k: st.tuples(
        st.lists(st.sampled_from([2, 4, 6]), min_size=k, max_size=k).map(sorted),
        st.lists(st.sampled_from(range(4, 22, 2)), min_size=k, max_size=k).map(sorted),
    )
)


@settings(max_examples=150)
@given(type_lists)
def test_sac_matches_literal_reading(ab):
    A, B = ab
    assert sac_check(DegreeType(tuple(A), tuple(B))).passed == sac_literal(A, B)


@settings(max_examples=60)
@given(type_lists, st.randoms(use_true_random=False))
def test_sac_invariant_under_permuting_equal_entries(ab, rnd):
    A, B = ab
    dt = DegreeType(tuple(A), tuple(B))
    # permuting equal entries leaves the sequences unchanged; the report must be
    # the same when the indices of equal entries are shuffled
    idx = list(range(len(A)))
    groups = [list(g) for _, g in itertools.groupby(idx, key=lambda i: A[i])]
    for g in groups:
        rnd.shuffle(g)
    perm = [i for g in groups for i in g]
    assert tuple(A[i] for i in perm) == dt.A
    assert sac_check(DegreeType(tuple(A[i] for i in perm), dt.B)) == sac_check(dt)


def test_enumeration_examples():
    assert enumerate_degree_types(2) == [DegreeType((2,), (4,))]
    assert enumerate_degree_types(4) == [DegreeType((2,), (6,)), DegreeType((4,), (8,)), DegreeType((2, 2), (4, 4))]
    assert DegreeType((2, 2, 2, 4, 6), (4, 4, 6, 10, 12)) in enumerate_degree_types(20)


@pytest.mark.parametrize("fd", [0, 3, 32, -2])
def test_enumeration_range(fd):
    with pytest.raises(ValueError):
        enumerate_degree_types(fd)


@pytest.mark.parametrize("fd", range(2, 14, 2))
def test_enumeration_matches_brute_force(fd):
    assert [(dt.A, dt.B) for dt in enumerate_degree_types(fd)] == brute_degree_types(fd)


def test_enumeration_invariants_and_jobs():
    serial = enumerate_degree_types(16)
    assert enumerate_degree_types(16, jobs=2) == serial
    for dt in serial:
        assert sum(b - a for a, b in zip(dt.A, dt.B)) == 16
        assert all(b >= 2 * a for a, b in zip(dt.A, dt.B))
        assert sac_check(dt).passed
    assert len(set(serial)) == len(serial)


def test_filter_examples():
    v = filter_pipeline(DegreeType((2, 2, 4, 4), (4, 6, 8, 12)))
    assert v.outcome == "exceptional-candidate" and "large-relations-1" in v.citations
    assert filter_pipeline(DegreeType((2, 2, 6, 6), (4, 8, 12, 12))).outcome == "exceptional-candidate"
    assert filter_pipeline(DegreeType((2, 2, 4, 4), (6, 6, 8, 12))).outcome == "excluded-inequality"
    assert filter_pipeline(DegreeType((2, 2, 4, 4), (4, 6, 10, 12))).outcome == "excluded-sac"
    assert filter_pipeline(DegreeType((2,), (12,))).outcome == "out-of-sector"
    with pytest.raises(PreconditionError):
        filter_pipeline(DegreeType((2, 2), (12, 16)))
    with pytest.raises(ValueError):
        FilterVerdict("maybe", (), None)


def test_sector_ten_branches():
    # the survivor, and the k = 4 and |u_k| > 12 exclusions
    assert filter_pipeline(DegreeType((2, 2, 2, 4, 6), (4, 4, 6, 10, 12))).outcome == "exceptional-candidate"
    v = filter_pipeline(DegreeType((2, 2, 4, 6), (4, 6, 10, 12)))
    assert v.outcome == "excluded-inequality" and "sector=10" in v.citations
    v = filter_pipeline(DegreeType((2, 4, 6), (8, 12, 12)))
    assert v.outcome != "exceptional-candidate" and "top-to-bottom" in v.citations


def _hand_encoded(dt):
    """Survivors of the bounds as stated, written independently of the pipeline."""
    A, B, k = dt.A, dt.B, dt.k
    if k < 3 or A[-2] <= A[0] or any(b < 2 * a for a, b in zip(A, B)):
        return False
    if any(B[i] < A[0] + A[i + 1] for i in range(k - 1)):
        return False
    s = A[-2] + A[-1]
    if s <= 8:
        return A.count(2) >= 2 and B[-1] >= 12 and sum(b >= 12 and b % 4 == 0 for b in B) >= max(1, 2 - B.count(4))
    if s == 10:
        return B[-1] == 12 and k >= 5 and B[-2] >= 10
    if k == 3:
        return A[0] < A[1] < A[2] and B[0] >= A[0] + A[2]
    return True


def test_filter_matches_hand_encoding_up_to_20():
    for fd in range(2, 22, 2):
        for dt in enumerate_degree_types(fd):
            v = filter_pipeline(dt)
            assert (v.outcome == "exceptional-candidate") == _hand_encoded(dt), dt
            if v.outcome != "exceptional-candidate":
                assert v.citations, dt


def test_sampler_deterministic_and_elliptic():
    dt = DegreeType((2, 2), (4, 4))
    a = sample_presentation(dt, 7)
    assert a == sample_presentation(dt, 7)
    assert is_positively_elliptic(a.presentation).elliptic


def test_sampler_single_generator():
    p = sample_presentation(DegreeType((2,), (4,)), 11).presentation
    (u,) = p.relations
    assert list(u.terms) == [(2,)] and u.terms[(2,)] != 0


def test_sampler_rejects_unrealizable():
    with pytest.raises(SamplingError, match="no elliptic sample found"):
        sample_presentation(DegreeType((2, 4), (4, 10)), 0)
    with pytest.raises(ValueError):
        sample_presentation(DegreeType((2,), (4,)), 0, coeff_bound=0)


def test_sampler_coefficients_bounded():
    p = sample_presentation(DegreeType((2, 2, 4), (4, 6, 8)), 5, coeff_bound=2).presentation
    for u in p.relations:
        assert all(abs(c) <= 2 and c.denominator == 1 for c in u.terms.values())
        assert all(sum(m) >= 2 for m in u.terms)
