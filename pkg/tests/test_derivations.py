import random

import jsonschema
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elliptica.degreetypes import sample_presentation
from elliptica.derivations import (
    Derivation,
    apply,
    derivation_space,
    halperin_check,
    halperin_degrees,
    k_minus_one_holds,
    land_in_zero_holds,
    leibniz_holds,
    preserves_ideal,
    residues,
    verify_space,
    witness,
)
from elliptica.quotient import DegreeType, PreconditionError, Presentation, PresentationError, reduce_mod_ideal
from elliptica.ring import GradedContext, Polynomial, compose, random_homogeneous
from oracles import derivation_dims_sympy

EX1 = Presentation.parse((2, 2), ["x1^2 - x2^2", "x1*x2"])

REPORT_SCHEMA = {
    "type": "object",
    "required": ["degrees", "verdict"],
    "properties": {
        "degrees": {
            "type": "object",
            "patternProperties": {
                r"^-?\d+$": {
                    "type": "object",
                    "required": ["lift_dim", "trivial_dim", "induced_dim"],
                    "properties": {k: {"type": "integer", "minimum": 0} for k in ("lift_dim", "trivial_dim", "induced_dim")},
                    "additionalProperties": False,
                }
            },
            "additionalProperties": False,
        },
        "verdict": {"enum": ["PASS", "FAIL"]},
        "witness": {"type": "array", "items": {"type": "string"}},
    },
    "additionalProperties": False,
}


def test_example_derivation_preserves_ideal():
    ctx = EX1.ctx
    d = Derivation(2, (ctx.var(0) ** 2, ctx.zero()))
    assert preserves_ideal(EX1, d)
    assert any(residues(EX1, d))
    assert d.as_strings() == ["x1^2", "0"]


def test_positive_control_degree_two():
    space = derivation_space(EX1, 2)
    assert (space.lift_dim, space.trivial_dim, space.induced_dim) == (6, 4, 2)
    ctx = EX1.ctx
    target = (ctx.var(0) ** 2, ctx.zero())
    # some basis element agrees with (x1^2, 0) modulo the ideal
    assert any(
        all(not any(reduce_mod_ideal(EX1, a - b, degree=4)) for a, b in zip(d.images, target))
        for d in space.lift_basis
    )
    assert witness(EX1, space) is not None


def test_image_degree_validated():
    ctx = EX1.ctx
    with pytest.raises(PresentationError, match="degree"):
        Derivation(-2, (ctx.var(0), ctx.zero()))


def test_apply_is_chain_rule():
    ctx = EX1.ctx
    x1, x2 = ctx.gens()
    d = Derivation(0, (x2, x1))
    assert apply(EX1, d, x1 * x2) == x2 ** 2 + x1 ** 2
    assert apply(EX1, d, ctx.const(5)) == ctx.zero()


CASES = [
    (EX1, [-2, 0, 2]),
    (Presentation.parse((2, 4), ["x1^3", "x2^2"]), [-2, 0, 2]),
    (Presentation.parse((2, 4), ["x1^2", "x2^2 + x1^4"]), [-2, 0]),
    (Presentation.parse((2, 2, 4), ["x1^2 + x2^2", "x1*x2", "x3^2 + x1^4"]), [-2, 0, 2]),
    (Presentation.parse((2, 4, 6), ["x1^2", "x2^2 + x1*x3", "x3^2 + x2^3"]), [-2, -4]),
]


@pytest.mark.parametrize("p,degrees", CASES)
def test_matches_explicit_multiplier_oracle(p, degrees):
    for d in degrees:
        space = derivation_space(p, d)
        assert (space.lift_dim, space.trivial_dim) == derivation_dims_sympy(p, d)


def test_single_generator_has_no_negative_derivations():
    p = Presentation.parse((2,), ["x1^6"])
    assert halperin_degrees(p) == []
    space = derivation_space(p, -2)
    assert space.lift_dim == 0
    assert halperin_check(p).passed


def test_fail_path_on_non_elliptic_algebra():
    # x2 is free here, so x2 -> x1 survives; precondition normally blocks this
    p = Presentation.parse((2, 4), ["x1^2", "x1*x2"])
    with pytest.raises(PreconditionError):
        halperin_check(p)
    rep = halperin_check(p, check=False)
    assert rep.verdict == "FAIL"
    assert rep.witness is not None and rep.witness.as_strings() == ["0", "x1"]
    jsonschema.validate(rep.as_dict(), REPORT_SCHEMA)
    assert "witness" in rep.as_dict()


def test_report_schema_on_pass():
    p = Presentation.parse((2, 4, 6), ["x1^2", "x2^2 + x1*x3", "x3^2 + x2^3"])
    rep = halperin_check(p, verify=True)
    assert rep.passed
    out = rep.as_dict()
    jsonschema.validate(out, REPORT_SCHEMA)
    assert list(out["degrees"]) == ["-2", "-4"]
    assert "witness" not in out


SAMPLE_TYPES = [DegreeType((2, 4), (8, 12)), DegreeType((2, 2, 4), (4, 6, 8)), DegreeType((2, 4, 6), (4, 8, 12)),
                DegreeType((2, 2, 4, 4), (4, 6, 8, 12)), DegreeType((2, 4, 4), (8, 8, 8))]


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(SAMPLE_TYPES), st.integers(0, 10 ** 6))
def test_solver_invariants_on_samples(dt, seed):
    p = sample_presentation(dt, seed).presentation
    rng = random.Random(seed)
    for d in halperin_degrees(p) + [0]:
        space = derivation_space(p, d)
        verify_space(p, space, rng)
        assert land_in_zero_holds(p, space)
        assert k_minus_one_holds(p, space)
        for der in space.lift_basis:
            for u, b in zip(p.relations, p.relation_degrees):
                assert not any(reduce_mod_ideal(p, apply(p, der, u), degree=b + d))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_leibniz_on_random_pairs(seed):
    rng = random.Random(seed)
    p = sample_presentation(DegreeType((2, 2, 4), (4, 6, 8)), seed % 7).presentation
    space = derivation_space(p, 2)
    for d in space.lift_basis:
        f = random_homogeneous(p.ctx, 2 * rng.randint(0, 3), rng, 4)
        g = random_homogeneous(p.ctx, 2 * rng.randint(0, 3), rng, 4)
        assert leibniz_holds(p, d, f, g)


def _change_basis(p, rng):
    """Triangular graded change of generators and of relations."""
    ctx = p.ctx
    images = []
    for i, w in enumerate(ctx.weights):
        lower = GradedContext(ctx.names[:i], ctx.weights[:i]) if i else None
        extra = ctx.zero()
        if lower is not None:
            f = random_homogeneous(lower, w, rng, 3)
            extra = _embed(f, ctx)
        images.append(rng.choice([1, -2, 3]) * ctx.var(i) + extra)
    rels = [compose(u, images) for u in p.relations]
    mixed = []
    for j, u in enumerate(rels):
        v = rng.choice([1, 2, -1]) * u
        for l in range(j):
            gap = p.relation_degrees[j] - p.relation_degrees[l]
            v = v + random_homogeneous(ctx, gap, rng, 2) * rels[l]
        mixed.append(v)
    return Presentation.sorted(ctx, mixed)


def _embed(f, ctx):
    pad = ctx.nvars - f.ctx.nvars
    return Polynomial(ctx, {m + (0,) * pad: c for m, c in f.terms.items()})


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(SAMPLE_TYPES[:4]), st.integers(0, 10 ** 6))
def test_induced_dim_invariant_under_basis_change(dt, seed):
    p = sample_presentation(dt, seed).presentation
    q = _change_basis(p, random.Random(seed))
    for d in halperin_degrees(p) + [0, 2]:
        assert derivation_space(p, d).induced_dim == derivation_space(q, d).induced_dim
