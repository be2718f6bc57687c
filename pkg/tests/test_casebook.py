import json

import pytest

from elliptica import casebook
from elliptica.casebook import (
    SWEEP_HEADER,
    exceptional_lists,
    paper_examples,
    sector8_k4_possibilities,
    sweep_halperin,
    sweep_types,
)
from elliptica.degreetypes import SamplingError
from elliptica.derivations import Derivation, DerivationSpace, HalperinReport
from elliptica.quotient import DegreeType

T = DegreeType

EXPECTED = {
    "<=8": [T((2, 2, 4, 4), (4, 6, 8, 12)), T((2, 2, 4, 4), (4, 8, 8, 12)), T((2, 2, 2, 4, 4), (4, 4, 6, 8, 12))],
    "=10": [T((2, 2, 2, 4, 6), (4, 4, 6, 10, 12))],
    ">=12": [T((2, 4, 6, 6), (6, 8, 12, 12)), T((2, 2, 6, 6), (4, 8, 12, 12))],
}


def test_exceptional_lists_exact():
    groups = exceptional_lists()
    assert {k: set(v) for k, v in groups.items()} == {k: set(v) for k, v in EXPECTED.items()}
    assert exceptional_lists() == groups


def test_five_way_list_is_reconstructed():
    rows = sector8_k4_possibilities()
    assert [dt.B for dt, _ in rows] == [(4, 6, 8, 12), (4, 6, 8, 14), (4, 6, 10, 12), (4, 8, 8, 12), (6, 6, 8, 12)]
    fates = {dt.B: fate.split(":")[0] for dt, fate in rows}
    assert fates[(4, 6, 10, 12)] == fates[(4, 6, 8, 14)] == "excluded-sac"
    assert fates[(6, 6, 8, 12)] == "excluded-inequality"
    assert fates[(4, 6, 8, 12)] == fates[(4, 8, 8, 12)] == "exceptional-candidate"


def test_paper_examples_ledger():
    ledger = paper_examples()
    assert all(e.passed for e in ledger), [e.as_dict() for e in ledger if not e.passed]
    assert ledger[0].observed == [True, False]
    assert ledger[1].observed[1] == [1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1]
    json.dumps([e.as_dict() for e in ledger])


def test_small_sweep_passes():
    rep = sweep_halperin(4, 10, seed=0)
    assert rep.all_pass and rep.complete
    assert [r.samples for r in rep.results.values()] == [10] * 4
    out = rep.as_dict()
    assert out["header"] == SWEEP_HEADER
    assert [t["A"] for t in out["types"]] == [[2], [2], [4], [2, 2]]


def test_sweep_is_deterministic():
    a = sweep_halperin(6, 3, seed=5).as_dict()
    b = sweep_halperin(6, 3, seed=5).as_dict()
    assert a == b
    assert sweep_halperin(6, 3, seed=5, jobs=2).as_dict() == a


def test_sweep_arguments():
    with pytest.raises(ValueError):
        sweep_halperin(22, 1, 0)
    with pytest.raises(ValueError):
        sweep_halperin(4, 0, 0)


def test_failure_witness_is_recorded(monkeypatch):
    dt = T((2, 2), (4, 4))

    def fake(p, check=True, verify=False):
        d = Derivation(-2, (p.ctx.zero(), p.ctx.zero()))
        return HalperinReport({-2: DerivationSpace(-2, [d], 0)}, "FAIL", d)

    monkeypatch.setattr(casebook, "halperin_check", fake)
    monkeypatch.setattr(casebook, "witness", lambda p, space: space.lift_basis[0])
    rep = sweep_types([dt], 2, seed=1)
    res = rep.results[dt]
    assert not rep.all_pass and not res.all_pass
    assert [f["seed"] for f in res.failures] == [casebook.sample_seed(1, 0), casebook.sample_seed(1, 1)]
    assert res.failures[0]["degree"] == -2 and res.failures[0]["witness"] == ["0", "0"]
    assert res.failures[0]["presentation"].startswith("vars:")


def test_sampling_error_is_per_type(monkeypatch):
    def boom(dt, seed, coeff_bound=5, max_attempts=200):
        raise SamplingError("no elliptic sample found (forced)")

    monkeypatch.setattr(casebook, "sample_presentation", boom)
    rep = sweep_types([T((2,), (4,)), T((2, 2), (4, 4))], 2, seed=0)
    assert rep.all_pass and not rep.complete
    assert all(r.sampling_error for r in rep.results.values())
