"""Golden lists, the worked-example battery, and randomized Halperin sweeps."""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .degreetypes import (
    FD_LIMIT,
    SamplingError,
    enumerate_degree_types,
    filter_pipeline,
    sac_check,
    sample_presentation,
)
from .derivations import derivation_space, halperin_check, verify_space, witness
from .quotient import (
    DegreeType,
    Presentation,
    hilbert_function,
    is_positively_elliptic,
    reduce_to_pure_model,
)

SECTORS = ("<=8", "=10", ">=12")

SWEEP_HEADER = (
    "Randomized check of the negative-degree derivation statement. Each degree "
    "type is realized by finitely many seeded random presentations; a PASS here "
    "is evidence for those samples only, not a proof over all algebras of the type."
)


# -- exceptional lists -------------------------------------------------------------

def filtered_catalog(fd_max: int = FD_LIMIT, jobs: int = 1) -> list[tuple[DegreeType, object]]:
    """Every enumerated type with fd <= fd_max paired with its filter verdict."""
    out = []
    for fd in range(2, fd_max + 1, 2):
        for dt in enumerate_degree_types(fd, jobs=jobs):
            out.append((dt, filter_pipeline(dt)))
    return out


def exceptional_lists(jobs: int = 1) -> dict[str, list[DegreeType]]:
    """Types surviving the sector bounds, grouped by ``A_{k-1} + A_k``."""
    groups: dict[str, list[DegreeType]] = {s: [] for s in SECTORS}
    for dt, verdict in filtered_catalog(FD_LIMIT, jobs):
        if verdict.outcome == "exceptional-candidate":
            groups[verdict.sector_label].append(dt)
    return groups


def sector8_k4_possibilities() -> list[tuple[DegreeType, str]]:
    """Relation degrees for A = (2,2,4,4) allowed by the entrywise bounds with fd <= 20.

    Reconstructed from the bounds, not a list stated verbatim elsewhere; each
    entry carries the fate assigned by the pipeline.
    """
    A = (2, 2, 4, 4)
    lower = (4, 6, 8, 12)
    budget = FD_LIMIT + sum(A)
    out = []

    def rec(prefix):
        i = len(prefix)
        if i == len(A):
            if sum(prefix) <= budget:
                out.append(tuple(prefix))
            return
        lo = max(lower[i], prefix[-1] if prefix else 0)
        for b in range(lo, budget - sum(prefix) + 1, 2):
            rec(prefix + [b])

    rec([])
    result = []
    for B in out:
        dt = DegreeType(A, B)
        v = filter_pipeline(dt)
        result.append((dt, f"{v.outcome}: {v.reason}" if v.reason else v.outcome))
    return result


# -- worked examples ----------------------------------------------------------------

@dataclass
class LedgerEntry:
    name: str
    expected: object
    observed: object

    @property
    def passed(self) -> bool:
        return self.expected == self.observed

    def as_dict(self) -> dict:
        return {"name": self.name, "expected": self.expected, "observed": self.observed, "pass": self.passed}


def paper_examples() -> list[LedgerEntry]:
    ledger = []
    ex1 = Presentation.parse((2, 2), ["x1^2 - x2^2", "x1*x2"])
    bad = Presentation.parse((2, 2), ["x1^2", "x1*x2"])
    ledger.append(LedgerEntry(
        "ellipticity of (x1^2 - x2^2, x1*x2) and (x1^2, x1*x2)",
        [True, False],
        [is_positively_elliptic(ex1).elliptic, is_positively_elliptic(bad).elliptic],
    ))

    redundant = Presentation.parse((2, 4), ["x1^2 - x2", "x2^3"])
    pure = reduce_to_pure_model(redundant.ctx, redundant.relations)
    bound = 10
    ledger.append(LedgerEntry(
        "pure model of (x1^2 - x2, x2^3): generator count and Hilbert data",
        [1, [1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1]],
        [pure.k, list(hilbert_function(pure, bound).dims)],
    ))
    ledger.append(LedgerEntry(
        "Hilbert data unchanged by the reduction",
        list(hilbert_function(redundant, bound).dims),
        list(hilbert_function(pure, bound).dims),
    ))

    space = derivation_space(ex1, 2)
    w = witness(ex1, space)
    ledger.append(LedgerEntry(
        "degree +2 derivation on (x1^2 - x2^2, x1*x2) induces a nonzero map",
        True,
        space.induced_dim >= 1 and w is not None,
    ))

    elliptic = [ex1, pure, Presentation.parse((2, 4), ["x1^3", "x2^2"]),
                Presentation.parse((2, 2, 4), ["x1^2 + x2^2", "x1*x2", "x3^2 + x1^4"])]
    ledger.append(LedgerEntry(
        "halperin check on the elliptic examples",
        ["PASS"] * len(elliptic),
        [halperin_check(p).verdict for p in elliptic],
    ))
    return ledger


# -- sweeps ----------------------------------------------------------------------------

@dataclass
class TypeResult:
    samples: int = 0
    failures: list[dict] = field(default_factory=list)
    sampling_error: str | None = None
    spaces_verified: int = 0

    @property
    def all_pass(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        out = {"samples": self.samples, "all_pass": self.all_pass, "failures": self.failures}
        if self.sampling_error:
            out["sampling_error"] = self.sampling_error
        return out


@dataclass
class SweepReport:
    fd_max: int
    results: dict[DegreeType, TypeResult]
    seed: int
    samples_per_type: int

    @property
    def all_pass(self) -> bool:
        return all(r.all_pass for r in self.results.values())

    @property
    def complete(self) -> bool:
        return all(r.sampling_error is None and r.samples == self.samples_per_type for r in self.results.values())

    @property
    def failure_count(self) -> int:
        return sum(len(r.failures) for r in self.results.values())

    def as_dict(self) -> dict:
        return {
            "header": SWEEP_HEADER,
            "fd_max": self.fd_max,
            "seed": self.seed,
            "samples_per_type": self.samples_per_type,
            "all_pass": self.all_pass,
            "types": [
                {"A": list(dt.A), "B": list(dt.B), "fd": dt.fd, **r.as_dict()}
                for dt, r in sorted(self.results.items(), key=lambda kv: (kv[0].k, kv[0].A, kv[0].B))
            ],
        }


def sample_seed(seed: int, index: int) -> int:
    return seed * 1_000_003 + index


def _run_type(args) -> tuple[DegreeType, TypeResult]:
    dt, samples, seed, coeff_bound, verify = args
    res = TypeResult()
    rng = random.Random(f"verify|{dt.literal()}|{seed}")
    for s in range(samples):
        sseed = sample_seed(seed, s)
        try:
            p = sample_presentation(dt, sseed, coeff_bound).presentation
        except SamplingError as exc:
            res.sampling_error = str(exc)
            break
        report = halperin_check(p, check=False)
        if verify:
            for space in report.degrees.values():
                verify_space(p, space, rng)
                res.spaces_verified += 1
        res.samples += 1
        if not report.passed:
            for d, space in sorted(report.degrees.items(), reverse=True):
                if space.induced_dim:
                    w = witness(p, space)
                    res.failures.append({
                        "seed": sseed,
                        "degree": d,
                        "presentation": p.to_text(),
                        "witness": w.as_strings() if w else None,
                    })
    return dt, res


def sweep_types(
    types, samples_per_type: int, seed: int, coeff_bound: int = 5, jobs: int = 1, verify: bool = True, fd_max=None
) -> SweepReport:
    if samples_per_type < 1:
        raise ValueError("samples_per_type must be at least 1")
    types = sorted(set(types), key=lambda dt: (dt.k, dt.A, dt.B))
    work = [(dt, samples_per_type, seed, coeff_bound, verify) for dt in types]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            done = list(ex.map(_run_type, work))
    else:
        done = [_run_type(w) for w in work]
    if fd_max is None:
        fd_max = max((dt.fd for dt in types), default=0)
    return SweepReport(fd_max, dict(done), seed, samples_per_type)


def sweep_halperin(
    fd_max: int, samples_per_type: int, seed: int, coeff_bound: int = 5, jobs: int = 1, verify: bool = True
) -> SweepReport:
    """Halperin check on seeded samples of every enumerated type with fd <= fd_max."""
    if not 2 <= fd_max <= FD_LIMIT:
        raise ValueError(f"fd_max must be in [2, {FD_LIMIT}]")
    types = [dt for fd in range(2, fd_max + 1, 2) for dt in enumerate_degree_types(fd) if sac_check(dt).passed]
    return sweep_types(types, samples_per_type, seed, coeff_bound, jobs, verify, fd_max=fd_max)


def exceptional_types() -> list[DegreeType]:
    groups = exceptional_lists()
    return [dt for s in SECTORS for dt in groups[s]]
