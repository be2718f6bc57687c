"""Command-line front end.

Exit codes: 0 success or PASS, 1 negative mathematical answer (not elliptic,
SAC failure, Halperin FAIL), 2 usage, parse or validation error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path

from .casebook import (
    SECTORS,
    exceptional_lists,
    exceptional_types,
    paper_examples,
    sweep_halperin,
    sweep_types,
)
from .degreetypes import FD_LIMIT, default_jobs, enumerate_degree_types, filter_pipeline, sac_check
from .derivations import derivation_space, halperin_check
from .quotient import (
    DegreeType,
    InconsistentDegreeType,
    PreconditionError,
    Presentation,
    PresentationError,
    degree_type_of,
    expected_hilbert,
    hilbert_function,
    is_positively_elliptic,
)
from .ring import GradedContext, ParseError, RingError, parse_polynomial

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2


class InputError(ValueError):
    """Bad input with an optional ``line``/``column`` location (1-based)."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None, source: str = ""):
        self.message, self.line, self.column, self.source = message, line, column, source
        loc = source
        if line is not None:
            loc += f":{line}" if loc else f"line {line}"
            if column is not None:
                loc += f":{column}"
        super().__init__(f"{loc}: {message}" if loc else message)


# -- parsing ---------------------------------------------------------------------

_VAR = re.compile(r"(\S+?):(\S*)")


def parse_presentation_text(text: str, source: str = "") -> Presentation:
    """Parse the ``vars:`` / ``rels:`` format; blank lines and ``#`` comments are skipped."""
    found: dict[str, tuple[int, int, str]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep or key not in ("vars", "rels"):
            raise InputError("expected a 'vars:' or 'rels:' line", lineno, 1, source)
        if key in found:
            raise InputError(f"duplicate '{key}:' line", lineno, 1, source)
        found[key] = (lineno, len(key) + 1 + (len(line) - len(line.lstrip())) + 1, rest)
    for key in ("vars", "rels"):
        if key not in found:
            raise InputError(f"missing '{key}:' line", None, None, source)

    lineno, offset, rest = found["vars"]
    names, weights = [], []
    for m in re.finditer(r"\S+", rest):
        col = offset + m.start()
        vm = _VAR.fullmatch(m.group())
        if not vm:
            raise InputError(f"expected name:weight, got {m.group()!r}", lineno, col, source)
        name, w = vm.groups()
        if not re.fullmatch(r"-?\d+", w) or int(w) <= 0 or int(w) % 2:
            raise InputError(f"weight must be positive even ({name}:{w})", lineno, col + len(name) + 1, source)
        names.append(name)
        weights.append(int(w))
    if not names:
        raise InputError("no variables declared", lineno, offset, source)
    try:
        ctx = GradedContext(tuple(names), tuple(weights))
    except RingError as exc:
        raise InputError(str(exc), lineno, offset, source) from None

    lineno, offset, rest = found["rels"]
    rels, start = [], 0
    for part in rest.split(";"):
        try:
            rels.append(parse_polynomial(ctx, part))
        except ParseError as exc:
            col = offset + start + (exc.column or 0)
            raise InputError(exc.message, lineno, col, source) from None
        start += len(part) + 1
    try:
        return Presentation.sorted(ctx, rels)
    except PresentationError as exc:
        raise InputError(str(exc), lineno, None, source) from None


def parse_presentation_file(path) -> Presentation:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read file: {exc.strerror}", source=str(path)) from None
    return parse_presentation_text(text, str(path))


def format_presentation(p: Presentation) -> str:
    return p.to_text()


def parse_degree_type(text: str) -> DegreeType:
    """``"2,2,4,4:4,6,8,12"`` -> ``(2,2,4,4;4,6,8,12)``; ``;`` also separates."""
    parts = re.split(r"[:;]", text.strip().strip("()"))
    if len(parts) != 2:
        raise InputError(f"degree type must look like 'A1,...,Ak:B1,...,Bk', got {text!r}")
    seqs = []
    for part in parts:
        try:
            seqs.append(tuple(int(x) for x in part.split(",")))
        except ValueError:
            raise InputError(f"degree type entries must be integers: {part!r}") from None
    A, B = seqs
    if len(A) != len(B):
        raise InputError(f"length mismatch: {len(A)} generator degrees, {len(B)} relation degrees")
    try:
        return DegreeType(A, B)
    except (PresentationError, ValueError) as exc:
        raise InputError(str(exc)) from None


# -- output ------------------------------------------------------------------------

def _emit(args, payload, text: str) -> None:
    out = json.dumps(payload, indent=2) + "\n" if args.json else text.rstrip("\n") + "\n"
    if getattr(args, "out", None):
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)


def catalog_entry(dt: DegreeType) -> dict:
    entry = {"A": list(dt.A), "B": list(dt.B), "fd": dt.fd, "sac": sac_check(dt).passed}
    if dt.fd <= FD_LIMIT:
        v = filter_pipeline(dt)
        entry["verdict"], entry["citations"] = v.outcome, list(v.citations)
    else:
        entry["verdict"], entry["citations"] = "unfiltered", []
    return entry


def _presentation_or_type(arg: str):
    if os.path.exists(arg):
        return parse_presentation_file(arg)
    if re.fullmatch(r"[\d,\s()]+[:;][\d,\s()]+", arg):
        return parse_degree_type(arg)
    raise InputError(f"no such file: {arg}")


# -- verbs ----------------------------------------------------------------------------

def cmd_check(args) -> int:
    p = parse_presentation_file(args.file)
    rep = is_positively_elliptic(p)
    if rep.elliptic:
        text = f"positively elliptic, fd={rep.fd}"
    else:
        bad = [n for n in range(rep.window[0], rep.window[1] + 1) if rep.hilbert.dims[n]]
        text = f"not positively elliptic: H^{bad[0]} has dimension {rep.hilbert.dims[bad[0]]} above fd={rep.fd}"
    _emit(args, rep.as_dict(), text)
    return EXIT_OK if rep.elliptic else EXIT_NEGATIVE


def cmd_hilbert(args) -> int:
    p = parse_presentation_file(args.file)
    rep = is_positively_elliptic(p)
    bound = rep.window[1] if args.max_degree is None else args.max_degree
    hd = hilbert_function(p, bound)
    payload = {"dims": list(hd.dims), "bound": bound, "total": hd.total, "elliptic": rep.elliptic}
    text = "\n".join(f"H^{n}: {d}" for n, d in enumerate(hd.dims) if n % 2 == 0)
    text += f"\ntotal: {hd.total}"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_fd(args) -> int:
    obj = _presentation_or_type(args.target)
    dt = obj if isinstance(obj, DegreeType) else degree_type_of(obj)
    payload = {"A": list(dt.A), "B": list(dt.B), "fd": dt.fd}
    try:
        payload["hilbert"] = expected_hilbert(dt)
    except InconsistentDegreeType:
        payload["hilbert"] = None
    _emit(args, payload, f"fd={dt.fd}")
    return EXIT_OK


def _require_elliptic(p: Presentation, args) -> bool:
    if is_positively_elliptic(p).elliptic:
        return True
    _emit(args, {"elliptic": False}, "not positively elliptic")
    return False


def cmd_derivations(args) -> int:
    p = parse_presentation_file(args.file)
    if not _require_elliptic(p, args):
        return EXIT_NEGATIVE
    degrees = [args.degree] if args.degree is not None else list(range(-2, -max(p.ctx.weights) + 1, -2))
    payload, lines = {}, []
    for d in degrees:
        space = derivation_space(p, d, check=False)
        entry = space.as_dict()
        entry["lift_basis"] = [der.as_strings() for der in space.lift_basis]
        payload[str(d)] = entry
        lines.append(f"degree {d}: lift_dim={space.lift_dim} trivial_dim={space.trivial_dim} induced_dim={space.induced_dim}")
        for der in space.lift_basis:
            lines.append("  (" + ", ".join(der.as_strings()) + ")")
    _emit(args, {"degrees": payload}, "\n".join(lines) or "no degrees requested")
    return EXIT_OK


def cmd_halperin(args) -> int:
    p = parse_presentation_file(args.file)
    if not _require_elliptic(p, args):
        return EXIT_NEGATIVE
    rep = halperin_check(p, check=False)
    lines = [f"degree {d}: " + " ".join(f"{k}={v}" for k, v in s.as_dict().items())
             for d, s in sorted(rep.degrees.items(), reverse=True)]
    lines.append(rep.verdict)
    if rep.witness is not None:
        lines.append("witness: (" + ", ".join(rep.witness.as_strings()) + ")")
    _emit(args, rep.as_dict(), "\n".join(lines))
    return EXIT_OK if rep.passed else EXIT_NEGATIVE


def cmd_sac(args) -> int:
    dt = parse_degree_type(args.type)
    rep = sac_check(dt)
    if rep.passed:
        text = f"{dt}: SAC holds"
    else:
        subs = ", ".join(f"({','.join(map(str, s))}) [{c} representable]" for s, c in rep.failing_subsets)
        text = f"{dt}: SAC fails on {subs}"
    _emit(args, {"A": list(dt.A), "B": list(dt.B), **rep.as_dict()}, text)
    return EXIT_OK if rep.passed else EXIT_NEGATIVE


def cmd_enumerate(args) -> int:
    types = enumerate_degree_types(args.fd, jobs=args.jobs)
    catalog = [catalog_entry(dt) for dt in types]
    text = "\n".join(f"{dt}  {e['verdict']}" for dt, e in zip(types, catalog))
    _emit(args, catalog, text + f"\n{len(types)} degree types")
    return EXIT_OK


def cmd_filters(args) -> int:
    if args.type:
        dt = parse_degree_type(args.type)
        if dt.fd > FD_LIMIT:
            raise InputError(f"filters cover fd <= {FD_LIMIT}, got {dt.fd}")
        v = filter_pipeline(dt)
        payload = catalog_entry(dt) | {"sector": v.sector_label, "reason": v.reason}
        _emit(args, payload, f"{dt}: {v.outcome} ({', '.join(v.citations)}){': ' + v.reason if v.reason else ''}")
        return EXIT_OK
    groups = exceptional_lists(jobs=args.jobs)
    payload = {s: [{"A": list(dt.A), "B": list(dt.B)} for dt in groups[s]] for s in SECTORS}
    lines = []
    for s in SECTORS:
        lines.append(f"sector {s}:")
        lines.extend(f"  {dt}" for dt in groups[s])
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.exceptional:
        rep = sweep_types(exceptional_types(), args.samples, args.seed, args.coeff_bound, args.jobs)
    else:
        if not 2 <= args.fd <= FD_LIMIT:
            raise InputError(f"--fd must be between 2 and {FD_LIMIT}")
        rep = sweep_halperin(args.fd, args.samples, args.seed, args.coeff_bound, args.jobs)
    lines = [rep.as_dict()["header"]]
    for dt, r in sorted(rep.results.items(), key=lambda kv: (kv[0].k, kv[0].A, kv[0].B)):
        status = "PASS" if r.all_pass else f"FAIL x{len(r.failures)}"
        if r.sampling_error:
            status += f" (sampling: {r.sampling_error})"
        lines.append(f"{dt}  samples={r.samples}  {status}")
    lines.append("all pass" if rep.all_pass and rep.complete else "NOT all pass")
    _emit(args, rep.as_dict(), "\n".join(lines))
    return EXIT_OK if rep.all_pass and rep.complete else EXIT_NEGATIVE


def cmd_examples(args) -> int:
    ledger = paper_examples()
    payload = [e.as_dict() for e in ledger]
    text = "\n".join(f"{'pass' if e.passed else 'FAIL'}  {e.name}" for e in ledger)
    _emit(args, payload, text)
    return EXIT_OK if all(e.passed for e in ledger) else EXIT_NEGATIVE


# -- argument parsing -------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_ERROR)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="elliptica", description="Exact computations with positively elliptic algebras.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def verb(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--out", help="write output to this path instead of stdout")
        sp.set_defaults(func=func)
        return sp

    verb("check", cmd_check, "decide positive ellipticity").add_argument("file")
    sp = verb("hilbert", cmd_hilbert, "Hilbert function of the quotient")
    sp.add_argument("file")
    sp.add_argument("--max-degree", type=int)
    verb("fd", cmd_fd, "formal dimension of a presentation file or degree type").add_argument("target")
    sp = verb("derivations", cmd_derivations, "derivation spaces by degree")
    sp.add_argument("file")
    sp.add_argument("--degree", type=int, help="default: all negative degrees checked by halperin")
    verb("halperin", cmd_halperin, "negative-degree derivation check").add_argument("file")
    verb("sac", cmd_sac, "strong algebraic condition for a degree type").add_argument("type")
    sp = verb("enumerate", cmd_enumerate, "all SAC degree types of a formal dimension")
    sp.add_argument("--fd", type=int, required=True)
    sp.add_argument("--jobs", type=int, default=default_jobs())
    sp = verb("filters", cmd_filters, "filter pipeline on one type, or the exceptional lists")
    sp.add_argument("type", nargs="?")
    sp.add_argument("--jobs", type=int, default=default_jobs())
    sp = verb("sweep", cmd_sweep, "randomized Halperin sweep")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--fd", type=int, default=12, help="largest formal dimension (default 12)")
    sp.add_argument("--samples", type=int, default=25)
    sp.add_argument("--coeff-bound", type=int, default=5)
    sp.add_argument("--jobs", type=int, default=default_jobs())
    sp.add_argument("--exceptional", action="store_true", help="sweep the six exceptional fd=20 types instead")
    verb("examples", cmd_examples, "worked-example battery")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    for name in ("samples", "jobs", "coeff_bound"):
        if getattr(args, name, 1) < 1:
            print(f"error: --{name.replace('_', '-')} must be at least 1", file=sys.stderr)
            return EXIT_ERROR
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except (ParseError, RingError, PresentationError, PreconditionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
