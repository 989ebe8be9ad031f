"""Command-line interface: search, check, mutate, family verification,
T/Y-system extraction and iteration, periodic quantities, reproduction suites.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from . import families, formats, reductions
from .cluster import Seed, run_orbit
from .quiver import (
    ONE_CYCLE,
    TWO_CYCLE,
    ExchangeMatrix,
    Period2Spec,
    QuiverError,
    is_connected,
    is_period1,
    is_period2,
    mutate,
)
from .search import SearchJob, residual_report, search
from .systems import (
    BUILTIN_TEMPLATES,
    SystemSpec,
    check_TZ_condition,
    extract_system,
    initial_window_from_seed,
    iterate_system,
    parse_template,
    required_window,
    verify_periodic,
)

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2

_SHAPES = {"1cycle": ONE_CYCLE, "2cycle": TWO_CYCLE}


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


def _read_text(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path!r}: {exc}")


def _load_quiver(path: str) -> ExchangeMatrix:
    try:
        return formats.quiver_from_json(_read_text(path))
    except formats.FormatError as exc:
        raise CliError(f"{path}: {exc}")


def _spec_from_args(args, n: int) -> Period2Spec:
    try:
        return Period2Spec(n, _SHAPES[args.shape], args.k)
    except QuiverError as exc:
        raise CliError(str(exc))


def _default_jobs() -> int:
    env = os.environ.get("QUIVERPERIOD_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise CliError(f"QUIVERPERIOD_JOBS={env!r} is not an integer")
    return 1


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_mutate(args) -> int:
    B = _load_quiver(args.quiver)
    for v in args.at:
        if not 1 <= v <= B.n:
            raise CliError(f"vertex {v} out of range 1..{B.n}")
        B = mutate(B, v)
    print(formats.quiver_to_json(B))
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(formats.quiver_to_dot(B) + "\n")
    return EXIT_OK


def cmd_check(args) -> int:
    B = _load_quiver(args.quiver)
    notes = [] if is_connected(B) else ["disconnected"]
    if args.period1:
        ok = is_period1(B)
        verdict = "period-1" if ok else "not period-1"
        print(" ".join([verdict] + notes))
        return EXIT_OK if ok else EXIT_VERIFY
    spec = _spec_from_args(args, B.n)
    rows = residual_report(B, spec)
    ok = all(v == 0 for _, _, v in rows)
    verdict = "period-2" if ok else "not period-2"
    print(" ".join([verdict] + notes))
    if not ok:
        for pair, case, value in rows:
            if value != 0:
                print(f"  pair {pair}: case {case} residual {value}")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_search(args) -> int:
    spec = _spec_from_args(args, args.n)
    job = SearchJob(
        spec,
        args.bound,
        connected_only=args.connected,
        canonicalize=args.canonical,
        jobs=args.jobs if args.jobs else _default_jobs(),
    )
    count = 0
    for B in search(job):
        print(formats.quiver_to_json(B))
        count += 1
    print(f"# {count} solutions", file=sys.stderr)
    return EXIT_OK


def cmd_verify_theorem(args) -> int:
    report = families.verify_theorem(
        args.name_mapped, args.max_param, search_bound=args.bound, jobs=_default_jobs()
    )
    if args.format == "structured":
        payload = {
            "theorem": report.theorem,
            "ok": report.ok,
            "checks": [
                {"label": r.label, "ok": r.ok, "detail": r.detail} for r in report.rows
            ],
        }
        print(json.dumps(payload, indent=2))
    else:
        for line in report.lines():
            print(line)
        print(f"{'OK' if report.ok else 'FAILED'}: {report.theorem}")
    return EXIT_OK if report.ok else EXIT_VERIFY


def _parse_window(text: str) -> dict[str, list]:
    data = json.loads(text)
    if not isinstance(data, dict):
        raise CliError("initial window must be an object with 'z' and 'y' lists")
    out = {}
    for name in ("z", "y"):
        out[name] = [Fraction(v) for v in data.get(name, [])]
    return out


def cmd_tsys_extract(args) -> int:
    B = _load_quiver(args.quiver)
    spec = _spec_from_args(args, B.n)
    try:
        sys_spec = extract_system(B, spec, args.kind.upper())
    except QuiverError as exc:
        raise CliError(str(exc), code=EXIT_VERIFY)
    if args.format == "structured":
        print(json.dumps(sys_spec.to_dict(), indent=2))
    else:
        print(sys_spec.text())
    return EXIT_OK


def cmd_tsys_iterate(args) -> int:
    try:
        sys_spec = SystemSpec.from_dict(json.loads(_read_text(args.system)))
    except (json.JSONDecodeError, QuiverError, KeyError) as exc:
        raise CliError(f"{args.system}: {exc}")
    try:
        window = _parse_window(_read_text(args.init))
    except (json.JSONDecodeError, ValueError) as exc:
        raise CliError(f"{args.init}: {exc}")
    Z = None
    if args.z:
        try:
            Z = _parse_window(_read_text(args.z))
        except (json.JSONDecodeError, ValueError) as exc:
            raise CliError(f"{args.z}: {exc}")
    try:
        seqs = iterate_system(sys_spec, window, args.steps, Z=Z)
    except (QuiverError, ZeroDivisionError) as exc:
        raise CliError(str(exc), code=EXIT_VERIFY)
    out = {
        "format": "quiverperiod/trace-v1",
        "n": sys_spec.spec.n,
        "shape": sys_spec.spec.shape,
        "k": sys_spec.spec.k,
        "b": [list(r) for r in sys_spec.B0.rows],
        "steps": 2 * args.steps,
        "z": [formats._frac_str(v) for v in seqs["z"]],
        "y": [formats._frac_str(v) for v in seqs["y"]],
        "A": [],
        "B": [],
    }
    print(json.dumps(out))
    return EXIT_OK


def cmd_tsys_verify_periodic(args) -> int:
    trace = formats.trace_from_json(_read_text(args.trace))
    if args.template.startswith("builtin:"):
        name = args.template.split(":", 1)[1]
        if name not in BUILTIN_TEMPLATES:
            raise CliError(
                f"unknown builtin template {name!r}; have {sorted(BUILTIN_TEMPLATES)}"
            )
        tmpl = BUILTIN_TEMPLATES[name]
    else:
        tmpl = parse_template(args.template, claimed_period=args.period)
    horizon = args.horizon
    if horizon is None:
        horizon = (
            min(len(trace.seq["z"]), len(trace.seq["y"]))
            - tmpl.max_offset()
            - tmpl.claimed_period
        )
    try:
        rep = verify_periodic(trace.seq, tmpl, horizon)
    except QuiverError as exc:
        raise CliError(str(exc), code=EXIT_VERIFY)
    state = "periodic" if rep.ok else f"fails at q={rep.first_failure}"
    print(f"{tmpl.name}: period {tmpl.claimed_period} over {horizon} steps: {state}")
    return EXIT_OK if rep.ok else EXIT_VERIFY


def cmd_tsys_somos(args) -> int:
    report = reductions.somos_reduce(args.family, args.param, args.steps)
    for row in report.rows:
        print(("PASS " if row.ok else "FAIL ") + row.label)
    return EXIT_OK if report.ok else EXIT_VERIFY


_SECTION_NAMES = {
    "thm3": "N3",
    "thm4": "N4",
    "thm5": "N5_1cycle",
    "thm6": "N5_other",
    "thm7": "N6",
}

_SECTION_BOUND = {"thm3": 3, "thm4": 2, "thm7": 2}
_SECTION_MAXPARAM = {"thm3": 3, "thm4": 2, "thm5": 3, "thm6": 3, "thm7": 3}


def cmd_reproduce(args) -> int:
    section = args.section
    rng = random.Random(args.seed)
    print(f"# section {section} (seed {args.seed})")
    rows = []
    if section == "sec8":
        for tag in reductions.SECTION_TAGS:
            rep = reductions.verify_section(tag, seeds=3, horizon=30, rng=rng)
            rows.extend(rep.rows)
    else:
        if section not in _SECTION_NAMES:
            raise CliError(
                f"unknown section {section!r}; expected thm3..thm7 or sec8"
            )
        report = families.verify_theorem(
            _SECTION_NAMES[section],
            _SECTION_MAXPARAM[section],
            search_bound=_SECTION_BOUND.get(section),
            jobs=_default_jobs(),
        )
        rows = report.rows
    ok = all(r.ok for r in rows)
    if args.format == "structured":
        print(
            json.dumps(
                {
                    "section": section,
                    "seed": args.seed,
                    "ok": ok,
                    "checks": [
                        {"label": r.label, "ok": r.ok, "detail": r.detail}
                        for r in rows
                    ],
                },
                indent=2,
            )
        )
    else:
        for r in rows:
            mark = "PASS" if r.ok else "FAIL"
            detail = f"  ({r.detail})" if r.detail else ""
            print(f"[{mark}] {r.label}{detail}")
        print(f"{'OK' if ok else 'FAILED'}: {len(rows)} checks")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_orbit(args) -> int:
    seed = formats.seed_from_json(_read_text(args.seed))
    spec = _spec_from_args(args, seed.B.n)
    try:
        trace = run_orbit(seed, spec, args.steps, keep_states=False)
    except (QuiverError, ZeroDivisionError) as exc:
        raise CliError(str(exc), code=EXIT_VERIFY)
    if args.csv:
        with open(args.csv, "w") as fh:
            formats.trace_to_csv(trace, fh)
    print(formats.trace_to_json(trace))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quiverperiod",
        description="period-2 quiver search and T/Y-system toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mutate", help="apply mutations to a quiver file")
    p.add_argument("--quiver", required=True, help="quiver-v1 JSON file ('-' = stdin)")
    p.add_argument("--at", required=True, type=int, nargs="+", help="vertices, applied left to right")
    p.add_argument("--dot", help="also write DOT output to this path")
    p.set_defaults(func=cmd_mutate)

    p = sub.add_parser("check", help="check a periodicity equation")
    p.add_argument("--quiver", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--period1", action="store_true")
    group.add_argument("--shape", choices=sorted(_SHAPES))
    p.add_argument("--k", type=int, help="second mutation vertex (with --shape)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("search", help="bounded exhaustive period-2 search")
    p.add_argument("--n", required=True, type=int)
    p.add_argument("--shape", required=True, choices=sorted(_SHAPES))
    p.add_argument("--k", required=True, type=int)
    p.add_argument("--bound", required=True, type=int)
    p.add_argument("--connected", action="store_true")
    p.add_argument("--canonical", action="store_true")
    p.add_argument("--jobs", type=int, default=0, help="workers (default: QUIVERPERIOD_JOBS or 1)")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify-theorem", help="re-check one classification")
    p.add_argument("--name", required=True, choices=sorted(_SECTION_NAMES) + sorted(families.THEOREMS))
    p.add_argument("--max-param", required=True, type=int)
    p.add_argument("--bound", type=int, help="also run the search completeness check")
    p.add_argument("--format", choices=["text", "structured"], default="text")
    p.set_defaults(func=cmd_verify_theorem)

    tsys = sub.add_parser("tsys", help="T/Y-system tools")
    tsub = tsys.add_subparsers(dest="tsys_command", required=True)

    p = tsub.add_parser("extract", help="closed-form system of a period-2 quiver")
    p.add_argument("--quiver", required=True)
    p.add_argument("--shape", required=True, choices=sorted(_SHAPES))
    p.add_argument("--k", required=True, type=int)
    p.add_argument("--kind", required=True, choices=["t", "y", "tz"])
    p.add_argument("--format", choices=["text", "structured"], default="text")
    p.set_defaults(func=cmd_tsys_extract)

    p = tsub.add_parser("iterate", help="forward-iterate a system file")
    p.add_argument("--system", required=True, help="system-v1 JSON file")
    p.add_argument("--init", required=True, help="JSON object with 'z' and 'y' windows")
    p.add_argument("--steps", required=True, type=int)
    p.add_argument("--z", help="JSON object with 'z'/'y' multiplier sequences (TZ)")
    p.set_defaults(func=cmd_tsys_iterate)

    p = tsub.add_parser("verify-periodic", help="check a periodic quantity on a trace")
    p.add_argument("--trace", required=True, help="trace-v1 JSON file")
    p.add_argument("--template", required=True, help="builtin:NAME or an expression")
    p.add_argument("--period", type=int, default=1, help="claimed period for expressions")
    p.add_argument("--horizon", type=int)
    p.set_defaults(func=cmd_tsys_verify_periodic)

    p = tsub.add_parser("somos", help="full vs reduced recurrence comparison")
    p.add_argument("--family", required=True, choices=["s82", "s84", "s86"])
    p.add_argument("--param", required=True, type=int)
    p.add_argument("--steps", type=int, default=30)
    p.set_defaults(func=cmd_tsys_somos)

    p = sub.add_parser("orbit", help="run a seed orbit and emit a trace")
    p.add_argument("--seed", required=True, help="seed-v1 JSON file")
    p.add_argument("--shape", required=True, choices=sorted(_SHAPES))
    p.add_argument("--k", required=True, type=int)
    p.add_argument("--steps", required=True, type=int)
    p.add_argument("--csv", help="also write the trace as CSV to this path")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("reproduce", help="run one verification section")
    p.add_argument("section", choices=["thm3", "thm4", "thm5", "thm6", "thm7", "sec8"])
    p.add_argument("--seed", type=int, default=0, help="random seed for randomized checks")
    p.add_argument("--format", choices=["text", "structured"], default="text")
    p.set_defaults(func=cmd_reproduce)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "check" and not args.period1:
        if args.k is None:
            parser.error("--k is required with --shape")
    if getattr(args, "command", None) == "verify-theorem":
        args.name_mapped = _SECTION_NAMES.get(args.name, args.name)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except QuiverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
