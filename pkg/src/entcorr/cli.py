"""Command-line interface.

Subcommands map one-to-one onto the library modules: ``measure`` (Schmidt
decomposition, correlation table, measures), ``bell`` (CHSH evaluation or
maximization), ``simulate`` (seeded coincidence sampling and estimation),
``roof`` (convex-roof optimization) and ``validate`` (file checking).

Results go to stdout, diagnostics to stderr.  Exit codes: 0 success,
1 usage error, 2 input validation failure, 3 internal consistency
failure.  With ``--format machine`` the output is JSON whose numeric
fields round-trip at 17 significant digits; identical invocations on
identical inputs produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .bell import chsh, chsh_maximize
from .convexroof import RoofOptions, convex_roof
from .correlations import correlation_table
from .errors import (
    EntcorrError,
    InternalConsistencyError,
    StateFormatError,
    ValidationError,
)
from .expsim import (
    estimate_convergence_scan,
    estimate_en,
    save_record,
    simulate_measurements,
)
from .measures import (
    e2_correlation_sum,
    en_closed_form,
    en_correlation_sum,
    three_tangle_detail,
)
from .qstate import (
    DensityMatrix,
    PureState,
    dominant_eigenvector,
    load_state,
    parse_state_text,
    purity,
)
from .schmidt import schmidt_decompose, schmidt_rank
from . import expsim


class _Parser(argparse.ArgumentParser):
    """argparse with long-only flags and usage failures on exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _angles_arg(text: str):
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(
            f"expected four comma-separated angles, got {len(parts)}"
        )
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _schedule_arg(text: str):
    try:
        return [int(p) for p in text.split(",") if p != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> _Parser:
    parser = _Parser(prog="entcorr", add_help=False)
    parser.add_argument("--help", action="help", help="show this help message and exit")
    parser.add_argument("--version", action="version", version=f"entcorr {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--help", action="help", help="show this help message and exit")
        p.add_argument("--state", required=True, help="path to a state file")
        p.add_argument(
            "--format",
            choices=("text", "machine"),
            default="text",
            help="output format (default: text)",
        )

    p = sub.add_parser("measure", add_help=False, help="Schmidt spectrum, correlations, measures")
    common(p)

    p = sub.add_parser("bell", add_help=False, help="CHSH at given angles or maximized")
    common(p)
    group = p.add_mutually_exclusive_group()
    group.add_argument(
        "--angles",
        type=_angles_arg,
        help="four comma-separated analyzer angles a,a',b,b' in radians",
    )
    group.add_argument(
        "--grid", type=int, default=None, help="grid density for maximization (default: 16)"
    )
    p.add_argument(
        "--no-refine",
        action="store_true",
        help="skip local refinement after the grid scan",
    )

    p = sub.add_parser("simulate", add_help=False, help="seeded coincidence sampling")
    common(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--shots", type=int, help="number of shots to simulate")
    group.add_argument(
        "--schedule",
        type=_schedule_arg,
        help="strictly increasing comma-separated shot counts for a convergence scan",
    )
    p.add_argument("--seed", type=int, default=0, help="stream seed (default: 0)")
    p.add_argument("--record-out", default=None, help="write the record file here")

    p = sub.add_parser("roof", add_help=False, help="convex-roof optimization")
    common(p)
    p.add_argument(
        "--measure", choices=("e2", "en"), default="e2", help="measure to extend (default: e2)"
    )
    p.add_argument("--restarts", type=int, default=8, help="optimizer restarts (default: 8)")
    p.add_argument("--seed", type=int, default=0, help="optimizer seed (default: 0)")
    p.add_argument(
        "--ensemble-cap", type=int, default=None, help="ensemble size cap (default: rank^2)"
    )
    p.add_argument(
        "--threads",
        type=int,
        default=1,
        help="worker-thread cap for restarts; never changes results (default: 1)",
    )

    p = sub.add_parser("validate", add_help=False, help="check a state or record file")
    common(p)
    return parser


# --- serialization helpers ----------------------------------------------


def _fmt(x: float) -> str:
    return f"{float(x):.12g}"


def _floats(arr) -> list:
    return [float(v) for v in np.asarray(arr).reshape(-1)]


def _matrix(arr) -> list:
    return [[float(v) for v in row] for row in np.asarray(arr)]


def _pairs(amps) -> list:
    return [[float(a.real), float(a.imag)] for a in np.asarray(amps).reshape(-1)]


def _conditional_rows(table) -> list:
    rows = []
    mask = np.ma.getmaskarray(table.conditional)
    data = np.ma.getdata(table.conditional)
    for i in range(table.n):
        rows.append(
            [None if mask[i, j] else float(data[i, j]) for j in range(table.n)]
        )
    return rows


def _value_block(ev) -> dict:
    return {"value": float(ev.value), "method": ev.method.value, "n": int(ev.n)}


def _input_block(path: str, state) -> dict:
    kind = "pure" if isinstance(state, PureState) else "mixed"
    return {"path": path, "kind": kind, "dims": list(state.dims)}


def _report(command: str, path: str, state, body: dict) -> dict:
    doc = {"tool": "entcorr", "version": __version__, "command": command}
    doc["input"] = _input_block(path, state)
    doc.update(body)
    return doc


def _emit(args, doc: dict, text_lines: list) -> int:
    if args.format == "machine":
        sys.stdout.write(json.dumps(doc, indent=2, allow_nan=False) + "\n")
    else:
        sys.stdout.write("\n".join(text_lines) + "\n")
    return 0


def _matrix_lines(label: str, rows, fmt=_fmt) -> list:
    lines = [label]
    for row in rows:
        lines.append("  " + " ".join("-" if v is None else fmt(v) for v in row))
    return lines


def _require_pure(state, why: str) -> PureState:
    if isinstance(state, PureState):
        return state
    if purity(state) >= 1.0 - 1e-9:
        return dominant_eigenvector(state)
    raise ValidationError(
        f"{why} needs a pure state; this density matrix is genuinely mixed "
        "(try the roof subcommand)"
    )


# --- subcommands ----------------------------------------------------------


def _cmd_measure(args) -> int:
    state = load_state(args.state)
    pure = _require_pure(state, "measure")
    if len(pure.dims) == 3:
        return _cmd_measure_tripartite(args, state, pure)
    dec = schmidt_decompose(pure)
    table = correlation_table(dec)
    rank = schmidt_rank(dec)
    measures = {}
    if table.n == 2:
        measures["e2_correlation_sum"] = _value_block(e2_correlation_sum(table))
    if table.n >= 2:
        measures["en_correlation_sum"] = _value_block(en_correlation_sum(table))
        measures["en_closed_form"] = _value_block(en_closed_form(dec))
    doc = _report(
        "measure",
        args.state,
        state,
        {
            "schmidt": {
                "lambdas": _floats(dec.lambdas),
                "rank": rank,
                "separable": rank == 1,
            },
            "correlations": {
                "n": table.n,
                "local_a": _floats(table.local_a),
                "local_b": _floats(table.local_b),
                "joint": _matrix(table.joint),
                "conditional": _conditional_rows(table),
                "delta": _matrix(table.delta),
                "max_delta": float(np.max(table.delta)),
            },
            "measures": measures,
        },
    )
    dims = "x".join(str(d) for d in pure.dims)
    lines = [
        f"state: {args.state} ({doc['input']['kind']}, dims {dims})",
        f"schmidt rank: {rank} (separable: {'yes' if rank == 1 else 'no'})",
        "lambdas: " + " ".join(_fmt(v) for v in dec.lambdas),
    ]
    lines += _matrix_lines("joint P(i,j):", _matrix(table.joint))
    lines += _matrix_lines("conditional P(i|j) ('-' where undefined):", _conditional_rows(table))
    lines += _matrix_lines("correlation deviations |P(i,j) - P(i)P(j)|:", _matrix(table.delta))
    lines.append("measures:")
    for name, block in measures.items():
        lines.append(f"  {name}: {_fmt(block['value'])}")
    return _emit(args, doc, lines)


def _cmd_measure_tripartite(args, state, pure: PureState) -> int:
    detail = three_tangle_detail(pure)
    doc = _report(
        "measure",
        args.state,
        state,
        {
            "tangle": {
                "value": float(detail.value),
                "c2_first_vs_rest": float(detail.c2_first_vs_rest),
                "c2_pair_ab": float(detail.c2_pair_ab),
                "c2_pair_ac": float(detail.c2_pair_ac),
            }
        },
    )
    lines = [
        f"state: {args.state} (pure, dims 2x2x2)",
        f"three-tangle: {_fmt(detail.value)}",
        f"  one-vs-rest squared concurrence: {_fmt(detail.c2_first_vs_rest)}",
        f"  pair (1,2) squared concurrence:  {_fmt(detail.c2_pair_ab)}",
        f"  pair (1,3) squared concurrence:  {_fmt(detail.c2_pair_ac)}",
    ]
    return _emit(args, doc, lines)


def _cmd_bell(args) -> int:
    state = load_state(args.state)
    if args.angles is not None:
        result = chsh(state, *args.angles)
        doc = _report(
            "bell",
            args.state,
            state,
            {
                "chsh": {
                    "s": float(result.s),
                    "abs_s": abs(float(result.s)),
                    "angles": [s.angle for s in result.settings],
                }
            },
        )
        lines = [
            f"state: {args.state}",
            "angles (canonical): " + " ".join(_fmt(s.angle) for s in result.settings),
            f"s: {_fmt(result.s)}",
            f"|s|: {_fmt(abs(result.s))}",
        ]
        return _emit(args, doc, lines)
    grid = 16 if args.grid is None else args.grid
    result = chsh_maximize(state, grid_density=grid, refine=not args.no_refine)
    doc = _report(
        "bell",
        args.state,
        state,
        {
            "chsh_max": {
                "value": float(result.s),
                "angles": [s.angle for s in result.settings],
                "grid_density": int(grid),
                "refined": not args.no_refine,
                "classical_bound": 2.0,
                "quantum_bound": float(2.0 * np.sqrt(2.0)),
                "violates_classical": bool(result.s > 2.0 + 1e-9),
            }
        },
    )
    lines = [
        f"state: {args.state}",
        f"max |s|: {_fmt(result.s)} (grid {grid}, refined: {'yes' if not args.no_refine else 'no'})",
        "angles: " + " ".join(_fmt(s.angle) for s in result.settings),
        f"violates classical bound 2: {'yes' if result.s > 2.0 + 1e-9 else 'no'}",
    ]
    return _emit(args, doc, lines)


def _cmd_simulate(args) -> int:
    state = load_state(args.state)
    pure = _require_pure(state, "simulate")
    dec = schmidt_decompose(pure)
    if args.schedule is not None:
        estimates = estimate_convergence_scan(dec, args.schedule, args.seed)
        doc = _report(
            "simulate",
            args.state,
            state,
            {
                "seed": int(args.seed),
                "scan": [
                    {
                        "shots": int(e.shots),
                        "value": float(e.value),
                        "std_error": float(e.std_error),
                    }
                    for e in estimates
                ],
            },
        )
        lines = [f"state: {args.state}", f"seed: {args.seed}", "shots value std_error"]
        for e in estimates:
            lines.append(f"{e.shots} {_fmt(e.value)} {_fmt(e.std_error)}")
        return _emit(args, doc, lines)

    record = simulate_measurements(dec, args.shots, args.seed)
    estimate = estimate_en(record)
    if args.record_out is not None:
        save_record(record, args.record_out)
        print(f"record written to {args.record_out}", file=sys.stderr)
    doc = _report(
        "simulate",
        args.state,
        state,
        {
            "simulation": {
                "n": int(record.n),
                "shots": int(record.shots),
                "seed": int(record.seed),
                "counts": [[int(c) for c in row] for row in record.counts],
            },
            "estimate": {
                "value": float(estimate.value),
                "std_error": float(estimate.std_error),
                "shots": int(estimate.shots),
            },
        },
    )
    lines = [
        f"state: {args.state}",
        f"shots: {record.shots} seed: {record.seed}",
        "diagonal counts: " + " ".join(str(int(record.counts[i, i])) for i in range(record.n)),
        f"estimate: {_fmt(estimate.value)} +/- {_fmt(estimate.std_error)} (bootstrap std error)",
    ]
    return _emit(args, doc, lines)


def _cmd_roof(args) -> int:
    state = load_state(args.state)
    rho = state.density() if isinstance(state, PureState) else state
    options = RoofOptions(
        restarts=args.restarts,
        seed=args.seed,
        ensemble_cap=args.ensemble_cap,
        threads=args.threads,
    )
    result = convex_roof(rho, measure=args.measure, options=options)
    doc = _report(
        "roof",
        args.state,
        state,
        {
            "roof": {
                "measure": args.measure,
                "value": float(result.value),
                "converged": bool(result.converged),
                "iterations": int(result.iterations),
                "restarts_used": int(result.restarts_used),
                "seed": int(args.seed),
                "decomposition": {
                    "weights": _floats(result.decomposition.weights),
                    "states": [_pairs(s.amplitudes) for s in result.decomposition.states],
                },
            }
        },
    )
    lines = [
        f"state: {args.state}",
        f"roof value ({args.measure}): {_fmt(result.value)}",
        f"converged: {'yes' if result.converged else 'no'} "
        f"(iterations: {result.iterations}, restarts: {result.restarts_used})",
        "ensemble weights: " + " ".join(_fmt(w) for w in result.decomposition.weights),
    ]
    return _emit(args, doc, lines)


def _cmd_validate(args) -> int:
    with open(args.state, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        peek = json.loads(text)
        kind = peek.get("kind") if isinstance(peek, dict) else None
    except json.JSONDecodeError as exc:
        raise StateFormatError(f"not valid JSON: {exc}") from exc
    if kind == "record":
        record = expsim.parse_record_text(text)
        doc = {
            "tool": "entcorr",
            "version": __version__,
            "command": "validate",
            "input": {"path": args.state, "kind": "record"},
            "record": {"n": int(record.n), "shots": int(record.shots), "seed": int(record.seed)},
            "ok": True,
        }
        lines = [f"ok: record, n={record.n}, shots={record.shots}, seed={record.seed}"]
        return _emit(args, doc, lines)
    state = parse_state_text(text)
    doc = {
        "tool": "entcorr",
        "version": __version__,
        "command": "validate",
        "input": _input_block(args.state, state),
        "ok": True,
    }
    dims = "x".join(str(d) for d in state.dims)
    lines = [f"ok: {doc['input']['kind']} state, dims {dims}"]
    return _emit(args, doc, lines)


_COMMANDS = {
    "measure": _cmd_measure,
    "bell": _cmd_bell,
    "simulate": _cmd_simulate,
    "roof": _cmd_roof,
    "validate": _cmd_validate,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"entcorr: validation error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"entcorr: cannot read input: {exc}", file=sys.stderr)
        return 2
    except InternalConsistencyError as exc:
        print(f"entcorr: internal consistency error: {exc}", file=sys.stderr)
        return 3
    except EntcorrError as exc:
        print(f"entcorr: error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
