"""Command-line interface.

Exit codes: 0 on success (including recalls with low success probability),
1 for usage errors, 2 for malformed pattern data.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Sequence

from quam import analysis, hopfield
from quam.errors import DataError, InputError, InvariantError
from quam.patterns import PatternSet, Query
from quam.recall import grover_classic, quam_recall, quam_success_curve
from quam.state import MAX_CIRCUIT_PATTERN_BITS
from quam.storage import reduce_registers, store_circuit, store_fast

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2
PROB_TOL = 1e-15


def parse_pattern_text(text: str) -> PatternSet:
    """One pattern per line; blank lines and ``#`` comments are skipped."""
    patterns: list[str] = []
    first_line: dict[str, int] = {}
    width = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        bad = sorted(set(line) - {"0", "1"})
        if bad:
            raise DataError(f"line {lineno}: invalid characters {bad} in {line!r}")
        if width is None:
            width = len(line)
        elif len(line) != width:
            raise DataError(
                f"line {lineno}: pattern has length {len(line)}, expected {width}")
        if line in first_line:
            raise DataError(
                f"line {lineno}: duplicate of pattern on line {first_line[line]}")
        first_line[line] = lineno
        patterns.append(line)
    if not patterns:
        raise DataError("no patterns found")
    return PatternSet(tuple(patterns))


def parse_pattern_file(path: str | Path) -> PatternSet:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read pattern file {path}: {exc.strerror}") from exc
    return parse_pattern_text(text)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _seed(text: str) -> int:
    value = int(text, 0)
    if not -(2 ** 63) <= value < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed {text} is not a 64-bit value")
    return value & (2 ** 64 - 1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="quam", description="Quantum associative memory simulator")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, query_required=True):
        p.add_argument("--patterns", required=True, help="pattern file, one bit string per line")
        p.add_argument("--query", required=query_required, help="partial pattern over 0, 1, ?")
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")

    p = sub.add_parser("recall", help="store patterns and complete a query")
    common(p)
    p.add_argument("--shots", type=int, default=1000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--iterations", type=int, default=None,
                   help="override the number of extra Grover rounds")
    p.add_argument("--method", choices=("fast", "circuit"), default="fast")

    p = sub.add_parser("store", help="show the stored superposition")
    common(p, query_required=False)
    p.add_argument("--method", choices=("fast", "circuit"), default="fast")

    p = sub.add_parser("theory", help="print the closed-form accuracy model")
    common(p)
    p.add_argument("--t-max", type=int, default=None)

    p = sub.add_parser("sweep", help="exact success probability versus rounds")
    p.add_argument("--patterns", help="pattern file (QuAM sweep)")
    p.add_argument("--query", help="partial pattern (QuAM sweep)")
    p.add_argument("--target", help="bit string for a uniform-database Grover sweep")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")

    p = sub.add_parser("hopfield", help="Hopfield capacity sweep")
    p.add_argument("--n", type=int, default=16)
    p.add_argument("--m", default="1,2,3,4,5,6,7,8",
                   help="comma-separated pattern counts")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    return parser


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _load(args) -> tuple[PatternSet, Query | None]:
    ps = parse_pattern_file(args.patterns)
    q = None
    if getattr(args, "query", None) is not None:
        q = Query(args.query)
        if q.n != ps.n:
            raise InputError(f"query {q} has {q.n} symbols, patterns have {ps.n} bits")
    if getattr(args, "method", "fast") == "circuit" and ps.n > MAX_CIRCUIT_PATTERN_BITS:
        raise InputError(
            f"--method circuit supports n <= {MAX_CIRCUIT_PATTERN_BITS}, patterns have {ps.n}")
    return ps, q


def cmd_recall(args) -> str:
    ps, q = _load(args)
    if args.shots < 1:
        raise InputError("--shots must be at least 1")
    if args.iterations is not None and args.iterations < 0:
        raise InputError("--iterations must be non-negative")
    params = analysis.derive_parameters(ps, q)
    report = analysis.theory_report(params, t_max=0)
    out = quam_recall(ps, q, shots=args.shots, seed=args.seed,
                      T_override=args.iterations, method=args.method)
    dist = out.distribution(PROB_TOL)
    if args.format == "json":
        return _json({
            "n": ps.n, "m": ps.m, "query": q.symbols, "method": args.method,
            "T": out.T, "T_model": report.T,
            "p_max": report.p_max, "p_success": out.p_success,
            "p_success_model": analysis.p_at(params, out.T),
            "distribution": dist, "answer": out.answer, "votes": out.votes,
            "shots": out.shots, "seed": args.seed, "op_counts": out.op_counts,
            "theory": report.as_dict(),
        })
    if args.format == "csv":
        return _csv(["pattern", "probability", "votes"],
                    [[k, repr(v), out.votes.get(k, 0)] for k, v in dist.items()])
    lines = [
        f"patterns:  {ps.m} of {ps.n} bits (method: {args.method})",
        f"query:     {q.symbols}   (r0={params.r0}, r1={params.r1})",
        f"T:         {out.T}" + ("" if args.iterations is None else
                                 f"   (model optimum {report.T})"),
        f"p_max:     {_fmt(report.p_max)}",
        f"p_success: {_fmt(out.p_success)}",
        f"answer:    {out.answer if out.answer else 'none (no matching observation)'}",
        "votes:     " + (", ".join(f"{k}={v}" for k, v in out.votes.items()) or "-")
        + f"   ({out.shots} shots)",
        "distribution:",
    ]
    lines += [f"  {k}  {_fmt(v)}" for k, v in dist.items()]
    return "\n".join(lines) + "\n"


def cmd_store(args) -> str:
    ps, _ = _load(args)
    if args.method == "circuit":
        st = store_circuit(ps)
        state, ops = reduce_registers(st), st.op_count
    else:
        state, ops = store_fast(ps), ps.m
    probs = state.probabilities()
    amps = {state.label(i): float(state.amplitudes[i].real)
            for i in range(state.dim) if probs[i] > PROB_TOL}
    if args.format == "json":
        return _json({"n": ps.n, "m": ps.m, "method": args.method,
                      "amplitudes": amps, "op_count": ops})
    if args.format == "csv":
        return _csv(["pattern", "amplitude"], [[k, repr(v)] for k, v in amps.items()])
    lines = [f"stored {ps.m} patterns of {ps.n} bits ({args.method}, {ops} operations)"]
    lines += [f"  {k}  {v:+.6f}" for k, v in amps.items()]
    return "\n".join(lines) + "\n"


def cmd_theory(args) -> str:
    ps, q = _load(args)
    if q.is_all_wildcard:
        raise InputError("query has no known bits")
    params = analysis.derive_parameters(ps, q)
    report = analysis.theory_report(params, t_max=args.t_max)
    if args.format == "json":
        return _json(report.as_dict())
    if args.format == "csv":
        return _csv(["t", "p_success"], [[t, repr(v)] for t, v in enumerate(report.p_table)])
    d = report.as_dict()
    lines = [f"{k:>14}: {v}" for k, v in d.items() if k != "p_t"]
    lines.append("             t  P(t)")
    lines += [f"{t:>14}  {_fmt(v)}" for t, v in enumerate(report.p_table)]
    return "\n".join(lines) + "\n"


def cmd_sweep(args) -> str:
    if args.target is not None:
        if args.patterns or args.query:
            raise InputError("use either --target or --patterns/--query, not both")
        target = args.target
        if not target or set(target) - {"0", "1"}:
            raise InputError(f"--target must be a bit string, got {target!r}")
        n = len(target)
        t_max = math.ceil(math.pi / 2 * math.sqrt(2 ** n))
        curve = grover_classic(n, target, iterations=t_max).success
    else:
        if not (args.patterns and args.query):
            raise InputError("sweep needs --target or both --patterns and --query")
        ps, q = _load(args)
        t_max = math.ceil(math.pi / 2 * math.sqrt(2 ** ps.n))
        curve = quam_success_curve(ps, q, t_max)
    if args.format == "json":
        return _json([{"t": t, "p_success": v} for t, v in enumerate(curve)])
    if args.format == "csv":
        return _csv(["t", "p_success"], [[t, repr(v)] for t, v in enumerate(curve)])
    return "".join(f"{t:>4}  {_fmt(v)}\n" for t, v in enumerate(curve))


def cmd_hopfield(args) -> str:
    if args.trials < 1:
        raise InputError("--trials must be at least 1")
    if args.n < 1:
        raise InputError("--n must be at least 1")
    try:
        ms = [int(x) for x in args.m.split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"--m must be comma-separated integers: {args.m!r}") from exc
    if not ms or min(ms) < 1:
        raise InputError("--m values must be positive")
    table = hopfield.capacity_sweep(args.n, ms, args.trials, seed=args.seed)
    if args.format == "json":
        return _json([{"m": m, "recall_fraction": f} for m, f in table])
    if args.format == "csv":
        return _csv(["m", "recall_fraction"], [[m, repr(f)] for m, f in table])
    lines = [f"Hopfield n={args.n}, {args.trials} trials per m", "   m  recall_fraction"]
    lines += [f"{m:>4}  {_fmt(f)}" for m, f in table]
    return "\n".join(lines) + "\n"


COMMANDS = {"recall": cmd_recall, "store": cmd_store, "theory": cmd_theory,
            "sweep": cmd_sweep, "hopfield": cmd_hopfield}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = COMMANDS[args.command](args)
    except (DataError, InvariantError) as exc:
        print(f"quam: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except InputError as exc:
        print(f"quam: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
