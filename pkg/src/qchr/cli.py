"""Command-line front end: run programs or presets, benchmark, generate
matrix instances.

Per-run output is one JSON object on stdout (or a table with --pretty);
benchmarks emit CSV, optionally with a runtime figure next to it.

Exit codes: 0 valid, 1 invalid, 2 error or limit exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from .engine import Session, SolveOptions, LimitExceeded, solve
from .parser import parse_program, parse_goal, ParseError
from .terms import QchrError
from .games import (
    nim_program, nim_goal,
    matrix_program, matrix_goal, random_matrix, read_matrix_file,
    write_matrix_file,
    connect4_program, connect4_goal,
)

REPORT_FIELDS = ["instance", "valid", "failures", "rule_applications",
                 "table_hits", "elapsed_ms", "witness"]

EXIT_VALID = 0
EXIT_INVALID = 1
EXIT_ERROR = 2


def build_arg_parser():
    p = argparse.ArgumentParser(
        prog="qchr",
        description="Run quantified rule programs, presets and benchmarks.")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--program", metavar="FILE", help="rule program file")
    src.add_argument("--preset", choices=["nim", "matrix", "connect4"])
    p.add_argument("--goal", metavar="TEXT", help="goal for --program")
    p.add_argument("--n", type=int, help="nim: initial match count")
    p.add_argument("--rows", type=int, default=4)
    p.add_argument("--cols", type=int, default=4)
    p.add_argument("--matrix", metavar="FILE", help="matrix instance file")
    p.add_argument("--depth", type=int, help="matrix: number of moves")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--tabling", action="store_true")
    p.add_argument("--timeout-ms", type=int, default=300_000)
    p.add_argument("--failure-limit", type=int)
    p.add_argument("--witness", action="store_true",
                   help="include the first-move witness in the report")
    p.add_argument("--pretty", action="store_true")
    p.add_argument("--bench", choices=["nim", "matrix", "connect4"],
                   metavar="SUITE")
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--plot", metavar="FILE",
                   help="bench: write a runtime figure to FILE")
    p.add_argument("--out", metavar="FILE", help="bench: write CSV to FILE")
    p.add_argument("--gen-matrix", metavar="FILE",
                   help="write a random matrix instance and exit")
    return p


def make_options(args):
    return SolveOptions(
        tabling=args.tabling,
        failure_limit=args.failure_limit,
        time_limit_ms=args.timeout_ms,
        collect_witness=True,
    )


def build_instance(args):
    """Resolve flags to (instance-id, program, goal, host)."""
    if args.program:
        if not args.goal:
            raise UsageError("--program requires --goal")
        with open(args.program, "r", encoding="utf-8") as fh:
            program = parse_program(fh.read())
        return (args.program, program, parse_goal(args.goal), None)
    if args.preset == "nim":
        n = args.n if args.n is not None else 4
        return (f"nim-{n}", nim_program(), nim_goal(n), None)
    if args.preset == "matrix":
        if args.matrix:
            depth, grid = read_matrix_file(args.matrix)
            instance = args.matrix
        else:
            if args.depth is None:
                raise UsageError("matrix preset needs --matrix or --depth")
            depth = args.depth
            grid = random_matrix(depth, args.seed, args.density)
            instance = f"matrix-d{depth}-s{args.seed}"
        program, host = matrix_program(depth, grid)
        return (instance, program, matrix_goal(depth), host)
    if args.preset == "connect4":
        program, host = connect4_program(args.rows, args.cols)
        return (f"connect4-{args.rows}x{args.cols}", program, connect4_goal(), host)
    raise UsageError("nothing to run: give --program, --preset, --bench "
                     "or --gen-matrix")


class UsageError(Exception):
    pass


def make_report(instance, result, include_witness):
    report = {
        "instance": instance,
        "valid": result.valid,
        "failures": result.stats.failures,
        "rule_applications": result.stats.rule_applications,
        "table_hits": result.stats.table_hits,
        "elapsed_ms": round(result.stats.elapsed_ms, 3),
    }
    report["witness"] = result.witness if include_witness else None
    return report


def print_report(report, pretty, file=None):
    file = file if file is not None else sys.stdout
    if pretty:
        width = max(len(k) for k in REPORT_FIELDS)
        for key in REPORT_FIELDS:
            print(f"{key:<{width}}  {report[key]}", file=file)
    else:
        print(json.dumps(report), file=file)


# ------------------------------------------------------------- benchmark


def bench_instances(suite, args):
    if suite == "nim":
        top = args.n if args.n is not None else 30
        for n in range(2, top + 1):
            yield (f"nim-{n}", *build_preset("nim", n=n))
    elif suite == "matrix":
        top = args.depth if args.depth is not None else 8
        for depth in range(2, top + 1):
            grid = random_matrix(depth, args.seed, args.density)
            program, host = matrix_program(depth, grid)
            yield (f"matrix-d{depth}-s{args.seed}", program,
                   matrix_goal(depth), host)
    else:
        for rows, cols in ((3, 3), (4, 3), (4, 4)):
            program, host = connect4_program(rows, cols)
            yield (f"connect4-{rows}x{cols}", program, connect4_goal(), host)


def build_preset(name, n=4):
    if name == "nim":
        return nim_program(), nim_goal(n), None
    raise ValueError(name)


def run_bench(args):
    rows = []
    for instance, program, goal, host_proto in bench_instances(args.bench, args):
        reports = []
        status = "ok"
        for _ in range(max(1, args.reps)):
            host = _fresh_host(args, instance, host_proto)
            try:
                result = solve(program, goal, host=host,
                               options=make_options(args))
            except LimitExceeded as exc:
                status = exc.what + "-limit"
                break
            reports.append(make_report(instance, result, True))
        if status != "ok":
            rows.append({"instance": instance, "status": status,
                         "valid": None, "failures": None,
                         "rule_applications": None, "table_hits": None,
                         "elapsed_ms": None, "witness": None})
            continue
        avg = dict(reports[0])
        avg["elapsed_ms"] = round(
            sum(r["elapsed_ms"] for r in reports) / len(reports), 3)
        avg["status"] = "ok"
        rows.append(avg)
    return rows


def _fresh_host(args, instance, host_proto):
    """Hosts are single-session; rebuild per repetition."""
    if host_proto is None:
        return None
    from .games.matrix import MatrixHost
    from .games.connect4 import Connect4Host
    if isinstance(host_proto, MatrixHost):
        return MatrixHost(host_proto.matrix)
    if isinstance(host_proto, Connect4Host):
        return Connect4Host(host_proto.rows, host_proto.cols)
    return host_proto


BENCH_COLUMNS = ["instance", "status", "valid", "failures",
                 "rule_applications", "table_hits", "elapsed_ms", "witness"]


def bench_csv(rows):
    lines = [",".join(BENCH_COLUMNS)]
    for row in rows:
        lines.append(",".join("" if row.get(c) is None else str(row.get(c))
                              for c in BENCH_COLUMNS))
    return "\n".join(lines) + "\n"


def render_bench_plot(rows, path, suite):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    done = [r for r in rows if r["status"] == "ok"]
    labels = [r["instance"] for r in done]
    times = [r["elapsed_ms"] for r in done]
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.plot(range(len(done)), times, marker="o")
    ax.set_xticks(range(len(done)))
    ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=8)
    ax.set_ylabel("time (ms)")
    ax.set_title(f"{suite} benchmark runtime")
    if times and max(times) / max(min(t for t in times if t > 0), 1e-3) > 100:
        ax.set_yscale("log")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


# ------------------------------------------------------------------ main


def main(argv=None):
    parser = build_arg_parser()
    args = parser.parse_args(argv)
    try:
        if args.gen_matrix:
            if args.depth is None:
                raise UsageError("--gen-matrix needs --depth")
            if not 0.0 <= args.density <= 1.0:
                raise UsageError("--density must be in [0..1]")
            grid = random_matrix(args.depth, args.seed, args.density)
            write_matrix_file(args.gen_matrix, args.depth, grid)
            print(f"wrote {args.gen_matrix}")
            return EXIT_VALID

        if args.bench:
            rows = run_bench(args)
            csv_text = bench_csv(rows)
            if args.out:
                with open(args.out, "w", encoding="utf-8") as fh:
                    fh.write(csv_text)
            sys.stdout.write(csv_text)
            if args.plot:
                render_bench_plot(rows, args.plot, args.bench)
            return EXIT_VALID

        instance, program, goal, host = build_instance(args)
        result = solve(program, goal, host=host, options=make_options(args))
        report = make_report(instance, result, args.witness)
        print_report(report, args.pretty)
        return EXIT_VALID if result.valid else EXIT_INVALID

    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except LimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ParseError, QchrError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
