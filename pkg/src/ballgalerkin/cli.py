"""Command-line driver: single solves and convergence studies written as CSV.

    ballgalerkin solve --problem planar_a05 --degree 10 [--quad 12] [--eval-grid]
    ballgalerkin study --problem planar_a05 --degrees 2..25 --out table1.csv

``BALLGALERKIN_NUM_THREADS`` caps the BLAS thread pool.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
import time
from contextlib import nullcontext
from dataclasses import dataclass
from pathlib import Path

from threadpoolctl import threadpool_limits

from .ballbasis import dim_pi
from .galerkin import (
    assemble,
    condition_number,
    error_grid,
    evaluate_solution,
    max_grid_error,
    solve,
)
from .problems import builtin_problem, load_problem

__all__ = ["StudyConfig", "run_study", "write_study", "resolve_problem", "parse_degrees", "main"]

log = logging.getLogger(__name__)

THREADS_ENV = "BALLGALERKIN_NUM_THREADS"
FIELDS = ["n", "N_n", "q", "max_error", "condition_number"]
RAW_FIELDS = FIELDS + ["assemble_seconds", "solve_seconds"]


class StudyError(RuntimeError):
    pass


@dataclass(frozen=True)
class StudyConfig:
    problem: str
    degrees: tuple
    quad_q: object = "auto"
    output: str = None
    emit_condition: bool = True

    def __post_init__(self):
        lo, hi = self.degrees
        if lo < 0 or hi < lo:
            raise ValueError(f"empty or negative degree range {lo}..{hi}")
        if self.quad_q != "auto" and int(self.quad_q) < 1:
            raise ValueError(f"quadrature order must be positive, got {self.quad_q}")


def resolve_problem(name):
    """A built-in problem name, or a path to a JSON problem file."""
    if name.endswith(".json") or os.path.sep in name:
        return load_problem(name)
    return builtin_problem(name)


def parse_degrees(text):
    lo, sep, hi = text.partition("..")
    try:
        return (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}") from None


def _parse_quad(text):
    if text == "auto":
        return text
    try:
        q = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'auto' or an integer, got {text!r}") from None
    if q < 1:
        raise argparse.ArgumentTypeError("quadrature order must be positive")
    return q


def run_study(config):
    """One row per degree: dimension, quadrature order, max grid error, condition number, timings."""
    problem = resolve_problem(config.problem)
    if problem.true_solution is None:
        raise StudyError(f"problem {problem.name!r} has no true solution to measure against")
    rows = []
    lo, hi = config.degrees
    for n in range(lo, hi + 1):
        try:
            t0 = time.perf_counter()
            system = assemble(problem, n, config.quad_q)
            t1 = time.perf_counter()
            solve(system)
            t2 = time.perf_counter()
            err = max_grid_error(system, problem)
            cond = condition_number(system) if config.emit_condition else None
        except Exception as exc:
            raise StudyError(f"degree {n}: {exc}") from exc
        rows.append(dict(
            n=n, N_n=dim_pi(n, problem.dim), q=system.quad_q, max_error=err,
            condition_number=cond, assemble_seconds=t1 - t0, solve_seconds=t2 - t1,
        ))
        log.info("n=%d N=%d q=%d error=%.3e", n, system.size, system.quad_q, err)
    return rows


def _fmt_row(row, fields, raw):
    out = []
    for f in fields:
        v = row[f]
        if v is None:
            out.append("")
        elif isinstance(v, float):
            out.append(repr(v) if raw else (f"{v:.2E}" if f == "max_error" else f"{v:.4g}"))
        else:
            out.append(str(v))
    return out


def raw_path(path):
    p = Path(path)
    return p.with_name(f"{p.stem}-raw{p.suffix or '.csv'}")


def write_study(rows, path):
    """Main CSV (rounded, deterministic) plus a full-precision ``-raw`` companion with timings."""
    path = Path(path)
    for target, fields, raw in ((path, FIELDS, False), (raw_path(path), RAW_FIELDS, True)):
        with open(target, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(fields)
            for row in rows:
                writer.writerow(_fmt_row(row, fields, raw))


def _cmd_solve(args):
    problem = resolve_problem(args.problem)
    t0 = time.perf_counter()
    system = assemble(problem, args.degree, args.quad)
    solve(system)
    elapsed = time.perf_counter() - t0
    print(f"problem={problem.name} d={problem.dim} n={args.degree} N={system.size} "
          f"q={system.quad_q} cond={condition_number(system):.4g} seconds={elapsed:.3f}")
    if problem.true_solution is not None:
        print(f"max_error={max_grid_error(system, problem):.3E}")
    if args.eval_grid:
        x = error_grid(problem.dim)
        s = problem.map.phi(x)
        un = evaluate_solution(system, x)
        coords = ["x", "y", "z"][: problem.dim]
        writer = csv.writer(sys.stdout, lineterminator="\n")
        header = coords + [f"s{i}" for i in range(problem.dim)] + ["u_n"]
        exact = problem.true_solution(s) if problem.true_solution is not None else None
        if exact is not None:
            header += ["u", "error"]
        writer.writerow(header)
        for i in range(len(x)):
            row = [*map(repr, x[i].tolist()), *map(repr, s[i].tolist()), repr(float(un[i]))]
            if exact is not None:
                row += [repr(float(exact[i])), repr(float(abs(exact[i] - un[i])))]
            writer.writerow(row)
    return 0


def _cmd_study(args):
    config = StudyConfig(args.problem, args.degrees, args.quad, args.out, not args.no_cond)
    rows = run_study(config)
    write_study(rows, args.out)
    print(f"wrote {len(rows)} rows to {args.out} and {raw_path(args.out)}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="ballgalerkin", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one problem at one degree")
    p.add_argument("--problem", required=True, help="built-in name or JSON problem file")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--quad", type=_parse_quad, default="auto")
    p.add_argument("--eval-grid", action="store_true", help="print the solution on the error grid as CSV")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("study", help="convergence study over a degree range")
    p.add_argument("--problem", required=True)
    p.add_argument("--degrees", type=parse_degrees, required=True, metavar="LO..HI")
    p.add_argument("--quad", type=_parse_quad, default="auto")
    p.add_argument("--out", required=True)
    p.add_argument("--no-cond", action="store_true", help="skip condition numbers")
    p.set_defaults(func=_cmd_study)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    threads = os.environ.get(THREADS_ENV)
    limit = threadpool_limits(limits=int(threads)) if threads else nullcontext()
    try:
        with limit:
            return args.func(args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
