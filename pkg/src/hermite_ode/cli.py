"""Command-line front end.

    hermite-ode --preset rc_ladder_ivp --out results/
    hermite-ode --problem my_problem.toml --report json --reference
    hermite-ode                      # lists the bundled presets
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .analysis import IllPosedProblemError, reference_bvp, reference_ivp, residual_at
from .expression import EvaluationError
from .pipeline import solve
from .problem import Problem, ProblemFileError, list_presets, load_preset, load_problem
from .solver import CgBreakdownError, Preconditioner
from .spline import HermiteSpline, Mesh, spline_deriv_eval, spline_eval

log = logging.getLogger("hermite_ode")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NOT_CONVERGED = 2


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hermite-ode",
        description="Residual-optimal Hermite cubic spline solutions of linear ODE IVPs/BVPs.",
    )
    src = p.add_mutually_exclusive_group()
    src.add_argument("--problem", type=Path, help="TOML problem file")
    src.add_argument("--preset", help="bundled preset name")
    src.add_argument("--list-presets", action="store_true", help="list bundled presets and exit")
    p.add_argument("--samples", type=int, default=200, help="uniform sample points in solution.csv")
    p.add_argument("--out", type=Path, default=Path("."), help="output directory")
    p.add_argument("--report", choices=("text", "json"), default="text")
    p.add_argument("--tol", type=float, help="CG relative tolerance")
    p.add_argument("--max-iter", type=int, help="CG iteration cap")
    p.add_argument("--gauss", type=int, help="Gauss points per element")
    p.add_argument("--no-precondition", action="store_true", help="disable Jacobi preconditioning")
    p.add_argument("--reference", action="store_true", help="compute the global error against a reference")
    p.add_argument("--warm-start", type=Path, help="CSV with knot values/derivatives used as the CG start")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def read_warm_start(path: Path, mesh: Mesh, n: int) -> HermiteSpline:
    """Pick the knot rows out of a CSV laid out like ``solution.csv``."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        expected = ["t"] + [f"x_{j}" for j in range(1, n + 1)] + [f"dx_{j}" for j in range(1, n + 1)]
        if header is None or header[: 2 * n + 1] != expected:
            raise ProblemFileError(f"warm start {path}: header must begin with {','.join(expected)}")
        rows = np.array([[float(v) for v in row[: 2 * n + 1]] for row in reader if row])
    if rows.size == 0:
        raise ProblemFileError(f"warm start {path}: no data rows")
    values = np.empty((mesh.knots.size, n))
    derivs = np.empty((mesh.knots.size, n))
    scale = max(1.0, float(np.max(np.abs(mesh.knots))))
    for i, tk in enumerate(mesh.knots):
        hit = np.flatnonzero(np.abs(rows[:, 0] - tk) <= 1e-12 * scale)
        if hit.size == 0:
            raise ProblemFileError(f"warm start {path}: no row for knot t={_fmt(tk)}")
        values[i] = rows[hit[0], 1 : n + 1]
        derivs[i] = rows[hit[0], n + 1 :]
    return HermiteSpline(mesh, values, derivs)


def _apply_flags(problem: Problem, args) -> Problem:
    cg = problem.cg
    if args.tol is not None:
        cg = dataclasses.replace(cg, rel_tol=args.tol)
    if args.max_iter is not None:
        cg = dataclasses.replace(cg, max_iter=args.max_iter)
    if args.no_precondition:
        cg = dataclasses.replace(cg, preconditioner=Preconditioner.NONE)
    problem.cg = cg
    if args.gauss is not None:
        if args.gauss < 1:
            raise ProblemFileError("--gauss must be a positive integer")
        problem.gauss = args.gauss
    if args.reference:
        problem.reference = True
    return problem


def _reference(problem: Problem):
    sys_, bcs, n = problem.system, problem.bcs, problem.system.n
    if bcs.is_initial_value(n):
        return reference_ivp(sys_, bcs.initial_state(n), problem.dense_factor, problem.mesh)
    if sys_.constant_a and len(bcs.constraints) == n:
        return reference_bvp(sys_, bcs, problem.dense_factor, problem.mesh)
    log.warning("no reference available for this problem; global error skipped")
    return None


def write_solution_csv(path: Path, spline: HermiteSpline, sys_, samples: int) -> None:
    mesh = spline.mesh
    t0, tm = mesh.knots[0], mesh.knots[-1]
    ts = np.unique(np.concatenate([np.linspace(t0, tm, samples) if samples > 0 else [], mesh.knots]))
    n = spline.n
    header = ["t"] + [f"x_{j}" for j in range(1, n + 1)] + [f"dx_{j}" for j in range(1, n + 1)]
    header.append("residual_norm")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for t in ts:
            x = spline_eval(spline, t)
            dx = spline_deriv_eval(spline, t)
            r = float(np.linalg.norm(residual_at(spline, sys_, t)))
            w.writerow([_fmt(t), *map(_fmt, x), *map(_fmt, dx), _fmt(r)])


def report_fields(problem: Problem, result) -> dict:
    return {
        "problem": problem.name,
        "n": problem.system.n,
        "knots": int(problem.mesh.knots.size),
        "full_size": result.full_size,
        "reduced_size": result.reduced_size,
        "cg_iterations": result.stats.iterations,
        "cg_final_residual": result.stats.final_residual_norm,
        "cg_converged": result.stats.converged,
        "residual_error": result.residual_error,
        "global_error": result.global_error,
        "wall_time_s": result.wall_time,
    }


def write_report(path_base: Path, fields: dict, kind: str) -> Path:
    if kind == "json":
        path = path_base.with_suffix(".json")
        path.write_text(json.dumps(fields, indent=2) + "\n", encoding="utf-8")
        return path
    path = path_base.with_suffix(".txt")
    lines = []
    for key, value in fields.items():
        if isinstance(value, float):
            value = _fmt(value)
        lines.append(f"{key}: {value}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    if args.list_presets or (args.problem is None and args.preset is None):
        for name, description in list_presets():
            print(f"{name:20s} {description}")
        return EXIT_OK

    try:
        problem = load_problem(args.problem) if args.problem else load_preset(args.preset)
        problem = _apply_flags(problem, args)
        warm = read_warm_start(args.warm_start, problem.mesh, problem.system.n) if args.warm_start else None
        ref = _reference(problem) if problem.reference else None
        result = solve(
            problem.system,
            problem.mesh,
            problem.bcs,
            gauss=problem.gauss,
            cg=problem.cg,
            warm_start=warm,
            pin_initial_derivative=problem.pin_initial_derivative,
            reference=ref,
        )
        args.out.mkdir(parents=True, exist_ok=True)
        write_solution_csv(args.out / "solution.csv", result.spline, problem.system, args.samples)
    except (ProblemFileError, EvaluationError, IllPosedProblemError, CgBreakdownError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    fields = report_fields(problem, result)
    path = write_report(args.out / "report", fields, args.report)
    log.info("wrote %s and %s", args.out / "solution.csv", path)
    if args.report == "text":
        sys.stdout.write(path.read_text(encoding="utf-8"))
    if not result.stats.converged:
        print(
            f"warning: CG did not converge in {result.stats.iterations} iterations "
            f"(residual {result.stats.final_residual_norm:.3e})",
            file=sys.stderr,
        )
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def main() -> None:
    sys.exit(run())
