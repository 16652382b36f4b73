"""Spectral analysis and series solutions for integral-functional Volterra equations.

Problem files are JSON::

    {"alpha": 0.5, "a": [1], "kernel": [[1]], "f": [2], "T": 1,
     "options": {"order": 30, "grid": 512}}

``kernel[p][q]`` is the coefficient of ``t**p s**q``.  Reports go to stdout
as JSON; sampled functions are written as CSV with ``--out``.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from .iteration import ConvergenceError, iterate_eigenfunction
from .operator import BivariateKernel, ProblemError, ProblemSpec, SolverOptions, residual
from .series import PowerSeries, SeriesError
from .solver import SeriesSolution, general_solution, homogeneous_series
from .spectrum import check_conditions, eigenvalue, estimate_contraction, spectrum

_OPTION_FIELDS = {f.name: f.type for f in dataclasses.fields(SolverOptions)}


class ProblemFileError(ProblemError):
    pass


def _line_of(text: str, key: str) -> int | None:
    needle = f'"{key}"'
    for lineno, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return lineno
    return None


def _field_error(text: str, key: str, message: str) -> ProblemFileError:
    line = _line_of(text, key)
    where = f" (line {line})" if line else ""
    return ProblemFileError(f"{message}{where}")


def _numbers(text: str, key: str, value) -> list[float]:
    if not isinstance(value, list) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        raise _field_error(text, key, f"field {key} must be an array of numbers")
    return [float(v) for v in value]


def problem_from_dict(data: dict, text: str = "") -> ProblemSpec:
    if not isinstance(data, dict):
        raise ProblemFileError("problem file must hold a JSON object")
    if "alpha" not in data:
        raise ProblemFileError("missing required field alpha")
    alpha = data["alpha"]
    if not isinstance(alpha, (int, float)) or isinstance(alpha, bool):
        raise _field_error(text, "alpha", "field alpha must be a number")
    if not 0.0 < alpha < 1.0:
        raise _field_error(text, "alpha", "alpha must lie in (0,1)")
    if "a" not in data:
        raise ProblemFileError("missing required field a")
    a = _numbers(text, "a", data["a"])
    kernel_raw = data.get("kernel", [])
    if not isinstance(kernel_raw, list):
        raise _field_error(text, "kernel", "field kernel must be a 2-D array of numbers")
    kernel = [_numbers(text, "kernel", row) for row in kernel_raw]
    f = _numbers(text, "f", data.get("f", [0.0])) or [0.0]
    T = data.get("T", 1.0)
    if not isinstance(T, (int, float)) or isinstance(T, bool) or not T > 0:
        raise _field_error(text, "T", "T must be a positive number")
    lam = data.get("lambda")
    if lam is not None and (not isinstance(lam, (int, float)) or isinstance(lam, bool)):
        raise _field_error(text, "lambda", "field lambda must be a number")
    raw_opts = data.get("options", {})
    if not isinstance(raw_opts, dict):
        raise _field_error(text, "options", "field options must be an object")
    unknown = sorted(set(raw_opts) - set(_OPTION_FIELDS))
    if unknown:
        raise _field_error(text, unknown[0], f"unknown option {unknown[0]}")
    try:
        options = SolverOptions(**raw_opts)
        return ProblemSpec(
            float(alpha),
            PowerSeries(a or [0.0]),
            BivariateKernel(kernel),
            PowerSeries(f),
            float(T),
            None if lam is None else float(lam),
            options,
        )
    except (TypeError, SeriesError) as exc:
        raise ProblemFileError(str(exc)) from exc


def parse_problem(path: str | Path) -> ProblemSpec:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(
            f"cannot parse {path}: {exc.msg} at line {exc.lineno} column {exc.colno}"
        ) from exc
    return problem_from_dict(data, text)


def problem_to_dict(spec: ProblemSpec) -> dict:
    out = {
        "alpha": spec.alpha,
        "a": list(spec.a.coeffs),
        "kernel": [list(r) for r in spec.kernel.coeffs],
        "f": list(spec.f.coeffs),
        "T": spec.T,
        "options": dataclasses.asdict(spec.options),
    }
    if spec.lam is not None:
        out["lambda"] = spec.lam
    return out


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_csv(path: str | Path, columns: dict[str, np.ndarray]) -> None:
    names = list(columns)
    rows = np.column_stack([np.asarray(columns[k], dtype=float) for k in names])
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(names)
        for row in rows:
            writer.writerow([format(v, ".17g") for v in row])


def _lambda(args, spec: ProblemSpec) -> float:
    lam = args.lam if args.lam is not None else spec.lam
    if lam is None:
        raise ProblemError("--lambda is required (or give lambda in the problem file)")
    return lam


def cmd_check(args, spec: ProblemSpec) -> dict:
    report = check_conditions(spec, args.epsilon)
    contraction = None
    if report.holds:
        contraction = estimate_contraction(spec, args.n, report.epsilon, report).to_dict()
    return {"conditions": report.to_dict(), "contraction": contraction}


def cmd_spectrum(args, spec: ProblemSpec) -> dict:
    if args.count < 1:
        raise ProblemError("--count must be >= 1")
    return spectrum(spec, args.count).to_dict()


def cmd_eigenfunction(args, spec: ProblemSpec) -> dict:
    order = args.order or spec.options.order
    t = spec.nodes()
    out: dict = {"n": args.n, "lambda": eigenvalue(spec, args.n), "method": args.method}
    columns: dict[str, np.ndarray] = {"t": t}
    if args.method in ("series", "both"):
        series = homogeneous_series(spec, args.n, order)
        out["series"] = list(series.coeffs)
        columns["phi"] = series(t)
    if args.method in ("iterate", "both"):
        it = iterate_eigenfunction(spec, args.n, args.epsilon)
        out["iterate"] = {
            "epsilon": args.epsilon or spec.options.epsilon,
            "L": it.contraction.L_star,
            "q_of_L": it.contraction.q_of_L,
            **it.trace.to_dict(),
        }
        if args.method == "iterate":
            columns["phi"] = it.phi.values
        else:
            columns["phi_series"] = columns["phi"]
            columns["phi_iterate"] = it.phi.values
            columns["abs_diff"] = np.abs(columns["phi_series"] - it.phi.values)
            out["max_abs_diff"] = float(columns["abs_diff"].max())
    if args.out:
        write_csv(args.out, columns)
        out["csv"] = str(args.out)
    return out


def _sample_domain(spec: ProblemSpec, log: bool) -> tuple[float, float]:
    if log:
        return spec.options.min_t, spec.T
    return (-spec.T if spec.options.symmetric else 0.0), spec.T


def cmd_solve(args, spec: ProblemSpec) -> dict:
    lam = _lambda(args, spec)
    sol = general_solution(spec, lam, args.c, args.order or spec.options.order)
    out = {"lambda": lam, **sol.to_dict()}
    if args.out:
        lo, hi = _sample_domain(spec, sol.has_log)
        t = np.linspace(lo, hi, spec.options.grid)
        write_csv(args.out, {"t": t, "x": sol(t)})
        out["csv"] = str(args.out)
    return out


def cmd_residual(args, spec: ProblemSpec) -> dict:
    data = json.loads(Path(args.solution).read_text())
    lam = args.lam if args.lam is not None else data.get("lambda", spec.lam)
    if lam is None:
        raise ProblemError("--lambda is required")
    sol = SeriesSolution.from_dict(data)
    report = residual(spec, lam, sol, _sample_domain(spec, sol.has_log))
    return {"lambda": lam, **report.to_dict()}


COMMANDS = {
    "check": cmd_check,
    "spectrum": cmd_spectrum,
    "eigenfunction": cmd_eigenfunction,
    "solve": cmd_solve,
    "residual": cmd_residual,
}


def _global_flags(parser: argparse.ArgumentParser, default) -> None:
    parser.add_argument("--problem", default=default, help="problem definition (JSON)")
    parser.add_argument("--grid", type=int, default=default, help="grid size")
    parser.add_argument("--tol", type=float, default=default, help="iteration tolerance")
    parser.add_argument("--min-t", type=float, default=default, dest="min_t",
                        help="left end of sampling for log-singular solutions")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="volterra-spectral", description=__doc__.splitlines()[0])
    _global_flags(parser, None)
    common = argparse.ArgumentParser(add_help=False)
    # repeated after the subcommand; SUPPRESS keeps values given before it
    _global_flags(common, argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="verify conditions and contraction weight")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--n", type=int, default=0)

    p = sub.add_parser("spectrum", parents=[common], help="list eigenvalues a(0) alpha^n")
    p.add_argument("--count", type=int, required=True)

    p = sub.add_parser("eigenfunction", parents=[common], help="construct an eigenfunction")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=("series", "iterate", "both"), default="series")
    p.add_argument("--order", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--out")

    p = sub.add_parser("solve", parents=[common], help="solve lam x = A x + f")
    p.add_argument("--lambda", type=float, dest="lam")
    p.add_argument("--c", type=float, default=0.0)
    p.add_argument("--order", type=int)
    p.add_argument("--out")

    p = sub.add_parser("residual", parents=[common], help="residual of a solution emitted by solve")
    p.add_argument("--lambda", type=float, dest="lam")
    p.add_argument("--solution", required=True)
    return parser


def _apply_overrides(spec: ProblemSpec, args) -> ProblemSpec:
    changes = {k: getattr(args, k) for k in ("grid", "tol", "min_t") if getattr(args, k) is not None}
    if not changes:
        return spec
    return dataclasses.replace(spec, options=dataclasses.replace(spec.options, **changes))


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.problem is None:
        parser.error("--problem is required")
    try:
        spec = _apply_overrides(parse_problem(args.problem), args)
        report = COMMANDS[args.command](args, spec)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ProblemError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(dumps(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
