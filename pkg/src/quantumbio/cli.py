"""Command-line entry point.

Exit codes: 0 success, 1 domain or constraint error, 2 usage or input-parse
error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import code_tables, evolution_dynamics as evo, lattice_folding as lf
from . import replication_model as rep
from . import search_core as sc
from .tables import Table


class InputError(Exception):
    """Malformed user-supplied data; maps to exit code 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # keep argparse's exit 2, but on our stream
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(2)


# -- numeric input ----------------------------------------------------------

def parse_rows(text: str, source: str) -> list[list[float]]:
    """Whitespace-separated numeric rows; ``;`` also separates rows, ``#`` starts a comment."""
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        for chunk in line.split("#", 1)[0].split(";"):
            parts = chunk.split()
            if not parts:
                continue
            try:
                rows.append([float(p) for p in parts])
            except ValueError:
                raise InputError(f"{source}: line {lineno}: non-numeric value in {chunk.strip()!r}") from None
    if not rows:
        raise InputError(f"{source}: no numeric data")
    return rows


def _load_numbers(path: str | None, inline: str | None, what: str) -> list[list[float]] | None:
    if path is not None and inline is not None:
        raise InputError(f"give either --{what} or --{what}-values, not both")
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read {what} file {path}: {exc.strerror}") from None
        return parse_rows(text, path)
    if inline is not None:
        return parse_rows(inline, f"--{what}-values")
    return None


def _load_matrix(path, inline, what) -> np.ndarray | None:
    rows = _load_numbers(path, inline, what)
    if rows is None:
        return None
    width = len(rows[0])
    for i, r in enumerate(rows, start=1):
        if len(r) != width:
            raise InputError(f"{what}: row {i} has {len(r)} entries, expected {width}")
    m = np.array(rows, dtype=float)
    if m.shape[0] != m.shape[1]:
        raise InputError(f"{what}: matrix must be square, got {m.shape[0]}x{m.shape[1]}")
    return m


def _emit(text: str, args) -> None:
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _target(args, n: int) -> int:
    t = args.target - 1 if args.one_based else args.target
    if not 0 <= t < n:
        shown = args.target
        raise IndexError(f"target {shown} outside the database of {n} items")
    return t


# -- subcommands ------------------------------------------------------------

def cmd_grover(args) -> None:
    n = args.n
    problem = sc.SearchProblem(n, _target(args, n))
    if args.optimal:
        sol = sc.optimal_queries(n)
        table = Table(["n", "target", "q_real", "q_int", "residual_error"])
        table.add(n, problem.target, sol.q_real, sol.q_int, sol.residual_error)
    else:
        if args.queries < 0:
            raise ValueError(f"--queries must be >= 0, got {args.queries}")
        table = Table(["round", "stage"] + [f"amp_{i}" for i in range(n)] + ["success_probability"])
        trace = sc.grover_trace(problem, args.queries)
        if not args.trace:
            trace = trace[-1:]
        for k, stage, state in trace:
            table.add(k, stage, *state.amplitudes.tolist(), state.probability(problem.target))
    _emit(table.render(args.format), args)


def cmd_sizes(args) -> None:
    if args.q_max < 1:
        raise ValueError(f"--q-max must be >= 1, got {args.q_max}")
    table = Table(["queries", "exact_n", "rounded_alphabet", "interpretation"])
    for row in code_tables.alphabet_summary(args.q_max, include_bound=args.with_bound):
        table.add(row.queries, row.exact_n, row.rounded_alphabet, row.interpretation)
    _emit(table.render(args.format), args)


def cmd_evolve(args) -> None:
    raw = _load_matrix(args.matrix, args.matrix_values, "matrix")
    if raw is None:
        raise InputError("an evolution matrix is required (--matrix or --matrix-values)")
    try:
        m = evo.EvolutionMatrix.infer(raw)
    except evo.ColumnSumError as exc:
        raise InputError(f"matrix: {exc}") from None
    pop_rows = _load_numbers(args.pop, args.pop_values, "pop")
    if pop_rows is None:
        raise InputError("a population is required (--pop or --pop-values)")
    values = [v for r in pop_rows for v in r]
    if len(values) != m.size:
        raise InputError(f"pop: {len(values)} species but the matrix is {m.size}x{m.size}")
    try:
        pop = evo.PopulationVector.of(values)
    except ValueError as exc:
        raise InputError(f"pop: {exc}") from None
    policy = evo.Policy(args.policy)

    if args.speedup:
        a = _load_matrix(args.perturbation, args.perturbation_values, "perturbation")
        if a is None or not args.lambdas:
            raise InputError("--speedup needs a perturbation and --lambdas")
        if a.shape != raw.shape:
            raise InputError(f"perturbation shape {a.shape} does not match matrix {raw.shape}")
        try:
            rows = evo.speedup_experiment(
                m, a, args.lambdas, pop, policy, args.threshold, args.tol, args.max_steps
            )
        except evo.ColumnSumError as exc:
            raise InputError(str(exc)) from None
        table = Table(
            ["lambda", "feasible", "mode", "steps_to_winner", "winner", "stationarity_steps",
             "negativity_events", "abs_lambda2", "note"]
        )
        for r in rows:
            lam2 = evo.second_eigenvalue_modulus(evo.EvolutionMatrix.infer(m.entries + r.lam * a))
            table.add(r.lam, r.feasible, r.mode, r.steps_to_winner, r.winner, r.stationarity_steps,
                      r.negativity_events, lam2, r.note)
    elif args.steps is not None:
        traj = evo.evolve(pop, m, args.steps, policy)
        table = Table(["t"] + [f"phi_{i}" for i in range(m.size)])
        for t, p in enumerate(traj):
            table.add(t, *p.phi.tolist())
    else:
        r = evo.convergence_time(pop, m, policy, args.threshold, args.tol, args.max_steps)
        table = Table(["winner_status", "steps_to_winner", "winner", "stationarity_steps",
                       "negativity_events", "steps_run", "abs_lambda2"])
        table.add("reached" if r.winner_reached else "unreached", r.steps_to_winner, r.winner,
                  r.stationarity_steps, r.negativity_events, r.steps_run,
                  evo.second_eigenvalue_modulus(m))
    _emit(table.render(args.format), args)


def _read_angle_csv(path: str) -> list[tuple[float, float]]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    points = []
    for lineno, row in enumerate(csv.reader(text.splitlines()), start=1):
        if not row or not "".join(row).strip():
            continue
        if len(row) < 2:
            raise InputError(f"{path}: line {lineno}: expected phi,psi")
        try:
            points.append((float(row[0]), float(row[1])))
        except ValueError:
            if lineno == 1:
                continue  # header
            raise InputError(f"{path}: line {lineno}: non-numeric angle") from None
    return points


def cmd_fold(args) -> None:
    if args.action == "discretize":
        table = Table(["phi", "psi", "star_phi", "star_psi", "distance"])
        for phi, psi in _read_angle_csv(args.input):
            choice, dist = lf.discretize_angles(lf.RamachandranPoint(phi, psi))
            table.add(phi, psi, choice.phi, choice.psi, dist)
        _emit(table.render(args.format), args)
        return

    if args.units is None:
        raise InputError("fold needs --units (or the 'discretize' action)")
    if args.threads < 1:
        raise InputError("--threads must be >= 1")
    collect = not args.count_only
    result = lf.enumerate_conformations(
        args.units, args.allow_cis, collect=collect, cap=args.cap, threads=args.threads
    )
    if args.count_only:
        table = Table(["units", "allow_cis", "count"])
        table.add(args.units, args.allow_cis, result.count)
        _emit(table.render(args.format), args)
        return
    if not args.emit_coords:
        table = Table(["conformation", "choices"])
        for k, conf in enumerate(result.conformations):
            table.add(k, " ".join(c.label() for c in conf.choices))
        _emit(table.render(args.format), args)
        return

    coords = [lf.conformation_to_coordinates(c, args.bond_length) for c in result.conformations]
    if args.coords_style == "text":
        parts = []
        for k, (conf, xyz) in enumerate(zip(result.conformations, coords)):
            parts.append(f"# conformation {k} choices {' '.join(c.label() for c in conf.choices)}\n")
            parts.append(lf.write_coordinates_text(xyz))
        _emit("".join(parts), args)
    elif args.coords_style == "xyz":
        _emit("".join(
            lf.write_xyz(xyz, f"conformation {k} choices {' '.join(c.label() for c in conf.choices)}")
            for k, (conf, xyz) in enumerate(zip(result.conformations, coords))
        ), args)
    else:
        table = Table(["conformation", "site", "x", "y", "z"])
        for k, xyz in enumerate(coords):
            for i, (x, y, z) in enumerate(xyz.tolist()):
                table.add(k, i, x, y, z)
        _emit(table.render(args.format), args)


def cmd_replication(args) -> None:
    target = _target(args, args.n)
    sc.SearchProblem(args.n, target)
    table = Table(["ratio", "success_probability", "damping_factor"])
    for ratio, p in rep.hierarchy_sweep(args.n, target, args.ratios):
        table.add(ratio, p, float(np.exp(-ratio / 2.0)))
    _emit(table.render(args.format), args)


def cmd_aminoacids(args) -> None:
    records = code_tables.canonical_table()
    if args.export:
        table = Table(["code3", "name", "property", "mol_wt", "class"])
        for r in records:
            table.add(r.code3, r.name, r.property, r.mol_wt, r.klass)
        _emit(table.render(args.format), args)
        return
    report = code_tables.validate_partition(records)
    if args.format == "json":
        doc = {
            "all_passed": report.all_passed,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in report.checks],
            "group_means": [
                {"property": k, "class_I_mean": v[0], "class_II_mean": v[1]}
                for k, v in report.group_means.items()
            ],
        }
        _emit(json.dumps(doc, indent=2) + "\n", args)
    else:
        table = Table(["check", "passed", "detail"])
        for c in report.checks:
            table.add(c.name, c.passed, c.detail)
        _emit(table.render("csv"), args)


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--output", "-o", help="write here instead of standard output")
    common.add_argument("--seed", type=int, help="reserved; every computation is deterministic")

    parser = _Parser(prog="quantumbio", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("grover", parents=[common], help="simulate database search")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--target", type=int, default=0)
    p.add_argument("--one-based", action="store_true", help="read --target as 1-based")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--queries", type=int)
    mode.add_argument("--optimal", action="store_true")
    p.add_argument("--trace", action="store_true", help="emit every oracle/diffusion stage")
    p.set_defaults(func=cmd_grover)

    p = sub.add_parser("sizes", parents=[common], help="alphabet sizes per query count")
    p.add_argument("--q-max", type=int, default=3)
    p.add_argument("--with-bound", action="store_true", help="append the structural bound row")
    p.set_defaults(func=cmd_sizes)

    p = sub.add_parser("evolve", parents=[common], help="population evolution")
    p.add_argument("--matrix")
    p.add_argument("--matrix-values", help="inline rows, e.g. '0.9 0.1; 0.1 0.9'")
    p.add_argument("--pop")
    p.add_argument("--pop-values")
    p.add_argument("--steps", type=int, help="emit the trajectory instead of a report")
    p.add_argument("--policy", choices=[x.value for x in evo.Policy], default="strict")
    p.add_argument("--threshold", type=float, default=evo.DEFAULT_WINNER_THRESHOLD)
    p.add_argument("--tol", type=float, default=evo.DEFAULT_STATIONARITY_TOL)
    p.add_argument("--max-steps", type=int, default=evo.DEFAULT_MAX_STEPS)
    p.add_argument("--speedup", action="store_true")
    p.add_argument("--perturbation")
    p.add_argument("--perturbation-values")
    p.add_argument("--lambdas", type=float, nargs="+")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("fold", parents=[common], help="diamond-lattice backbone enumeration")
    p.add_argument("--units", type=int)
    p.add_argument("--allow-cis", action="store_true")
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--emit-coords", action="store_true")
    p.add_argument("--coords-style", choices=("table", "text", "xyz"), default="table")
    p.add_argument("--bond-length", type=float, default=1.0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--cap", type=int, default=lf.DEFAULT_CAP)
    p.set_defaults(func=cmd_fold, action=None)
    actions = p.add_subparsers(dest="action", parser_class=_Parser)
    d = actions.add_parser("discretize", parents=[common], help="snap (phi, psi) pairs to the star grid")
    d.add_argument("--input", required=True, help="CSV of phi,psi pairs in degrees")

    p = sub.add_parser("replication", parents=[common], help="timescale-hierarchy sweep")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--target", type=int, default=0)
    p.add_argument("--one-based", action="store_true")
    p.add_argument("--ratios", type=float, nargs="+", required=True, help="t_osc / t_r values")
    p.set_defaults(func=cmd_replication)

    p = sub.add_parser("aminoacids", parents=[common], help="amino-acid class table")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--validate", action="store_true")
    g.add_argument("--export", action="store_true")
    p.set_defaults(func=cmd_aminoacids)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except InputError as exc:
        print(f"quantumbio {args.command}: input error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, IndexError, ArithmeticError, RuntimeError) as exc:
        print(f"quantumbio {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
