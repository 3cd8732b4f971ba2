"""Command-line pipeline: ingest rates, solve, compile, run VQE, sweep grids.

Subcommands
    classical  exhaustive search; exit 0 if a profitable cycle exists, 2 if not
    compile    write qubo.json / ising.json / pauli.txt, print the qubit count
    vqe        run the variational solver; exit 3 when the readout is infeasible
    grid       (reps x entanglement) success-rate sweep against the oracle

Every command writes a manifest.json capturing its full configuration;
``--from-manifest`` replays a previous run, byte-identically in exact mode.
Human-readable text goes to stdout, machine-readable artifacts to --out.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .errors import QarbError
from .circuits import CircuitSpec
from .ising import pauli_text
from .market import NormalizationVector, TransitMatrix, load_rates, normalize
from .model import brute_force_best
from .optimizers import DeConfig, LocalConfig
from .pipeline import CompiledProblem, compile_problem
from .vqe import VqeConfig, VqeOutcome, hyperparameter_grid, run_vqe

_MANIFEST_KEYS = (
    "command input normalize formulation penalty reps entanglement optimizer "
    "popsize max_generations tol mutation recombination max_evaluations "
    "shots shots_final seed trials reps_list patterns threads"
).split()


def _manifest_from_args(args: argparse.Namespace) -> dict:
    return {k: getattr(args, k) for k in _MANIFEST_KEYS if hasattr(args, k)}


def _write(out: Path, name: str, text: str) -> None:
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_text(text)


def _write_json(out: Path, name: str, obj) -> None:
    _write(out, name, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _load_market(args: argparse.Namespace) -> TransitMatrix:
    market = load_rates(args.input)
    if args.normalize:
        coeffs = np.array([float(x) for x in args.normalize.split(",")])
        market = normalize(market, NormalizationVector(coeffs))
    return market


def _cycle_text(market: TransitMatrix, cycle: list[int]) -> str:
    names = [market.labels[i] for i in cycle] + [market.labels[cycle[0]]]
    return "→".join(names)


def cmd_classical(args: argparse.Namespace) -> int:
    market = _load_market(args)
    from .market import log_weights

    solution = brute_force_best(log_weights(market))
    out = Path(args.out)
    _write_json(out, "manifest.json", _manifest_from_args(args))
    _write_json(out, "solution.json", solution.to_dict())
    if solution.profit_rate > 0.0:
        for cycle in solution.cycles:
            print(f"cycle: {_cycle_text(market, cycle)}")
        print(f"log gain: {solution.log_gain:.6f}")
        print(f"profit rate: {solution.profit_rate:.6f}")
        return 0
    print("no arbitrage opportunity")
    return 2


def _compile(args: argparse.Namespace) -> tuple[TransitMatrix, CompiledProblem]:
    market = _load_market(args)
    return market, compile_problem(market, args.formulation, args.penalty)


def cmd_compile(args: argparse.Namespace) -> int:
    _, problem = _compile(args)
    out = Path(args.out)
    _write_json(out, "manifest.json", _manifest_from_args(args))
    _write(out, "qubo.json", problem.qubo.to_json() + "\n")
    _write(out, "ising.json", problem.hamiltonian.to_json() + "\n")
    _write(out, "pauli.txt", pauli_text(problem.hamiltonian))
    print(f"{problem.num_qubits} qubits")
    return 0


def _vqe_config(args: argparse.Namespace, num_qubits: int) -> VqeConfig:
    ansatz = CircuitSpec(num_qubits, reps=args.reps, entanglement=args.entanglement)
    if args.optimizer == "de":
        optimizer = DeConfig(
            popsize=args.popsize,
            max_generations=args.max_generations,
            tol=args.tol,
            mutation=tuple(args.mutation),
            recombination=args.recombination,
            seed=args.seed,
        )
    else:
        optimizer = LocalConfig(max_evaluations=args.max_evaluations)
    return VqeConfig(
        ansatz=ansatz,
        optimizer=optimizer,
        shots=args.shots,
        shots_final=args.shots_final,
        seed=args.seed,
        threads=args.threads,
    )


def _write_vqe_outputs(out: Path, args, outcome: VqeOutcome) -> None:
    _write_json(out, "manifest.json", _manifest_from_args(args))
    _write_json(out, "outcome.json", outcome.to_dict())
    rows = ["evaluation_index,value"]
    rows += [f"{i},{v!r}" for i, v in enumerate(outcome.trace.eval_values)]
    _write(out, "trace.csv", "\n".join(rows) + "\n")
    rows = ["generation,best,mean,std"]
    rows += [
        f"{g},{b!r},{m!r},{s!r}" for g, b, m, s in outcome.trace.generation_stats
    ]
    _write(out, "generations.csv", "\n".join(rows) + "\n")
    rows = ["bitstring,count"]
    rows += [f"{b},{c}" for b, c in sorted(outcome.eigenstate_samples.items())]
    _write(out, "samples.csv", "\n".join(rows) + "\n")


def cmd_vqe(args: argparse.Namespace) -> int:
    if args.grid:
        return cmd_grid(args)
    market, problem = _compile(args)
    cfg = _vqe_config(args, problem.num_qubits)
    outcome = run_vqe(problem.hamiltonian, cfg, problem)
    _write_vqe_outputs(Path(args.out), args, outcome)
    print(f"lambda estimate: {outcome.lambda_estimate:.6f}")
    print(f"evaluations: {outcome.opt.evaluations} (converged: {outcome.opt.converged})")
    if outcome.solution is None:
        print("readout INFEASIBLE: no sampled bitstring satisfies the constraints")
        return 3
    if outcome.solution.profit_rate > 0.0:
        for cycle in outcome.solution.cycles:
            print(f"cycle: {_cycle_text(market, cycle)}")
        print(f"log gain: {outcome.solution.log_gain:.6f}")
        print(f"profit rate: {outcome.solution.profit_rate:.6f}")
    else:
        print("no profitable cycle in the readout")
    return 0


def cmd_grid(args: argparse.Namespace) -> int:
    _, problem = _compile(args)
    cfg = _vqe_config(args, problem.num_qubits)
    reps_list = [int(x) for x in args.reps_list.split(",")]
    patterns = args.patterns.split(",")
    result = hyperparameter_grid(problem, reps_list, patterns, args.trials, cfg)
    out = Path(args.out)
    _write_json(out, "manifest.json", _manifest_from_args(args))
    _write(out, "grid.csv", result.to_csv())
    _write(out, "grid_runs.csv", result.runs_csv())
    print(result.pretty())
    return 0


def _add_market_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="CSV or JSON rate matrix")
    p.add_argument(
        "--normalize",
        default=None,
        help="comma-separated per-currency scaling coefficients",
    )
    p.add_argument("--out", default="qarb_out", help="output directory")
    p.add_argument("--from-manifest", default=None, help="replay a previous run")


def _add_compile_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--formulation", choices=("selfloop", "slack"), default="selfloop")
    p.add_argument("--penalty", type=float, default=None, help="equality penalty weight (default: auto)")


def _add_vqe_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--entanglement", choices=("full", "linear", "circular", "sca"), default="sca")
    p.add_argument("--optimizer", choices=("de", "local"), default="de")
    p.add_argument("--popsize", type=int, default=15)
    p.add_argument("--max-generations", type=int, default=500, dest="max_generations")
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--mutation", type=float, nargs=2, default=(0.5, 1.0))
    p.add_argument("--recombination", type=float, default=0.7)
    p.add_argument("--max-evaluations", type=int, default=5000, dest="max_evaluations")
    p.add_argument("--shots", type=int, default=None, help="expectation shots (default: exact)")
    p.add_argument("--shots-final", type=int, default=4000, dest="shots_final")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--threads",
        type=int,
        default=int(os.environ.get("QARB_THREADS", "1")),
        help="parallel candidate evaluations (env QARB_THREADS)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qarb", description="currency-arbitrage search via variational quantum optimization"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classical", help="exhaustive (brute force) search")
    _add_market_args(p)

    p = sub.add_parser("compile", help="emit the QUBO and Ising artifacts")
    _add_market_args(p)
    _add_compile_args(p)

    p = sub.add_parser("vqe", help="variational search")
    _add_market_args(p)
    _add_compile_args(p)
    _add_vqe_args(p)
    p.add_argument("--grid", action="store_true", help="run the hyperparameter grid instead")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--reps-list", default="1,2,3", dest="reps_list")
    p.add_argument("--patterns", default="full,linear,circular,sca")

    p = sub.add_parser("grid", help="hyperparameter success-rate sweep")
    _add_market_args(p)
    _add_compile_args(p)
    _add_vqe_args(p)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--reps-list", default="1,2,3", dest="reps_list")
    p.add_argument("--patterns", default="full,linear,circular,sca")
    p.set_defaults(grid=True)

    return parser


_HANDLERS = {
    "classical": cmd_classical,
    "compile": cmd_compile,
    "vqe": cmd_vqe,
    "grid": cmd_grid,
}


def _apply_manifest(args: argparse.Namespace) -> argparse.Namespace:
    """Replace settings with a stored manifest; --out and --threads stay local."""
    stored = json.loads(Path(args.from_manifest).read_text())
    if stored.get("command") != args.command:
        raise QarbError(
            f"manifest was written by {stored.get('command')!r}, not {args.command!r}"
        )
    for key, value in stored.items():
        if key in ("threads",):
            continue
        if isinstance(value, list) and key == "mutation":
            value = tuple(value)
        setattr(args, key, value)
    return args


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "from_manifest", None):
            args = _apply_manifest(args)
        return _HANDLERS[args.command](args)
    except (QarbError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
