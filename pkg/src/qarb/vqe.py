"""Variational eigensolver driver: batched optimization, readout, decoding.

One run minimizes the Hamiltonian expectation over ansatz parameters
(exactly or from shots), samples the optimized circuit, and decodes the
sampled bitstrings back into arbitrage cycles.  Whole generations are
evaluated as one batch, optionally across a thread pool; results never
depend on the thread schedule because each candidate owns a seed derived
from (master seed, evaluation index).
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .circuits import (
    CircuitSpec,
    bitstring_to_bits,
    index_to_bitstring,
    simulate_real,
    _sample_indices,
)
from .errors import ConfigMismatchError, LengthMismatchError
from .ising import IsingHamiltonian, energies, energies_for_indices
from .model import CycleSolution, QuadraticProgram, cycles_from_edges, evaluate_assignment
from .optimizers import DeConfig, LocalConfig, OptResult, de_minimize, local_minimize
from .pipeline import CompiledProblem

# Sub-stream tags so the optimizer, per-evaluation sampling, the local x0,
# and the final readout all draw from disjoint deterministic streams.
_STREAM_EVAL = 1
_STREAM_X0 = 2
_STREAM_READOUT = 3


@dataclass
class VqeConfig:
    """One run's knobs: ansatz shape, optimizer, evaluation mode, seeds."""

    ansatz: CircuitSpec
    optimizer: DeConfig | LocalConfig = field(default_factory=DeConfig)
    shots: int | None = None  # None = exact expectation, int = sampled
    shots_final: int = 4000
    seed: int = 0
    threads: int = 1


@dataclass
class VqeTrace:
    """Raw convergence record: enough to redraw every plot after the fact."""

    eval_values: list[float]
    generation_stats: list[tuple[int, float, float, float]]
    batch_wall_times: list[float]


@dataclass
class VqeOutcome:
    opt: OptResult
    eigenstate_samples: dict[str, int]
    solution: CycleSolution | None  # None = no sampled bitstring was feasible
    lambda_estimate: float
    trace: VqeTrace

    def to_dict(self) -> dict:
        return {
            "lambda_estimate": self.lambda_estimate,
            "converged": self.opt.converged,
            "generations": self.opt.generations,
            "evaluations": self.opt.evaluations,
            "best_params": [float(x) for x in self.opt.best_params],
            "solution": self.solution.to_dict() if self.solution else None,
            "feasible": self.solution is not None,
            "samples": dict(sorted(self.eigenstate_samples.items())),
        }


def decode_bitstring(
    bits: np.ndarray, n: int, qp: QuadraticProgram, w: np.ndarray
) -> CycleSolution | None:
    """Read an n*n bit vector as a trade selection; None if infeasible."""
    bits = np.asarray(bits, dtype=np.int64).ravel()
    if bits.size != n * n:
        raise LengthMismatchError(f"expected {n * n} bits for {n} currencies, got {bits.size}")
    _, feasible, _ = evaluate_assignment(qp, bits)
    if not feasible:
        return None
    edges = {
        (i, j) for i in range(n) for j in range(n) if i != j and bits[i * n + j]
    }
    cycles = cycles_from_edges(edges)
    log_gain = float(sum(w[i, j] for i, j in edges))
    best_cycle_gain = 0.0
    for cycle in cycles:
        gain = sum(w[a, b] for a, b in zip(cycle, cycle[1:] + cycle[:1]))
        best_cycle_gain = max(best_cycle_gain, gain)
    profit_rate = math.exp(best_cycle_gain) - 1.0 if best_cycle_gain > 0.0 else 0.0
    return CycleSolution(cycles, edges, log_gain, profit_rate)


def select_solution(
    samples: dict[str, int], qp: QuadraticProgram, w: np.ndarray
) -> CycleSolution | None:
    """Best feasible decode among sampled bitstrings.

    Ranking: highest log gain, then highest count, then lexicographically
    smallest bitstring.  Slack bits beyond the original variables are
    ignored for feasibility, which is checked against the pre-penalty
    program.  Returns None iff nothing sampled is feasible.
    """
    if not samples:
        raise ValueError("empty sample map")
    n = math.isqrt(qp.num_vars)
    best: tuple | None = None
    for bitstring, count in samples.items():
        bits = bitstring_to_bits(bitstring)[: qp.num_vars]
        decoded = decode_bitstring(bits, n, qp, w)
        if decoded is None:
            continue
        key = (-decoded.log_gain, -count, bitstring)
        if best is None or key < best[0]:
            best = (key, decoded)
    return best[1] if best else None


class _BatchObjective:
    """Expectation of the Hamiltonian for a batch of parameter vectors.

    Exact mode dots each candidate's probability vector into the (cached)
    dense spectrum; shot mode samples each candidate's state with its own
    deterministic sub-seed.
    """

    def __init__(self, hmt: IsingHamiltonian, cfg: VqeConfig):
        self.hmt = hmt
        self.cfg = cfg
        self.spectrum = energies(hmt) if cfg.shots is None else None
        self.eval_values: list[float] = []
        self.batch_wall_times: list[float] = []
        self._eval_count = 0

    def _value(self, params: np.ndarray, eval_index: int) -> float:
        state = simulate_real(self.cfg.ansatz, params)
        probs = state * state
        if self.spectrum is not None:
            return float(np.dot(probs, self.spectrum))
        rng = np.random.default_rng(
            np.random.SeedSequence([self.cfg.seed, _STREAM_EVAL, eval_index])
        )
        indices, counts = _sample_indices(probs, self.cfg.shots, rng)
        return float(
            np.dot(energies_for_indices(self.hmt, indices), counts) / self.cfg.shots
        )

    def __call__(self, candidates: np.ndarray) -> np.ndarray:
        candidates = np.atleast_2d(np.asarray(candidates, dtype=float))
        base = self._eval_count
        self._eval_count += candidates.shape[0]
        start = time.perf_counter()
        if self.cfg.threads > 1 and candidates.shape[0] > 1:
            with ThreadPoolExecutor(max_workers=self.cfg.threads) as pool:
                values = list(
                    pool.map(self._value, candidates, range(base, self._eval_count))
                )
        else:
            values = [self._value(row, base + k) for k, row in enumerate(candidates)]
        self.batch_wall_times.append(time.perf_counter() - start)
        self.eval_values.extend(values)
        return np.asarray(values)


def run_vqe(
    hmt: IsingHamiltonian, cfg: VqeConfig, problem: CompiledProblem | None = None
) -> VqeOutcome:
    """Minimize the Hamiltonian expectation, then sample and decode.

    With a compiled problem attached, the readout samples are decoded into
    a cycle solution (or None when every sample is infeasible); without
    one, only the spectrum-level results are returned.
    """
    if cfg.ansatz.num_qubits != hmt.num_qubits:
        raise ConfigMismatchError(
            f"ansatz has {cfg.ansatz.num_qubits} qubits, Hamiltonian has {hmt.num_qubits}"
        )
    objective = _BatchObjective(hmt, cfg)

    if isinstance(cfg.optimizer, DeConfig):
        opt = de_minimize(objective, cfg.ansatz.num_params, replace(cfg.optimizer, seed=cfg.seed))
    else:
        lower, upper = cfg.optimizer.bounds_arrays(cfg.ansatz.num_params)
        x0 = np.random.default_rng(
            np.random.SeedSequence([cfg.seed, _STREAM_X0])
        ).uniform(lower, upper)
        opt = local_minimize(lambda x: float(objective(x[np.newaxis, :])[0]), x0, cfg.optimizer)

    state = simulate_real(cfg.ansatz, opt.best_params)
    readout_rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, _STREAM_READOUT]))
    indices, counts = _sample_indices(state * state, cfg.shots_final, readout_rng)
    samples = {
        index_to_bitstring(int(b), hmt.num_qubits): int(c)
        for b, c in zip(indices, counts)
    }

    solution = select_solution(samples, problem.qp, problem.weights) if problem else None
    trace = VqeTrace(
        eval_values=objective.eval_values,
        generation_stats=[(g, *stats) for g, stats in enumerate(opt.history)],
        batch_wall_times=objective.batch_wall_times,
    )
    return VqeOutcome(
        opt=opt,
        eigenstate_samples=samples,
        solution=solution,
        lambda_estimate=opt.best_value,
        trace=trace,
    )


@dataclass
class GridResult:
    """Success table of a (reps x entanglement) hyperparameter sweep."""

    reps_list: list[int]
    patterns: list[str]
    trials: int
    outcomes: dict[tuple[int, str], list[bool]]
    runs: list[dict]  # one record per (reps, pattern, seed) run

    def success_fraction(self, reps: int, pattern: str) -> float:
        cell = self.outcomes[(reps, pattern)]
        return sum(cell) / len(cell)

    def to_csv(self) -> str:
        lines = ["reps," + ",".join(self.patterns)]
        for reps in self.reps_list:
            row = [str(reps)] + [
                f"{self.success_fraction(reps, p):.3f}" for p in self.patterns
            ]
            lines.append(",".join(row))
        return "\n".join(lines) + "\n"

    def runs_csv(self) -> str:
        lines = ["reps,entanglement,seed,success,lambda_estimate,log_gain"]
        for r in self.runs:
            lines.append(
                f"{r['reps']},{r['entanglement']},{r['seed']},{int(r['success'])},"
                f"{r['lambda_estimate']!r},{'' if r['log_gain'] is None else repr(r['log_gain'])}"
            )
        return "\n".join(lines) + "\n"

    def pretty(self) -> str:
        width = max(len(p) for p in self.patterns) + 2
        header = "reps  " + "".join(p.ljust(width) for p in self.patterns)
        lines = [header]
        for reps in self.reps_list:
            cells = []
            for p in self.patterns:
                frac = self.success_fraction(reps, p)
                mark = "✓" if frac > 0.5 else "✗"
                cells.append(f"{mark} {sum(self.outcomes[(reps, p)])}/{self.trials}".ljust(width))
            lines.append(f"{reps:<6d}" + "".join(cells))
        return "\n".join(lines)


def hyperparameter_grid(
    problem: CompiledProblem,
    reps_list: list[int],
    patterns: list[str],
    trials: int,
    cfg: VqeConfig,
) -> GridResult:
    """Run seeded VQE trials over every (reps, entanglement) combination.

    A trial succeeds when its decoded solution selects exactly the same
    edges as the exhaustive optimum.  Trial k always uses seed
    ``cfg.seed + k``, so two patterns that build identical circuits (sca
    and circular at one repetition) receive identical per-seed outcomes.
    """
    from .model import brute_force_best  # local import to avoid cycle at module load

    oracle = brute_force_best(problem.weights)
    outcomes: dict[tuple[int, str], list[bool]] = {}
    runs: list[dict] = []
    for reps in reps_list:
        for pattern in patterns:
            ansatz = CircuitSpec(problem.num_qubits, reps=reps, entanglement=pattern)
            cell: list[bool] = []
            for k in range(trials):
                run_cfg = replace(cfg, ansatz=ansatz, seed=cfg.seed + k)
                outcome = run_vqe(problem.hamiltonian, run_cfg, problem)
                success = (
                    outcome.solution is not None
                    and outcome.solution.selected_edges == oracle.selected_edges
                )
                cell.append(success)
                runs.append(
                    {
                        "reps": reps,
                        "entanglement": pattern,
                        "seed": cfg.seed + k,
                        "success": success,
                        "lambda_estimate": outcome.lambda_estimate,
                        "log_gain": outcome.solution.log_gain if outcome.solution else None,
                    }
                )
            outcomes[(reps, pattern)] = cell
    return GridResult(list(reps_list), list(patterns), trials, outcomes, runs)
