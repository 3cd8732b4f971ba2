"""Derivative-free optimizers: best1bin differential evolution and a local baseline.

The DE control loop is deliberately batch-shaped: every generation makes
exactly one call to the objective with the whole trial population, so the
expensive circuit evaluations behind it can run in parallel and the
evaluation count is always ``popsize * (generations + 1)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize as _scipy_minimize

from .errors import InvalidBoundsError, ObjectiveShapeMismatchError

BatchObjective = Callable[[np.ndarray], np.ndarray]


@dataclass
class DeConfig:
    """best1bin hyperparameters.

    popsize is an absolute individual count.  mutation is a (low, high)
    dither range; one factor F is drawn per generation.  Convergence is
    population collapse: std(values) <= atol + tol * |mean(values)|.
    """

    popsize: int = 15
    max_generations: int = 500
    tol: float = 1e-3
    atol: float = 0.0
    mutation: tuple[float, float] = (0.5, 1.0)
    recombination: float = 0.7
    bounds: tuple[float, float] | Sequence[tuple[float, float]] = (-np.pi, np.pi)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.popsize < 5:
            raise ValueError("popsize must be >= 5")
        lo, hi = self.mutation
        if not 0.0 < lo <= hi < 2.0:
            raise ValueError("mutation dither must satisfy 0 < low <= high < 2")
        if not 0.0 <= self.recombination <= 1.0:
            raise ValueError("recombination must lie in [0, 1]")
        if self.max_generations < 1:
            raise ValueError("max_generations must be >= 1")

    def bounds_arrays(self, dim: int) -> tuple[np.ndarray, np.ndarray]:
        bounds = np.asarray(self.bounds, dtype=float)
        if bounds.shape == (2,):
            bounds = np.tile(bounds, (dim, 1))
        if bounds.shape != (dim, 2):
            raise InvalidBoundsError(f"bounds must be (low, high) or {dim} pairs")
        lower, upper = bounds[:, 0], bounds[:, 1]
        if not np.all(np.isfinite(bounds)) or np.any(lower >= upper):
            raise InvalidBoundsError("bounds must be finite with low < high")
        return lower, upper


@dataclass
class LocalConfig:
    """Nelder-Mead settings for the local-descent baseline."""

    max_evaluations: int = 5000
    tol: float = 1e-8
    bounds: tuple[float, float] | Sequence[tuple[float, float]] = (-np.pi, np.pi)

    def bounds_arrays(self, dim: int) -> tuple[np.ndarray, np.ndarray]:
        return DeConfig.bounds_arrays(self, dim)  # same normalization rules


@dataclass
class OptResult:
    """Outcome of one optimizer run, with enough history to replot convergence."""

    best_params: np.ndarray
    best_value: float
    generations: int
    evaluations: int
    history: list[tuple[float, float, float]]  # per generation: (best, mean, std)
    converged: bool
    eval_values: list[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "best_params": [float(x) for x in self.best_params],
            "best_value": self.best_value,
            "generations": self.generations,
            "evaluations": self.evaluations,
            "converged": self.converged,
            "history": [list(row) for row in self.history],
        }


def _evaluate(objective_batch: BatchObjective, candidates: np.ndarray) -> np.ndarray:
    values = np.asarray(objective_batch(candidates), dtype=float).ravel()
    if values.size != candidates.shape[0]:
        raise ObjectiveShapeMismatchError(
            f"objective returned {values.size} values for {candidates.shape[0]} candidates"
        )
    return values


def de_minimize(objective_batch: BatchObjective, dim: int, cfg: DeConfig) -> OptResult:
    """Differential evolution, best1bin strategy, generation-batched.

    Each individual's trial vector is ``best + F * (r1 - r2)`` (r1, r2
    random, distinct, different from the individual) passed through
    binomial crossover with one guaranteed crossover dimension, then
    clipped to bounds.  Greedy replacement keeps the trial iff it does not
    lose to the incumbent, so the population best never increases.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    lower, upper = cfg.bounds_arrays(dim)
    rng = np.random.default_rng(cfg.seed)

    pop = rng.uniform(lower, upper, size=(cfg.popsize, dim))
    values = _evaluate(objective_batch, pop)
    eval_values = list(values)
    history = [(float(values.min()), float(values.mean()), float(values.std()))]

    converged = False
    generation = 0
    for generation in range(1, cfg.max_generations + 1):
        factor = rng.uniform(*cfg.mutation)
        best = pop[int(np.argmin(values))]
        trials = np.empty_like(pop)
        for i in range(cfg.popsize):
            choices = [k for k in range(cfg.popsize) if k != i]
            r1, r2 = rng.choice(choices, size=2, replace=False)
            mutant = best + factor * (pop[r1] - pop[r2])
            cross = rng.random(dim) < cfg.recombination
            cross[rng.integers(dim)] = True
            trials[i] = np.where(cross, mutant, pop[i])
        np.clip(trials, lower, upper, out=trials)

        trial_values = _evaluate(objective_batch, trials)
        eval_values.extend(trial_values)
        improved = trial_values <= values
        pop[improved] = trials[improved]
        values[improved] = trial_values[improved]

        history.append((float(values.min()), float(values.mean()), float(values.std())))
        if values.std() <= cfg.atol + cfg.tol * abs(values.mean()):
            converged = True
            break

    best_idx = int(np.argmin(values))
    return OptResult(
        best_params=pop[best_idx].copy(),
        best_value=float(values[best_idx]),
        generations=generation,
        evaluations=cfg.popsize * (generation + 1),
        history=history,
        converged=converged,
        eval_values=[float(v) for v in eval_values],
    )


def local_minimize(
    objective: Callable[[np.ndarray], float], x0: np.ndarray, cfg: LocalConfig | None = None
) -> OptResult:
    """Nelder-Mead simplex descent from x0, one objective evaluation per step.

    This is the local contrast to ``de_minimize``: it refines whatever
    basin it starts in and makes no attempt to escape it.
    """
    cfg = cfg or LocalConfig()
    x0 = np.asarray(x0, dtype=float).ravel()
    lower, upper = cfg.bounds_arrays(x0.size)

    eval_values: list[float] = []
    best: list = [np.inf, x0.copy()]
    history: list[tuple[float, float, float]] = []

    def recorded(x: np.ndarray) -> float:
        value = float(objective(np.asarray(x, dtype=float)))
        eval_values.append(value)
        if value < best[0]:
            best[0] = value
            best[1] = np.array(x, dtype=float)
        history.append((best[0], value, 0.0))
        return value

    result = _scipy_minimize(
        recorded,
        x0,
        method="Nelder-Mead",
        bounds=list(zip(lower, upper)),
        options={
            "maxfev": cfg.max_evaluations,
            "xatol": cfg.tol,
            "fatol": cfg.tol,
            "adaptive": x0.size > 8,
        },
    )
    return OptResult(
        best_params=best[1],
        best_value=best[0],
        generations=int(result.nit),
        evaluations=len(eval_values),
        history=history,
        converged=bool(result.success),
        eval_values=eval_values,
    )
