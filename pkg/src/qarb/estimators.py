"""Estimator-style front ends so the solvers compose with sklearn tooling.

Both classes follow the fit-and-expose-attributes pattern of clustering
estimators: hyperparameters live in ``__init__`` (so ``get_params`` /
``set_params`` / ``clone`` work), ``fit(X)`` consumes an n x n exchange-rate
matrix, and the results land in trailing-underscore attributes.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .circuits import CircuitSpec
from .market import TransitMatrix
from .model import brute_force_best
from .optimizers import DeConfig, LocalConfig
from .pipeline import compile_problem
from .vqe import VqeConfig, run_vqe


def as_transit_matrix(X, labels=None) -> TransitMatrix:
    """Validate an array-like of exchange rates into a TransitMatrix."""
    if isinstance(X, TransitMatrix):
        return X
    rates = np.asarray(X, dtype=float)
    if rates.ndim != 2 or rates.shape[0] != rates.shape[1]:
        raise ValueError(f"expected a square rate matrix, got shape {rates.shape}")
    if labels is None:
        labels = [f"c{i}" for i in range(rates.shape[0])]
    return TransitMatrix(list(labels), rates)


class BruteForceArbitrage(BaseEstimator):
    """Exhaustive arbitrage search over all trade permutations.

    Exact for small markets (n <= 10); serves as the reference the
    variational solver is judged against.

    Attributes after fit: ``solution_``, ``cycles_``, ``log_gain_``,
    ``profit_rate_``, ``weights_``.
    """

    def fit(self, X, y=None, labels=None):
        market = as_transit_matrix(X, labels)
        from .market import log_weights

        self.weights_ = log_weights(market)
        self.solution_ = brute_force_best(self.weights_)
        self.cycles_ = self.solution_.cycles
        self.log_gain_ = self.solution_.log_gain
        self.profit_rate_ = self.solution_.profit_rate
        return self

    def score(self, X=None, y=None) -> float:
        """Net fractional gain of the best cycle (0 when no arbitrage)."""
        check_is_fitted(self, "solution_")
        return self.profit_rate_


class VqeArbitrage(BaseEstimator):
    """Variational arbitrage solver: compile to a Hamiltonian, minimize, decode.

    Parameters mirror the pipeline knobs: ``formulation``/``penalty``
    control the compilation, ``reps``/``entanglement`` the ansatz,
    ``optimizer`` ("de" or "local") plus its settings the search, and
    ``shots=None`` selects exact expectation evaluation.

    Attributes after fit: ``solution_`` (None when the readout is
    infeasible), ``lambda_estimate_``, ``outcome_``, ``problem_``,
    ``n_qubits_``, ``profit_rate_``.
    """

    def __init__(
        self,
        formulation: str = "selfloop",
        penalty: float | None = None,
        reps: int = 1,
        entanglement: str = "sca",
        optimizer: str = "de",
        popsize: int = 15,
        max_generations: int = 500,
        tol: float = 1e-3,
        mutation: tuple[float, float] = (0.5, 1.0),
        recombination: float = 0.7,
        max_evaluations: int = 5000,
        shots: int | None = None,
        shots_final: int = 4000,
        seed: int = 0,
        threads: int = 1,
    ):
        self.formulation = formulation
        self.penalty = penalty
        self.reps = reps
        self.entanglement = entanglement
        self.optimizer = optimizer
        self.popsize = popsize
        self.max_generations = max_generations
        self.tol = tol
        self.mutation = mutation
        self.recombination = recombination
        self.max_evaluations = max_evaluations
        self.shots = shots
        self.shots_final = shots_final
        self.seed = seed
        self.threads = threads

    def _optimizer_config(self):
        if self.optimizer == "de":
            return DeConfig(
                popsize=self.popsize,
                max_generations=self.max_generations,
                tol=self.tol,
                mutation=self.mutation,
                recombination=self.recombination,
                seed=self.seed,
            )
        if self.optimizer == "local":
            return LocalConfig(max_evaluations=self.max_evaluations)
        raise ValueError(f"optimizer must be 'de' or 'local', got {self.optimizer!r}")

    def fit(self, X, y=None, labels=None):
        market = as_transit_matrix(X, labels)
        self.problem_ = compile_problem(market, self.formulation, self.penalty)
        self.n_qubits_ = self.problem_.num_qubits
        ansatz = CircuitSpec(self.n_qubits_, reps=self.reps, entanglement=self.entanglement)
        cfg = VqeConfig(
            ansatz=ansatz,
            optimizer=self._optimizer_config(),
            shots=self.shots,
            shots_final=self.shots_final,
            seed=self.seed,
            threads=self.threads,
        )
        self.outcome_ = run_vqe(self.problem_.hamiltonian, cfg, self.problem_)
        self.solution_ = self.outcome_.solution
        self.lambda_estimate_ = self.outcome_.lambda_estimate
        self.profit_rate_ = self.solution_.profit_rate if self.solution_ else 0.0
        return self

    def score(self, X=None, y=None) -> float:
        """Net fractional gain of the decoded cycle; 0 if infeasible."""
        check_is_fitted(self, "outcome_")
        return self.profit_rate_
