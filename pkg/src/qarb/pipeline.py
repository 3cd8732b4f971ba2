"""End-to-end compilation: rate matrix -> log weights -> QP -> QUBO -> Ising."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ising import IsingHamiltonian, qubo_to_ising
from .market import TransitMatrix, log_weights
from .model import QuadraticProgram, build_qp
from .qubo import PenaltyConfig, Qubo, to_qubo


@dataclass
class CompiledProblem:
    """Every intermediate artifact of one compilation, kept for auditing."""

    market: TransitMatrix
    weights: np.ndarray
    qp: QuadraticProgram
    qubo: Qubo
    hamiltonian: IsingHamiltonian
    formulation: str
    penalty_weight: float

    @property
    def n(self) -> int:
        return self.market.n

    @property
    def num_qubits(self) -> int:
        return self.hamiltonian.num_qubits


def compile_problem(
    market: TransitMatrix,
    formulation: str = "selfloop",
    penalty: float | None = None,
) -> CompiledProblem:
    """Compile a market into a minimization Hamiltonian.

    The selfloop formulation uses exactly n**2 qubits; the slack
    formulation adds one slack bit per trade-once inequality.
    """
    weights = log_weights(market)
    qp = build_qp(weights, formulation)
    cfg = PenaltyConfig(weight=penalty)
    qubo = to_qubo(qp, cfg)
    hamiltonian = qubo_to_ising(qubo)
    return CompiledProblem(
        market=market,
        weights=weights,
        qp=qp,
        qubo=qubo,
        hamiltonian=hamiltonian,
        formulation=formulation,
        penalty_weight=cfg.resolve(qp),
    )
