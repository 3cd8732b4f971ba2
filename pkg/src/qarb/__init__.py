"""qarb: intra-exchange currency arbitrage as a variational quantum optimization.

The pipeline: load an exchange-rate matrix, pose cycle selection as a
constrained binary program, compile it through QUBO to a diagonal Ising
Hamiltonian, and minimize its expectation over a real-amplitude ansatz
with differential evolution; a brute-force oracle verifies everything at
small sizes.
"""
from .circuits import (
    CircuitSpec,
    Statevector,
    entanglement_pairs,
    expectation_exact,
    expectation_sampled,
    gate_list,
    sample,
    simulate,
)
from .errors import QarbError
from .estimators import BruteForceArbitrage, VqeArbitrage
from .ising import (
    IsingHamiltonian,
    energies,
    energy,
    exhaustive_minimum,
    pauli_render,
    qubo_to_ising,
)
from .market import NormalizationVector, TransitMatrix, load_rates, log_weights, normalize
from .model import (
    CycleSolution,
    LinearConstraint,
    QuadraticProgram,
    brute_force_best,
    build_qp,
    evaluate_assignment,
)
from .optimizers import DeConfig, LocalConfig, OptResult, de_minimize, local_minimize
from .pipeline import CompiledProblem, compile_problem
from .qubo import PenaltyConfig, Qubo, qubo_energy, to_qubo
from .vqe import (
    GridResult,
    VqeConfig,
    VqeOutcome,
    decode_bitstring,
    hyperparameter_grid,
    run_vqe,
    select_solution,
)

__version__ = "0.1.0"

__all__ = [
    "BruteForceArbitrage",
    "CircuitSpec",
    "CompiledProblem",
    "CycleSolution",
    "DeConfig",
    "GridResult",
    "IsingHamiltonian",
    "LinearConstraint",
    "LocalConfig",
    "NormalizationVector",
    "OptResult",
    "PenaltyConfig",
    "QarbError",
    "QuadraticProgram",
    "Qubo",
    "Statevector",
    "TransitMatrix",
    "VqeArbitrage",
    "VqeConfig",
    "VqeOutcome",
    "brute_force_best",
    "build_qp",
    "compile_problem",
    "de_minimize",
    "decode_bitstring",
    "energies",
    "energy",
    "entanglement_pairs",
    "evaluate_assignment",
    "exhaustive_minimum",
    "expectation_exact",
    "expectation_sampled",
    "gate_list",
    "hyperparameter_grid",
    "load_rates",
    "local_minimize",
    "log_weights",
    "normalize",
    "pauli_render",
    "qubo_energy",
    "qubo_to_ising",
    "run_vqe",
    "sample",
    "select_solution",
    "simulate",
    "to_qubo",
]
