"""Real-amplitude ansatz circuits and an exact dense statevector engine.

The circuit family is an initial layer of per-qubit Y rotations followed
by ``reps`` blocks of (CNOT entanglement layer, Y-rotation layer).  RY and
CNOT have real matrix entries, so the engine works on a float64 vector and
only widens to complex at the public boundary; this halves memory and
keeps 25-qubit states (~270 MB) comfortably in RAM.

State index convention: qubit 0 is the least significant bit of the basis
index.  User-facing bitstrings put variable 0 leftmost; every conversion
goes through ``index_to_bits`` so the two conventions cannot drift apart.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from ._kernels import apply_cx, apply_ry
from .errors import (
    DimensionMismatchError,
    ParamCountMismatchError,
    UnknownPatternError,
)
from .ising import IsingHamiltonian, energies, energies_for_indices

ENTANGLEMENTS = ("full", "linear", "circular", "sca")


@dataclass
class CircuitSpec:
    """Shape of a real-amplitude ansatz.

    ``num_params`` is always ``num_qubits * (reps + 1)``: one RY angle per
    qubit per rotation layer, and entanglement layers carry no parameters.
    """

    num_qubits: int
    reps: int = 1
    entanglement: str = "sca"

    def __post_init__(self) -> None:
        if self.num_qubits < 1:
            raise ValueError("need at least one qubit")
        if self.reps < 1:
            raise ValueError("reps must be >= 1")
        if self.entanglement not in ENTANGLEMENTS:
            raise UnknownPatternError(
                f"unknown entanglement {self.entanglement!r}; expected one of {ENTANGLEMENTS}"
            )

    @property
    def num_params(self) -> int:
        return self.num_qubits * (self.reps + 1)

    def to_json(self) -> str:
        return json.dumps(
            {
                "num_qubits": self.num_qubits,
                "reps": self.reps,
                "entanglement": self.entanglement,
                "num_params": self.num_params,
            }
        )


@dataclass
class Statevector:
    """Dense complex amplitudes; index b uses qubit 0 as the low bit."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).ravel()
        n = self.amplitudes.size
        if n == 0 or n & (n - 1):
            raise DimensionMismatchError(f"amplitude count {n} is not a power of two")
        norm = float(np.sum(self.amplitudes.real**2 + self.amplitudes.imag**2))
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"statevector norm**2 is {norm}, not 1")

    @property
    def num_qubits(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    def probabilities(self) -> np.ndarray:
        return self.amplitudes.real**2 + self.amplitudes.imag**2


def index_to_bits(index: int, num_qubits: int) -> np.ndarray:
    """Basis index -> bit vector, entry k = value of variable/qubit k."""
    return (index >> np.arange(num_qubits)) & 1


def bits_to_index(bits: np.ndarray) -> int:
    bits = np.asarray(bits, dtype=np.int64).ravel()
    return int(np.sum(bits << np.arange(bits.size)))


def index_to_bitstring(index: int, num_qubits: int) -> str:
    """Render a basis index with variable 0 leftmost."""
    return "".join("1" if b else "0" for b in index_to_bits(index, num_qubits))


def bitstring_to_bits(s: str) -> np.ndarray:
    return np.array([1 if ch == "1" else 0 for ch in s], dtype=np.int64)


def entanglement_pairs(pattern: str, num_qubits: int, rep_index: int = 0) -> list[tuple[int, int]]:
    """(control, target) CNOT pairs for one entanglement layer.

    sca rotates the circular pair list right by ``rep_index`` and swaps
    control/target on odd layers, so its first layer coincides with the
    plain circular pattern.
    """
    if num_qubits < 2:
        return []
    n = num_qubits
    if pattern == "linear":
        return [(i, i + 1) for i in range(n - 1)]
    if pattern == "full":
        return [(i, j) for i in range(n) for j in range(i + 1, n)]
    if pattern == "circular":
        return [(n - 1, 0)] + [(i, i + 1) for i in range(n - 1)]
    if pattern == "sca":
        pairs = [(n - 1, 0)] + [(i, i + 1) for i in range(n - 1)]
        shift = rep_index % len(pairs)
        pairs = pairs[-shift:] + pairs[:-shift] if shift else pairs
        if rep_index % 2 == 1:
            pairs = [(t, c) for c, t in pairs]
        return pairs
    raise UnknownPatternError(f"unknown entanglement {pattern!r}; expected one of {ENTANGLEMENTS}")


def _check_params(spec: CircuitSpec, params: np.ndarray) -> np.ndarray:
    params = np.asarray(params, dtype=float).ravel()
    if params.size != spec.num_params:
        raise ParamCountMismatchError(
            f"circuit takes {spec.num_params} parameters, got {params.size}"
        )
    return params


def simulate_real(spec: CircuitSpec, params: np.ndarray) -> np.ndarray:
    """Run the circuit from |0...0> and return the raw float64 amplitudes."""
    params = _check_params(spec, params)
    n = spec.num_qubits
    state = np.zeros(2**n)
    state[0] = 1.0
    for q in range(n):
        apply_ry(state, q, math.cos(params[q] / 2.0), math.sin(params[q] / 2.0))
    for rep in range(spec.reps):
        for control, target in entanglement_pairs(spec.entanglement, n, rep):
            apply_cx(state, control, target)
        base = (rep + 1) * n
        for q in range(n):
            theta = params[base + q]
            apply_ry(state, q, math.cos(theta / 2.0), math.sin(theta / 2.0))
    return state


def simulate(spec: CircuitSpec, params: np.ndarray) -> Statevector:
    """Prepare the ansatz state for the given parameter vector."""
    return Statevector(simulate_real(spec, params).astype(complex))


def gate_list(spec: CircuitSpec, params: np.ndarray) -> list[str]:
    """Textual gate dump, one gate per line, for debugging and diffing."""
    params = _check_params(spec, params)
    n = spec.num_qubits
    lines = [f"RY q{q} θ={params[q]:.6g}" for q in range(n)]
    for rep in range(spec.reps):
        lines += [f"CX {c} {t}" for c, t in entanglement_pairs(spec.entanglement, n, rep)]
        base = (rep + 1) * n
        lines += [f"RY q{q} θ={params[base + q]:.6g}" for q in range(n)]
    return lines


def expectation_exact(state: Statevector, hmt: IsingHamiltonian) -> float:
    """<state| H |state> for a diagonal H: a probability-weighted spectrum sum."""
    if state.amplitudes.size != 2**hmt.num_qubits:
        raise DimensionMismatchError(
            f"state has {state.num_qubits} qubits, Hamiltonian has {hmt.num_qubits}"
        )
    return float(np.dot(state.probabilities(), energies(hmt)))


def _sample_indices(
    probs: np.ndarray, shots: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Draw basis indices from a probability vector: (indices, counts)."""
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    draws = np.searchsorted(cdf, rng.random(shots), side="right")
    return np.unique(draws, return_counts=True)


def sample(state: Statevector, shots: int, seed: int | None = 0) -> dict[str, int]:
    """Measure the state ``shots`` times with a seeded generator.

    Returns bitstring -> count with variable 0 leftmost; counts sum to
    ``shots`` and are reproducible per (state, seed).
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    rng = np.random.default_rng(seed)
    indices, counts = _sample_indices(state.probabilities(), shots, rng)
    n = state.num_qubits
    return {index_to_bitstring(int(b), n): int(c) for b, c in zip(indices, counts)}


def expectation_sampled(
    spec: CircuitSpec,
    params: np.ndarray,
    hmt: IsingHamiltonian,
    shots: int,
    seed: int | None = 0,
) -> float:
    """Shot-based expectation: mean Hamiltonian energy over sampled bitstrings."""
    if spec.num_qubits != hmt.num_qubits:
        raise DimensionMismatchError(
            f"circuit has {spec.num_qubits} qubits, Hamiltonian has {hmt.num_qubits}"
        )
    if shots < 1:
        raise ValueError("shots must be >= 1")
    state = simulate_real(spec, params)
    rng = np.random.default_rng(seed)
    indices, counts = _sample_indices(state * state, shots, rng)
    return float(np.dot(energies_for_indices(hmt, indices), counts) / shots)
