"""QUBO -> Ising Hamiltonian mapping and energy evaluation.

The Hamiltonian is diagonal in the computational basis: only identity and
Pauli-Z factors appear, so the energy of any bitstring is a cheap
polynomial in the spins and the full spectrum is a vector, never a matrix.
Convention: bit 0 maps to spin z = +1, bit 1 to z = -1.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, LengthMismatchError
from .qubo import Qubo

# 2**26 doubles is ~0.5 GB; beyond that the dense spectrum is off the table.
MAX_DENSE_QUBITS = 26


@dataclass
class IsingHamiltonian:
    """Diagonal spin Hamiltonian: offset + sum(h_i z_i) + sum(J_ij z_i z_j)."""

    num_qubits: int
    h: dict[int, float] = field(default_factory=dict)
    J: dict[tuple[int, int], float] = field(default_factory=dict)
    offset: float = 0.0

    def __post_init__(self) -> None:
        for i, j in self.J:
            if i >= j:
                raise ValueError(f"coupling key ({i},{j}) must satisfy i < j")

    def to_json(self) -> str:
        return json.dumps(
            {
                "num_qubits": self.num_qubits,
                "h": {str(i): v for i, v in sorted(self.h.items())},
                "J": {f"{i},{j}": v for (i, j), v in sorted(self.J.items())},
                "offset": self.offset,
            },
            indent=2,
            sort_keys=True,
        )


def qubo_to_ising(q: Qubo) -> IsingHamiltonian:
    """Substitute x_i = (1 - z_i) / 2 and collect coefficients.

    Energies agree with the source QUBO on every bitstring (up to float
    rounding in the collected sums).
    """
    h: dict[int, float] = {}
    J: dict[tuple[int, int], float] = {}
    offset = q.offset
    for i, a in q.linear.items():
        h[i] = h.get(i, 0.0) - a / 2.0
        offset += a / 2.0
    for (i, j), b in q.quadratic.items():
        J[(i, j)] = J.get((i, j), 0.0) + b / 4.0
        h[i] = h.get(i, 0.0) - b / 4.0
        h[j] = h.get(j, 0.0) - b / 4.0
        offset += b / 4.0
    h = {i: v for i, v in h.items() if v != 0.0}
    J = {k: v for k, v in J.items() if v != 0.0}
    return IsingHamiltonian(q.num_vars, h, J, offset)


def energy(hmt: IsingHamiltonian, bits: np.ndarray) -> float:
    """Energy of one bitstring (bit b -> spin 1 - 2b)."""
    bits = np.asarray(bits).ravel()
    if bits.size != hmt.num_qubits:
        raise LengthMismatchError(f"expected {hmt.num_qubits} bits, got {bits.size}")
    z = 1.0 - 2.0 * bits.astype(float)
    e = hmt.offset
    e += sum(c * z[i] for i, c in hmt.h.items())
    e += sum(c * z[i] * z[j] for (i, j), c in hmt.J.items())
    return float(e)


def energies(hmt: IsingHamiltonian) -> np.ndarray:
    """Dense energy spectrum over all 2**n basis states.

    Index b uses qubit 0 as the least-significant bit.  Built by
    broadcasting each term's +/-1 pattern over a [2]*n view, one pass per
    term, so memory stays at a single 2**n float64 vector.
    """
    n = hmt.num_qubits
    if n > MAX_DENSE_QUBITS:
        raise DimensionMismatchError(
            f"dense spectrum for {n} qubits exceeds the {MAX_DENSE_QUBITS}-qubit cap"
        )
    pm = np.array([1.0, -1.0])

    def axis_view(i: int) -> np.ndarray:
        # qubit i sits at axis n-1-i of the [2]*n tensor view
        shape = [1] * n
        shape[n - 1 - i] = 2
        return pm.reshape(shape)

    e = np.full([2] * n, hmt.offset)
    for i, c in hmt.h.items():
        e += c * axis_view(i)
    for (i, j), c in hmt.J.items():
        e += c * (axis_view(i) * axis_view(j))
    return e.reshape(-1)


def energies_for_indices(hmt: IsingHamiltonian, indices: np.ndarray) -> np.ndarray:
    """Vectorized energies for a batch of basis-state indices."""
    indices = np.asarray(indices, dtype=np.int64).ravel()
    e = np.full(indices.shape, hmt.offset)
    for i, c in hmt.h.items():
        e += c * (1.0 - 2.0 * ((indices >> i) & 1))
    for (i, j), c in hmt.J.items():
        e += c * (1.0 - 2.0 * (((indices >> i) ^ (indices >> j)) & 1))
    return e


def exhaustive_minimum(hmt: IsingHamiltonian) -> tuple[int, float]:
    """Ground state by exhaustive scan: (basis index, minimum energy)."""
    spectrum = energies(hmt)
    idx = int(np.argmin(spectrum))
    return idx, float(spectrum[idx])


def pauli_render(hmt: IsingHamiltonian) -> list[tuple[float, str]]:
    """Terms as (coefficient, I/Z string), qubit 0 rightmost.

    Sorted by descending |coefficient| (ties by string) for stable output.
    The constant offset is not a Pauli term and is reported separately.
    """
    n = hmt.num_qubits
    terms: list[tuple[float, str]] = []
    for i, c in hmt.h.items():
        chars = ["I"] * n
        chars[n - 1 - i] = "Z"
        terms.append((c, "".join(chars)))
    for (i, j), c in hmt.J.items():
        chars = ["I"] * n
        chars[n - 1 - i] = "Z"
        chars[n - 1 - j] = "Z"
        terms.append((c, "".join(chars)))
    terms.sort(key=lambda t: (-abs(t[0]), t[1]))
    return terms


def pauli_parse(terms: list[tuple[float, str]], num_qubits: int) -> IsingHamiltonian:
    """Inverse of pauli_render (offset excluded, coefficients exact)."""
    h: dict[int, float] = {}
    J: dict[tuple[int, int], float] = {}
    for coeff, label in terms:
        if len(label) != num_qubits:
            raise LengthMismatchError(f"label {label!r} is not {num_qubits} characters")
        qubits = [num_qubits - 1 - pos for pos, ch in enumerate(label) if ch == "Z"]
        if len(qubits) == 1:
            h[qubits[0]] = h.get(qubits[0], 0.0) + coeff
        elif len(qubits) == 2:
            key = (min(qubits), max(qubits))
            J[key] = J.get(key, 0.0) + coeff
        else:
            raise ValueError(f"label {label!r} has {len(qubits)} Z factors; expected 1 or 2")
    return IsingHamiltonian(num_qubits, h, J, 0.0)


def pauli_text(hmt: IsingHamiltonian) -> str:
    """Human-readable rendering, one term per line plus the offset."""
    lines = [f"{c:+.3f} · {label}" for c, label in pauli_render(hmt)]
    lines.append(f"offset {hmt.offset:+.6f}")
    return "\n".join(lines) + "\n"
