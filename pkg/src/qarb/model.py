"""Arbitrage as a constrained binary quadratic program, plus an exhaustive oracle.

Decision variable ``x[i*n + j]`` selects the edge "trade currency i into
currency j".  In the default ``selfloop`` formulation the diagonal
variables (self-loops, zero objective weight) stand for "currency not
traded", which turns the trade-at-most-once rule into plain row/column
equalities: the feasible set is exactly the n x n permutation matrices and
no slack variables are ever needed.  The ``slack`` formulation keeps the
literal trade-once inequality instead and exists to exercise the full
inequality -> slack -> penalty compilation pipeline.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import LengthMismatchError, NonSquareError, TooLargeError

FORMULATIONS = ("selfloop", "slack")

_FEAS_TOL = 1e-9


@dataclass
class LinearConstraint:
    terms: dict[int, float]
    sense: str  # one of "==", "<=", ">="
    rhs: float

    def __post_init__(self) -> None:
        if not self.terms:
            raise ValueError("constraint needs at least one term")
        if self.sense not in ("==", "<=", ">="):
            raise ValueError(f"unknown constraint sense {self.sense!r}")


@dataclass
class QuadraticProgram:
    """Binary quadratic program with linear constraints.

    ``linear`` and ``quadratic`` hold objective coefficients; quadratic keys
    are ordered pairs (i <= j).  ``maximize`` records the objective sense;
    sign flips happen exactly once, inside the QUBO compiler.
    """

    num_vars: int
    linear: dict[int, float] = field(default_factory=dict)
    quadratic: dict[tuple[int, int], float] = field(default_factory=dict)
    constraints: list[LinearConstraint] = field(default_factory=list)
    maximize: bool = True

    def __post_init__(self) -> None:
        for i in self.linear:
            if not 0 <= i < self.num_vars:
                raise ValueError(f"linear index {i} out of range")
        for i, j in self.quadratic:
            if i > j:
                raise ValueError(f"quadratic key ({i},{j}) not ordered")
            if not (0 <= i < self.num_vars and 0 <= j < self.num_vars):
                raise ValueError(f"quadratic key ({i},{j}) out of range")


@dataclass
class CycleSolution:
    """A selection of trade edges decomposed into closed currency loops.

    ``log_gain`` sums the log weights over every selected edge;
    ``profit_rate`` is the net fractional gain of the single best loop
    (rate product minus one), or 0 when no loop is profitable.
    """

    cycles: list[list[int]]
    selected_edges: set[tuple[int, int]]
    log_gain: float
    profit_rate: float

    def to_dict(self) -> dict:
        return {
            "cycles": [list(c) for c in self.cycles],
            "edges": sorted(self.selected_edges),
            "log_gain": self.log_gain,
            "profit_rate": self.profit_rate,
        }


def _check_weights(w: np.ndarray) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise NonSquareError(f"weight matrix must be square, got shape {w.shape}")
    if np.any(np.abs(np.diagonal(w)) > 1e-12):
        raise ValueError("weight matrix must have a zero diagonal")
    return w


def build_qp(w: np.ndarray, formulation: str = "selfloop") -> QuadraticProgram:
    """Build the edge-selection program over log weights ``w``.

    selfloop: maximize sum(w[i,j] x_ij) subject to every row and every
    column of the n x n selection matrix summing to exactly 1.

    slack: same objective with flow conservation (in-degree equals
    out-degree at every currency) plus the literal inequality "each
    currency bought at most once".
    """
    w = _check_weights(w)
    n = w.shape[0]
    linear = {
        i * n + j: float(w[i, j]) for i in range(n) for j in range(n) if w[i, j] != 0.0
    }
    constraints: list[LinearConstraint] = []
    if formulation == "selfloop":
        for i in range(n):
            constraints.append(
                LinearConstraint({i * n + j: 1.0 for j in range(n)}, "==", 1.0)
            )
        for j in range(n):
            constraints.append(
                LinearConstraint({i * n + j: 1.0 for i in range(n)}, "==", 1.0)
            )
    elif formulation == "slack":
        for k in range(n):
            terms = {i * n + k: 1.0 for i in range(n) if i != k}
            for j in range(n):
                if j != k:
                    terms[k * n + j] = -1.0
            constraints.append(LinearConstraint(terms, "==", 0.0))
        for j in range(n):
            constraints.append(
                LinearConstraint({i * n + j: 1.0 for i in range(n)}, "<=", 1.0)
            )
    else:
        raise ValueError(f"unknown formulation {formulation!r}; expected one of {FORMULATIONS}")
    return QuadraticProgram(num_vars=n * n, linear=linear, constraints=constraints)


def cycles_from_edges(edges: set[tuple[int, int]]) -> list[list[int]]:
    """Decompose a set of disjoint directed edges into cycles.

    Self-loops are ignored.  Each cycle is rotated to start at its smallest
    currency index; cycles are sorted by that index, so output is
    deterministic regardless of input order.
    """
    succ = {i: j for i, j in edges if i != j}
    cycles = []
    seen: set[int] = set()
    for start in sorted(succ):
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        node = succ[start]
        while node != start:
            cycle.append(node)
            seen.add(node)
            node = succ[node]
        cycles.append(cycle)
    return cycles


def _solution_from_permutation(perm: tuple[int, ...], w: np.ndarray) -> CycleSolution:
    edges = {(i, j) for i, j in enumerate(perm) if i != j}
    cycles = cycles_from_edges(edges)
    log_gain = float(sum(w[i, j] for i, j in edges))
    best_cycle_gain = 0.0
    for cycle in cycles:
        gain = sum(w[a, b] for a, b in zip(cycle, cycle[1:] + cycle[:1]))
        best_cycle_gain = max(best_cycle_gain, gain)
    profit_rate = math.exp(best_cycle_gain) - 1.0 if best_cycle_gain > 0.0 else 0.0
    return CycleSolution(cycles, edges, log_gain, profit_rate)


def brute_force_best(w: np.ndarray) -> CycleSolution:
    """Exhaustively maximize the edge-selection objective over all n! permutations.

    Ties break toward the lexicographically smallest permutation (the
    identity when no cycle is profitable).  Guarded to n <= 10.
    """
    w = _check_weights(w)
    n = w.shape[0]
    if n > 10:
        raise TooLargeError(f"brute force enumerates n! permutations; n={n} > 10")
    best_perm = None
    best_value = -math.inf
    for perm in itertools.permutations(range(n)):
        value = sum(w[i, perm[i]] for i in range(n))
        if value > best_value:
            best_value = value
            best_perm = perm
    return _solution_from_permutation(best_perm, w)


def evaluate_assignment(
    qp: QuadraticProgram, x: np.ndarray
) -> tuple[float, bool, float]:
    """Evaluate a bit vector against a program.

    Returns ``(objective, feasible, violation)`` where the objective is in
    the program's native sense and violation sums the absolute residual of
    every broken constraint.
    """
    x = np.asarray(x, dtype=float).ravel()
    if x.size != qp.num_vars:
        raise LengthMismatchError(f"expected {qp.num_vars} bits, got {x.size}")
    objective = sum(c * x[i] for i, c in qp.linear.items())
    objective += sum(c * x[i] * x[j] for (i, j), c in qp.quadratic.items())
    violation = 0.0
    for con in qp.constraints:
        lhs = sum(c * x[i] for i, c in con.terms.items())
        if con.sense == "==":
            violation += abs(lhs - con.rhs)
        elif con.sense == "<=":
            violation += max(0.0, lhs - con.rhs)
        else:
            violation += max(0.0, con.rhs - lhs)
    return float(objective), violation <= _FEAS_TOL, float(violation)
