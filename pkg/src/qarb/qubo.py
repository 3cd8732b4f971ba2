"""Constrained program -> unconstrained QUBO compilation.

The pipeline applies, in order: flip a maximization objective to
minimization, convert each inequality to an equality with an integer slack
variable, binary-expand the slacks, and fold every equality ``c(x) = r``
into the objective as a quadratic penalty ``M * (c(x) - r)**2``.  The
result is a pure minimization over bits: slack bits are appended after the
original variables, and ``var_names`` records the provenance of each index.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import LengthMismatchError, UnboundedSlackError
from .model import LinearConstraint, QuadraticProgram


@dataclass
class Qubo:
    """Minimize ``offset + sum(linear[i] x_i) + sum(quadratic[i,j] x_i x_j)``.

    Quadratic keys are strictly ordered (i < j); squares fold into the
    linear part because x**2 = x on bits.
    """

    num_vars: int
    linear: dict[int, float] = field(default_factory=dict)
    quadratic: dict[tuple[int, int], float] = field(default_factory=dict)
    offset: float = 0.0
    var_names: list[str] = field(default_factory=list)
    sense: str = "min"

    def __post_init__(self) -> None:
        for i, j in self.quadratic:
            if i >= j:
                raise ValueError(f"quadratic key ({i},{j}) must satisfy i < j")
        if not self.var_names:
            self.var_names = [f"x{k}" for k in range(self.num_vars)]

    def to_json(self) -> str:
        return json.dumps(
            {
                "num_vars": self.num_vars,
                "linear": {str(i): v for i, v in sorted(self.linear.items())},
                "quadratic": {f"{i},{j}": v for (i, j), v in sorted(self.quadratic.items())},
                "offset": self.offset,
                "var_names": self.var_names,
            },
            indent=2,
            sort_keys=True,
        )


@dataclass
class PenaltyConfig:
    """Equality-penalty weight; ``weight=None`` selects the automatic rule.

    The automatic weight ``10 * (1 + max |objective coefficient|) * num_vars``
    exceeds any achievable objective spread, so every infeasible point costs
    more than every feasible one without flattening the landscape.
    """

    weight: float | None = None

    def __post_init__(self) -> None:
        if self.weight is not None and not self.weight > 0.0:
            raise ValueError("explicit penalty weight must be positive")

    def resolve(self, qp: QuadraticProgram) -> float:
        if self.weight is not None:
            return float(self.weight)
        coeffs = [abs(v) for v in qp.linear.values()]
        coeffs += [abs(v) for v in qp.quadratic.values()]
        return 10.0 * (1.0 + max(coeffs, default=0.0)) * qp.num_vars


def _add_linear(linear: dict[int, float], i: int, value: float) -> None:
    linear[i] = linear.get(i, 0.0) + value


def _add_quadratic(
    linear: dict[int, float], quadratic: dict[tuple[int, int], float], i: int, j: int, value: float
) -> None:
    if i == j:
        _add_linear(linear, i, value)  # x**2 = x
        return
    key = (i, j) if i < j else (j, i)
    quadratic[key] = quadratic.get(key, 0.0) + value


def to_qubo(qp: QuadraticProgram, cfg: PenaltyConfig | None = None) -> Qubo:
    """Compile a constrained program to an unconstrained minimization QUBO."""
    cfg = cfg or PenaltyConfig()
    weight = cfg.resolve(qp)
    sign = -1.0 if qp.maximize else 1.0

    linear: dict[int, float] = {}
    quadratic: dict[tuple[int, int], float] = {}
    offset = 0.0
    var_names = [f"x{k}" for k in range(qp.num_vars)]

    for i, c in qp.linear.items():
        _add_linear(linear, i, sign * c)
    for (i, j), c in qp.quadratic.items():
        _add_quadratic(linear, quadratic, i, j, sign * c)

    # Inequalities become equalities over [original bits + slack bits].
    equalities: list[LinearConstraint] = []
    num_vars = qp.num_vars
    for c_idx, con in enumerate(qp.constraints):
        if con.sense == "==":
            equalities.append(con)
            continue
        terms = dict(con.terms)
        rhs = con.rhs
        if con.sense == ">=":  # flip to <= once, then share the slack path
            terms = {i: -c for i, c in terms.items()}
            rhs = -rhs
        lo = sum(min(c, 0.0) for c in terms.values())
        slack_range = rhs - lo
        if not math.isfinite(slack_range) or slack_range < 0.0:
            raise UnboundedSlackError(
                f"constraint {c_idx} admits no finite nonnegative slack range "
                f"(rhs={rhs}, min lhs={lo})"
            )
        slack_max = math.floor(slack_range)
        num_bits = slack_max.bit_length()  # plain power-of-two expansion
        for t in range(num_bits):
            terms[num_vars] = float(2**t)
            var_names.append(f"c{c_idx}_s{t}")
            num_vars += 1
        equalities.append(LinearConstraint(terms, "==", rhs))

    # Each equality c(x) = r adds M * (c(x) - r)**2 to the minimized objective.
    for con in equalities:
        items = sorted(con.terms.items())
        for i, a in items:
            _add_linear(linear, i, weight * (a * a - 2.0 * con.rhs * a))
        for idx, (i, a) in enumerate(items):
            for j, b in items[idx + 1 :]:
                _add_quadratic(linear, quadratic, i, j, 2.0 * weight * a * b)
        offset += weight * con.rhs * con.rhs

    linear = {i: v for i, v in linear.items() if v != 0.0}
    quadratic = {k: v for k, v in quadratic.items() if v != 0.0}
    return Qubo(num_vars, linear, quadratic, offset, var_names)


def qubo_energy(q: Qubo, x: np.ndarray) -> float:
    """Reference evaluator: energy of one bit vector."""
    x = np.asarray(x, dtype=float).ravel()
    if x.size != q.num_vars:
        raise LengthMismatchError(f"expected {q.num_vars} bits, got {x.size}")
    energy = q.offset
    energy += sum(c * x[i] for i, c in q.linear.items())
    energy += sum(c * x[i] * x[j] for (i, j), c in q.quadratic.items())
    return float(energy)
