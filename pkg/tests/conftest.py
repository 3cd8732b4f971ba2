from pathlib import Path

import numpy as np
import pytest

from qarb.market import TransitMatrix
from qarb.pipeline import compile_problem

DATA = Path(__file__).parent / "data"

CANONICAL3_RATES = [[1, 2, 0.5], [0.4, 1, 3], [1.5, 0.25, 1]]
CANONICAL4_RATES = [
    [1, 3, 0.5, 0.4],
    [0.3, 1, 4, 0.35],
    [0.3, 0.2, 1, 5],
    [2.0, 0.25, 0.15, 1],
]


@pytest.fixture
def canonical3() -> TransitMatrix:
    return TransitMatrix(["A", "B", "C"], CANONICAL3_RATES)


@pytest.fixture
def canonical4() -> TransitMatrix:
    return TransitMatrix(["A", "B", "C", "D"], CANONICAL4_RATES)


@pytest.fixture
def canonical3_csv() -> Path:
    return DATA / "canonical3.csv"


@pytest.fixture
def canonical5_csv() -> Path:
    return DATA / "canonical5.csv"


@pytest.fixture
def compiled3(canonical3):
    return compile_problem(canonical3)


def random_market(seed: int, n: int, spread: float = 1.5) -> TransitMatrix:
    """Seeded random positive rate matrix with unit diagonal."""
    rng = np.random.default_rng(seed)
    rates = np.exp(rng.uniform(-spread, spread, (n, n)))
    return TransitMatrix([f"c{i}" for i in range(n)], rates)
