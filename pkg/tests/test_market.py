import io
import json
import math

import numpy as np
import pytest

from qarb.errors import (
    DimensionMismatchError,
    NonPositiveRateError,
    NonSquareError,
    ParseError,
)
from qarb.market import (
    NormalizationVector,
    TransitMatrix,
    load_rates,
    log_weights,
    normalize,
)
from conftest import random_market


def test_identity_market_loads():
    m = load_rates(io.StringIO("X,Y\n1,1\n1,1\n"))
    assert m.labels == ["X", "Y"]
    assert np.array_equal(m.rates, np.ones((2, 2)))


def test_canonical3_fixture_roundtrip(canonical3_csv):
    m = load_rates(canonical3_csv)
    assert m.labels == ["A", "B", "C"]
    again = load_rates(io.StringIO(m.to_csv()))
    assert np.array_equal(again.rates, m.rates)
    assert again.labels == m.labels


def test_zero_rate_rejected():
    with pytest.raises(NonPositiveRateError):
        load_rates(io.StringIO("A,B,C\n1,2,0\n0.4,1,3\n1.5,0.25,1\n"))


def test_negative_and_nonfinite_rejected():
    with pytest.raises(NonPositiveRateError):
        TransitMatrix(["A", "B"], [[1, -2], [0.5, 1]])
    with pytest.raises(NonPositiveRateError):
        TransitMatrix(["A", "B"], [[1, np.inf], [0.5, 1]])


def test_non_square_csv():
    with pytest.raises(NonSquareError):
        load_rates(io.StringIO("A,B,C\n1,2,3\n4,5,6\n"))
    with pytest.raises(NonSquareError):
        load_rates(io.StringIO("A,B\n1,2,3\n4,5,6\n"))


def test_parse_errors():
    with pytest.raises(ParseError):
        load_rates(io.StringIO("A,B\nx,1\n1,1\n"))
    with pytest.raises(ParseError):
        load_rates(io.StringIO(""))
    with pytest.raises(ParseError):
        load_rates(io.StringIO("{not json"))
    with pytest.raises(ParseError):
        load_rates("/no/such/file.csv")


def test_json_sources():
    obj = {"labels": ["A", "B"], "rates": [[1, 2], [0.5, 1]]}
    from_dict = load_rates(obj)
    from_text = load_rates(io.StringIO(json.dumps(obj)))
    assert np.array_equal(from_dict.rates, from_text.rates)
    with pytest.raises(ParseError):
        load_rates({"labels": ["A", "B"]})


def test_diagonal_forced_to_one():
    m = TransitMatrix(["A", "B"], [[7.0, 2.0], [0.5, 0.0]])
    assert m.rates[0, 0] == 1.0 and m.rates[1, 1] == 1.0


def test_single_currency_rejected():
    with pytest.raises(ValueError):
        TransitMatrix(["A"], [[1.0]])


@pytest.mark.parametrize("seed", range(5))
def test_serialization_roundtrips_bit_identical(seed):
    m = random_market(seed, n=4)
    by_csv = load_rates(io.StringIO(m.to_csv()))
    by_json = load_rates(io.StringIO(m.to_json()))
    assert np.array_equal(by_csv.rates, m.rates)
    assert np.array_equal(by_json.rates, m.rates)


def test_normalize_identity_vector(canonical3):
    out = normalize(canonical3, NormalizationVector(np.ones(3)))
    assert np.array_equal(out.rates, canonical3.rates)


def test_normalize_canonical_values(canonical3):
    out = normalize(canonical3, np.array([1.0, 2.0, 4.0]))
    assert out.rates[0, 1] == pytest.approx(4.0)
    assert out.rates[1, 2] == pytest.approx(6.0)
    assert out.rates[2, 0] == pytest.approx(0.375)
    assert np.array_equal(np.diagonal(out.rates), np.ones(3))


def test_normalize_dimension_mismatch(canonical3):
    with pytest.raises(DimensionMismatchError):
        normalize(canonical3, np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        NormalizationVector(np.array([1.0, -1.0, 2.0]))


@pytest.mark.parametrize("seed", range(8))
def test_normalize_preserves_cycle_products(seed):
    rng = np.random.default_rng(1000 + seed)
    n = int(rng.integers(3, 7))
    m = random_market(seed, n=n)
    v = NormalizationVector(np.exp(rng.uniform(-3, 3, n)))
    out = normalize(m, v)
    for _ in range(20):
        k = int(rng.integers(2, n + 1))
        cycle = rng.choice(n, size=k, replace=False)
        before = math.prod(
            m.rates[a, b] for a, b in zip(cycle, np.roll(cycle, -1))
        )
        after = math.prod(
            out.rates[a, b] for a, b in zip(cycle, np.roll(cycle, -1))
        )
        assert after == pytest.approx(before, rel=1e-12)


def test_log_weights_all_ones():
    m = TransitMatrix(["A", "B"], np.ones((2, 2)))
    assert np.array_equal(log_weights(m), np.zeros((2, 2)))


def test_log_weights_canonical(canonical3):
    w = log_weights(canonical3)
    assert w[0, 1] == pytest.approx(0.693147, abs=1e-6)
    assert w[1, 2] == pytest.approx(1.098612, abs=1e-6)
    assert w[2, 0] == pytest.approx(0.405465, abs=1e-6)
    assert np.array_equal(np.diagonal(w), np.zeros(3))
    cycle_sum = w[0, 1] + w[1, 2] + w[2, 0]
    assert cycle_sum == pytest.approx(math.log(9), abs=1e-9)


@pytest.mark.parametrize("seed", range(4))
def test_log_weights_shift_under_normalization(seed):
    m = random_market(seed, n=4)
    rng = np.random.default_rng(2000 + seed)
    coeffs = np.exp(rng.uniform(-2, 2, 4))
    w = log_weights(m)
    w2 = log_weights(normalize(m, coeffs))
    shift = np.log(coeffs)[np.newaxis, :] - np.log(coeffs)[:, np.newaxis]
    off_diag = ~np.eye(4, dtype=bool)
    assert np.allclose((w2 - w)[off_diag], shift[off_diag], atol=1e-12)
    cycle = [0, 2, 1, 3]
    s1 = sum(w[a, b] for a, b in zip(cycle, cycle[1:] + cycle[:1]))
    s2 = sum(w2[a, b] for a, b in zip(cycle, cycle[1:] + cycle[:1]))
    assert s2 == pytest.approx(s1, abs=1e-12)
