"""Exchange-rate matrices: loading, validation, normalization, log weights.

The canonical interchange format is CSV with a header row of currency
labels followed by one row of rates per currency (row i = "from currency
i").  A JSON object ``{"labels": [...], "rates": [[...]]}`` is accepted as
an alternative.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import IO

import numpy as np

from .errors import (
    DimensionMismatchError,
    NonPositiveRateError,
    NonSquareError,
    ParseError,
)


@dataclass
class TransitMatrix:
    """Pairwise exchange rates between n currencies.

    ``rates[i, j]`` is the number of units of currency j received per unit
    of currency i, commissions included.  All entries must be positive and
    finite; the diagonal (self-exchange) is pinned to exactly 1.
    """

    labels: list[str]
    rates: np.ndarray

    def __post_init__(self) -> None:
        self.labels = [str(x) for x in self.labels]
        rates = np.array(self.rates, dtype=float)
        n = len(self.labels)
        if n < 2:
            raise ValueError("a market needs at least two currencies")
        if rates.ndim != 2 or rates.shape != (n, n):
            raise NonSquareError(
                f"expected a {n}x{n} rate matrix, got shape {rates.shape}"
            )
        np.fill_diagonal(rates, 1.0)  # self-exchange is the identity trade
        if not np.all(np.isfinite(rates)) or np.any(rates <= 0.0):
            raise NonPositiveRateError("all exchange rates must be positive and finite")
        self.rates = rates

    @property
    def n(self) -> int:
        return len(self.labels)

    def to_csv(self) -> str:
        """Serialize to the canonical CSV format (floats round-trip exactly)."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.labels)
        for row in self.rates:
            writer.writerow([repr(float(x)) for x in row])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(
            {"labels": self.labels, "rates": [[float(x) for x in row] for row in self.rates]}
        )


@dataclass
class NormalizationVector:
    """One positive scaling coefficient per currency."""

    coeffs: np.ndarray

    def __post_init__(self) -> None:
        coeffs = np.array(self.coeffs, dtype=float)
        if coeffs.ndim != 1:
            raise DimensionMismatchError("normalization coefficients must be a 1-d vector")
        if not np.all(np.isfinite(coeffs)) or np.any(coeffs <= 0.0):
            raise ValueError("normalization coefficients must be positive and finite")
        self.coeffs = coeffs


def _parse_csv(text: str) -> TransitMatrix:
    rows = [row for row in csv.reader(io.StringIO(text)) if row and any(f.strip() for f in row)]
    if not rows:
        raise ParseError("empty CSV input")
    labels = [f.strip() for f in rows[0]]
    n = len(labels)
    data = rows[1:]
    if len(data) != n or any(len(row) != n for row in data):
        raise NonSquareError(
            f"expected {n} rows of {n} rates after the header, got "
            f"{len(data)} rows of widths {sorted({len(r) for r in data})}"
        )
    try:
        rates = [[float(f) for f in row] for row in data]
    except ValueError as exc:
        raise ParseError(f"non-numeric rate entry: {exc}") from exc
    return TransitMatrix(labels, np.array(rates))


def _parse_json(obj: dict) -> TransitMatrix:
    try:
        labels = list(obj["labels"])
        rates = obj["rates"]
    except (KeyError, TypeError) as exc:
        raise ParseError("JSON market must be an object with 'labels' and 'rates'") from exc
    try:
        rates = np.array(rates, dtype=float)
    except (ValueError, TypeError) as exc:
        raise ParseError(f"non-numeric rates in JSON market: {exc}") from exc
    if rates.ndim != 2 or rates.shape[0] != rates.shape[1] or rates.shape[0] != len(labels):
        raise NonSquareError(f"JSON rates must be {len(labels)}x{len(labels)}")
    return TransitMatrix(labels, rates)


def load_rates(source: str | Path | IO[str] | dict) -> TransitMatrix:
    """Load a transit matrix from a CSV/JSON file path, open handle, or dict.

    The format is sniffed from the first non-blank character: ``{`` means
    JSON, anything else is treated as CSV.
    """
    if isinstance(source, dict):
        return _parse_json(source)
    if isinstance(source, (str, Path)):
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise ParseError(f"cannot read {source}: {exc}") from exc
    else:
        text = source.read()
    stripped = text.lstrip()
    if not stripped:
        raise ParseError("empty input")
    if stripped[0] == "{":
        try:
            obj = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
        return _parse_json(obj)
    return _parse_csv(text)


def normalize(m: TransitMatrix, v: NormalizationVector | np.ndarray) -> TransitMatrix:
    """Rescale rates per currency: ``m'[i, j] = m[i, j] * v[j] / v[i]``.

    Cycle products are invariant (the coefficients telescope around any
    closed loop), so normalization never creates or destroys arbitrage.
    """
    if not isinstance(v, NormalizationVector):
        v = NormalizationVector(np.asarray(v))
    if len(v.coeffs) != m.n:
        raise DimensionMismatchError(
            f"normalization vector has {len(v.coeffs)} coefficients for {m.n} currencies"
        )
    scaled = m.rates * v.coeffs[np.newaxis, :] / v.coeffs[:, np.newaxis]
    return TransitMatrix(list(m.labels), scaled)


def log_weights(m: TransitMatrix) -> np.ndarray:
    """Elementwise natural log of the rates, with an exactly-zero diagonal.

    Sums of these weights along a cycle equal the log of the rate product,
    turning the multiplicative arbitrage condition (product > 1) into an
    additive one (sum > 0).
    """
    w = np.log(m.rates)
    np.fill_diagonal(w, 0.0)
    return w
