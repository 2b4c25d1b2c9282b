"""
Utility functions for tabulating and formatting spectral results.
"""

from typing import Iterable, List

import pandas as pd

from mgl.core.errors import DomainError
from mgl.spectral.closed_form import EigenPair


def parse_float_list(text: str) -> List[float]:
    """Parse a comma-separated list such as '10,100,1e4'."""
    try:
        values = [float(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise DomainError(f"not a comma-separated list of numbers: {text!r}") from exc
    if not values:
        raise DomainError("empty list of numbers")
    return values


def spectrum_table(pairs: Iterable[EigenPair]) -> pd.DataFrame:
    """
    One row per eigenpair.

    Columns: k_or_rank, b, lambda_minus_delta (eigenvalue of -Laplacian),
    lambda, multiplicity, then a_1..a_N and gamma_1..gamma_N in the F-coordinate.
    """
    rows = []
    n = 0
    for pair in pairs:
        n = max(n, pair.fn.n_segments)
        row = {
            "k_or_rank": pair.k,
            "b": pair.b,
            "lambda_minus_delta": pair.b * pair.b,
            "lambda": pair.eigenvalue,
            "multiplicity": pair.multiplicity,
        }
        for i, a in enumerate(pair.fn.amplitudes, start=1):
            row[f"a_{i}"] = a
        for i, g in enumerate(pair.fn.phases, start=1):
            row[f"gamma_{i}"] = g
        rows.append(row)

    columns = ["k_or_rank", "b", "lambda_minus_delta", "lambda", "multiplicity"]
    columns += [f"a_{i}" for i in range(1, n + 1)] + [f"gamma_{i}" for i in range(1, n + 1)]
    return pd.DataFrame(rows, columns=columns)
