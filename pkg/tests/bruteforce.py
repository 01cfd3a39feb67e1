"""Independent brute-force oracle for the diagonal distribution.

Deliberately shares no code with the library's tree walk: every string's
probability is computed from scratch as Tr(P^dag rho P) with
P = A_{x_1} A_{x_2} .. A_{x_n}, iterating over the complete d^n product set.
"""

from __future__ import annotations

import itertools
from functools import reduce

import numpy as np

from mpscap import MPSModel


def brute_probability(model: MPSModel, symbols: tuple[int, ...]) -> float:
    ops = [model.kraus[s - 1] for s in symbols]
    prod = reduce(lambda x, y: x @ y, ops)
    return float(np.trace(prod.conj().T @ model.invariant_state @ prod).real)


def brute_distribution(model: MPSModel, n: int) -> dict[tuple[int, ...], float]:
    """Every length-n string (1-based symbols) with its probability."""
    out = {}
    for symbols in itertools.product(range(1, model.local_dim + 1), repeat=n):
        out[symbols] = brute_probability(model, symbols)
    return out


def brute_multiset(model: MPSModel, n: int, floor: float = 0.0) -> np.ndarray:
    """Probabilities above ``floor``, sorted in decreasing order."""
    values = np.array(
        [p for p in brute_distribution(model, n).values() if p > floor]
    )
    return np.sort(values)[::-1]


def brute_entropy(model: MPSModel, n: int) -> float:
    probs = np.array([p for p in brute_distribution(model, n).values() if p > 0])
    return float(-(probs * np.log2(probs)).sum())
