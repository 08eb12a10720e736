"""Exact expected number of connected components and its flow derivative.

For the random graph with i.i.d. targets X_i ~ p,

    E_C(p) = sum over nonempty S of (|S| - 1)! prod_{j in S} p_j
           = sum_k etilde_k / k,

where etilde_k = k! e_k(p) are scaled elementary symmetric polynomials. The
scaled form keeps every intermediate in [0, 1] for sub-probability vectors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .distributions import as_prob_vector, sorted_view
from .errors import NegativeInput, TooLarge, TooSmall

MAX_EXACT_N = 10_000
MAX_BRUTEFORCE_N = 20


@dataclass(frozen=True)
class SymmetricAccumulator:
    """Scaled elementary symmetric values etilde_1..etilde_K."""

    scaled_elems: np.ndarray
    kmax: int

    def __getitem__(self, k: int) -> float:
        if not 1 <= k <= self.kmax:
            raise IndexError(k)
        return float(self.scaled_elems[k - 1])


def _scaled_esp(values: np.ndarray, kmax: int) -> np.ndarray:
    values = np.ascontiguousarray(values, dtype=np.float64)
    return kernels.scaled_esp(values, int(kmax))


def accumulate(values, kmax: int) -> SymmetricAccumulator:
    values = np.asarray(values, dtype=float).ravel()
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    if values.size and values.min() < 0:
        raise NegativeInput(f"negative value {values.min()!r}")
    elems = _scaled_esp(values, kmax)[1:]
    elems.setflags(write=False)
    return SymmetricAccumulator(elems, int(kmax))


def _ec_polynomial(values: np.ndarray) -> float:
    # E_C as a polynomial on nonnegative vectors; used for finite differences
    nz = values[values != 0.0]
    if nz.size == 0:
        return 0.0
    e = _scaled_esp(nz, nz.size)
    return float(np.sum(e[1:] / np.arange(1, nz.size + 1)))


def expected_components(p) -> float:
    p = as_prob_vector(p)
    if p.n > MAX_EXACT_N:
        raise TooLarge(f"n = {p.n} exceeds the exact-evaluation cap {MAX_EXACT_N}")
    return _ec_polynomial(p.values)


def expected_components_bruteforce(p) -> float:
    """Literal sum over all 2^n subsets; independent of the recurrence."""
    p = as_prob_vector(p)
    if p.n > MAX_BRUTEFORCE_N:
        raise TooLarge(f"brute force needs n <= {MAX_BRUTEFORCE_N}, got {p.n}")
    prods = np.ones(1)
    sizes = np.zeros(1, dtype=np.int64)
    for v in p.values:
        prods = np.concatenate((prods, prods * v))
        sizes = np.concatenate((sizes, sizes + 1))
    weights = np.array([0.0] + [math.factorial(k - 1) for k in range(1, p.n + 1)])
    return float(np.sum(weights[sizes] * prods))


def gamma_ec(r, include_empty: bool = False) -> float:
    """Flow derivative prefactor (r_+ - r_-) * sum_S (|S|+1)! prod_{j in S} r_j.

    S ranges over nonempty subsets of the indices other than i_+ and i_-.
    With ``include_empty`` the empty subset contributes 1 as well, which gives
    the exact rate of change of E_C when mass moves from the largest entry to
    the smallest one.
    """
    r = as_prob_vector(r)
    n = r.n
    if n < 3:
        raise TooSmall("gamma_ec needs n >= 3")
    if n > MAX_EXACT_N:
        raise TooLarge(f"n = {n} exceeds the exact-evaluation cap {MAX_EXACT_N}")
    view = sorted_view(r)
    gap = view.largest - view.smallest
    if gap == 0.0:
        return 0.0
    rest = np.delete(r.values, [view.index_of_largest, view.index_of_smallest])
    e = _scaled_esp(rest, n - 2)
    total = float(np.sum(np.arange(2, n) * e[1:]))
    if include_empty:
        total += 1.0
    return gap * total


def gamma_ec_upper(r) -> float:
    """Bound on gamma_ec from flattening the middle entries to their mean."""
    r = as_prob_vector(r)
    n = r.n
    if n < 3:
        raise TooSmall("gamma_ec_upper needs n >= 3")
    view = sorted_view(r)
    gap = view.largest - view.smallest
    if gap == 0.0:
        return 0.0
    x = max(0.0, 1.0 - view.largest - view.smallest)
    return gap * float(kernels.c_series(x, n - 2, 0, 0.0))
