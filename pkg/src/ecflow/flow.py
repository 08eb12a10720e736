"""Majorization flow: the flattest point of a total variation ball.

The minimal element of B_eps(r) caps the largest entries of r at a common
level and lifts the smallest ones to another common level, each move carrying
eps of mass. Both levels come from inverting a piecewise-linear function of
the level over the sorted entries.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .components import expected_components
from .distributions import (
    ProbVector,
    as_prob_vector,
    check_radius,
    make_prob_vector,
    tv_distance,
    uniform,
)
from .errors import DegenerateExtremes

TIE_TOL = 1e-12


@dataclass(frozen=True)
class FlowPoint:
    base: ProbVector
    radius: float
    result: ProbVector


def _cap_level(desc: np.ndarray, eps: float) -> float:
    # level c with sum (x_i - c)_+ = eps, x sorted descending
    csum = np.cumsum(desc)
    n = desc.size
    for j in range(1, n + 1):
        c = (csum[j - 1] - eps) / j
        if j == n or c >= desc[j]:
            return c
    raise AssertionError("unreachable")


def _raise_level(asc: np.ndarray, eps: float) -> float:
    # level a with sum (a - x_i)_+ = eps, x sorted ascending
    csum = np.cumsum(asc)
    n = asc.size
    for j in range(1, n + 1):
        a = (csum[j - 1] + eps) / j
        if j == n or a <= asc[j]:
            return a
    raise AssertionError("unreachable")


def minimal_element(r, eps: float) -> ProbVector:
    r = as_prob_vector(r)
    eps = check_radius(eps)
    if eps == 0.0:
        return r
    v = r.values
    n = r.n
    if 0.5 * np.abs(v - 1.0 / n).sum() <= eps:
        return uniform(n)
    desc = np.sort(v)[::-1]
    c = _cap_level(desc, eps)
    a = _raise_level(desc[::-1], eps)
    if c <= a:
        return uniform(n)
    return make_prob_vector(np.clip(v, a, c))


def flow_point(r, eps: float) -> FlowPoint:
    r = as_prob_vector(r)
    return FlowPoint(r, check_radius(eps), minimal_element(r, eps))


def flow_difference(q, eps: float) -> float:
    """E_C(q_eps*) - E_C(q), nonnegative since E_C is Schur concave."""
    q = as_prob_vector(q)
    diff = expected_components(minimal_element(q, eps)) - expected_components(q)
    # float noise only; the exact difference is >= 0
    return max(diff, 0.0)


def flow_bound(p, q) -> float:
    p, q = as_prob_vector(p), as_prob_vector(q)
    eps = tv_distance(p, q)
    return max(flow_difference(q, eps), flow_difference(p, eps))


def gamma_via_flow(r, t: float) -> float:
    """One-sided difference quotient of E_C along the flow at step ``t``."""
    r = as_prob_vector(r)
    desc = np.sort(r.values)[::-1]
    if r.n < 2:
        raise DegenerateExtremes("need at least two entries")
    top_gap = desc[0] - desc[1]
    bottom_gap = desc[-2] - desc[-1]
    if top_gap <= TIE_TOL or bottom_gap <= TIE_TOL:
        raise DegenerateExtremes("largest and smallest entries must be unique")
    if not 0.0 < t < 0.5 * min(top_gap, bottom_gap):
        raise ValueError("t must be positive and below half the extreme gaps")
    return flow_difference(r, t) / t


def flow_path(r, eps: float, points: int) -> list[ProbVector]:
    r = as_prob_vector(r)
    return [minimal_element(r, s) for s in np.linspace(0.0, eps, points)]
