"""Gaussian Mills ratio M(x) = (1 - Phi(x)) / phi(x) and f(x) = x - x^2 M(x)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfcx

from .errors import NegativeArgument

SQRT_HALF_PI = math.sqrt(math.pi / 2.0)
CF_THRESHOLD = 6.0
CF_RTOL = 1e-16
CF_MAX_TERMS = 10_000


@dataclass(frozen=True)
class MillsEval:
    x: float
    m_value: float
    f_value: float
    f_prime: float
    f_second: float


def _cf_depth(x: float) -> int:
    # terms needed by the Laplace continued fraction, found by modified Lentz
    tiny = 1e-300
    c = x
    d = 0.0
    for j in range(1, CF_MAX_TERMS):
        d = x + j * d
        d = tiny if d == 0.0 else d
        c = x + j / c
        c = tiny if c == 0.0 else c
        d = 1.0 / d
        if abs(c * d - 1.0) <= CF_RTOL:
            return j
    return CF_MAX_TERMS


def _mills_cf(x: float) -> float:
    # M(x) = 1/(x + 1/(x + 2/(x + 3/(x + ...)))); evaluated backward from the
    # truncation depth, which keeps the rounding error near one ulp
    tail = 0.0
    for j in range(_cf_depth(x) + 2, 0, -1):
        tail = j / (x + tail)
    return 1.0 / (x + tail)


def _check_nonneg(x):
    if np.any(np.asarray(x) < 0):
        raise NegativeArgument("argument must be >= 0")


def mills_ratio(x):
    """M(x) for x >= 0; accepts scalars or arrays."""
    _check_nonneg(x)
    arr = np.asarray(x, dtype=float)
    out = np.empty_like(arr)
    small = arr < CF_THRESHOLD
    out[small] = SQRT_HALF_PI * erfcx(arr[small] / math.sqrt(2.0))
    big = ~small
    if np.any(big):
        out[big] = [_mills_cf(v) for v in arr[big].ravel()]
    return float(out) if out.ndim == 0 else out


def f(x):
    _check_nonneg(x)
    x = np.asarray(x, dtype=float)
    out = x - x * x * mills_ratio(x)
    return float(out) if out.ndim == 0 else out


def f_prime(x):
    _check_nonneg(x)
    x = np.asarray(x, dtype=float)
    out = 1.0 + x * x - x * (2.0 + x * x) * mills_ratio(x)
    return float(out) if out.ndim == 0 else out


def f_second(x):
    _check_nonneg(x)
    x = np.asarray(x, dtype=float)
    x2 = x * x
    out = x2 * x + 4.0 * x - mills_ratio(x) * (2.0 + 5.0 * x2 + x2 * x2)
    return float(out) if out.ndim == 0 else out


def evaluate(x: float) -> MillsEval:
    return MillsEval(float(x), mills_ratio(x), f(x), f_prime(x), f_second(x))


def mills_derivative_identity_check(x: float, step: float = 1e-6) -> float:
    """|central difference of M at x - (x M(x) - 1)|."""
    if x <= 0:
        raise NegativeArgument("x must be > 0")
    fd = (mills_ratio(x + step) - mills_ratio(x - step)) / (2.0 * step)
    return abs(fd - (x * mills_ratio(x) - 1.0))
