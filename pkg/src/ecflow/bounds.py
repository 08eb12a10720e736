"""The bound functions B_m, S_m, c_{k,m} and the Lipschitz constants.

With m = n - 2 and s the largest entry,

    B_m(s) = s * sum_{k=1}^m c_{k,m} (1 - s)^k,
    c_{k,m} = (k + 1) * prod_{j=1}^{k-1} (1 - j/m),

and S_m(s) = B_m(s) / (s (1 - s)).
"""
from __future__ import annotations

import functools
import math
import sys
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from . import kernels
from .components import expected_components, gamma_ec
from .distributions import as_prob_vector, make_prob_vector, tv_distance
from .errors import LengthMismatch, OutOfRange, TooSmall
from .interval import Interval, maximize_f
from .mills import mills_ratio

EXACT_SUM_M = 64
CHAIN_SLACK = 1e-12


@functools.lru_cache(maxsize=None)
def certified_constants() -> tuple[Interval, Interval]:
    """Certified enclosures (x0, mu) of the maximizer and maximum of x - x^2 M(x)."""
    result = maximize_f()
    return result.x0.enclosure, result.mu


def _x0_mu(x0: float | None, mu: float | None) -> tuple[float, float]:
    if x0 is None or mu is None:
        x0_enc, mu_enc = certified_constants()
        x0 = x0_enc.mid if x0 is None else x0
        mu = mu_enc.mid if mu is None else mu
    return float(x0), float(mu)


def c_km(k: int, m: int) -> float:
    if not 1 <= k <= m:
        raise OutOfRange(f"need 1 <= k <= m, got k={k}, m={m}")
    # the running recurrence c_{j+1} = c_j (j+2)/(j+1) (1 - j/m), vectorized
    j = np.arange(1.0, k)
    return 2.0 * float(np.prod((j + 2.0) / (j + 1.0) * (1.0 - j / m)))


def log_c_km(k: int, m: int) -> float:
    """log c_{k,m}, usable where the product itself underflows."""
    if not 1 <= k <= m:
        raise OutOfRange(f"need 1 <= k <= m, got k={k}, m={m}")
    return math.log(k + 1.0) + float(np.sum(np.log1p(-np.arange(1, k) / m)))


_LOG_NORMAL_MIN = math.log(sys.float_info.min) + 40.0


def c_km_sandwich(k: int, m: int) -> tuple[float, float]:
    """Relative margins of (k+1)e^{-k^2/m} <= c_{k,m} <= (k+1)e^{-(k-1)^2/(2m)}.

    Compared directly while c stays in the normal float range, on the log
    scale otherwise.
    """
    log_c = log_c_km(k, m)
    log_k1 = math.log(k + 1.0)
    log_lo = log_k1 - k * k / m
    log_hi = log_k1 - (k - 1) ** 2 / (2.0 * m)
    if min(log_c, log_lo) > _LOG_NORMAL_MIN:
        c = c_km(k, m)
        return (c - math.exp(log_lo)) / c, (math.exp(log_hi) - c) / c
    return log_c - log_lo, log_hi - log_c


def b_m(s: float, m: int, rel_tol: float = 1e-15) -> float:
    if not 0.0 <= s <= 1.0:
        raise OutOfRange(f"s must lie in [0, 1], got {s!r}")
    if m < 1:
        raise OutOfRange("m must be >= 1")
    tol = 0.0 if m <= EXACT_SUM_M else rel_tol
    return s * float(kernels.c_series(1.0 - s, int(m), 0, tol))


def s_m(s: float, m: int, rel_tol: float = 1e-15) -> float:
    """S_m(s) = sum_k c_{k,m} (1 - s)^(k-1), summed directly."""
    if not 0.0 <= s <= 1.0:
        raise OutOfRange(f"s must lie in [0, 1], got {s!r}")
    tol = 0.0 if m <= EXACT_SUM_M else rel_tol
    return float(kernels.c_series(1.0 - s, int(m), 1, tol))


def s_m_upper_chain(s: float, m: int, mu: float | None = None) -> tuple[float, float, float]:
    """The three successive upper bounds on S_m(s) built from the Mills ratio."""
    if not 0.0 < s <= 1.0:
        raise OutOfRange(f"s must lie in (0, 1], got {s!r}")
    _, mu = _x0_mu(0.0, mu)
    rm = math.sqrt(m)
    mills = mills_ratio(rm * s)
    first = 2.0 + m + rm * (3.0 - m * s) * mills
    second = 2.0 + m + 3.0 / s - m * rm * s * mills
    third = 2.0 + (3.0 + mu * rm) / s
    return first, second, third


def kappa_upper(n: int, mu: float | None = None) -> float:
    if n < 3:
        raise TooSmall("n must be >= 3")
    _, mu = _x0_mu(0.0, mu)
    return 3.0 + mu * math.sqrt(n - 2)


def kappa_lower_tail(n: int, x0: float | None = None, mu: float | None = None) -> float:
    """The four lower-order terms of the Lipschitz lower bound."""
    if n < 3:
        raise TooSmall("n must be >= 3")
    x0, mu = _x0_mu(x0, mu)
    m = n - 2
    return (
        -mu * x0 / 2.0
        - math.sqrt(2.0 / m) * x0
        - x0 * x0 / m
        - math.sqrt(m) * math.exp(-m) * x0 * math.exp(x0 * x0 / 2.0) / math.sqrt(2.0)
    )


def kappa_lower(n: int, x0: float | None = None, mu: float | None = None) -> float:
    if n < 3:
        raise TooSmall("n must be >= 3")
    x0, mu = _x0_mu(x0, mu)
    return mu * math.sqrt(n - 2) / math.sqrt(2.0) + kappa_lower_tail(n, x0, mu)


def flow_family(s: float, n: int):
    """r = (s, (1-s)/(n-2), ..., (1-s)/(n-2), 0) with largest entry s."""
    if n < 3:
        raise TooSmall("n must be >= 3")
    m = n - 2
    if s < 1.0 / (n - 1) - 1e-15:
        raise OutOfRange(f"s must be >= 1/(n-1), got {s!r}")
    return make_prob_vector([s] + [(1.0 - s) / m] * m + [0.0])


def lower_bound_s(m: int, x0: float | None = None) -> float:
    """s = 1 - exp(-sqrt(2/m) x0), the choice that sets b = -x0."""
    x0, _ = _x0_mu(x0, 0.0)
    return -math.expm1(-math.sqrt(2.0 / m) * x0)


@dataclass(frozen=True)
class BmSweep:
    m: int
    grid: list[tuple[float, float]]
    argmax_s: float
    max_value: float


def sweep_bm(m: int, coarse_points: int = 512) -> BmSweep:
    """Maximize B_m over [1/(m+2), 1]: log-spaced grid, then golden-section refinement."""
    if m < 1:
        raise OutOfRange("m must be >= 1")
    if coarse_points < 16:
        raise OutOfRange("coarse_points must be >= 16")
    s_grid = np.geomspace(1.0 / (m + 2), 1.0, coarse_points)
    s_grid[-1] = 1.0
    values = np.array([b_m(s, m) for s in s_grid])
    best_s = float(s_grid[np.argmax(values)])
    best = float(values.max())
    neg = lambda s: -b_m(min(max(s, 0.0), 1.0), m)  # noqa: E731
    peaks = [
        i
        for i in range(1, coarse_points - 1)
        if values[i] >= values[i - 1] and values[i] >= values[i + 1]
    ]
    for i in peaks:
        a, b, c = s_grid[i - 1], s_grid[i], s_grid[i + 1]
        res = minimize_scalar(neg, bracket=(a, b, c), method="golden",
                              tol=1e-10 / max(b, 1e-300), options={"maxiter": 400})
        s = float(min(max(res.x, a), c))
        v = b_m(s, m)
        if v > best:
            best_s, best = s, v
    grid = [(float(s), float(v)) for s, v in zip(s_grid, values)]
    return BmSweep(int(m), grid, best_s, best)


@dataclass
class CheckResult:
    name: str
    checks: int = 0
    failures: int = 0
    worst_margin: float = math.inf

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, lhs: float, rhs: float, scale: float | None = None) -> None:
        """Record lhs <= rhs with relative slack."""
        scale = max(abs(lhs), abs(rhs), 1.0) if scale is None else scale
        margin = rhs - lhs
        self.checks += 1
        self.worst_margin = min(self.worst_margin, margin / scale)
        if margin < -CHAIN_SLACK * scale:
            self.failures += 1

    def record_close(self, a: float, b: float, rtol: float) -> None:
        self.checks += 1
        err = abs(a - b) / max(abs(a), abs(b), 1e-300)
        self.worst_margin = min(self.worst_margin, rtol - err)
        if err > rtol:
            self.failures += 1

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": self.checks,
            "failures": self.failures,
            "worst_margin": self.worst_margin,
        }


@dataclass
class ChainReport:
    m: int
    results: dict[str, CheckResult] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    def check(self, name: str) -> CheckResult:
        return self.results.setdefault(name, CheckResult(name))

    def to_dict(self) -> dict:
        return {"m": self.m, "passed": self.passed,
                "checks": {k: v.to_dict() for k, v in self.results.items()}}


def verify_chain(m: int, samples: int, seed: int,
                 x0: float | None = None, mu: float | None = None) -> ChainReport:
    """Check every inequality of the upper and lower bound chains at random points."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    x0, mu = _x0_mu(x0, mu)
    rng = np.random.default_rng(seed)
    report = ChainReport(int(m))
    rm = math.sqrt(m)

    lower_c = report.check("c_km_lower")
    upper_c = report.check("c_km_upper")
    for k in rng.integers(1, m + 1, size=samples):
        low_margin, high_margin = c_km_sandwich(int(k), m)
        lower_c.record(-low_margin, 0.0, scale=1.0)
        upper_c.record(-high_margin, 0.0, scale=1.0)

    chain = [report.check(f"s_m_bound_{i}") for i in (1, 2, 3)]
    final = report.check("b_m_le_3_plus_mu_sqrt_m")
    identity = report.check("b_m_eq_s_1ms_s_m")
    family = report.check("gamma_family_eq_b_m")
    for s in rng.uniform(0.0, 1.0, size=samples):
        s = float(s)
        bm = b_m(s, m)
        final.record(bm, 3.0 + mu * rm)
        if s == 0.0:
            continue
        sm = s_m(s, m)
        identity.record_close(bm, s * (1.0 - s) * sm, 1e-13)
        for res, bound in zip(chain, s_m_upper_chain(s, m, mu)):
            res.record(sm, bound, scale=max(abs(sm), abs(bound), m + 2.0))

    n = m + 2
    if n <= 2_000:
        lo = 1.0 / (n - 1)
        for s in rng.uniform(lo, 1.0, size=min(samples, 50)):
            family.record_close(gamma_ec(flow_family(float(s), n)), b_m(float(s), m), 1e-10)

    star = report.check("b_m_at_s_star_ge_lower")
    s_star = lower_bound_s(m, x0)
    star.record(kappa_lower(n, x0, mu), b_m(s_star, m))
    return report


@dataclass(frozen=True)
class LipschitzReport:
    n: int
    kappa_upper: float
    kappa_lower: float
    x0: Interval
    mu: Interval

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "kappa_upper": self.kappa_upper,
            "kappa_lower": self.kappa_lower,
            "x0": self.x0.as_list(),
            "mu": self.mu.as_list(),
        }


def lipschitz_report(n: int, x0: Interval | None = None, mu: Interval | None = None) -> LipschitzReport:
    if x0 is None or mu is None:
        x0, mu = certified_constants()
    return LipschitzReport(
        int(n), kappa_upper(n, mu.mid), kappa_lower(n, x0.mid, mu.mid), x0, mu
    )


def theorem1_check(p, q, mu: float | None = None) -> tuple[float, float, bool]:
    p, q = as_prob_vector(p), as_prob_vector(q)
    if p.n != q.n:
        raise LengthMismatch(f"lengths differ: {p.n} vs {q.n}")
    if p.n < 3:
        raise TooSmall("n must be >= 3")
    lhs = abs(expected_components(p) - expected_components(q))
    rhs = kappa_upper(p.n, mu) * tv_distance(p, q)
    return lhs, rhs, bool(lhs <= rhs + 1e-12)
