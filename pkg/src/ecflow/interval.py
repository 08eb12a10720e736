"""Outward-rounded interval arithmetic and the interval Newton method.

Every elementary operation computes its endpoints in round-to-nearest and then
steps them one representable value outward, so the exact real result of the
operation applied to any points of the inputs stays inside. ``exp`` is given
two steps of slack; ``erfc`` trusts the platform value to ``erfc_ulps`` units.
"""
from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable

from .errors import (
    CertificationFailed,
    DivisionByZeroInterval,
    NegativeDomain,
    NegativeSqrt,
)

_INF = math.inf
DEFAULT_ERFC_ULPS = 4


def _down(x: float, steps: int = 1) -> float:
    for _ in range(steps):
        x = math.nextafter(x, -_INF)
    return x


def _up(x: float, steps: int = 1) -> float:
    for _ in range(steps):
        x = math.nextafter(x, _INF)
    return x


@dataclass(frozen=True, slots=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError(f"interval endpoints must be finite: [{self.lo}, {self.hi}]")
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x: float) -> "Interval":
        x = float(x)
        return cls(x, x)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        m = 0.5 * self.lo + 0.5 * self.hi
        return min(max(m, self.lo), self.hi)

    def __contains__(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def strictly_inside(self, other: "Interval") -> bool:
        """True when self lies in the interior of ``other``."""
        return other.lo < self.lo and self.hi < other.hi

    def intersect(self, other: "Interval") -> "Interval | None":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return Interval(lo, hi) if lo <= hi else None

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def bisect(self) -> tuple["Interval", "Interval"]:
        m = self.mid
        return Interval(self.lo, m), Interval(m, self.hi)

    def as_list(self) -> list[float]:
        return [self.lo, self.hi]

    def __repr__(self) -> str:
        return f"Interval({self.lo!r}, {self.hi!r})"

    # arithmetic -----------------------------------------------------------

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __add__(self, other) -> "Interval":
        o = _coerce(other)
        return Interval(_down(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __sub__(self, other) -> "Interval":
        o = _coerce(other)
        return Interval(_down(self.lo - o.hi), _up(self.hi - o.lo))

    def __rsub__(self, other) -> "Interval":
        return _coerce(other) - self

    def __mul__(self, other) -> "Interval":
        o = _coerce(other)
        prods = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(_down(min(prods)), _up(max(prods)))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Interval":
        o = _coerce(other)
        if o.lo <= 0.0 <= o.hi:
            raise DivisionByZeroInterval(f"divisor {o!r} contains zero")
        quots = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi)
        return Interval(_down(min(quots)), _up(max(quots)))

    def __rtruediv__(self, other) -> "Interval":
        return _coerce(other) / self

    def __pow__(self, k: int) -> "Interval":
        if not isinstance(k, int):
            raise TypeError("only integer powers are supported")
        if k < 0:
            return 1.0 / (self ** (-k))
        if k == 0:
            return Interval(1.0, 1.0)
        if k % 2 == 1 or self.lo >= 0.0:
            base = self
            out = base
            for _ in range(k - 1):
                out = _mul_same_sign(out, base) if base.lo >= 0.0 else out * base
            return out
        # even power of an interval reaching below zero
        mag = Interval(0.0 if self.lo <= 0.0 <= self.hi else min(abs(self.lo), abs(self.hi)),
                       max(abs(self.lo), abs(self.hi)))
        out = mag
        for _ in range(k - 1):
            out = _mul_same_sign(out, mag)
        return out


def _mul_same_sign(a: Interval, b: Interval) -> Interval:
    # both nonnegative: endpoints multiply monotonically
    return Interval(max(0.0, _down(a.lo * b.lo)), _up(a.hi * b.hi))


def _coerce(x) -> Interval:
    if isinstance(x, Interval):
        return x
    if isinstance(x, int):
        if abs(x) > 2**53:
            raise ValueError("integer not exactly representable")
        return Interval.point(float(x))
    if isinstance(x, float):
        return Interval.point(x)
    raise TypeError(f"cannot use {type(x).__name__} as an interval")


def exp(x: Interval) -> Interval:
    return Interval(max(0.0, _down(math.exp(x.lo), 2)), _up(math.exp(x.hi), 2))


def sqrt(x: Interval) -> Interval:
    if x.lo < 0.0:
        raise NegativeSqrt(f"sqrt of {x!r}")
    return Interval(max(0.0, _down(math.sqrt(x.lo))), _up(math.sqrt(x.hi)))


def erfc_enclosure(x: Interval, ulps: int = DEFAULT_ERFC_ULPS) -> Interval:
    """erfc is decreasing; platform values are trusted to ``ulps`` units."""
    return Interval(max(0.0, _down(math.erfc(x.hi), ulps)), _up(math.erfc(x.lo), ulps))


PI = Interval(3.141592653589793, _up(3.141592653589793))
SQRT_2 = sqrt(Interval.point(2.0))
SQRT_HALF_PI = sqrt(PI / 2.0)


def _mills_point(x: float, ulps: int) -> Interval:
    # M(x) = sqrt(pi/2) exp(x^2/2) erfc(x/sqrt 2); fine for 0 <= x <= ~37
    xi = Interval.point(x)
    return SQRT_HALF_PI * exp(xi * xi / 2.0) * erfc_enclosure(xi / SQRT_2, ulps)


def mills_enclosure(x: Interval, ulps: int = DEFAULT_ERFC_ULPS) -> Interval:
    """Enclosure of M over x, using that M is strictly decreasing."""
    if x.lo < 0.0:
        raise NegativeDomain(f"Mills ratio needs x >= 0, got {x!r}")
    if x.lo == x.hi:
        return _mills_point(x.lo, ulps)
    return Interval(_mills_point(x.hi, ulps).lo, _mills_point(x.lo, ulps).hi)


def interval_f(x: Interval, ulps: int = DEFAULT_ERFC_ULPS) -> Interval:
    return x - x**2 * mills_enclosure(x, ulps)


def interval_f_prime(x: Interval, ulps: int = DEFAULT_ERFC_ULPS) -> Interval:
    x2 = x**2
    return 1.0 + x2 - x * (2.0 + x2) * mills_enclosure(x, ulps)


def interval_f_second(x: Interval, ulps: int = DEFAULT_ERFC_ULPS) -> Interval:
    x2 = x**2
    return x**3 + 4.0 * x - mills_enclosure(x, ulps) * (2.0 + 5.0 * x2 + x2**2)


@dataclass(frozen=True)
class RootEnclosure:
    enclosure: Interval
    unique: bool
    second_derivative_sign: str = "indeterminate"


IntervalFn = Callable[[Interval], Interval]


def _extended_newton(x: Interval, m: float, fm: Interval, d: Interval) -> list[Interval]:
    # {m - y/z : y in fm, z in d} intersected with x, for 0 in d and 0 not in fm
    pieces: list[tuple[float, float]] = []
    if fm.lo > 0.0:
        c = fm.lo
        if d.lo < 0.0:
            # z in [d.lo, 0): y/z <= c/d.lo, so m - y/z >= m - c/d.lo
            pieces.append((_down(m - _up(c / d.lo)), _INF))
        if d.hi > 0.0:
            pieces.append((-_INF, _up(m - _down(c / d.hi))))
    else:
        c = fm.hi
        if d.lo < 0.0:
            pieces.append((-_INF, _up(m - _down(c / d.lo))))
        if d.hi > 0.0:
            pieces.append((_down(m - _up(c / d.hi)), _INF))
    out = []
    for lo, hi in pieces:
        lo, hi = max(lo, x.lo), min(hi, x.hi)
        if lo <= hi:
            out.append(Interval(lo, hi))
    return out


def interval_newton(
    func: IntervalFn,
    deriv: IntervalFn,
    x0: Interval,
    tol: float = 1e-12,
    max_iter: int = 1_000_000,
) -> list[RootEnclosure]:
    """Enclose every zero of ``func`` in ``x0`` by bisection and Newton contraction.

    A box is certified to hold exactly one zero when its Newton image lies in
    its interior. Boxes that shrink to ``tol`` without certification, or that
    remain when ``max_iter`` boxes have been processed, come back with
    ``unique=False``. The returned enclosures are sorted by lower endpoint.
    """
    if tol <= 0:
        raise ValueError("tol must be > 0")
    counter = itertools.count()
    heap = [(-x0.width, next(counter), x0)]
    found: list[RootEnclosure] = []
    processed = 0
    while heap:
        if processed >= max_iter:
            found.extend(RootEnclosure(box, False) for _, _, box in heap)
            break
        processed += 1
        _, _, box = heapq.heappop(heap)
        if 0.0 not in func(box):
            continue
        m = box.mid
        fm = func(Interval.point(m))
        d = deriv(box)
        if 0.0 in d:
            if 0.0 in fm:
                candidates = [] if box.width <= tol else list(box.bisect())
                if not candidates:
                    found.append(RootEnclosure(box, False))
            else:
                candidates = _extended_newton(box, m, fm, d)
                if len(candidates) == 1 and candidates[0].width > 0.5 * box.width:
                    candidates = list(candidates[0].bisect())
            for c in candidates:
                if c.width <= tol:
                    found.append(RootEnclosure(c, False))
                else:
                    heapq.heappush(heap, (-c.width, next(counter), c))
            continue
        image = m - fm / d
        inner = image.intersect(box)
        if inner is None:
            continue
        if image.strictly_inside(box):
            found.append(RootEnclosure(_contract(func, deriv, inner, tol), True))
        elif inner.width <= tol:
            found.append(RootEnclosure(inner, False))
        elif inner.width < 0.5 * box.width:
            heapq.heappush(heap, (-inner.width, next(counter), inner))
        else:
            for half in inner.bisect():
                heapq.heappush(heap, (-half.width, next(counter), half))
    return _merge(found)


def _contract(func: IntervalFn, deriv: IntervalFn, box: Interval, tol: float) -> Interval:
    # box holds exactly one zero; Newton steps keep it while they shrink the box
    for _ in range(200):
        if box.width <= tol:
            break
        m = box.mid
        image = m - func(Interval.point(m)) / deriv(box)
        nxt = image.intersect(box)
        if nxt is None or nxt.width >= box.width:
            break
        box = nxt
    # push past tol to the floating-point floor while progress continues
    for _ in range(20):
        m = box.mid
        nxt = (m - func(Interval.point(m)) / deriv(box)).intersect(box)
        if nxt is None or nxt.width >= box.width:
            break
        box = nxt
    return box


def _merge(found: list[RootEnclosure]) -> list[RootEnclosure]:
    found = sorted(found, key=lambda r: (r.enclosure.lo, r.enclosure.hi))
    merged: list[RootEnclosure] = []
    for r in found:
        if merged and r.enclosure.lo <= merged[-1].enclosure.hi:
            prev = merged.pop()
            # overlapping boxes may hold the same zero twice; uniqueness is lost
            merged.append(RootEnclosure(prev.enclosure.hull(r.enclosure), False))
        else:
            merged.append(r)
    return merged


@dataclass(frozen=True)
class Maximization:
    x0: RootEnclosure
    mu: Interval
    fpp: Interval
    globality: dict

    def to_json_dict(self) -> dict:
        return {
            "x0": self.x0.enclosure.as_list(),
            "mu": self.mu.as_list(),
            "f_second": self.fpp.as_list(),
            "unique": self.x0.unique,
        }


def certify_tail(mu: Interval) -> dict:
    """Chain f(x) < x/(1+x^2) <= 3/10 < mu for x >= 3, checked exactly.

    The first inequality is the classical Mills lower bound M(x) > x/(x^2+1).
    x/(1+x^2) has derivative (1 - x^2)/(1 + x^2)^2, negative for x > 1, so its
    value at 3 bounds the tail; that value is compared as an exact rational.
    """
    x = Interval.point(3.0)
    slope_numerator = 1.0 - x**2
    decreasing = slope_numerator.hi < 0.0
    at_three = Fraction(3) / (1 + Fraction(3) ** 2)
    at_three_ok = at_three <= Fraction(3, 10)
    below_mu = Fraction(3, 10) < Fraction(mu.lo)
    return {
        "rational_bound_decreasing": decreasing,
        "bound_at_3_le_0.3": at_three_ok,
        "0.3_lt_mu": below_mu,
        "tail_below_mu": decreasing and at_three_ok and below_mu,
    }


def maximize_f(erfc_ulps: int = DEFAULT_ERFC_ULPS, tol: float = 1e-12) -> Maximization:
    """Certify the maximizer x0 and maximum mu of f(x) = x - x^2 M(x) on x >= 0."""
    if erfc_ulps < 1:
        raise ValueError("erfc_ulps must be >= 1")
    fp = lambda x: interval_f_prime(x, erfc_ulps)  # noqa: E731
    fpp = lambda x: interval_f_second(x, erfc_ulps)  # noqa: E731
    roots = interval_newton(fp, fpp, Interval(0.0, 3.0), tol=tol)
    if len(roots) != 1 or not roots[0].unique:
        raise CertificationFailed(f"expected one certified zero of f' on [0, 3], got {roots}")
    root = roots[0]
    x0 = root.enclosure
    mu = interval_f(x0, erfc_ulps)
    second = fpp(x0)
    if not second.hi < 0.0:
        raise CertificationFailed(f"f''(x0) enclosure {second!r} is not negative")
    root = replace(root, second_derivative_sign="negative")
    zero = Interval.point(0.0)
    globality = {
        "f_at_0_is_0": 0.0 in interval_f(zero, erfc_ulps),
        "f_prime_at_0_positive": fp(zero).lo > 0.0,
        "f_positive_at_x0": mu.lo > 0.0,
        "single_critical_point_on_[0,3]": len(roots) == 1 and roots[0].unique,
        **certify_tail(mu),
    }
    globality["global_maximum"] = all(globality.values())
    if not globality["global_maximum"]:
        raise CertificationFailed(f"global maximum not certified: {globality}")
    return Maximization(root, mu, second, globality)
