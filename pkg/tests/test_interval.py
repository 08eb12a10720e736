import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ecflow.errors import DivisionByZeroInterval, NegativeDomain, NegativeSqrt
from ecflow.interval import (
    Interval,
    certify_tail,
    erfc_enclosure,
    exp,
    interval_f,
    interval_f_prime,
    interval_f_second,
    interval_newton,
    maximize_f,
    mills_enclosure,
    sqrt,
)
from ecflow.mills import f, f_prime, f_second, mills_ratio

X0_WINDOW = (1.1615278892744612 - 1e-11, 1.1615278892744958 + 1e-11)
MU_WINDOW = (0.346813047097384 - 1e-11, 0.346813047097549 + 1e-11)


def ulp_count(a: float, b: float) -> int:
    n = 0
    while a < b:
        a = math.nextafter(a, math.inf)
        n += 1
    return n


def random_interval(rng, scale=10.0):
    a, b = sorted(rng.uniform(-scale, scale, size=2))
    return Interval(float(a), float(b))


def points(rng, box, k=5):
    return [box.lo, box.hi] + [float(v) for v in rng.uniform(box.lo, box.hi, size=k)]


def test_examples():
    s = Interval(1.0, 2.0) + Interval(3.0, 4.0)
    assert s.lo <= 4.0 and s.hi >= 6.0
    p = Interval(-1.0, 1.0) * Interval(-1.0, 1.0)
    assert p.lo <= -1.0 and p.hi >= 1.0
    e = exp(Interval.point(0.0))
    assert 1.0 in e
    assert ulp_count(e.lo, e.hi) <= 4


def test_invalid_construction():
    with pytest.raises(ValueError):
        Interval(2.0, 1.0)
    with pytest.raises(ValueError):
        Interval(0.0, math.inf)


@pytest.mark.parametrize("op", ["add", "sub", "mul", "div"])
def test_containment_fuzz(op):
    rng = np.random.default_rng(101)
    fn = {
        "add": lambda a, b: a + b,
        "sub": lambda a, b: a - b,
        "mul": lambda a, b: a * b,
        "div": lambda a, b: a / b,
    }[op]
    for _ in range(400):
        x = random_interval(rng)
        y = random_interval(rng)
        if op == "div" and y.lo <= 0.0 <= y.hi:
            y = Interval(abs(y.hi) + 0.1, abs(y.hi) + 1.0)
        out = fn(x, y)
        for a in points(rng, x):
            for b in points(rng, y):
                exact = fn(Fraction(a), Fraction(b))
                assert Fraction(out.lo) <= exact <= Fraction(out.hi)


def test_unary_containment():
    rng = np.random.default_rng(5)
    for _ in range(300):
        x = random_interval(rng, 5.0)
        ex = exp(x)
        pos = Interval(abs(x.lo) * 0.1, abs(x.lo) * 0.1 + abs(x.hi))
        sq = sqrt(pos)
        er = erfc_enclosure(x)
        for v in points(rng, x):
            assert math.exp(v) in ex
            assert math.erfc(v) in er
        for v in points(rng, pos):
            assert math.sqrt(v) in sq


@pytest.mark.parametrize("k", [0, 1, 2, 3, 4, 5, -1, -2])
def test_integer_powers(k):
    rng = np.random.default_rng(17 + k)
    for _ in range(200):
        x = random_interval(rng, 3.0)
        if k < 0 and x.lo <= 0.0 <= x.hi:
            x = Interval(x.hi + 0.5, x.hi + 2.0)
        out = x**k
        for v in points(rng, x):
            assert Fraction(out.lo) <= Fraction(v) ** k <= Fraction(out.hi)


def test_even_power_is_nonnegative():
    sq = Interval(-2.0, 1.0) ** 2
    assert sq.lo == 0.0 and sq.hi >= 4.0
    assert (Interval(-3.0, -2.0) ** 2).lo <= 4.0


def test_inclusion_monotonicity():
    rng = np.random.default_rng(23)
    unary = [exp, erfc_enclosure, lambda x: x**3, lambda x: x**2, lambda x: -x]
    for _ in range(300):
        outer = random_interval(rng, 4.0)
        a, b = sorted(rng.uniform(outer.lo, outer.hi, size=2))
        inner = Interval(float(a), float(b))
        for fn in unary:
            fi, fo = fn(inner), fn(outer)
            assert fo.lo <= fi.lo and fi.hi <= fo.hi


def test_errors():
    with pytest.raises(DivisionByZeroInterval):
        Interval(1.0, 2.0) / Interval(-1.0, 1.0)
    with pytest.raises(DivisionByZeroInterval):
        Interval(1.0, 2.0) / Interval(0.0, 1.0)
    with pytest.raises(NegativeSqrt):
        sqrt(Interval(-1e-300, 1.0))
    with pytest.raises(NegativeDomain):
        interval_f_prime(Interval(-0.1, 1.0))


def test_mills_enclosure_contains_point_values():
    rng = np.random.default_rng(3)
    for _ in range(200):
        a, b = sorted(rng.uniform(0.0, 3.0, size=2))
        box = Interval(float(a), float(b))
        enc = mills_enclosure(box)
        for v in points(rng, box):
            assert mills_ratio(v) in enc


def test_f_extensions_contain_point_values():
    rng = np.random.default_rng(4)
    for _ in range(200):
        a = float(rng.uniform(0.0, 3.0))
        box = Interval(a, a + float(rng.uniform(0.0, 0.05)))
        fi, fpi, fsi = interval_f(box), interval_f_prime(box), interval_f_second(box)
        for v in points(rng, box):
            assert f(v) in fi
            assert f_prime(v) in fpi
            assert f_second(v) in fsi


def test_f_prime_enclosures():
    assert 1.0 in interval_f_prime(Interval.point(0.0))
    assert 0.0 in interval_f_prime(Interval(1.161527, 1.161528))
    assert 0.0 in interval_f(Interval.point(0.0))


def test_newton_sqrt2():
    roots = interval_newton(lambda x: x**2 - 2.0, lambda x: 2.0 * x, Interval(1.0, 2.0), tol=1e-14)
    assert len(roots) == 1
    assert roots[0].unique
    assert math.sqrt(2.0) in roots[0].enclosure
    assert roots[0].enclosure.width <= 1e-14


def test_newton_no_roots():
    assert interval_newton(lambda x: x**2 + 1.0, lambda x: 2.0 * x, Interval(-2.0, 2.0)) == []


def test_newton_two_symmetric_roots():
    roots = interval_newton(lambda x: x**2 - 2.0, lambda x: 2.0 * x, Interval(-2.0, 2.0), tol=1e-13)
    assert len(roots) == 2
    assert all(r.unique for r in roots)
    assert -math.sqrt(2.0) in roots[0].enclosure and math.sqrt(2.0) in roots[1].enclosure


def test_newton_rejects_bad_tol():
    with pytest.raises(ValueError):
        interval_newton(lambda x: x, lambda x: Interval.point(1.0), Interval(-1.0, 1.0), tol=0.0)


def test_newton_budget_returns_unresolved_boxes():
    roots = interval_newton(lambda x: x**2 - 2.0, lambda x: 2.0 * x, Interval(-2.0, 2.0),
                            tol=1e-13, max_iter=1)
    assert roots and not any(r.unique for r in roots)
    assert any(math.sqrt(2.0) in r.enclosure for r in roots)


def _poly(roots):
    def func(x):
        out = Interval.point(1.0)
        for r in roots:
            out = out * (x - float(r))
        return out

    def deriv(x):
        total = Interval.point(0.0)
        for i in range(len(roots)):
            term = Interval.point(1.0)
            for j, r in enumerate(roots):
                if j != i:
                    term = term * (x - float(r))
            total = total + term
        return total

    return func, deriv


@settings(max_examples=60, deadline=None)
@given(st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=8),
                min_size=1, max_size=4))
def test_newton_never_loses_roots(roots):
    func, deriv = _poly(roots)
    found = interval_newton(func, deriv, Interval(-5.0, 5.0), tol=1e-10, max_iter=200_000)
    for r in roots:
        assert any(Fraction(e.enclosure.lo) <= r <= Fraction(e.enclosure.hi) for e in found)


def test_simple_rational_roots_certified_unique():
    func, deriv = _poly([Fraction(-3, 2), Fraction(1, 4), Fraction(2)])
    found = interval_newton(func, deriv, Interval(-4.0, 4.0), tol=1e-12)
    assert len(found) == 3 and all(r.unique for r in found)


@pytest.fixture(scope="module")
def cert():
    return maximize_f()


def test_maximize_f_windows(cert):
    x0 = cert.x0.enclosure
    assert cert.x0.unique
    assert X0_WINDOW[0] <= x0.lo and x0.hi <= X0_WINDOW[1]
    assert x0.width <= 1e-11
    assert MU_WINDOW[0] <= cert.mu.lo and cert.mu.hi <= MU_WINDOW[1]
    assert cert.fpp.hi < 0.0
    assert -0.168 <= cert.fpp.lo and cert.fpp.hi <= -0.167
    assert cert.x0.second_derivative_sign == "negative"


def test_maximize_f_globality(cert):
    assert cert.globality["global_maximum"]
    assert all(cert.globality.values())


def test_maximize_f_json(cert):
    d = cert.to_json_dict()
    assert set(d) == {"x0", "mu", "f_second", "unique"}
    assert d["unique"] is True


def test_wider_erfc_trust_still_certifies():
    wide = maximize_f(erfc_ulps=64)
    assert X0_WINDOW[0] <= wide.x0.enclosure.lo and wide.x0.enclosure.hi <= X0_WINDOW[1]


def test_maximize_f_rejects_bad_ulps():
    with pytest.raises(ValueError):
        maximize_f(erfc_ulps=0)


def test_tail_chain_fails_for_small_mu():
    assert not certify_tail(Interval(0.2, 0.25))["tail_below_mu"]
    assert certify_tail(Interval(0.34, 0.35))["tail_below_mu"]
