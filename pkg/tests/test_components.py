import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from ecflow.components import (
    _ec_polynomial,
    accumulate,
    expected_components,
    expected_components_bruteforce,
    gamma_ec,
    gamma_ec_upper,
)
from ecflow.distributions import (
    make_prob_vector,
    point_mass,
    random_majorization_pair,
    random_prob_vector,
    sorted_view,
    uniform,
)
from ecflow.errors import NegativeInput, TooLarge, TooSmall


def test_accumulate_examples():
    assert accumulate([1.0], 1)[1] == 1.0
    acc = accumulate([0.5, 0.5], 2)
    assert (acc[1], acc[2]) == (1.0, 0.5)
    assert accumulate([1 / 3] * 3, 3)[3] == pytest.approx(2 / 9, rel=1e-15)
    with pytest.raises(NegativeInput):
        accumulate([0.5, -0.1], 2)


def test_accumulate_matches_subset_products(rng):
    for _ in range(50):
        v = rng.random(int(rng.integers(1, 8)))
        acc = accumulate(v, v.size)
        for k in range(1, v.size + 1):
            e_k = sum(math.prod(c) for c in itertools.combinations(v, k))
            assert acc[k] == pytest.approx(math.factorial(k) * e_k, rel=1e-12)


def test_accumulate_stays_in_unit_interval(rng):
    for _ in range(100):
        p = random_prob_vector(int(rng.integers(1, 300)), rng)
        sub = p.values * rng.random()
        elems = accumulate(sub, p.n).scaled_elems
        assert np.all((elems >= 0) & (elems <= 1 + 1e-12))
        nnz = np.count_nonzero(sub)
        assert np.all(elems[nnz:] == 0)


def test_accumulate_no_overflow_at_large_n():
    e = accumulate(uniform(2000).values, 2000).scaled_elems
    assert np.all(np.isfinite(e))
    # k! e_k(uniform(n)) = n!/((n-k)! n^k); at k = n this is n!/n^n
    assert e[-1] == pytest.approx(math.exp(math.lgamma(2001) - 2000 * math.log(2000)), rel=1e-9)


def test_expected_components_examples():
    assert expected_components(point_mass(7)) == 1.0
    assert expected_components([0.5, 0.5]) == pytest.approx(1.25, rel=1e-15)
    assert expected_components(uniform(3)) == pytest.approx(38 / 27, rel=1e-15)


def test_bruteforce_examples():
    assert expected_components_bruteforce([1.0, 0.0]) == 1.0
    assert expected_components_bruteforce([0.5, 0.5]) == 1.25
    assert expected_components_bruteforce([1 / 3, 0, 2 / 3]) == pytest.approx(11 / 9, rel=1e-15)
    with pytest.raises(TooLarge):
        expected_components_bruteforce(uniform(21))


def test_exact_matches_bruteforce(rng):
    for _ in range(300):
        p = random_prob_vector(int(rng.integers(1, 13)), rng)
        ec = expected_components(p)
        assert abs(ec - expected_components_bruteforce(p)) <= 1e-10 * ec


def test_exact_in_rational_arithmetic():
    # (1/2, 1/4, 1/4): sum_S (|S|-1)! prod p_S evaluated with fractions
    p = [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)]
    exact = sum(
        math.factorial(len(S) - 1) * math.prod(S)
        for k in range(1, 4)
        for S in itertools.combinations(p, k)
    )
    assert expected_components([0.5, 0.25, 0.25]) == pytest.approx(float(exact), rel=1e-15)


def test_range_and_schur_concavity(rng):
    for _ in range(500):
        n = int(rng.integers(1, 40))
        q = random_prob_vector(n, rng)
        ec = expected_components(q)
        assert 1 - 1e-12 <= ec <= n + 1e-12
        p = random_majorization_pair(q, int(rng.integers(1 << 30)), int(rng.integers(1, 10)))
        assert expected_components(p) >= ec - 1e-12


def test_cap_on_exact_size():
    with pytest.raises(TooLarge):
        expected_components(uniform(10_001))


def test_gamma_examples():
    assert gamma_ec(uniform(5)) == 0.0
    assert gamma_ec([0.5, 0.3, 0.2]) == pytest.approx(0.18, rel=1e-14)
    assert gamma_ec([0.5, 0.3, 0.2], include_empty=True) == pytest.approx(0.48, rel=1e-14)
    with pytest.raises(TooSmall):
        gamma_ec([0.5, 0.5])


def _fd_flow_derivative(r, h=1e-6):
    view = sorted_view(r)
    v = np.array(r.values)

    def partial(i):
        up, dn = v.copy(), v.copy()
        up[i] += h
        dn[i] -= h
        return (_ec_polynomial(up) - _ec_polynomial(dn)) / (2 * h)

    # mass leaves the largest entry and enters the smallest
    return partial(view.index_of_smallest) - partial(view.index_of_largest)


def test_gamma_with_empty_subset_is_the_flow_derivative(rng):
    for _ in range(200):
        n = int(rng.integers(3, 25))
        r = make_prob_vector(rng.dirichlet(np.ones(n)))
        fd = _fd_flow_derivative(r)
        exact = gamma_ec(r, include_empty=True)
        assert abs(fd - exact) <= 1e-6 * abs(exact) + 1e-9
        # the nonempty-subset sum omits exactly the (r_+ - r_-) contribution
        view = sorted_view(r)
        assert exact - gamma_ec(r) == pytest.approx(view.largest - view.smallest, rel=1e-12)


def test_gamma_upper_examples():
    assert gamma_ec_upper(uniform(4)) == 0.0
    assert gamma_ec_upper([0.5, 0.3, 0.2]) == pytest.approx(0.18, rel=1e-14)
    r = make_prob_vector([0.4, 0.3, 0.2, 0.1])
    # middle entries flattened to 0.25 each: 0.3 * (2*(2*0.5/2) + 3*(0.5/2)^2 * ... ) by hand
    flat = 0.3 * (math.comb(2, 1) * 2 * 0.5 / 2 + math.comb(2, 2) * 6 * (0.5 / 2) ** 2)
    assert gamma_ec_upper(r) == pytest.approx(flat, rel=1e-14)
    assert gamma_ec_upper(r) >= gamma_ec(r)


def test_gamma_upper_dominates(rng):
    for _ in range(500):
        r = random_prob_vector(int(rng.integers(3, 60)), rng)
        assert gamma_ec(r) <= gamma_ec_upper(r) + 1e-12
