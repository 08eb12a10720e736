"""Randomized verification suites shared by the CLI and the test-suite."""
from __future__ import annotations

import numpy as np

from .bounds import certified_constants, flow_family, theorem1_check, verify_chain
from .components import expected_components, expected_components_bruteforce
from .distributions import (
    majorizes,
    random_majorization_pair,
    random_prob_vector,
    sample_in_tv_ball,
)
from .flow import flow_bound, minimal_element
from .graphsim import expected_components_exhaustive

SUITES = ("theorem1", "schur", "flow", "chain", "oracle")


def _seed(rng: np.random.Generator) -> int:
    return int(rng.integers(2**63 - 1))


def random_pair(rng: np.random.Generator, n: int):
    """A (p, q) pair; a third of the pairs sit near the extremal family."""
    kind = rng.random()
    if kind < 0.35:
        p = flow_family(float(rng.uniform(1.0 / (n - 1), 1.0)), n)
        q = minimal_element(p, float(10.0 ** rng.uniform(-8, -1)))
    elif kind < 0.65:
        p = random_prob_vector(n, rng)
        q = sample_in_tv_ball(p, float(10.0 ** rng.uniform(-6, 0)), _seed(rng))
    else:
        p, q = random_prob_vector(n, rng), random_prob_vector(n, rng)
    return p, q


def theorem1(samples: int, seed: int, n_range=(3, 50)) -> dict:
    rng = np.random.default_rng(seed)
    mu = certified_constants()[1].mid
    violations = 0
    worst_ratio = 0.0
    for _ in range(samples):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        p, q = random_pair(rng, n)
        lhs, rhs, ok = theorem1_check(p, q, mu)
        violations += not ok
        if rhs > 0:
            worst_ratio = max(worst_ratio, lhs / rhs)
    return {"suite": "theorem1", "passed": violations == 0, "samples": samples,
            "violations": violations, "worst_ratio": worst_ratio}


def schur(samples: int, seed: int) -> dict:
    rng = np.random.default_rng(seed)
    violations = 0
    not_majorized = 0
    for _ in range(samples):
        n = int(rng.integers(2, 31))
        q = random_prob_vector(n, rng)
        p = random_majorization_pair(q, _seed(rng), int(rng.integers(1, 21)))
        not_majorized += not majorizes(q, p)
        violations += expected_components(p) < expected_components(q) - 1e-12
    return {"suite": "schur", "passed": violations == 0 and not_majorized == 0,
            "samples": samples, "violations": int(violations),
            "generator_failures": int(not_majorized)}


def flow(samples: int, seed: int, bases: int = 5) -> dict:
    rng = np.random.default_rng(seed)
    semigroup_worst = 0.0
    for _ in range(samples):
        r = random_prob_vector(int(rng.integers(2, 20)), rng)
        e1, e2 = (float(x) for x in rng.uniform(0.0, 0.5, size=2))
        e1, e2 = max(e1, 1e-9), max(e2, 1e-9)
        if e1 + e2 > 1.0:
            continue
        two_step = minimal_element(minimal_element(r, e1), e2).values
        one_step = minimal_element(r, e1 + e2).values
        semigroup_worst = max(semigroup_worst, float(np.max(np.abs(two_step - one_step))))

    minimality_failures = 0
    for _ in range(bases):
        r = random_prob_vector(int(rng.integers(2, 12)), rng)
        eps = float(rng.uniform(0.0, 0.6))
        star = minimal_element(r, eps)
        for _ in range(samples):
            p = sample_in_tv_ball(r, eps, _seed(rng))
            minimality_failures += not majorizes(p, star)

    bound_failures = 0
    for _ in range(samples):
        n = int(rng.integers(2, 13))
        p, q = random_prob_vector(n, rng), random_prob_vector(n, rng)
        if rng.random() < 0.5:
            q = sample_in_tv_ball(p, float(rng.uniform(0, 0.3)), _seed(rng))
        lhs = abs(expected_components(p) - expected_components(q))
        bound_failures += lhs > flow_bound(p, q) + 1e-12
    passed = semigroup_worst <= 1e-12 and minimality_failures == 0 and bound_failures == 0
    return {"suite": "flow", "passed": passed, "samples": samples,
            "semigroup_max_abs_error": semigroup_worst,
            "minimality_failures": minimality_failures,
            "flow_bound_failures": int(bound_failures)}


def chain(samples: int, seed: int, ms=(3, 10, 100, 1000)) -> dict:
    reports = [verify_chain(m, samples, seed + i) for i, m in enumerate(ms)]
    return {"suite": "chain", "passed": all(r.passed for r in reports), "samples": samples,
            "reports": [r.to_dict() for r in reports]}


def oracle(samples: int, seed: int) -> dict:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        p = random_prob_vector(int(rng.integers(1, 8)), rng)
        vals = (expected_components(p), expected_components_bruteforce(p),
                expected_components_exhaustive(p))
        for a in vals:
            for b in vals:
                worst = max(worst, abs(a - b) / max(abs(b), 1e-300))
    return {"suite": "oracle", "passed": worst <= 1e-10, "samples": samples,
            "max_rel_error": worst}


def run(name: str, samples: int, seed: int) -> list[dict]:
    names = SUITES if name == "all" else (name,)
    table = {"theorem1": theorem1, "schur": schur, "flow": flow, "chain": chain, "oracle": oracle}
    return [table[s](samples, seed) for s in names]
