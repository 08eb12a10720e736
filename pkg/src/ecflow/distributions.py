"""Probability vectors on {1, ..., n}, total variation distance and majorization."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import EmptyDistribution, LengthMismatch, NegativeEntry, NotNormalized

NORM_TOL = 1e-12
NEG_TOL = 1e-15
MAJORIZATION_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ProbVector:
    """An immutable, validated probability vector.

    Build instances with :func:`make_prob_vector`; the constructor itself
    does not validate.
    """

    values: np.ndarray

    def __len__(self) -> int:
        return self.values.size

    @property
    def n(self) -> int:
        return self.values.size

    def __iter__(self):
        return iter(self.values.tolist())

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def __repr__(self) -> str:
        return f"ProbVector({self.values.tolist()!r})"


@dataclass(frozen=True)
class SortedProbView:
    source: ProbVector
    order: np.ndarray
    largest: float
    smallest: float
    index_of_largest: int
    index_of_smallest: int

    @property
    def descending(self) -> np.ndarray:
        return self.source.values[self.order]


def make_prob_vector(values) -> ProbVector:
    arr = np.array(values, dtype=float).ravel()
    if arr.size == 0:
        raise EmptyDistribution("distribution has no entries")
    if not np.all(np.isfinite(arr)):
        raise NotNormalized("distribution has non-finite entries")
    if arr.min() < -NEG_TOL:
        raise NegativeEntry(f"negative entry {arr.min()!r}")
    arr = np.clip(arr, 0.0, None)
    total = arr.sum()
    if abs(total - 1.0) > NORM_TOL:
        raise NotNormalized(f"entries sum to {total!r}")
    arr = arr / total
    arr.setflags(write=False)
    return ProbVector(arr)


def as_prob_vector(p) -> ProbVector:
    return p if isinstance(p, ProbVector) else make_prob_vector(p)


def uniform(n: int) -> ProbVector:
    return make_prob_vector(np.full(n, 1.0 / n))


def point_mass(n: int, index: int = 0) -> ProbVector:
    arr = np.zeros(n)
    arr[index] = 1.0
    return make_prob_vector(arr)


def sorted_view(p) -> SortedProbView:
    p = as_prob_vector(p)
    v = p.values
    order = np.argsort(-v, kind="stable")
    i_plus = int(np.argmax(v))
    i_minus = int(np.argmin(v))
    return SortedProbView(p, order, float(v[i_plus]), float(v[i_minus]), i_plus, i_minus)


def _same_length(p: ProbVector, q: ProbVector) -> None:
    if p.n != q.n:
        raise LengthMismatch(f"lengths differ: {p.n} vs {q.n}")


def tv_distance(p, q) -> float:
    p, q = as_prob_vector(p), as_prob_vector(q)
    _same_length(p, q)
    return float(min(1.0, 0.5 * np.abs(p.values - q.values).sum()))


def majorizes(x, y, tol: float = MAJORIZATION_TOL) -> bool:
    """True when ``x`` majorizes ``y`` (descending partial sums of x dominate)."""
    x, y = as_prob_vector(x), as_prob_vector(y)
    _same_length(x, y)
    sx = np.cumsum(np.sort(x.values)[::-1])
    sy = np.cumsum(np.sort(y.values)[::-1])
    return bool(np.all(sx[:-1] >= sy[:-1] - tol) and abs(sx[-1] - sy[-1]) <= tol)


def random_majorization_pair(q, rng_seed: int, steps: int) -> ProbVector:
    """Return p with p majorized by q via ``steps`` random Robin-Hood transfers.

    Each transfer picks two entries, moves a uniform fraction of half their gap
    from the larger to the smaller one.
    """
    q = as_prob_vector(q)
    if steps < 0:
        raise ValueError("steps must be >= 0")
    if steps == 0 or q.n < 2:
        return q
    p = q.values.copy()
    rng = np.random.default_rng(rng_seed)
    for _ in range(steps):
        i, j = rng.choice(q.n, size=2, replace=False)
        if p[i] < p[j]:
            i, j = j, i
        delta = rng.random() * 0.5 * (p[i] - p[j])
        p[i] -= delta
        p[j] += delta
    return make_prob_vector(p)


def sample_in_tv_ball(r, eps: float, rng_seed: int) -> ProbVector:
    """Draw a point of the total variation ball of radius ``eps`` around ``r``.

    The point lies on the segment from r towards a random distribution
    (Dirichlet or a vertex), scaled to stay inside the ball. Half the draws
    land on the boundary.
    """
    r = as_prob_vector(r)
    eps = check_radius(eps)
    if eps == 0.0:
        return r
    rng = np.random.default_rng(rng_seed)
    n = r.n
    if rng.random() < 0.25:
        target = np.zeros(n)
        target[rng.integers(n)] = 1.0
    else:
        target = rng.dirichlet(np.full(n, rng.choice([0.2, 1.0, 5.0])))
    dist = 0.5 * np.abs(target - r.values).sum()
    if dist == 0.0:
        return r
    scale = min(1.0, eps / dist)
    if rng.random() < 0.5:
        scale *= rng.random()
    while True:
        p = make_prob_vector((1.0 - scale) * r.values + scale * target)
        if tv_distance(p, r) <= eps:
            return p
        scale *= 1.0 - 1e-12


def check_radius(eps: float) -> float:
    eps = float(eps)
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"radius must lie in [0, 1], got {eps!r}")
    return eps


def load_distribution(path) -> ProbVector:
    data = json.loads(Path(path).read_text())
    if not isinstance(data, list):
        raise NotNormalized("distribution file must hold a flat JSON array")
    return make_prob_vector(data)


def dump_distribution(p, path) -> None:
    Path(path).write_text(json.dumps(as_prob_vector(p).values.tolist()))


def random_prob_vector(n: int, rng: np.random.Generator) -> ProbVector:
    """Random test distribution: Dirichlet with a random concentration, some
    draws with zeroed entries or a dominant entry."""
    alpha = rng.choice([0.1, 0.5, 1.0, 3.0, 20.0])
    v = rng.dirichlet(np.full(n, alpha))
    kind = rng.random()
    if kind < 0.2 and n > 1:
        v[rng.random(n) < 0.4] = 0.0
        if v.sum() == 0.0:
            v[rng.integers(n)] = 1.0
    elif kind < 0.3:
        v[rng.integers(n)] += rng.uniform(1.0, 10.0)
    return make_prob_vector(v / v.sum())
