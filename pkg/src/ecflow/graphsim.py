"""Sampling the random graph, counting components, Monte Carlo and seeding."""
from __future__ import annotations

import functools
import itertools
import json
import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from . import kernels
from .distributions import as_prob_vector
from .errors import InvalidSeed, TooLarge

# Trials are drawn in fixed blocks; block b uses the Philox stream spawned
# from (seed, b), so results do not depend on how blocks are scheduled.
BLOCK_TRIALS = 1024
MAX_EXHAUSTIVE_N = 7


@dataclass(frozen=True, eq=False)
class GraphRealization:
    """Targets X_1..X_n, stored 0-based. Node i has the edge {i, targets[i]}."""

    targets: np.ndarray

    @property
    def n(self) -> int:
        return self.targets.size

    @classmethod
    def from_targets(cls, targets, one_based: bool = False) -> "GraphRealization":
        arr = np.array(targets, dtype=np.int64).ravel()
        if one_based:
            arr = arr - 1
        if arr.size and (arr.min() < 0 or arr.max() >= arr.size):
            raise ValueError("targets out of range")
        arr.setflags(write=False)
        return cls(arr)

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "targets": (self.targets + 1).tolist()})

    @classmethod
    def from_json(cls, text: str) -> "GraphRealization":
        data = json.loads(text)
        g = cls.from_targets(data["targets"], one_based=True)
        if g.n != data["n"]:
            raise ValueError("n does not match the number of targets")
        return g


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    trials: int
    seed: int


def _cdf(values: np.ndarray) -> np.ndarray:
    cdf = np.cumsum(values)
    cdf[np.flatnonzero(values)[-1]:] = 1.0
    return cdf


def _block_targets(cdf: np.ndarray, seed: int, block: int, count: int) -> np.ndarray:
    ss = np.random.SeedSequence(seed, spawn_key=(block,))
    gen = np.random.Generator(np.random.Philox(ss))
    u = gen.random((count, cdf.size))
    return np.searchsorted(cdf, u, side="right").astype(np.int64)


def _iter_blocks(p, trials: int, seed: int):
    cdf = _cdf(p.values)
    for block, start in enumerate(range(0, trials, BLOCK_TRIALS)):
        yield _block_targets(cdf, seed, block, min(BLOCK_TRIALS, trials - start))


def sample_graph(p, rng_seed: int) -> GraphRealization:
    """One realization; identical to trial 0 of a Monte Carlo run with this seed."""
    p = as_prob_vector(p)
    targets = _block_targets(_cdf(p.values), rng_seed, 0, 1)[0]
    targets.setflags(write=False)
    return GraphRealization(targets)


def sample_targets(p, trials: int, seed: int) -> np.ndarray:
    p = as_prob_vector(p)
    return np.concatenate(list(_iter_blocks(p, trials, seed)))


def count_components(g: GraphRealization) -> int:
    return int(kernels.count_components_batch(g.targets.reshape(1, -1))[0])


def mc_expected_components(p, trials: int, seed: int) -> McEstimate:
    p = as_prob_vector(p)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    counts = np.concatenate(
        [kernels.count_components_batch(t) for t in _iter_blocks(p, trials, seed)]
    ).astype(float)
    mean = float(counts.mean())
    std_error = float(counts.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return McEstimate(mean, std_error, trials, seed)


@functools.lru_cache(maxsize=None)
def _outcome_counts(n: int) -> np.ndarray:
    # all n^n target tuples in C order (X_1 most significant)
    tuples = np.indices((n,) * n).reshape(n, -1).T
    counts = kernels.count_components_batch(np.ascontiguousarray(tuples, dtype=np.int64))
    counts.setflags(write=False)
    return counts


def expected_components_exhaustive(p) -> float:
    """Exact E[C] by summing over all n^n outcomes of (X_1, ..., X_n)."""
    p = as_prob_vector(p)
    n = p.n
    if n > MAX_EXHAUSTIVE_N:
        raise TooLarge(f"exhaustive enumeration needs n <= {MAX_EXHAUSTIVE_N}, got {n}")
    probs = functools.reduce(np.multiply.outer, [p.values] * n).ravel()
    return float(np.dot(probs, _outcome_counts(n)))


def _adjacency(g: GraphRealization) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(g.n)]
    for i, j in enumerate(g.targets.tolist()):
        if i != j:
            adj[i].append(j)
            adj[j].append(i)
    return adj


def epidemic_spread(g: GraphRealization, seeds) -> set[int]:
    """Nodes eventually infected from ``seeds`` (0-based) on the undirected graph."""
    seeds = set(int(s) for s in seeds)
    bad = [s for s in seeds if not 0 <= s < g.n]
    if bad:
        raise InvalidSeed(f"seed nodes out of range: {sorted(bad)}")
    adj = _adjacency(g)
    infected = set(seeds)
    queue = deque(seeds)
    while queue:
        node = queue.popleft()
        for nb in adj[node]:
            if nb not in infected:
                infected.add(nb)
                queue.append(nb)
    return infected


def components(g: GraphRealization) -> list[list[int]]:
    """Connected components as sorted node lists, ordered by smallest node."""
    seen: set[int] = set()
    out = []
    for node in range(g.n):
        if node not in seen:
            comp = epidemic_spread(g, [node])
            seen |= comp
            out.append(sorted(comp))
    return out


def min_seeds(g: GraphRealization) -> int:
    return count_components(g)


def min_seeds_bruteforce(g: GraphRealization) -> int:
    """Smallest seed set that infects everyone, by exhaustive search (small n)."""
    everyone = g.n
    for size in range(1, g.n + 1):
        for seeds in itertools.combinations(range(g.n), size):
            if len(epidemic_spread(g, seeds)) == everyone:
                return size
    return g.n
