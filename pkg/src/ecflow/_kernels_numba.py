"""Compiled inner loops. Each function mirrors one in ``_kernels_numpy``."""
import numpy as np

from ._accel import njit


@njit(cache=True)
def scaled_esp(values, kmax):
    # out[k] = k! * e_k(values); out[0] = 1. Every partial stays in [0, (sum v)^k].
    out = np.zeros(kmax + 1)
    out[0] = 1.0
    seen = 0
    for v in values:
        if v == 0.0:
            continue
        seen += 1
        top = seen if seen < kmax else kmax
        for k in range(top, 0, -1):
            out[k] += k * v * out[k - 1]
    return out


@njit(cache=True)
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit(cache=True)
def count_components_batch(targets):
    trials, n = targets.shape
    out = np.empty(trials, dtype=np.int64)
    parent = np.empty(n, dtype=np.int64)
    rank = np.empty(n, dtype=np.int64)
    for t in range(trials):
        for i in range(n):
            parent[i] = i
            rank[i] = 0
        merged = 0
        for i in range(n):
            a = _find(parent, i)
            b = _find(parent, targets[t, i])
            if a == b:
                continue
            if rank[a] < rank[b]:
                a, b = b, a
            parent[b] = a
            if rank[a] == rank[b]:
                rank[a] += 1
            merged += 1
        out[t] = n - merged
    return out


@njit(cache=True)
def c_series(x, m, shift, rel_tol):
    # sum_{k=1}^m c_{k,m} x^(k - shift) with c_{1,m} = 2 and
    # c_{k+1,m} = c_{k,m} (k+2)/(k+1) (1 - k/m); rel_tol = 0 disables truncation
    if x == 0.0:
        return 2.0 if shift == 1 else 0.0
    c = 2.0
    xp = x ** (1 - shift)
    total = c * xp
    prev = total
    for k in range(1, m):
        c *= (k + 2.0) / (k + 1.0) * (1.0 - k / m)
        xp *= x
        term = c * xp
        total += term
        if rel_tol > 0.0 and term < prev and term <= rel_tol * total:
            break
        prev = term
    return total
