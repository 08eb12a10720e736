"""Pure-numpy implementations of the hot kernels (fallback path)."""
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

_CHUNK = 4096


def scaled_esp(values, kmax):
    out = np.zeros(kmax + 1)
    out[0] = 1.0
    ks = np.arange(1, kmax + 1, dtype=float)
    for v in np.asarray(values, dtype=float):
        if v == 0.0:
            continue
        # right side is evaluated in full before the update, i.e. descending-k semantics
        out[1:] += ks * v * out[:-1]
    return out


def count_components_batch(targets):
    targets = np.asarray(targets, dtype=np.int64)
    trials, n = targets.shape
    if trials == 0:
        return np.zeros(0, dtype=np.int64)
    # one block-diagonal graph holding every trial; components never cross blocks
    offset = (np.arange(trials, dtype=np.int64) * n)[:, None]
    rows = (np.arange(n, dtype=np.int64)[None, :] + offset).ravel()
    cols = (targets + offset).ravel()
    size = trials * n
    adj = csr_matrix((np.ones(size, dtype=np.int8), (rows, cols)), shape=(size, size))
    _, labels = connected_components(adj, directed=True, connection="weak")
    # each trial's labels are distinct from other trials'; count distinct per row
    labels = np.sort(labels.reshape(trials, n), axis=1)
    return 1 + np.count_nonzero(np.diff(labels, axis=1), axis=1)


def c_series(x, m, shift, rel_tol):
    if x == 0.0:
        return 2.0 if shift == 1 else 0.0
    total = 0.0
    c_prev = None
    start = 1
    prev_term = np.inf
    while start <= m:
        ks = np.arange(start, min(start + _CHUNK, m + 1), dtype=float)
        # ratio c_{k,m} / c_{k-1,m} for k >= 2
        ratio = (ks + 1.0) / ks * (1.0 - (ks - 1.0) / m)
        if c_prev is None:
            ratio[0] = 2.0
            c = np.cumprod(ratio)
        else:
            c = c_prev * np.cumprod(ratio)
        terms = c * x ** (ks - shift)
        if rel_tol > 0.0:
            partial = total + np.cumsum(terms)
            before = np.concatenate(([prev_term], terms[:-1]))
            stop = np.flatnonzero((terms < before) & (terms <= rel_tol * partial))
            if stop.size:
                return float(total + terms[: stop[0] + 1].sum())
        total += float(terms.sum())
        c_prev = c[-1]
        prev_term = terms[-1]
        start += ks.size
    return total
