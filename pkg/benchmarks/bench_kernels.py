"""Time the numba kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Each kernel runs once untimed on both backends (this triggers the JIT
compile) and the outputs are compared before timing.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from ecflow import _kernels_numpy
from ecflow._accel import HAVE_NUMBA


def cases(rng):
    p = rng.dirichlet(np.ones(1000))
    targets = rng.integers(0, 200, size=(1024, 200), dtype=np.int64)
    return [
        ("scaled_esp n=1000", lambda k: k.scaled_esp(p, 1000)),
        ("scaled_esp n=10000", lambda k: k.scaled_esp(np.full(10_000, 1e-4), 10_000)),
        ("count_components 1024x200", lambda k: k.count_components_batch(targets)),
        ("c_series m=1e6 s=1e-3", lambda k: k.c_series(1 - 1e-3, 1_000_000, 0, 1e-15)),
        ("c_series m=64 exact", lambda k: k.c_series(0.7, 64, 0, 0.0)),
    ]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    backends = {"numpy": _kernels_numpy}
    if HAVE_NUMBA:
        from ecflow import _kernels_numba

        backends["numba"] = _kernels_numba
    else:
        print("numba not installed; timing the numpy path only")

    rng = np.random.default_rng(0)
    print(f"{'kernel':<28}" + "".join(f"{name:>14}" for name in backends) + f"{'speedup':>10}")
    for label, fn in cases(rng):
        outs = [np.asarray(fn(k)) for k in backends.values()]
        for other in outs[1:]:
            np.testing.assert_allclose(other, outs[0], rtol=1e-12)
        times = []
        for k in backends.values():
            number = 3
            best = min(timeit.repeat(lambda: fn(k), number=number, repeat=args.repeat)) / number
            times.append(best)
        speed = f"{times[0] / times[-1]:>9.1f}x" if len(times) > 1 else ""
        print(f"{label:<28}" + "".join(f"{t * 1e3:>12.3f}ms" for t in times) + speed)


if __name__ == "__main__":
    main()
