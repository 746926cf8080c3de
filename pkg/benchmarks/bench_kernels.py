"""Time the numba kernels against the pure-numpy fallbacks.

    python benchmarks/bench_kernels.py [--sizes 14 18 20] [--repeat 3]

Each row reports the best wall time over ``--repeat`` runs after one
untimed warm-up call (which absorbs JIT compilation), and checks that both
backends return identical results.
"""

from __future__ import annotations

import argparse
import time
from fractions import Fraction

import numpy as np

from ncheeger import kernels
from ncheeger.graph import build_domain, build_graph
from ncheeger.reflection import _walk_tables


def best_time(fn, repeat: int) -> tuple[float, object]:
    out = fn()
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def random_weights(rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
    W = rng.integers(0, 20, size=(n, n))
    W = np.triu(W, 1)
    W = W + W.T
    return W.astype(np.int64), W.sum(axis=1).astype(np.int64)


def bench_cut_scan(sizes, repeat, rng):
    rows = []
    for n in sizes:
        W, meas = random_weights(rng, n)
        tn, rn = best_time(lambda: kernels.cut_scan_numba(W, meas), repeat)
        tp, rp = best_time(lambda: kernels.cut_scan_numpy(W, meas), repeat)
        same = rn[0] * rp[1] == rp[0] * rn[1] and np.array_equal(rn[2], rp[2])
        rows.append((f"cut scan n={n}", tn, tp, same))
    return rows


def bench_jacobi(sizes, repeat, rng):
    rows = []
    for n in sizes:
        a = rng.standard_normal((n, n))
        a = a + a.T
        tn, rn = best_time(lambda: kernels.jacobi_eigh(a, use_numba=True), repeat)
        tp, rp = best_time(lambda: kernels.jacobi_eigh(a, use_numba=False), repeat)
        same = np.allclose(np.sort(rn[0]), np.sort(rp[0]), atol=1e-10)
        rows.append((f"jacobi n={n}", tn, tp, same))
    return rows


def bench_walk(steps, repeat):
    graph = build_graph([
        ("v1", "v2", Fraction(1)), ("v2", "v3", Fraction(2)), ("v3", "v4", Fraction(1)),
        ("v4", "v1", Fraction(3)), ("v2", "v5", Fraction(1)), ("v5", "v4", Fraction(1, 2)),
    ])
    domain = build_domain(graph, ["v1", "v2", "v4"])
    indptr, nbr, cum, pos, index = _walk_tables(domain)
    uniforms = np.random.default_rng(1).random((steps, 2))

    def run(flag):
        return kernels.reflected_walk(indptr, nbr, cum, pos, index["v1"], [uniforms], 3, flag)

    tn, rn = best_time(lambda: run(True), repeat)
    tp, rp = best_time(lambda: run(False), repeat)
    return [(f"walk steps={steps}", tn, tp, bool(np.array_equal(rn, rp)))]


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[14, 18, 20])
    ap.add_argument("--jacobi-sizes", type=int, nargs="+", default=[8, 24, 64])
    ap.add_argument("--steps", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if not kernels.HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")

    rng = np.random.default_rng(2024)
    rows = bench_cut_scan(args.sizes, args.repeat, rng)
    rows += bench_jacobi(args.jacobi_sizes, args.repeat, rng)
    rows += bench_walk(args.steps, args.repeat)

    print(f"workers: {kernels.worker_count()}")
    print(f"{'kernel':<22}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}  agree")
    for name, tn, tp, same in rows:
        print(f"{name:<22}{tn:>12.4f}{tp:>12.4f}{tp / tn:>9.1f}x  {'yes' if same else 'NO'}")


if __name__ == "__main__":
    main()
