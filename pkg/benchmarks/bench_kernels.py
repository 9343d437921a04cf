"""Compare the compiled and numpy kernels on the oracle's hot path.

    python3 benchmarks/bench_kernels.py --samples 1000000 --dim 8
"""

import argparse
import time

import numpy as np

from roundcone import RoundCone, SamplerConfig, empirical_projection_check, kernels, orthonormalize


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=1_000_000)
    ap.add_argument("--dim", type=int, default=8)
    ap.add_argument("--subspace-dim", type=int, default=4)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    n, k, m = args.dim, args.subspace_dim, args.samples
    V = orthonormalize(rng.standard_normal((k, n)), n)
    D = rng.standard_normal((m, n))
    axis = np.ones(k) / np.sqrt(k)
    v = rng.standard_normal(n)
    t = rng.uniform(0, 1, m)
    cone = RoundCone.at_origin(v, 0.3)
    cfg = SamplerConfig(sample_count=m)

    backends = {"python": kernels.python}
    if kernels.compiled is not None:
        backends["cython"] = kernels.compiled
    else:
        print("compiled kernels unavailable; timing the numpy fallback only")

    rows = []
    for name, be in backends.items():
        rows.append((
            name,
            best_of(lambda: kernels.projected_stats(D, V.basis, axis, be), args.repeat),
            best_of(lambda: kernels.cone_margins(D, v, 0.9, be), args.repeat),
            best_of(lambda: kernels.cap_directions(D, v / np.linalg.norm(v), np.cos(t), np.sin(t), be), args.repeat),
            best_of(lambda: empirical_projection_check(cone, V, cfg, lift=False, backend=be), args.repeat),
        ))

    print(f"{m} samples, dim {n}, subspace dim {k}, best of {args.repeat} (seconds)")
    print(f"{'backend':<8} {'proj_stats':>11} {'margins':>9} {'cap_dirs':>9} {'oracle':>8}")
    for name, *ts in rows:
        print(f"{name:<8} " + " ".join(f"{x:>{w}.4f}" for x, w in zip(ts, (11, 9, 9, 8))))
    if len(rows) == 2:
        speed = [p / c for p, c in zip(rows[0][1:], rows[1][1:])]
        print("speedup  " + " ".join(f"{x:>{w}.2f}" for x, w in zip(speed, (11, 9, 9, 8))))


if __name__ == "__main__":
    main()
