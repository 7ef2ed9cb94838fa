"""Naive versus fast transform timings on Z/n (and a few fields).

    python3 scripts/bench_dft.py --sizes 45,225,2187,14175
"""
import argparse
import time

import numpy as np

from cosetforge.algebra import FiniteField
from cosetforge.experiments import DEFAULT_BENCH_SIZES, ExperimentConfig, run_experiment
from cosetforge.fourier import fast_transform, naive_transform


def time_field(p, m, rng, repeats=3):
    F = FiniteField(p, m)
    f = rng.normal(size=F.q) + 1j * rng.normal(size=F.q)
    fast_transform(F, f)
    t0 = time.perf_counter()
    ref = naive_transform(F, f)
    t1 = time.perf_counter()
    for _ in range(repeats):
        out = fast_transform(F, f)
    t2 = time.perf_counter()
    return F.q, 1e3 * (t1 - t0), 1e3 * (t2 - t1) / repeats, float(np.max(np.abs(ref - out)))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default=",".join(map(str, DEFAULT_BENCH_SIZES)))
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    sizes = tuple(int(s) for s in args.sizes.split(","))
    report = run_experiment(ExperimentConfig("bench", sizes=sizes, seed=args.seed))
    print(f"{'|G|':>7} {'naive ms':>10} {'fast ms':>9} {'speedup':>8} {'max dev':>9}")
    for r in report["rows"]:
        print(f"{'Z/' + str(r['size']):>7} {r['naiveMs']:10.2f} {r['fastMs']:9.3f} "
              f"{r['naiveMs'] / r['fastMs']:8.1f} {r['maxDeviation']:9.1e}")
    rng = np.random.default_rng(args.seed)
    for p, m in ((2, 12), (3, 7), (5, 5)):
        q, naive_ms, fast_ms, dev = time_field(p, m, rng)
        print(f"{'F_' + str(q):>7} {naive_ms:10.2f} {fast_ms:9.3f} {naive_ms / fast_ms:8.1f} {dev:9.1e}")


if __name__ == "__main__":
    main()
