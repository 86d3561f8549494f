"""Time the jitted detection kernels against the pure-numpy fallbacks.

Usage: python3 benchmarks/bench_kernels.py [--subcarriers 256] [--repeats 50]
"""

import argparse
import time

import numpy as np

from scckm.cck import cck8_codebook
from scckm.kernels import (HAS_NUMBA, _scck_detect_nb, _scck_detect_np,
                           _sm_detect_eq_nb, _sm_detect_eq_np, _sm_detect_nb,
                           _sm_detect_np)
from scckm.modem import QAM4


def timeit(func, args, repeats):
    func(*args)  # warm up (numba compiles on first call)
    start = time.perf_counter()
    for _ in range(repeats):
        func(*args)
    return (time.perf_counter() - start) / repeats


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--subcarriers", type=int, default=256)
    parser.add_argument("--repeats", type=int, default=50)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    n_sub = args.subcarriers
    z8 = np.ascontiguousarray(rng.normal(size=(n_sub, 8))
                              + 1j * rng.normal(size=(n_sub, 8)))
    codewords = np.ascontiguousarray(cck8_codebook().entries / np.sqrt(8))
    r = np.ascontiguousarray(rng.normal(size=(n_sub, 8))
                             + 1j * rng.normal(size=(n_sub, 8)))
    hk = np.ascontiguousarray(rng.normal(size=(n_sub, 8, 8))
                              + 1j * rng.normal(size=(n_sub, 8, 8)))
    pts = np.ascontiguousarray(QAM4)

    cases = [
        ("scck detect (256 codewords)", _scck_detect_np, _scck_detect_nb,
         (z8, codewords)),
        ("sm joint detect (8x8, 4qam)", _sm_detect_np, _sm_detect_nb,
         (r, hk, pts)),
        ("sm equalized detect (8 streams)", _sm_detect_eq_np, _sm_detect_eq_nb,
         (z8, pts)),
    ]

    if not HAS_NUMBA:
        print("numba is not installed; timing the numpy path only")

    print(f"{n_sub} subcarriers, {args.repeats} repeats per case\n")
    header = f"{'kernel':34s} {'numpy':>10s} {'numba':>10s} {'speedup':>8s}"
    print(header)
    print("-" * len(header))
    for name, np_func, nb_func, call_args in cases:
        t_np = timeit(np_func, call_args, args.repeats)
        if HAS_NUMBA:
            t_nb = timeit(nb_func, call_args, args.repeats)
            print(f"{name:34s} {t_np * 1e3:8.2f}ms {t_nb * 1e3:8.2f}ms "
                  f"{t_np / t_nb:7.1f}x")
        else:
            print(f"{name:34s} {t_np * 1e3:8.2f}ms {'-':>10s} {'-':>8s}")


if __name__ == "__main__":
    main()
