#!/usr/bin/env python3
"""Benchmark the compiled sampling kernels against the numpy fallback.

Times the hot path of one attack run (draw sources, classify, count) at
the reference scale (|Y_F| = 8631, K = 2|Y_F|) and a couple of others,
and verifies on the way that both backends produce identical counts.

Usage: python benchmarks/bench_kernels.py [--repeats 30]
"""
import argparse
import time

import numpy as np

from ganleak import _simulate_np
from ganleak.generator import GeneratorModel
from ganleak.identity import make_setting1_spec

try:
    from ganleak import _simulate as _simulate_ext
except ImportError:
    _simulate_ext = None


def pipeline(impl, model, yf_size, accuracy, u_gen, u_cls):
    codes = impl.sample_source_codes(
        u_gen, model.memorization_rate, model.member_ids, model.member_cdf,
        model.novel_space_size,
    )
    preds = impl.classify_codes(codes, u_cls, accuracy, yf_size, True)
    return np.bincount(preds, minlength=yf_size)


def best_of(impl, model, yf_size, accuracy, u_gen, u_cls, repeats):
    timings = []
    for _ in range(repeats):
        start = time.perf_counter()
        counts = pipeline(impl, model, yf_size, accuracy, u_gen, u_cls)
        timings.append(time.perf_counter() - start)
    return min(timings), counts


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=30)
    args = parser.parse_args()

    scenarios = [
        ("reference scale", 8631, 220, 364, 0.3, 0.861),
        ("small pool", 1292, 111, 150, 0.3, 0.947),
        ("heavy batch", 8631, 880, 364, 0.7, 0.861),
    ]
    print(f"{'scenario':<16} {'yF':>6} {'K':>7} {'numpy Md/s':>12} {'cython Md/s':>12} {'speedup':>8}")
    for name, yf, yg, per_id, rho, accuracy in scenarios:
        spec = make_setting1_spec(yf, yg, per_id)
        model = GeneratorModel(spec, memorization_rate=rho)
        k = 2 * yf
        rng = np.random.default_rng(0)
        u_gen, u_cls = rng.random((k, 2)), rng.random((k, 2))
        t_np, counts_np = best_of(_simulate_np, model, yf, accuracy, u_gen, u_cls, args.repeats)
        row = f"{name:<16} {yf:>6} {k:>7} {k / t_np / 1e6:>12.1f}"
        if _simulate_ext is None:
            print(row + f" {'(not built)':>12} {'-':>8}")
            continue
        t_cy, counts_cy = best_of(_simulate_ext, model, yf, accuracy, u_gen, u_cls, args.repeats)
        assert np.array_equal(counts_np, counts_cy), "backends disagree"
        print(row + f" {k / t_cy / 1e6:>12.1f} {t_np / t_cy:>7.1f}x")
    if _simulate_ext is None:
        print("\ncompiled kernels not built; install with the Cython toolchain to compare")


if __name__ == "__main__":
    main()
