"""Compiled versus numpy kernels, per kernel and end to end.

    python benchmarks/bench_kernels.py [--batch 4096] [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from nkhyper import kernels, s3s3


def _inputs(batch, gen):
    coords = 0.3 * gen.standard_normal((batch, 6))
    g, _, _ = kernels.s3s3_chart_tensors(coords)
    dg = gen.standard_normal((batch, 6, 6, 6))
    dg = 0.5 * (dg + dg.transpose(0, 1, 3, 2))
    return {
        "qmul": (gen.standard_normal((batch, 4)), gen.standard_normal((batch, 4))),
        "cross7": (gen.standard_normal((batch, 7)), gen.standard_normal((batch, 7))),
        "dexp_left": (np.ascontiguousarray(coords[:, :3]),),
        "s3s3_chart_tensors": (coords,),
        "koszul": (np.ascontiguousarray(np.linalg.inv(g)), np.ascontiguousarray(dg)),
    }


def best_time(fn, repeat, number=1):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def run(batch=4096, repeat=5, suite_samples=100):
    gen = np.random.default_rng(0)
    args = _inputs(batch, gen)
    rows = []
    backends = kernels.available_backends()
    for name, a in args.items():
        times = {}
        for b in backends:
            kernels.use_backend(b)
            fn = getattr(kernels, name)
            times[b] = best_time(lambda: fn(*a), repeat)
        rows.append((name, times))
    times = {}
    for b in backends:
        kernels.use_backend(b)
        times[b] = best_time(lambda: s3s3.identity_suite(suite_samples, seed=0, curvature_samples=5), 1)
    rows.append((f"identity_suite({suite_samples})", times))
    kernels.use_backend(backends[0])
    return backends, rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--batch", type=int, default=4096)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--suite-samples", type=int, default=100)
    opts = ap.parse_args()
    backends, rows = run(opts.batch, opts.repeat, opts.suite_samples)
    head = f"{'kernel':<24}" + "".join(f"{b + ' [ms]':>16}" for b in backends)
    if len(backends) == 2:
        head += f"{'speedup':>10}"
    print(f"batch = {opts.batch}")
    print(head)
    for name, times in rows:
        line = f"{name:<24}" + "".join(f"{1e3 * times[b]:>16.3f}" for b in backends)
        if len(backends) == 2:
            line += f"{times['python'] / times['compiled']:>10.2f}"
        print(line)
    if len(backends) == 1:
        print("compiled kernels not built; only the numpy fallback was timed")


if __name__ == "__main__":
    main()
