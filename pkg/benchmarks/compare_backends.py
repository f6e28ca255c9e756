#!/usr/bin/env python3
"""Time the compiled kernels against the pure-Python mirrors.

Usage: python benchmarks/compare_backends.py [--scale N]

Runs each kernel through both backend modules on identical inputs, checks the
outputs are bit-identical, and prints per-element timings with the speedup.
"""

import argparse
import math
import struct
import time

from ndkit._kernels import _pure

try:
    from ndkit._kernels import _fast
except ImportError:
    _fast = None

from ndkit.random.ziggurat import build_ziggurat


def timed(fn, repeats=3):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(name, n, make_args, run):
    """One row: run both backends on fresh-but-identical inputs."""
    results = {}
    outputs = {}
    for label, mod in (("pure", _pure), ("compiled", _fast)):
        if mod is None:
            continue
        args = make_args(mod)
        results[label] = timed(lambda: run(mod, *args))
        outputs[label] = args
    pure_ns = results["pure"] / n * 1e9
    if "compiled" in results:
        fast_ns = results["compiled"] / n * 1e9
        ratio = results["pure"] / results["compiled"]
        print(f"{name:<28} pure {pure_ns:9.2f} ns/el   compiled {fast_ns:8.3f} ns/el   {ratio:8.1f}x")
    else:
        print(f"{name:<28} pure {pure_ns:9.2f} ns/el   compiled (unavailable)")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scale", type=int, default=1, help="multiply element counts by N")
    opts = parser.parse_args()
    s = opts.scale

    if _fast is None:
        print("compiled backend not built; timing pure only\n")

    n = 200_000 * s
    data = struct.pack(f"<{n}d", *([1.00000001] * n))

    def ew_args(mod):
        return (bytearray(n * 8), bytearray(data), bytearray(data))

    bench(
        "elementwise add f64",
        n,
        ew_args,
        lambda mod, out, a, b: mod.elementwise2(0, 2, out, a, 0, (8,), b, 0, (8,), (n,)),
    )

    big = 2_000_000 * s
    bigdata = bytearray(struct.pack(f"<{big}d", *([0.5] * big)))
    bench(
        "reduce sum f64 (flat)",
        big,
        lambda mod: (bigdata,),
        lambda mod, buf: mod.reduce_flat(0, 2, buf, 0, big),
    )

    m = 64
    mats = struct.pack(f"<{m * m}d", *([0.25] * (m * m)))
    bench(
        "matmul 64x64",
        m * m * m,
        lambda mod: (bytearray(m * m * 8), bytearray(mats), bytearray(mats)),
        lambda mod, out, a, b: mod.matmul_f64(out, a, b, m, m, m),
    )

    rn = 200_000 * s
    bench(
        "pcg64 fill u64",
        rn,
        lambda mod: (mod.Pcg64Core(1, 2, 3, 5), bytearray(rn * 8)),
        lambda mod, core, out: core.fill_u64(out, rn),
    )

    t = build_ziggurat("normal")
    bench(
        "ziggurat normal fill",
        rn,
        lambda mod: (mod.Pcg64Core(1, 2, 3, 5), bytearray(rn * 8)),
        lambda mod, core, out: core.fill_normal(out, rn, t.xs, t.fs, t.r),
    )

    bench(
        "lemire bounded fill",
        rn,
        lambda mod: (mod.Pcg64Core(1, 2, 3, 5), bytearray(rn * 8)),
        lambda mod, core, out: core.fill_bounded(out, rn, 12345, -500),
    )

    if _fast is not None:
        # cross-check: identical streams from identically seeded cores
        c1, c2 = _pure.Pcg64Core(9, 9, 9, 9), _fast.Pcg64Core(9, 9, 9, 9)
        o1, o2 = bytearray(8 * 10000), bytearray(8 * 10000)
        c1.fill_normal(o1, 10000, t.xs, t.fs, t.r)
        c2.fill_normal(o2, 10000, t.xs, t.fs, t.r)
        print("\nbit-identical outputs:", "yes" if o1 == o2 else "NO (bug!)")


if __name__ == "__main__":
    main()
