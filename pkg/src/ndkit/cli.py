"""Command-line surface: file inspection, reductions, random arrays, demos.

Every subcommand is a thin shell over the library; exit codes are 0 on
success, 1 on usage errors, and 2 on data or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import chunked, dispatch, ndar, ufuncs
from .core import ElemType, full
from .errors import FormatError
from .random import PCG64, SeedSequence, VariateGenerator

USAGE_EXIT = 1
DATA_EXIT = 2

_DEMO_SEED = 90210  # dispatch-demo input data is fixed and reproducible


class _UsageError(Exception):
    pass


def _parse_shape(text: str) -> tuple:
    try:
        dims = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise _UsageError(f"bad shape {text!r}: expected comma-separated extents") from None
    if not dims or any(d < 0 for d in dims):
        raise _UsageError(f"bad shape {text!r}: extents must be non-negative")
    return dims


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ndkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_info = sub.add_parser("info", help="describe an .ndar file")
    p_info.add_argument("file")
    p_info.add_argument("--json", action="store_true", help="machine-readable output")

    p_sum = sub.add_parser("sum", help="sum an .ndar file, optionally along axes")
    p_sum.add_argument("file")
    p_sum.add_argument("--axis", type=int, action="append", default=None)

    p_rand = sub.add_parser("random", help="write a random array to an .ndar file")
    p_rand.add_argument("distribution", choices=["normal", "exponential", "uniform", "integers"])
    p_rand.add_argument("--shape", required=True)
    p_rand.add_argument("--seed", required=True, type=int)
    p_rand.add_argument("--low", type=int, default=None)
    p_rand.add_argument("--high", type=int, default=None)
    p_rand.add_argument("--out", required=True)

    p_demo = sub.add_parser("dispatch-demo", help="mean via dense and chunked backends")
    p_demo.add_argument("--shape", required=True)
    p_demo.add_argument("--chunks", required=True, type=int)

    p_bench = sub.add_parser("bench", help="micro-benchmarks")
    bench_sub = p_bench.add_subparsers(dest="bench_target", required=True)
    p_reduce = bench_sub.add_parser("reduce", help="reduce kernel vs per-index loop")
    p_reduce.add_argument("--n", type=int, default=1_000_000)
    p_reduce.add_argument("--iters", type=int, default=3)

    return parser


def _cmd_info(args) -> int:
    a = ndar.load(args.file)
    if args.json:
        print(
            json.dumps(
                {
                    "elem_type": a.elem_type.label,
                    "shape": list(a.shape),
                    "strides": list(a.strides),
                    "count": a.size,
                }
            )
        )
    else:
        print(f"elem_type: {a.elem_type.label}")
        print(f"shape:     {a.shape}")
        print(f"strides:   {a.strides}")
        print(f"count:     {a.size}")
    return 0


def _format_result(a) -> str:
    if a.ndim == 0:
        return repr(a.get(()))
    if a.size <= 100:
        return repr(a.tolist())
    flat = [a.get(idx) for idx in _first_indices(a, 5)]
    return f"shape={a.shape} count={a.size} first={flat} ..."


def _first_indices(a, k):
    out = []
    idx = [0] * a.ndim
    for _ in range(min(k, a.size)):
        out.append(tuple(idx))
        for ax in range(a.ndim - 1, -1, -1):
            idx[ax] += 1
            if idx[ax] < a.shape[ax]:
                break
            idx[ax] = 0
    return out


def _cmd_sum(args) -> int:
    a = ndar.load(args.file)
    result = dispatch.sum(a, axes=args.axis)
    print(_format_result(result))
    return 0


def _cmd_random(args) -> int:
    shape = _parse_shape(args.shape)
    if args.seed < 0 or args.seed >= (1 << 64):
        raise _UsageError("--seed must be an unsigned 64-bit int")
    if args.distribution != "integers" and (args.low is not None or args.high is not None):
        raise _UsageError("--low/--high only apply to the integers distribution")
    gen = VariateGenerator(PCG64(SeedSequence([args.seed])))
    if args.distribution == "normal":
        a = gen.standard_normal(shape)
    elif args.distribution == "exponential":
        a = gen.standard_exponential(shape)
    elif args.distribution == "uniform":
        a = gen.random_double(shape)
    else:
        if args.low is None or args.high is None:
            raise _UsageError("integers needs --low and --high")
        if args.low >= args.high:
            raise _UsageError("integers needs --low < --high")
        a = gen.integers(args.low, args.high, shape)
    ndar.save(a, args.out)
    print(f"wrote {args.out}: {a.elem_type.label} shape {a.shape}")
    return 0


def _cmd_dispatch_demo(args) -> int:
    shape = _parse_shape(args.shape)
    if args.chunks <= 0:
        raise _UsageError("--chunks must be positive")
    gen = VariateGenerator(PCG64(SeedSequence([_DEMO_SEED])))
    dense = gen.random_double(shape)
    dense_mean = ufuncs.mean(dense).get(())
    via_chunks = dispatch.mean(chunked.chunked_from_dense(dense, args.chunks))
    chunked_mean = chunked.to_dense(via_chunks).get(())
    print(f"dense mean:   {dense_mean!r}")
    print(f"chunked mean: {chunked_mean!r}")
    print(f"abs diff:     {abs(dense_mean - chunked_mean):.3e}")
    return 0


def _cmd_bench_reduce(args) -> int:
    if args.n <= 0 or args.iters <= 0:
        raise _UsageError("--n and --iters must be positive")
    a = full((args.n,), 0.5, ElemType.FLOAT64)
    kernel_best = min(_time_once(lambda: ufuncs.array_sum(a)) for _ in range(args.iters))
    naive_best = min(_time_once(lambda: ufuncs.per_index_sum(a)) for _ in range(args.iters))
    per_elem_kernel = kernel_best / args.n * 1e9
    per_elem_naive = naive_best / args.n * 1e9
    print(f"reduce kernel:  {per_elem_kernel:10.3f} ns/element ({kernel_best:.6f} s total)")
    print(f"per-index loop: {per_elem_naive:10.3f} ns/element ({naive_best:.6f} s total)")
    print(f"speedup:        {per_elem_naive / per_elem_kernel:10.2f}x")
    return 0


def _time_once(fn) -> float:
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def run_cli(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else USAGE_EXIT
    try:
        if args.command == "info":
            return _cmd_info(args)
        if args.command == "sum":
            return _cmd_sum(args)
        if args.command == "random":
            return _cmd_random(args)
        if args.command == "dispatch-demo":
            return _cmd_dispatch_demo(args)
        return _cmd_bench_reduce(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except (FormatError, OSError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
