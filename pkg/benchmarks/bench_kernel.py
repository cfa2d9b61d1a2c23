"""Compare the compiled and pure-Python interpreter loops.

    python benchmarks/bench_kernel.py [--repeat N]

Runs the same workloads through both loops, checks they agree, and prints
the best wall time of each.
"""
from __future__ import annotations

import argparse
import time

from revertlab.evm import INC_CONTRACT, MAX_U256, machine, opcodes
from revertlab.evm import _kernel_py

try:
    from revertlab.evm import _kernel as _compiled
except ImportError:
    _compiled = None

COSTS = [1] * 256


def _run(impl, code, gas, storage, steps):
    stack, memory, store = [], bytearray(), dict(storage)
    out = impl.run(code, impl.jumpdests(code), gas, 0, stack, memory, store, steps, COSTS, 1)
    return out, stack, store


def add_bytes(impl):
    total = 0
    for x in range(256):
        for y in range(256):
            _, stack, _ = _run(impl, bytes([opcodes.PUSH1, x, opcodes.PUSH1, y, opcodes.ADD]), 10, {}, 3)
            total += stack[-1]
    return total


def inc(impl, n=20_000):
    outs = []
    for v in range(n):
        value = MAX_U256 - v if v % 2 else v
        out, _, store = _run(impl, INC_CONTRACT, 100, {0: value}, 20)
        outs.append((out[0], store.get(0)))
    return outs


def loop(impl, iters=200_000):
    # counts slot 0 up by one per iteration until it reaches zero after wrapping
    code = opcodes.assemble(
        "JUMPDEST", "PUSH1", 0, "SLOAD", "PUSH1", 1, "ADD", "DUP1", "PUSH1", 0, "SSTORE",
        "PUSH1", 0, "JUMPI",
    )
    out, _, store = _run(impl, code, 10 * iters, {0: MAX_U256 - iters}, 10 * iters)
    return out[0], store[0]


WORKLOADS = {"add_bytes": add_bytes, "inc": inc, "loop": loop}


def best(fn, impl, repeat):
    times, result = [], None
    for _ in range(repeat):
        t = time.perf_counter()
        result = fn(impl)
        times.append(time.perf_counter() - t)
    return min(times), result


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _compiled is None:
        print("compiled kernel not built; run `pip install -e . --no-build-isolation`")
    print(f"{'workload':<10} {'python s':>9} {'compiled s':>11} {'speedup':>8}")
    for name, fn in WORKLOADS.items():
        tp, rp = best(fn, _kernel_py, args.repeat)
        if _compiled is None:
            print(f"{name:<10} {tp:>9.3f} {'-':>11} {'-':>8}")
            continue
        tc, rc = best(fn, _compiled, args.repeat)
        assert rp == rc, f"{name}: kernels disagree"
        print(f"{name:<10} {tp:>9.3f} {tc:>11.3f} {tp / tc:>7.1f}x")
    # the public API goes through whichever loop was selected
    t = time.perf_counter()
    assert all(machine.add_bytes(x, y).peek() == x + y for x in range(256) for y in range(256))
    print(f"AddBytes via public API: {time.perf_counter() - t:.3f} s")


if __name__ == "__main__":
    main()
