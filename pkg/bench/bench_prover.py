#!/usr/bin/env python3
"""Benchmark the compiled search kernel against the pure-Python one.

Runs the same seeded workload of division-pure sequents through
``lambekstar._search`` as imported (compiled when the extension built) and
through the ``_search.py`` source loaded side by side, and prints a small
comparison table.

Usage: python3 bench/bench_prover.py [--sequents N] [--repeat K]
"""
from __future__ import annotations

import argparse
import importlib.util
import pathlib
import random
import sys
import time

try:
    import lambekstar
except ImportError:  # running from a checkout without an install
    sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent
                           / "src"))
    import lambekstar

from lambekstar import Atom, Over, Under, kernel_backend
from lambekstar import prover as _prover

PKG_DIR = pathlib.Path(lambekstar.__file__).resolve().parent


def load_pure_kernel():
    spec = importlib.util.spec_from_file_location(
        "lambekstar._search_pure", PKG_DIR / "_search.py")
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def random_formula(rng: random.Random, size: int):
    if size <= 1:
        return Atom(rng.choice("pqr"))
    left = rng.randint(1, size - 1)
    a = random_formula(rng, left)
    b = random_formula(rng, size - left)
    return Under(a, b) if rng.random() < 0.5 else Over(a, b)


def workload(n: int, seed: int = 20260814):
    """A mix of provable and refutable shapes so the search loop runs.

    One third identities f -> f (deep peeling), one third composition
    chains a0\\a1, ..., ak-1\\ak -> a0\\ak, one third fully random.
    """
    rng = random.Random(seed)
    out = []
    for i in range(n):
        kind = i % 3
        if kind == 0:
            f = random_formula(rng, rng.randint(4, 9))
            out.append(((f,), f))
        elif kind == 1:
            chain = [Atom(rng.choice("pqr")) for _ in range(rng.randint(3, 6))]
            ante = tuple(Under(a, b) for a, b in zip(chain, chain[1:]))
            out.append((ante, Under(chain[0], chain[-1])))
        else:
            ante = tuple(random_formula(rng, rng.randint(1, 6))
                         for _ in range(rng.randint(0, 3)))
            out.append((ante, random_formula(rng, rng.randint(1, 8))))
    return out


def run(kernel, sequents, repeat: int) -> tuple[float, int]:
    best = float("inf")
    proved = 0
    for _ in range(repeat):
        proved = 0
        t0 = time.perf_counter()
        for ante, succ in sequents:
            if kernel.search(ante, succ, {}, [10 ** 6], False) is not None:
                proved += 1
        best = min(best, time.perf_counter() - t0)
    return best, proved


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sequents", type=int, default=600)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    sequents = workload(args.sequents)
    rows = [("pure", load_pure_kernel())]
    if kernel_backend() == "compiled":
        rows.insert(0, ("compiled", _prover._search))
    else:
        print("note: no compiled extension is importable; benchmarking the "
              "pure kernel only\n")

    print(f"{args.sequents} random division-pure sequents, best of "
          f"{args.repeat} runs\n")
    print(f"{'backend':<10} {'total':>9} {'per sequent':>13} {'proved':>7}")
    times = {}
    for name, kernel in rows:
        total, proved = run(kernel, sequents, args.repeat)
        times[name] = total
        print(f"{name:<10} {total * 1000:>7.1f}ms "
              f"{total / args.sequents * 1e6:>11.1f}us {proved:>7}")
    if len(times) == 2:
        print(f"\nspeedup: {times['pure'] / times['compiled']:.2f}x "
              "(pure / compiled)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
