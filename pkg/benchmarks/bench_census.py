"""Benchmark the census kernels with and without numba.

Each backend runs in its own interpreter, since the JIT switch is read once at
import time.  The compiled run is timed after a warm-up call, so compilation
is excluded; counts from the two backends must agree.
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

CHILD = r"""
import json, sys, time
from charpolycount._accel import backend_name
from charpolycount.census import census
from charpolycount.poly import IntPolynomial

cases = json.loads(sys.argv[1])
repeats = int(sys.argv[2])
out = []
for coeffs, T in cases:
    chi = IntPolynomial(tuple(coeffs))
    census(chi, 3)  # warm-up, triggers compilation
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        count = census(chi, T).count
        best = min(best, time.perf_counter() - t0)
    out.append({"poly": coeffs, "T": T, "count": count, "seconds": best})
print(json.dumps({"backend": backend_name(), "results": out}))
"""

DEFAULT_CASES = [
    [[1, -3, 1], 100000],
    [[1, -11, 1], 20000],
    [[1, -3, 0, 1], 6],
]


def run_backend(cases, repeats: int, disable_jit: bool) -> dict:
    env = dict(os.environ, CHARPOLYCOUNT_DISABLE_JIT="1" if disable_jit else "0")
    proc = subprocess.run(
        [sys.executable, "-c", CHILD, json.dumps(cases), str(repeats)],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return json.loads(proc.stdout)


def main() -> None:
    parser = argparse.ArgumentParser(description="Compare numba and pure-python census kernels")
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--cases", help='JSON list of [coeffs, T], e.g. "[[[1,-3,1], 1000]]"')
    args = parser.parse_args()

    cases = json.loads(args.cases) if args.cases else DEFAULT_CASES
    jit = run_backend(cases, args.repeats, disable_jit=False)
    py = run_backend(cases, max(1, args.repeats // 3), disable_jit=True)

    print("bench_census")
    print(f"{'poly':<20} {'T':>7} {'count':>9} {jit['backend']:>10} {py['backend']:>10} {'speedup':>8}")
    for a, b in zip(jit["results"], py["results"]):
        if a["count"] != b["count"]:
            raise SystemExit(f"backend mismatch on {a['poly']} T={a['T']}: {a['count']} vs {b['count']}")
        speedup = b["seconds"] / max(a["seconds"], 1e-9)
        print(
            f"{str(a['poly']):<20} {a['T']:>7} {a['count']:>9} "
            f"{a['seconds']:>9.4f}s {b['seconds']:>9.4f}s {speedup:>7.1f}x"
        )


if __name__ == "__main__":
    main()
