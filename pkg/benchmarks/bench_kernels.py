"""Compare the compiled and pure-Python kernel backends.

Each workload runs in a fresh interpreter per backend, because the backend
is chosen at import time from ``DNREFLECT_PURE_PYTHON``.  Reports the best
wall time over ``--repeat`` runs and the peak RSS of the child process.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--skip-slow] [--json out.json]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKLOADS = {
    "poly_mul": (
        "from dnreflect.ring import LaurentPoly, q_pow, X, Y\n"
        "p = (q_pow(1) + X + Y + 1) ** 12\n"
        "run = lambda: p * p"
    ),
    "ybe_n4": "from dnreflect.rmatrix import check_YBE\nrun = lambda: check_YBE(4)",
    "reflection_n4": "from dnreflect.kmatrix import check_reflection_equation\nrun = lambda: check_reflection_equation(4)",
    "ybe_n5": "from dnreflect.rmatrix import check_YBE\nrun = lambda: check_YBE(5)",
}
SLOW = {"ybe_n5"}

CHILD = """
import json, resource, sys, time
from dnreflect import _kernels
{setup}
best = float("inf")
for _ in range({repeat}):
    t0 = time.perf_counter()
    run()
    best = min(best, time.perf_counter() - t0)
rss_mb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024
print(json.dumps({{"backend": _kernels.BACKEND, "seconds": best, "peak_rss_mb": rss_mb}}))
"""


def run_one(name: str, pure: bool, repeat: int) -> dict:
    env = dict(os.environ, DNREFLECT_PURE_PYTHON="1" if pure else "0")
    code = CHILD.format(setup=WORKLOADS[name], repeat=repeat)
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--skip-slow", action="store_true", help="omit the n=5 Yang-Baxter product")
    ap.add_argument("--only", choices=sorted(WORKLOADS), action="append")
    ap.add_argument("--json", help="also write the results to this file")
    args = ap.parse_args(argv)

    names = args.only or [n for n in WORKLOADS if not (args.skip_slow and n in SLOW)]
    rows = []
    print(f"{'workload':<16}{'backend':<10}{'seconds':>10}{'peak MB':>10}{'speedup':>10}")
    for name in names:
        fast = run_one(name, pure=False, repeat=args.repeat)
        slow = run_one(name, pure=True, repeat=1 if name in SLOW else args.repeat)
        if fast["backend"] != "cython":
            print(f"{name:<16}compiled extension not available, fallback only")
        speedup = slow["seconds"] / fast["seconds"]
        for r in (fast, slow):
            extra = f"{speedup:>9.1f}x" if r is fast else ""
            print(f"{name:<16}{r['backend']:<10}{r['seconds']:>10.3f}{r['peak_rss_mb']:>10.0f}{extra}")
        rows.append({"workload": name, "compiled": fast, "python": slow, "speedup": speedup})
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
