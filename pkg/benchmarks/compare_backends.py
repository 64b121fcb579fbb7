"""Time the numba kernels against the pure-Python fallback.

Each backend runs in its own interpreter, since the backend is fixed at
import time by SUPERBUBBLE_DISABLE_NUMBA.

    python benchmarks/compare_backends.py --sizes 25000,50000,100000
"""
import argparse
import csv
import io
import os
import subprocess
import sys


def run(sizes, repeats, disable_numba):
    env = dict(os.environ)
    env.pop("SUPERBUBBLE_DISABLE_NUMBA", None)
    if disable_numba:
        env["SUPERBUBBLE_DISABLE_NUMBA"] = "1"
    cmd = [sys.executable, "-m", "superbubble", "bench", "--sizes", sizes, "--repeats", str(repeats)]
    proc = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True)
    rows = [line for line in proc.stdout.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(rows))))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="25000,50000,100000")
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    fast = run(args.sizes, args.repeats, disable_numba=False)
    slow = run(args.sizes, args.repeats, disable_numba=True)
    print(f"{'n':>8} {'m':>8} {'phase':>6} {'numba_s':>10} {'python_s':>10} {'speedup':>8}")
    for a, b in zip(fast, slow):
        # both backends must agree before their timings mean anything
        assert (a["superbubbles"], a["validate_calls"]) == (b["superbubbles"], b["validate_calls"]), (a, b)
        for phase in ("sort_s", "rmq_s", "scan_s", "total_s"):
            x, y = float(a[phase]), float(b[phase])
            print(f"{a['n']:>8} {a['m']:>8} {phase[:-2]:>6} {x:>10.4f} {y:>10.4f} {y / x if x else float('nan'):>7.1f}x")


if __name__ == "__main__":
    main()
