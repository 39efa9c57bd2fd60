"""Time the hot kernels with numba and with the plain fallback.

Each mode runs in its own interpreter because the switch is read at import.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, random, sys, time
import numpy as np
from almost_smooth import _accel, kernels, oracles, streams

repeat = int(sys.argv[1])
rng = random.Random(0)

def pairs(n, length):
    out = []
    while len(out) < length:
        u, v = rng.randint(1, n), rng.randint(1, n)
        if u != v:
            out.append((u, v))
    return out

matching_inputs = [streams.gen_gnp(120, 0.03, s) for s in range(20)]
cover_inputs = [streams.gen_gnp(38, 0.15, s) for s in range(20)]
estar_inputs = [pairs(60, 3000) for _ in range(10)]

def run_matching():
    return sum(oracles.matching_size(x) for x in matching_inputs)

def run_cover():
    return sum(oracles.cover_size(x) for x in cover_inputs)

def run_estar():
    return sum(oracles.e_star_exact(x, 2) for x in estar_inputs)

out = {"numba": _accel.USE_NUMBA}
for name, fn in (("max_matching", run_matching), ("min_cover", run_cover), ("alpha_good", run_estar)):
    t0 = time.perf_counter()
    first = fn()  # includes compilation when numba is on
    warm = time.perf_counter() - t0
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        assert fn() == first
        best = min(best, time.perf_counter() - t0)
    out[name] = {"first_call_s": warm, "best_s": best, "result": first}
print(json.dumps(out))
"""


def run(disable: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("ALMOST_SMOOTH_DISABLE_NUMBA", None)
    if disable:
        env["ALMOST_SMOOTH_DISABLE_NUMBA"] = "1"
    res = subprocess.run([sys.executable, "-c", WORKLOAD, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    fast = run(False, args.repeat)
    slow = run(True, args.repeat)
    print(f"{'kernel':<14}{'numba s':>10}{'fallback s':>12}{'speedup':>9}{'first call s':>14}")
    for name in ("max_matching", "min_cover", "alpha_good"):
        a, b = fast[name], slow[name]
        if a["result"] != b["result"]:
            raise SystemExit(f"{name}: modes disagree ({a['result']} vs {b['result']})")
        print(f"{name:<14}{a['best_s']:>10.4f}{b['best_s']:>12.4f}{b['best_s'] / a['best_s']:>8.1f}x"
              f"{a['first_call_s']:>14.2f}")


if __name__ == "__main__":
    main()
