"""Compare the numba and numpy backends on a few representative workloads.

Each backend runs in its own interpreter because the backend is chosen at
import time from DIGIFIX_BACKEND.  Run with::

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
from digifix import kernels
from digifix.core import DigitalImage, box
from digifix.geometry import boundary
from digifix.verify import cold_defect, fixing_tables, is_freezing

repeat = int(sys.argv[1])
sq = lambda n, u: DigitalImage(box((-n, n), (-n, n)), u)
corners = lambda n: [(-n, -n), (-n, n), (n, -n), (n, n)]
big = box((0, 7), (0, 7))
jobs = {
    "defect c2 corners n=2": lambda: cold_defect(sq(2, 2), corners(2)),
    "defect c2 corners n=3": lambda: cold_defect(sq(3, 2), corners(3)),
    "freezing c1 Bd_1 of 8x8": lambda: is_freezing(DigitalImage(big, 1), boundary(big, 1)),
    "enumerate 3x3 c2, one corner": lambda: fixing_tables(sq(1, 2), [(-1, -1)], limit=10**7),
}
out = {"backend": kernels.BACKEND, "times": {}}
for name, job in jobs.items():
    job()  # warm-up, includes jit compilation for numba
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        job()
        best = min(best, time.perf_counter() - t0)
    out["times"][name] = best
print(json.dumps(out))
"""


def run_backend(backend: str, repeat: int) -> dict:
    env = dict(os.environ, DIGIFIX_BACKEND=backend)
    cp = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env,
                        capture_output=True, text=True, check=True)
    return json.loads(cp.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    res = {b: run_backend(b, args.repeat) for b in ("numba", "numpy")}
    print(f"{'workload':34} {'numba s':>10} {'numpy s':>10} {'speedup':>8}")
    for name, t_nb in res["numba"]["times"].items():
        t_np = res["numpy"]["times"][name]
        print(f"{name:34} {t_nb:10.4f} {t_np:10.4f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
