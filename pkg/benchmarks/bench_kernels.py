"""Benchmark the compiled kernels against the pure-Python fallback.

Runs the hot paths twice in subprocesses (once per backend, selected via
BIDEFORM_PURE) and prints a comparison table:

    python3 benchmarks/bench_kernels.py [--quick]

The workloads mirror what dominates the acceptance suite: assembling the
differential matrices of the 9-dimensional Taft algebra over F_7, reducing
the assembled level-2 total differential, and a plain dense modular RREF.
"""

import argparse
import json
import os
import random
import subprocess
import sys
import time


def run_workloads(quick: bool):
    import bideform
    from bideform import Matrix
    from bideform.cohomology import cohomology, context_for
    from bideform.fields import GF

    B = bideform.builtin_example("taft", n=3, q=2, p=7)
    ctx = context_for(B)
    results = {"backend": bideform.KERNEL_BACKEND}

    t0 = time.time()
    for p, q in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1)]:
        ctx.delta_matrix("h", p, q, -1)
        ctx.delta_matrix("c", p, q, -1)
    results["assemble_deltas_taft3"] = time.time() - t0

    t0 = time.time()
    mat = ctx.total_matrix(2, -1)
    dense = Matrix(B.field, mat.dense_rows(B.field), mat.ncols)
    dense.rref()
    results["total2_rref_taft3"] = time.time() - t0

    t0 = time.time()
    cohomology(B, 2, -2, with_representatives=False)
    results["cohomology_h2_taft3"] = time.time() - t0

    rng = random.Random(1)
    size = 150 if quick else 400
    rows = [[rng.randrange(7) for _ in range(size)] for _ in range(size)]
    m = Matrix(GF(7), rows)
    t0 = time.time()
    m.rref()
    results[f"dense_rref_{size}x{size}_f7"] = time.time() - t0

    if not quick:
        t0 = time.time()
        ctx.delta_matrix("h", 2, 2, -2)
        ctx.delta_matrix("c", 2, 2, -2)
        results["assemble_deltas_22_deg-2"] = time.time() - t0
    return results


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true", help="smaller workloads")
    parser.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args.child:
        print(json.dumps(run_workloads(args.quick)))
        return

    rows = {}
    for pure in (False, True):
        env = dict(os.environ)
        env["BIDEFORM_PURE"] = "1" if pure else "0"
        cmd = [sys.executable, os.path.abspath(__file__), "--child"]
        if args.quick:
            cmd.append("--quick")
        out = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True)
        data = json.loads(out.stdout.strip().splitlines()[-1])
        backend = data.pop("backend")
        for key, val in data.items():
            rows.setdefault(key, {})[backend] = val

    width = max(len(k) for k in rows) + 2
    print(f"{'workload':<{width}} {'compiled':>10} {'pure':>10} {'speedup':>9}")
    for key, vals in rows.items():
        fast = vals.get("compiled")
        slow = vals.get("pure")
        if fast is None or slow is None:
            continue
        ratio = slow / fast if fast > 0 else float("inf")
        print(f"{key:<{width}} {fast:>9.3f}s {slow:>9.3f}s {ratio:>8.1f}x")


if __name__ == "__main__":
    main()
