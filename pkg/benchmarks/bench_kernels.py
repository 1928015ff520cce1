"""Compare the compiled kernels with the pure-Python fallback.

Kernel-level timings call each backend directly.  End-to-end timings run the
same workload in fresh interpreters, once with ``FROBKIT_PURE_PYTHON=1``.

    python benchmarks/bench_kernels.py [--repeat N] [--json]
"""

import argparse
import json
import os
import random
import subprocess
import sys
import timeit

import numpy as np

from frobkit import kernels

WORKLOADS = {
    "groebner": (
        "from frobkit.algebra import make_algebra\n"
        "from frobkit.groebner import Ideal, groebner_basis\n"
        "A = make_algebra(7, ['x', 'y', 'z'])\n"
        "I = Ideal(A.ctx, [A.ctx.parse(t) for t in ['x^3*y+z^2+1', 'y^3*z+x^2', 'z^3*x+y^2+x']])\n"
        "groebner_basis(I)\n"
    ),
    "certify": (
        "from frobkit.algebra import make_algebra, structure_map\n"
        "from frobkit.frobenius import certify_f_finite\n"
        "certify_f_finite(structure_map(make_algebra(3, ['x', 'y'], ['y^2-x^3-x'])), 2)\n"
    ),
    "suite": "from frobkit.lemma_suite import run_suite\nrun_suite('lemma_2_2')\n",
}


def _random_terms(rng, nvars, n, p):
    return {tuple(rng.randint(0, 6) for _ in range(nvars)): rng.randrange(1, p) for _ in range(n)}


def kernel_timings(repeat):
    rng = random.Random(0)
    p = 32003
    a, b = _random_terms(rng, 3, 60, p), _random_terms(rng, 3, 60, p)
    mat = np.array([[rng.randrange(p) for _ in range(60)] for _ in range(40)], dtype=np.int64)
    rows = []
    for name, mod in sorted(kernels.backends().items()):
        mul = min(timeit.repeat(lambda: mod.mul_terms(a, b, p), number=20, repeat=repeat)) / 20
        rr = min(timeit.repeat(lambda: mod.rref(mat.copy(), p), number=5, repeat=repeat)) / 5
        rows.append({"backend": name, "mul_terms_ms": mul * 1e3, "rref_ms": rr * 1e3})
    return rows


def workload_timings(repeat):
    rows = []
    for label, pure in (("cython", False), ("python", True)):
        env = dict(os.environ)
        if pure:
            env["FROBKIT_PURE_PYTHON"] = "1"
        else:
            env.pop("FROBKIT_PURE_PYTHON", None)
        backend = subprocess.run(
            [sys.executable, "-c", "from frobkit import kernels; print(kernels.BACKEND)"],
            env=env, capture_output=True, text=True, check=True,
        ).stdout.strip()
        if backend != label:
            continue
        row = {"backend": backend}
        for name, code in WORKLOADS.items():
            timer = f"import time\n_t = time.perf_counter()\n{code}print(time.perf_counter() - _t)\n"
            best = min(
                float(subprocess.run([sys.executable, "-c", timer], env=env, capture_output=True,
                                     text=True, check=True).stdout.split()[-1])
                for _ in range(repeat)
            )
            row[f"{name}_s"] = best
        rows.append(row)
    return rows


def _table(rows):
    keys = list(rows[0])
    out = ["  ".join(f"{k:>14}" for k in keys)]
    for r in rows:
        out.append("  ".join(f"{r[k]:>14.4f}" if isinstance(r[k], float) else f"{r[k]:>14}" for k in keys))
    return "\n".join(out)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    result = {"kernels": kernel_timings(args.repeat), "workloads": workload_timings(args.repeat)}
    if args.json:
        print(json.dumps(result, indent=2, sort_keys=True))
        return
    print("kernel calls (best of repeats)")
    print(_table(result["kernels"]))
    print()
    print("end-to-end workloads (fresh interpreter)")
    print(_table(result["workloads"]))


if __name__ == "__main__":
    main()
