"""Compiled vs pure-Python kernels.

Kernel timings call both implementations on the same inputs, built from the
package's rational scalar, and check that the results agree.  End-to-end
timings run each workload in a fresh interpreter, once per backend, since the
backend is fixed at import.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import timeit

from ecsolve import _kernels_py
from ecsolve.algebra.rational import Q

try:
    from ecsolve import _kernels as _compiled
except ImportError:
    _compiled = None


def _grid(nx, ny, seed):
    return [[Q((i * 7 + j * 3 + seed) % 11 - 5, 1 + (i + j) % 4) for j in range(ny + 1)]
            for i in range(nx + 1)]


def kernel_cases():
    a, b = _grid(8, 12, 1), _grid(8, 12, 2)
    pa = [Q(k % 7 - 3, 1 + k % 3) for k in range(40)]
    pb = [Q(k % 5 - 2, 1 + k % 2) for k in range(25)]
    pb[-1] = Q(1)
    table = [(l, d, Q(1 + l, 1 + abs(d))) for l in range(4) for d in range(-3, 9)]
    states = {(i, -i, j % 3): Q(1, 1 + i + j) for i in range(6) for j in range(3)}
    lo, hi = (-4, -8, 0), (12, 8, 3)
    return {
        "conv2d": lambda k: k.conv2d(a, b, 8, 12),
        "conv1d": lambda k: k.conv1d(pa, pb, 60),
        "poly_mul": lambda k: k.poly_mul(pa, pb),
        "poly_divmod": lambda k: k.poly_divmod(list(pa), pb, Q(1)),
        "fold": lambda k: k.fold(dict(states), table, 0, 1, 2, 3, lo, hi),
    }


WORKLOADS = {
    "eigenvalue symbolic Lq=3 Sg=6": (
        "from ecsolve import ModelParams, eigenvalue_via_lagrange\n"
        "eigenvalue_via_lagrange((1, 0), ModelParams.symbolic(), 3, 6)"
    ),
    "eigenvalue N=3 lambda=3/7 Lq=2 Sg=4": (
        "from ecsolve import ModelParams, Q, eigenvalue_via_lagrange\n"
        "eigenvalue_via_lagrange((2, 1, 0), ModelParams(3, Q('3/7')), 2, 4)"
    ),
    "building block N=3 Lq=2": (
        "from ecsolve import ModelParams, Q, fhat_series\n"
        "fhat_series((2, 1, 0), ModelParams(3, Q('5/2')), 2)"
    ),
}


def time_kernels(repeat: int) -> list[dict]:
    rows = []
    for name, call in kernel_cases().items():
        t_py = min(timeit.repeat(lambda: call(_kernels_py), number=20, repeat=repeat)) / 20
        row = {"kernel": name, "python_s": t_py}
        if _compiled is not None:
            if call(_compiled) != call(_kernels_py):
                raise SystemExit(f"{name}: backends disagree")
            t_c = min(timeit.repeat(lambda: call(_compiled), number=20, repeat=repeat)) / 20
            row.update(compiled_s=t_c, speedup=t_py / t_c)
        rows.append(row)
    return rows


def _run(code: str, pure: bool, repeat: int) -> float:
    env = dict(os.environ)
    if pure:
        env["ECSOLVE_PURE_PYTHON"] = "1"
    else:
        env.pop("ECSOLVE_PURE_PYTHON", None)
    setup, stmt = code.split("\n", 1)
    probe = (
        "import timeit, json\n"
        f"{setup}\n"
        f"print(json.dumps(min(timeit.repeat({stmt!r}, globals=globals(), number=1, repeat={repeat}))))"
    )
    out = subprocess.run([sys.executable, "-c", probe], env=env, check=True,
                         capture_output=True, text=True)
    return json.loads(out.stdout)


def time_workloads(repeat: int) -> list[dict]:
    rows = []
    for name, code in WORKLOADS.items():
        row = {"workload": name, "python_s": _run(code, True, repeat)}
        if _compiled is not None:
            row["compiled_s"] = _run(code, False, repeat)
            row["speedup"] = row["python_s"] / row["compiled_s"]
        rows.append(row)
    return rows


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true", help="emit JSON instead of a table")
    args = ap.parse_args(argv)
    kernels = time_kernels(args.repeat)
    workloads = time_workloads(args.repeat)
    if args.json:
        print(json.dumps({"kernels": kernels, "workloads": workloads}, indent=1))
        return 0
    if _compiled is None:
        print("compiled kernels not built; timing the pure-Python backend only")
    print(f"{'case':40s} {'python':>11s} {'compiled':>11s} {'speedup':>8s}")
    for row in kernels + workloads:
        name = row.get("kernel") or row["workload"]
        comp = f"{row['compiled_s'] * 1e3:9.3f}ms" if "compiled_s" in row else "-"
        speed = f"{row['speedup']:7.2f}x" if "speedup" in row else "-"
        print(f"{name:40s} {row['python_s'] * 1e3:9.3f}ms {comp:>11s} {speed:>8s}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
