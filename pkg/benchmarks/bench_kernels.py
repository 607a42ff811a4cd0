"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Also times one end-to-end run with each backend (QDEG_NUMBA=0/1 in a
subprocess) since the flag is read at import time.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from qdeg import _kernels as K


def _grover_case(n, steps):
    start = np.full(n + 1, 1 / np.sqrt(n + 1))
    sign = np.ones(n + 1)
    sign[: max(1, n // 7)] = -1.0
    return lambda fn: fn(start.copy(), start, sign, steps)


def _table_case(n):
    v = np.random.default_rng(0).random(1 << n)
    return lambda fn: fn(v.copy(), n)


def _pivot_case(m, k):
    tab = np.random.default_rng(1).normal(size=(m, k)) + 3.0
    return lambda fn: fn(tab.copy(), m // 2, k // 2)


CASES = [
    ("grover n=64 T=20", _grover_case(64, 20), K.grover_iterations_np, K.grover_iterations_nb),
    ("grover n=1024 T=25", _grover_case(1024, 25), K.grover_iterations_np, K.grover_iterations_nb),
    ("mobius n=10", _table_case(10), K.mobius_np, K.mobius_nb),
    ("mobius n=16", _table_case(16), K.mobius_np, K.mobius_nb),
    ("zeta n=16", _table_case(16), K.zeta_np, K.zeta_nb),
    ("pivot 34x132", _pivot_case(34, 132), K.pivot_np, K.pivot_nb),
]

END_TO_END = ("from qdeg.qsym import analyze; from qdeg.symfun import make_named; "
              "import time; t=time.perf_counter(); analyze(make_named('or', 6), 0.1); "
              "print(time.perf_counter()-t)")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--skip-e2e", action="store_true")
    args = ap.parse_args(argv)
    if not K.HAVE_NUMBA:
        print("numba not installed: only the numpy path exists")
        return
    print(f"{'kernel':<22}{'numpy (ms)':>12}{'numba (ms)':>12}{'speedup':>10}")
    for name, case, np_fn, nb_fn in CASES:
        case(nb_fn)  # compile outside the timing
        t_np = min(timeit.repeat(lambda: case(np_fn), number=10, repeat=args.repeat)) / 10
        t_nb = min(timeit.repeat(lambda: case(nb_fn), number=10, repeat=args.repeat)) / 10
        print(f"{name:<22}{t_np * 1e3:>12.3f}{t_nb * 1e3:>12.3f}{t_np / t_nb:>10.1f}x")
    if args.skip_e2e:
        return
    for flag in ("0", "1"):
        env = dict(os.environ, QDEG_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True, check=True)
        label = "numba" if flag == "1" else "numpy"
        print(f"analyze(OR_6, 0.1) with {label}: {float(out.stdout):.2f}s")


if __name__ == "__main__":
    main()
