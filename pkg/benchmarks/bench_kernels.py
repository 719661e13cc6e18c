"""Time the numba kernels against their numpy fallbacks on identical inputs.

    python3 benchmarks/bench_kernels.py [--m 4096] [--repeat 20]

The numba variants are imported directly, so the SUPOU_DISABLE_NUMBA flag does
not matter here. The first numba call compiles and is excluded from timing.
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from supou import kernels


def best_of(fn, repeat):
    fn()
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--m", type=int, default=4096, help="OU components per step")
    ap.add_argument("--n-sub", type=int, default=8)
    ap.add_argument("--jumps", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    m, n = args.m, args.n_sub
    xi = rng.gamma(0.5, size=m) + 1e-6
    tau = xi * 10.0
    v = rng.uniform(-np.pi / 2, np.pi / 2, size=(m, n))
    w = rng.exponential(size=(m, n))
    owner = rng.integers(0, m, size=args.jumps)
    jw = rng.exponential(size=args.jumps)
    jx = rng.pareto(0.8, size=args.jumps)

    cases = {
        "cms_transform": (lambda: kernels.cms_transform_numpy(v, w, 1.7, 0.3),
                          lambda: kernels.cms_transform_numba(v, w, 1.7, 0.3)),
        "stable_ou_pieces": (lambda: kernels.stable_ou_pieces_numpy(xi, tau, 0.1, 1.7, 0.3, v, w),
                             lambda: kernels.stable_ou_pieces_numba(xi, tau, 0.1, 1.7, 0.3, v, w)),
        "cp_accumulate": (lambda: kernels.cp_accumulate_numpy(owner, jw, jx, xi, m),
                          lambda: kernels.cp_accumulate_numba(owner, jw, jx, xi, m)),
    }
    print(f"{'kernel':<18}{'numpy ms':>10}{'numba ms':>10}{'speedup':>9}{'max diff':>11}")
    for name, (f_np, f_nb) in cases.items():
        t_np = best_of(f_np, args.repeat)
        t_nb = best_of(f_nb, args.repeat)
        a, b = f_np(), f_nb()
        diff = max(float(np.max(np.abs(np.asarray(x) - np.asarray(y)))) for x, y in
                   zip(a if isinstance(a, tuple) else (a,), b if isinstance(b, tuple) else (b,)))
        print(f"{name:<18}{1e3 * t_np:>10.3f}{1e3 * t_nb:>10.3f}{t_np / t_nb:>9.2f}{diff:>11.2e}")


    print()
    print("end to end: stable BDLP, m=64, 200 replications x 200 steps (fresh process per backend, compile excluded)")
    for label, env in (("numba", {}), ("numpy", {"SUPOU_DISABLE_NUMBA": "1"})):
        out = subprocess.run([sys.executable, "-c", _E2E], env={**os.environ, **env}, capture_output=True, text=True,
                             check=True)
        print(f"  {label:<6}{out.stdout.strip()} s")


_E2E = """
import time
from supou.levy import StablePair
from supou.model import CharacteristicQuadruple, GammaPi
from supou.simulate import SimConfig, run_ensemble
q = CharacteristicQuadruple.mean_zero(0.0, StablePair.from_law(1.0, 0.0, 1.5), GammaPi(0.5))
run_ensemble(q, SimConfig.uniform(2.0, 1.0, m=64, n_rep=2))
t0 = time.perf_counter()
run_ensemble(q, SimConfig.uniform(200.0, 1.0, m=64, n_rep=200))
print(f"{time.perf_counter() - t0:.2f}")
"""


if __name__ == "__main__":
    main()
