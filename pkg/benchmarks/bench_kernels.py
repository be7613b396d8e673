"""Time the numba kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py --states 200 --periods 5

The first numba call (compilation, or loading the on-disk cache) is timed
separately and excluded from the per-run figures.  The Liouville flow uses
the same propagator-power code on both backends, so it is timed once.
"""
import argparse
import json
import time

import numpy as np

from josephson_kit import _backend, _kernels
from josephson_kit.acceptance import random_admissible_states
from josephson_kit.dynamics import step_size
from josephson_kit.wellmodes import TwoModeParams


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--states", type=int, default=200)
    ap.add_argument("--periods", type=float, default=5.0)
    ap.add_argument("--steps-per-period", type=int, default=4000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true", help="print one JSON object instead of text")
    args = ap.parse_args(argv)

    p = TwoModeParams.from_gap(1.0, 0.1)
    states = random_admissible_states(np.random.default_rng(0), args.states, N=100.0)
    Z0 = np.array([s.Z for s in states])
    th0 = np.array([s.theta for s in states])
    A0 = np.array([s.A for s in states])
    N = np.full(args.states, 100.0)
    t = np.linspace(0, args.periods * p.period, 101)
    h = step_size(p, args.steps_per_period)
    total_steps = args.states * int(round(args.periods * args.steps_per_period))

    def generalized(backend):
        return _kernels.run_polar(Z0, th0, A0, N, p.EL, p.ER, p.K, t, h, pure=False, backend=backend)

    Zp = np.clip(Z0, -0.95, 0.95)

    def pure(backend):
        return _kernels.run_polar(Zp, th0, 0.0, N, p.EL, p.ER, p.K, t, h, pure=True, backend=backend)

    u0 = np.array([_kernels.polar_to_vector(s.Z, s.theta, s.A, s.N) for s in states])
    liouville_s, _ = best_of(lambda: _kernels.run_liouville(u0, p.EL, p.ER, p.K, t, h), args.repeat)

    report = {"states": args.states, "steps": total_steps, "numba_available": _backend.HAVE_NUMBA,
              "liouville_s": liouville_s}
    for name, fn in (("generalized", generalized), ("pure", pure)):
        row = {}
        tn, ref = best_of(lambda: fn("numpy"), args.repeat)
        row["numpy_s"] = tn
        if _backend.HAVE_NUMBA:
            t0 = time.perf_counter()
            fn("numba")
            row["numba_first_call_s"] = time.perf_counter() - t0
            tb, out = best_of(lambda: fn("numba"), args.repeat)
            row["numba_s"] = tb
            row["speedup"] = tn / tb
            row["max_abs_diff"] = float(max(np.max(np.abs(np.asarray(a) - np.asarray(b)))
                                            for a, b in zip(out, ref)))
        report[name] = row

    if args.json:
        print(json.dumps(report, indent=2))
        return
    print(f"{args.states} states, {total_steps:,} RK4 steps per kernel call")
    for name in ("generalized", "pure"):
        row = report[name]
        line = f"{name:12s} numpy {row['numpy_s']:8.3f} s"
        if "numba_s" in row:
            line += (f" | numba {row['numba_s']:8.3f} s (first call {row['numba_first_call_s']:.2f} s)"
                     f" | speedup {row['speedup']:6.1f}x | max diff {row['max_abs_diff']:.1e}")
        print(line)
    print(f"{'liouville':12s} shared {liouville_s:7.3f} s (step-matrix powers)")


if __name__ == "__main__":
    main()
