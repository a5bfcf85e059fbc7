#!/usr/bin/env python3
"""Wall-time scaling of the glp backend on random radius instances.

Doubling the instance size should not double the solve time by more than the
sampling overhead; prints per-size timings and the scaling ratio.
"""

import argparse
import sys
import time

import numpy as np

sys.path.insert(0, "tests")

from mobius_opt.solver import SolverConfig, minimize_max  # noqa: E402
from util import random_instance  # noqa: E402


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+",
                    default=[25_000, 50_000, 100_000, 200_000])
    ap.add_argument("--seed", type=int, default=17)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    cfg = SolverConfig(backend="glp", rng_seed=args.seed)
    times = []
    for n in args.sizes:
        inst, _ = random_instance(rng, "ball_radius", n=n)
        minimize_max(inst.subset(np.arange(min(n, 500))), cfg)  # warm
        best = min(
            _timed(lambda: minimize_max(inst, cfg)) for _ in range(args.repeats)
        )
        times.append(best)
        print(f"n={n:>8}: {best:7.3f} s")
    for (n0, t0), (n1, t1) in zip(zip(args.sizes, times), zip(args.sizes[1:], times[1:])):
        print(f"ratio t({n1})/t({n0}) = {t1 / t0:.2f}  (size ratio {n1 / n0:.1f})")
    return 0


def _timed(fn) -> float:
    t0 = time.time()
    fn()
    return time.time() - t0


if __name__ == "__main__":
    sys.exit(main())
