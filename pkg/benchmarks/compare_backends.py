"""Benchmark the compiled Monte Carlo kernel against the pure-Python fallback.

Both backends produce bit-identical results; this script measures what the
extension buys.  Run from the repository root:

    python benchmarks/compare_backends.py [--replicates 10000]
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from bayesborrow import (
    aggregate_precision_weighted,
    linearize_all,
    load_bundled,
    sample_size_borrow_normal,
)
from bayesborrow import _mc_fallback as fallback

try:
    from bayesborrow import _mc_kernel as compiled
except ImportError:
    compiled = None


def _time(fn, *args, repeats: int = 3):
    best = math.inf
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--replicates", type=int, default=10_000)
    args = parser.parse_args()

    if compiled is None:
        print("compiled kernel is not built; install with a working compiler to compare")
        return 1

    scenario = load_bundled("config_a.scenario.json")
    weights = linearize_all(scenario.sources, scenario.weights, scenario.hyper)
    prior = aggregate_precision_weighted(scenario.sources, weights, scenario.hyper)
    n = sample_size_borrow_normal(scenario.design, prior).n
    design = scenario.design
    sigma0 = math.sqrt(design.sigma0_sq)
    data_precision = n * design.R * (1.0 - design.R) / design.sigma0_sq
    tally_args = (
        1001, 0, args.replicates, n // 2, n - n // 2, 1.0, sigma0,
        prior.mean, prior.precision, data_precision, design.delta, design.eta, design.zeta,
    )

    print(f"workload: {args.replicates} replicates of an n = {n} trial "
          f"({args.replicates * n} normal draws)\n")
    rows = []

    t_py, r_py = _time(fallback.tally_replicates, *tally_args)
    t_cy, r_cy = _time(compiled.tally_replicates, *tally_args)
    assert tuple(r_py) == tuple(r_cy), "backends disagree"
    rows.append(("simulation tally", t_py, t_cy))

    p = np.linspace(1e-9, 1 - 1e-9, 1_000_000)
    t_py, q_py = _time(fallback.norm_quantile, p)
    t_cy, q_cy = _time(compiled.norm_quantile, p)
    assert np.array_equal(q_py, q_cy), "backends disagree"
    rows.append(("normal quantile, 1e6 points", t_py, t_cy))

    t_py, y_py = _time(fallback.replicate_ybars, 7, 0, 2000, n // 2, n - n // 2, 1.0, sigma0)
    t_cy, y_cy = _time(compiled.replicate_ybars, 7, 0, 2000, n // 2, n - n // 2, 1.0, sigma0)
    assert np.array_equal(y_py, y_cy), "backends disagree"
    rows.append(("replicate means, 2000 reps", t_py, t_cy))

    print(f"{'kernel':<30} {'python':>10} {'compiled':>10} {'speedup':>9}")
    for name, t_py, t_cy in rows:
        print(f"{name:<30} {t_py:>9.3f}s {t_cy:>9.3f}s {t_py / t_cy:>8.1f}x")
    print("\nall outputs bit-identical across backends")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
