"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py            # dueling K=3,4
    python benchmarks/bench_kernels.py --arms 3 4 5   # adds K=5 (minutes on the Python backend)

Each workload is run once per backend; results are checked to be identical.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from partmon import kernels
from partmon.game import build_dueling_game
from partmon.geometry import cell_decomposition, neighbor_pairs
from partmon.linalg import rank
from partmon.lp import STATS


def geometry(K: int):
    game = build_dueling_game(K)
    cells = cell_decomposition(game)
    return cells, neighbor_pairs(game, cells)


def ranks(n: int, size: int, seed: int):
    rng = np.random.default_rng(seed)
    mats = [rng.integers(-9, 10, size=(size, size + 3)).tolist() for _ in range(n)]
    return [rank(m) for m in mats]


def timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return time.perf_counter() - t0, out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--arms", type=int, nargs="+", default=[3, 4])
    ap.add_argument("--rank-matrices", type=int, default=2000)
    ap.add_argument("--rank-size", type=int, default=10)
    args = ap.parse_args()

    backends = kernels.available_backends()
    if "native" not in backends:
        print("compiled extension not built; only the Python backend is available")
    workloads = [(f"cells+neighbors dueling K={K}", geometry, (K,)) for K in args.arms]
    workloads.append(
        (f"rank of {args.rank_matrices} {args.rank_size}x{args.rank_size + 3} matrices",
         ranks, (args.rank_matrices, args.rank_size, 0))
    )

    print(f"{'workload':<44} " + " ".join(f"{b:>10}" for b in backends) + "   speedup")
    for label, fn, fargs in workloads:
        times, outs = [], []
        for b in backends:
            STATS.clear()
            with kernels.backend(b):
                dt, out = timed(fn, *fargs)
            times.append(dt)
            outs.append(out)
        if any(o != outs[0] for o in outs[1:]):
            raise SystemExit(f"{label}: backends disagree")
        speed = f"{times[-1] / times[0]:8.1f}x" if len(times) == 2 else "       -"
        lp = f"  [{STATS['lp_calls']} LPs]" if STATS["lp_calls"] else ""
        print(f"{label:<44} " + " ".join(f"{t:9.3f}s" for t in times) + f"  {speed}{lp}")


if __name__ == "__main__":
    main()
