"""BCube: where the exact width falls inside the [lower, upper] interval.

For small (k, d) the oracle is run; larger instances print only the
interval and the upper/lower ratio, which stays below 2.

    python3 scripts/bcube_gap.py --max-k 8 --max-d 4 --oracle-n 16
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from bwkit import catalog
from bwkit.bounds import upper_bound
from bwkit.graph import cartesian_product
from bwkit.oracle import exact_bisection_width


@dataclass
class Config:
    max_k: int = 8
    max_d: int = 4
    oracle_n: int = 16


def main(cfg: Config) -> int:
    worst = 0.0
    print(f"{'model':8s} {'k':>2s} {'d':>2s} {'lower':>9s} {'upper':>6s} {'ratio':>6s} {'CC*Psi':>7s} {'exact':>5s}")
    for name in ("bcube-a", "bcube-b"):
        for k in range(2, cfg.max_k + 1):
            for d in range(1, cfg.max_d + 1):
                e = catalog.entry(name, k=k, d=d)
                iv = e.bw
                ratio = float(iv.hi / iv.lo)
                worst = max(worst, ratio)
                exact = ""
                if e.spec.n <= cfg.oracle_n:
                    exact = str(exact_bisection_width(cartesian_product(e.spec)).width)
                print(f"{name:8s} {k:2d} {d:2d} {str(iv.lo):>9s} {iv.hi:6d} {ratio:6.3f} "
                      f"{upper_bound(e.spec):7d} {exact:>5s}")
    print(f"largest upper/lower ratio: {worst:.3f}")
    return 0


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-k", type=int, default=Config.max_k)
    p.add_argument("--max-d", type=int, default=Config.max_d)
    p.add_argument("--oracle-n", type=int, default=Config.oracle_n)
    sys.exit(main(Config(**vars(p.parse_args()))))
