"""Constructive bisection vs the upper bound over every catalog instance.

Reports, per family, how many instances the constructive cut meets the
upper bound exactly and the smallest cut/upper ratio seen.

    python3 scripts/constructive_sweep.py --max-n 4096
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from bwkit import catalog
from bwkit.bounds import constructive_cut, upper_bound


@dataclass
class Config:
    max_n: int = 4096
    families: list[str] = field(default_factory=lambda: list(catalog.ALL_FAMILIES))


@dataclass
class FamilyStats:
    count: int = 0
    tight: int = 0
    violations: int = 0
    min_ratio: Fraction = Fraction(1)
    min_at: str = "-"


def sweep(cfg: Config) -> dict[str, FamilyStats]:
    out = {}
    for name in cfg.families:
        st = FamilyStats()
        for e in catalog.instances(name, cfg.max_n):
            cut, up = constructive_cut(e.spec), upper_bound(e.spec)
            st.count += 1
            st.tight += cut == up
            st.violations += cut > up
            ratio = Fraction(cut, up)
            if ratio < st.min_ratio:
                st.min_ratio, st.min_at = ratio, e.spec.label()
        out[name] = st
    return out


def main(cfg: Config) -> int:
    t0 = time.perf_counter()
    stats = sweep(cfg)
    print(f"{'family':8s} {'count':>7s} {'tight':>7s} {'viol':>5s}  min cut/upper")
    for name, st in stats.items():
        print(f"{name:8s} {st.count:7d} {st.tight:7d} {st.violations:5d}  {st.min_ratio} ({st.min_at})")
    print(f"{time.perf_counter() - t0:.1f}s")
    return 1 if any(st.violations for st in stats.values()) else 0


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-n", type=int, default=Config.max_n)
    p.add_argument("--families", type=lambda s: s.split(","), default=list(catalog.ALL_FAMILIES))
    sys.exit(main(Config(**vars(p.parse_args()))))
