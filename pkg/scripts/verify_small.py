"""Check every closed form and bound against the exhaustive oracle.

    python3 scripts/verify_small.py --max-n 20 --csv results.csv
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import dataclass

from bwkit import catalog, verify


@dataclass
class Config:
    max_n: int = 20
    max_n_bcube: int = 16
    jobs: int = 1
    csv_path: str | None = None


def main(cfg: Config) -> int:
    rows = []
    failures = 0
    t0 = time.perf_counter()
    for name in catalog.ALL_FAMILIES:
        started = time.perf_counter()
        checks = list(verify.run(cfg.max_n, [name], cfg.jobs, cfg.max_n_bcube))
        bad = [c for c in checks if not c.ok]
        failures += len(bad)
        print(f"{name:8s} {len(checks):4d} instances  {len(bad)} failures  {time.perf_counter() - started:6.2f}s")
        for c in checks:
            rows.append({
                "family": name,
                "factors": " x ".join(f.label() for f in c.entry.spec.factors),
                "n": c.entry.spec.n,
                "exact": c.exact,
                "lower": str(c.lower),
                "upper": c.upper,
                "closed_form": "" if c.closed_form is None else str(c.closed_form),
                "constructive": c.constructive,
                "ok": c.ok,
            })
    print(f"total {len(rows)} instances, {failures} failures, {time.perf_counter() - t0:.1f}s")
    if cfg.csv_path:
        with open(cfg.csv_path, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
    return 1 if failures else 0


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-n", type=int, default=Config.max_n)
    p.add_argument("--max-n-bcube", type=int, default=Config.max_n_bcube)
    p.add_argument("--jobs", type=int, default=Config.jobs)
    p.add_argument("--csv", dest="csv_path")
    sys.exit(main(Config(**vars(p.parse_args()))))
