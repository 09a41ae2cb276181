"""Formula-vs-oracle checks over every small catalog instance."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import bounds, catalog
from .graph import cartesian_product
from .oracle import cut_size, exact_bisection_width


@dataclass(frozen=True)
class Check:
    entry: catalog.CatalogEntry
    lower: Fraction
    upper: int
    exact: int
    closed_form: int | catalog.Interval | None
    constructive: int

    @property
    def sandwich_ok(self) -> bool:
        return -(-self.lower.numerator // self.lower.denominator) <= self.exact <= self.upper

    @property
    def closed_form_ok(self) -> bool:
        cf = self.closed_form
        if cf is None:
            return True
        if isinstance(cf, catalog.Interval):
            return self.exact in cf
        return cf == self.exact

    @property
    def constructive_ok(self) -> bool:
        if self.constructive > self.upper:
            return False
        if isinstance(self.closed_form, int):
            return self.constructive == self.closed_form
        return True

    @property
    def ok(self) -> bool:
        return self.sandwich_ok and self.closed_form_ok and self.constructive_ok


def check(e: catalog.CatalogEntry, jobs: int = 1) -> Check:
    t = cartesian_product(e.spec)
    result = exact_bisection_width(t, jobs=jobs)
    return Check(
        entry=e,
        lower=bounds.lower_bound(e.spec).value,
        upper=bounds.upper_bound(e.spec),
        exact=result.width,
        closed_form=catalog.closed_form_bw(e),
        constructive=cut_size(t, bounds.constructive_bisection(e.spec)),
    )


def run(max_n: int, families=catalog.ALL_FAMILIES, jobs: int = 1, max_n_bcube: int | None = None):
    """Yield a Check for each instance; BCube families stop at max_n_bcube."""
    for name in families:
        limit = max_n
        if name.startswith("bcube") and max_n_bcube is not None:
            limit = min(max_n, max_n_bcube)
        for e in catalog.instances(name, limit):
            yield check(e, jobs)
