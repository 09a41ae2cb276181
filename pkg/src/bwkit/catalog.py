"""Named product networks with their closed-form bisection widths.

Exact values: arrays and products of paths/CBTs give Psi(alpha); tori and
products of rings/XTs give 2 Psi(alpha). BCube only has an interval, and
its bandwidth depends on whether links (model A) or switches (model B)
are the bottleneck.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import bounds
from .errors import InvalidK, MissingCapacity, WrongFamilies
from .graph import Kind, ProductSpec, factor

EXACT_FAMILIES = ("array", "torus", "mct", "mctp", "mcx", "mcxr")
ALL_FAMILIES = EXACT_FAMILIES + ("hamming", "bcube-a", "bcube-b")

# kinds each family may use; a mix family also needs at least one factor of each
ALLOWED = {
    "array": {Kind.PATH},
    "torus": {Kind.RING},
    "mct": {Kind.CBT},
    "mctp": {Kind.PATH, Kind.CBT},
    "mcx": {Kind.XT},
    "mcxr": {Kind.RING, Kind.XT},
    "hamming": {Kind.CLIQUE, Kind.RCLIQUE},
    "bcube-a": {Kind.SSA},
    "bcube-b": {Kind.SSB},
}
DEFAULT_KIND = {
    "array": Kind.PATH,
    "torus": Kind.RING,
    "mct": Kind.CBT,
    "mcx": Kind.XT,
    "hamming": Kind.CLIQUE,
    "bcube-a": Kind.SSA,
    "bcube-b": Kind.SSB,
}


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: int

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def scaled(self, factor) -> tuple[Fraction, Fraction]:
        return (self.lo * factor, Fraction(self.hi) * factor)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    spec: ProductSpec

    @property
    def bw(self) -> int | Interval | None:
        return closed_form_bw(self)


@dataclass(frozen=True)
class CapacityModel:
    link_T: Fraction | None = None
    switch_s: Fraction | None = None

    def __post_init__(self):
        for name in ("link_T", "switch_s"):
            v = getattr(self, name)
            if v is not None:
                v = Fraction(v)
                if v < 0:
                    raise ValueError(f"{name} must be non-negative")
                object.__setattr__(self, name, v)

    def bcube_models(self, k: int) -> tuple[str, ...]:
        """Models whose selection rule holds; empty in the intermediate regime."""
        if self.link_T is None or self.switch_s is None:
            return ()
        two_t = 2 * self.link_T
        out = []
        if self.switch_s >= (k // 2) * two_t:
            out.append("A")
        if self.switch_s <= two_t:
            out.append("B")
        return tuple(out)


def entry(name: str, dims: Sequence[int] = (), kinds: Sequence[str] | None = None,
          k: int | None = None, d: int | None = None) -> CatalogEntry:
    """Build a catalog entry.

    ``dims`` are factor sizes in any order. Mixed families (mctp, mcxr) take a
    parallel ``kinds`` list; BCube takes ``k`` and ``d``.
    """
    name = name.lower()
    if name not in ALLOWED:
        raise WrongFamilies(f"unknown topology {name!r}")
    if name.startswith("bcube"):
        if k is None or d is None:
            if not dims:
                raise WrongFamilies("bcube needs k and d")
            if len(set(dims)) != 1:
                raise WrongFamilies("bcube dimensions must all have the same k")
            k, d = dims[0], len(dims)
        if d < 1:
            raise WrongFamilies("bcube needs d >= 1")
        return CatalogEntry(name, ProductSpec.uniform(DEFAULT_KIND[name], [k] * d))
    if not dims:
        raise WrongFamilies(f"{name} needs dims")
    if kinds is None:
        if name not in DEFAULT_KIND:
            raise WrongFamilies(f"{name} needs one factor kind per dimension")
        kinds = [DEFAULT_KIND[name]] * len(dims)
    if len(kinds) != len(dims):
        raise WrongFamilies("need exactly one factor kind per dimension")
    facs = tuple(factor(kd, kk) for kd, kk in zip(kinds, dims))
    return from_spec(name, ProductSpec(facs))


def from_spec(name: str, spec: ProductSpec) -> CatalogEntry:
    used = spec.kinds
    if not used <= ALLOWED[name]:
        raise WrongFamilies(f"{name} does not admit factors {sorted(k.value for k in used - ALLOWED[name])}")
    if name.startswith("bcube") and len(set(spec.radices)) != 1:
        raise WrongFamilies("bcube dimensions must all have the same k")
    return CatalogEntry(name, spec)


def closed_form_bw(e: CatalogEntry) -> int | Interval | None:
    spec = e.spec
    if not spec.kinds <= ALLOWED[e.name]:
        raise WrongFamilies(f"{e.name} built from the wrong factor families")
    p = bounds.psi(spec)
    if e.name in ("array", "mctp", "mct"):
        return p.psi
    if e.name in ("torus", "mcxr", "mcx"):
        return 2 * p.psi
    if e.name == "bcube-a":
        k, d = spec.radices[0], spec.d
        if k % 2 == 0:
            return Interval(Fraction(k ** (d + 1), 4 * (k - 1)), k ** d // 2)
        geo = (k ** d - 1) // (k - 1)
        return Interval(Fraction(k + 1, 4) * geo, (k ** d - 1) // 2)
    if e.name == "bcube-b":
        k, d = spec.radices[0], spec.d
        geo = (k ** d - 1) // (k - 1)
        if k % 2 == 0:
            return Interval(Fraction(k ** d, 2 * (k - 1)), geo)
        return Interval(Fraction(k + 1, 2 * k) * geo, geo)
    return None


def bisection_bandwidth(e: CatalogEntry, cap: CapacityModel):
    """Fraction for exact families, (lo, hi) pair of Fractions otherwise."""
    bw = closed_form_bw(e)
    if e.name == "bcube-b":
        if cap.switch_s is None:
            raise MissingCapacity("bcube-b bandwidth needs the switch capacity s")
        return bw.scaled(cap.switch_s)
    if cap.link_T is None:
        raise MissingCapacity(f"{e.name} bandwidth needs the link capacity T")
    two_t = 2 * cap.link_T
    if bw is None:
        bw = Interval(bounds.lower_bound(e.spec).value, bounds.upper_bound(e.spec))
    if isinstance(bw, Interval):
        return bw.scaled(two_t)
    return two_t * bw


# ---------------------------------------------------------------------------
# instance enumeration


def sorted_dims(max_n: int, allowed: Sequence[int] | None = None, min_k: int = 2):
    """All non-increasing tuples of sizes >= min_k with product <= max_n."""
    def rec(prefix: tuple[int, ...], prod: int, top: int):
        if prefix:
            yield prefix
        for k in range(min(top, max_n // prod), min_k - 1, -1):
            if allowed is not None and k not in allowed:
                continue
            yield from rec(prefix + (k,), prod * k, k)

    yield from rec((), 1, max_n)


def tree_sizes(max_k: int) -> list[int]:
    return [2 ** j - 1 for j in range(2, max_k.bit_length() + 2) if 2 ** j - 1 <= max_k]


def instances(name: str, max_n: int):
    """Every catalog instance of a family with at most max_n servers.

    Mixed families list each multiset of (kind, k) once and require both
    kinds to be present.
    """
    if name in ("array", "torus", "hamming"):
        for dims in sorted_dims(max_n):
            yield entry(name, dims)
    elif name in ("mct", "mcx"):
        for dims in sorted_dims(max_n, tree_sizes(max_n)):
            yield entry(name, dims)
    elif name in ("mctp", "mcxr"):
        tree, other = (Kind.CBT, Kind.PATH) if name == "mctp" else (Kind.XT, Kind.RING)
        trees = set(tree_sizes(max_n))
        for dims in sorted_dims(max_n):
            for choice in _mixes(dims, trees):
                if len(set(choice)) < 2:
                    continue
                kinds = [tree if c else other for c in choice]
                yield entry(name, dims, kinds)
    elif name in ("bcube-a", "bcube-b"):
        for k in range(2, max_n + 1):
            for d in range(1, max_n.bit_length() + 1):
                if k ** d > max_n:
                    break
                yield entry(name, k=k, d=d)
    else:
        raise WrongFamilies(f"unknown topology {name!r}")


def _mixes(dims: tuple[int, ...], trees: set[int]):
    """Tree/non-tree flags per dimension, one per multiset of (k, flag)."""
    def rec(i: int, prev: tuple[int, bool] | None):
        if i == len(dims):
            yield ()
            return
        for flag in (False, True):
            if flag and dims[i] not in trees:
                continue
            cur = (dims[i], flag)
            # equal sizes: enforce non-decreasing flags to skip permutations
            if prev is not None and prev[0] == dims[i] and prev[1] > flag:
                continue
            for rest in rec(i + 1, cur):
                yield (flag,) + rest

    yield from rec(0, None)


# ---------------------------------------------------------------------------
# Table 1


@dataclass(frozen=True)
class TableRow:
    product: str
    factors: str
    beta: str
    cc: str
    bandwidth: str
    family: str
    parity: str | None = None


TABLE1 = (
    TableRow("Torus", "Ring", "1/8", "2", "4T·Ψ(α)", "torus"),
    TableRow("Product of extended CBT", "XTs", "1/8", "2", "4T·Ψ(α)", "mcx"),
    TableRow("Product of extended CBT & rings", "Rings & XTs", "1/8", "2", "4T·Ψ(α)", "mcxr"),
    TableRow("Mesh connected trees", "CBT", "1/4", "1", "2T·Ψ(α)", "mct"),
    TableRow("Product of CBT and paths", "Paths & CBTs", "1/4", "1", "2T·Ψ(α)", "mctp"),
    TableRow("BCube", "Model A, even", "(k-1)/k^2", "k/2",
             "2T·k^(d+1)/(4(k-1)) ≤ BBW(BCA) ≤ 2T·k^d/2", "bcube-a", "even"),
    TableRow("BCube", "Model A, odd", "1/(k+1)", "(k-1)/2",
             "2T·(k+1)/4·(k^d-1)/(k-1) ≤ BBW(BCA) ≤ 2T·(k^d-1)/2", "bcube-a", "odd"),
    TableRow("BCube", "Model B, even", "(k-1)/(2k)", "1",
             "s·k^d/(2(k-1)) ≤ BBW(BCB) ≤ s·(k^d-1)/(k-1)", "bcube-b", "even"),
    TableRow("BCube", "Model B, odd", "k/(2(k+1))", "1",
             "s·(k+1)/(2k)·(k^d-1)/(k-1) ≤ BBW(BCB) ≤ s·(k^d-1)/(k-1)", "bcube-b", "odd"),
)

HEADER = ("Product graph", "Factor graphs", "β", "CC", "Bisection bandwidth")
FOOTNOTE = ("β for ring/XT rows is β_2/2: the normalized congestion at r = 2 "
            "(which is 1/4) divided by r.")


def _fmt(x) -> str:
    return str(Fraction(x))


def table1_instance_value(row: TableRow, k: int, d: int, cap: CapacityModel) -> str:
    """Numeric bandwidth of the uniform k^d instance of a row, or '-'."""
    if row.parity is not None and (k % 2 == 0) != (row.parity == "even"):
        return "-"
    try:
        if row.family in ("mctp", "mcxr"):
            # uniform instance of a mix: any one admissible kind will do
            tree = Kind.CBT if row.family == "mctp" else Kind.XT
            other = Kind.PATH if row.family == "mctp" else Kind.RING
            kinds = [tree if _tree_ok(k) else other] * d
            e = from_spec(row.family, ProductSpec(tuple(factor(kd, k) for kd in kinds)))
        elif row.family.startswith("bcube"):
            e = entry(row.family, k=k, d=d)
        else:
            e = entry(row.family, [k] * d)
        value = bisection_bandwidth(e, cap)
    except (InvalidK, MissingCapacity, WrongFamilies):
        return "-"
    if isinstance(value, tuple):
        return f"[{_fmt(value[0])}, {_fmt(value[1])}]"
    return _fmt(value)


def _tree_ok(k: int) -> bool:
    return k >= 3 and (k + 1) & k == 0


def table1(k: int | None = None, d: int | None = None, cap: CapacityModel | None = None) -> list[list[str]]:
    """Rows as lists of cells; a value column is appended when k and d are given."""
    with_values = k is not None and d is not None
    header = list(HEADER) + ([f"Value (k={k}, d={d})"] if with_values else [])
    rows = [header]
    for row in TABLE1:
        cells = [row.product, row.factors, row.beta, row.cc, row.bandwidth]
        if with_values:
            cells.append(table1_instance_value(row, k, d, cap or CapacityModel()))
        rows.append(cells)
    return rows


def render_markdown(rows: list[list[str]]) -> str:
    lines = ["| " + " | ".join(rows[0]) + " |", "|" + "|".join("---" for _ in rows[0]) + "|"]
    lines += ["| " + " | ".join(r) + " |" for r in rows[1:]]
    lines.append("")
    lines.append(f"Note: {FOOTNOTE}")
    return "\n".join(lines) + "\n"


def render_csv(rows: list[list[str]]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def render_text(rows: list[list[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n" + FOOTNOTE + "\n"


def describe(e: CatalogEntry) -> str:
    return f"{e.name} {e.spec.label()} (n={e.spec.n})"


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class BoundReport:
    entry: CatalogEntry
    lower: bounds.LowerBound
    upper: int
    closed_form: int | Interval | None
    psi: int
    alpha: int
    bandwidth: object = None

    def to_dict(self) -> dict:
        cf = self.closed_form
        if isinstance(cf, Interval):
            cf = [_fmt(cf.lo), _fmt(cf.hi)]
        out = {
            "lower": {"rational": _fmt(self.lower.value), "ceil": self.lower.ceil, "mode": self.lower.mode},
            "upper": self.upper,
            "closed_form": cf,
            "psi": self.psi,
            "alpha": self.alpha,
            "topology": self.entry.name,
            "dims": list(self.entry.spec.radices),
            "factors": [f.label() for f in self.entry.spec.factors],
        }
        if self.bandwidth is not None:
            bbw = self.bandwidth
            out["bbw"] = [_fmt(x) for x in bbw] if isinstance(bbw, tuple) else _fmt(bbw)
        return out


def report(e: CatalogEntry, cap: CapacityModel | None = None) -> BoundReport:
    p = bounds.psi(e.spec)
    bbw = None
    if cap is not None:
        try:
            bbw = bisection_bandwidth(e, cap)
        except MissingCapacity:
            bbw = None
    return BoundReport(
        entry=e,
        lower=bounds.lower_bound(e.spec),
        upper=bounds.upper_bound(e.spec),
        closed_form=closed_form_bw(e),
        psi=p.psi,
        alpha=p.alpha,
        bandwidth=bbw,
    )
