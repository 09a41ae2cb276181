"""Factor graphs, Cartesian products and the mixed-radix coordinate codec.

Vertices of a product are numbered so that integer order equals the
lexicographic order of coordinate tuples (dimension 1 is the most
significant digit). All topologies are immutable once built.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidK, MixedSwitchModels, OutOfRange, Overflow

MAX_MATERIALIZED = 1 << 24
MAX_FORMULA_N = (1 << 63) - 1


class Kind(str, enum.Enum):
    PATH = "path"
    RING = "ring"
    CBT = "cbt"
    XT = "xt"
    CLIQUE = "clique"
    RCLIQUE = "rclique"
    SSA = "ssa"
    SSB = "ssb"


class CutModel(str, enum.Enum):
    PLAIN = "plain"
    STAR = "star"
    HYPER = "hyper"


CANONICAL_R = {
    Kind.PATH: 1,
    Kind.CBT: 1,
    Kind.CLIQUE: 1,
    Kind.SSA: 1,
    Kind.SSB: 1,
    Kind.RING: 2,
    Kind.XT: 2,
    Kind.RCLIQUE: 1,
}

MIN_K = {
    Kind.PATH: 1,
    Kind.CBT: 1,
    Kind.XT: 1,
    Kind.RING: 2,
    Kind.CLIQUE: 2,
    Kind.RCLIQUE: 2,
    Kind.SSA: 2,
    Kind.SSB: 2,
}


def is_tree_size(k: int) -> bool:
    """True when k = 2^j - 1 for some j >= 1."""
    return k >= 1 and (k + 1) & k == 0


@dataclass(frozen=True)
class FactorSpec:
    kind: Kind
    k: int
    r: int | None = None

    def __post_init__(self):
        kind = Kind(self.kind)
        object.__setattr__(self, "kind", kind)
        if not isinstance(self.k, (int, np.integer)) or self.k < 1:
            raise InvalidK(f"{kind.value}: k must be a positive integer, got {self.k!r}")
        object.__setattr__(self, "k", int(self.k))
        if self.k < MIN_K[kind]:
            raise InvalidK(f"{kind.value}: k must be >= {MIN_K[kind]}, got {self.k}")
        if kind in (Kind.CBT, Kind.XT) and not is_tree_size(self.k):
            raise InvalidK(f"{kind.value}: k must be 2^j - 1, got {self.k}")
        r = CANONICAL_R[kind] if self.r is None else int(self.r)
        if r < 1:
            raise ValueError(f"multiplicity must be positive, got {r}")
        if kind is not Kind.RCLIQUE and r != CANONICAL_R[kind]:
            raise ValueError(
                f"{kind.value}: multiplicity is fixed at {CANONICAL_R[kind]} (got {r}); "
                "only rclique takes a free r"
            )
        object.__setattr__(self, "r", r)

    def label(self) -> str:
        if self.kind is Kind.RCLIQUE:
            return f"{self.r}{self.kind.value}{self.k}"
        return f"{self.kind.value}{self.k}"


def factor(kind: str | Kind, k: int, r: int | None = None) -> FactorSpec:
    return FactorSpec(Kind(kind), k, r)


@dataclass(frozen=True)
class ProductSpec:
    """Sorted sequence of factors, k_1 >= k_2 >= ... >= k_d.

    ``order[i]`` is the user-facing position of sorted factor ``i``; the sort
    is stable so equal-size factors keep their given order.
    """

    factors: tuple[FactorSpec, ...]
    order: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        given = tuple(self.factors)
        if not given:
            raise ValueError("a product needs at least one factor")
        for f in given:
            if f.k < 2:
                raise InvalidK(f"product factors need k >= 2, got {f.label()}")
        order = tuple(sorted(range(len(given)), key=lambda i: -given[i].k))
        object.__setattr__(self, "factors", tuple(given[i] for i in order))
        object.__setattr__(self, "order", order)
        if self.n > MAX_FORMULA_N:
            raise Overflow(f"n = {self.n} does not fit in 64 bits")

    @classmethod
    def of(cls, *factors: FactorSpec) -> ProductSpec:
        return cls(tuple(factors))

    @classmethod
    def uniform(cls, kind: str | Kind, dims: Sequence[int]) -> ProductSpec:
        return cls(tuple(factor(kind, k) for k in dims))

    @property
    def radices(self) -> tuple[int, ...]:
        return tuple(f.k for f in self.factors)

    @property
    def d(self) -> int:
        return len(self.factors)

    @property
    def n(self) -> int:
        return math.prod(self.radices)

    @property
    def alpha(self) -> int:
        """1-based index of the first even dimension (d if all are odd)."""
        for i, k in enumerate(self.radices, start=1):
            if k % 2 == 0:
                return i
        return self.d

    @property
    def kinds(self) -> frozenset[Kind]:
        return frozenset(f.kind for f in self.factors)

    def label(self) -> str:
        return " x ".join(f.label() for f in self.factors)


# ---------------------------------------------------------------------------
# coordinate codec


def coord_of(radices: Sequence[int], x: int) -> tuple[int, ...]:
    n = math.prod(radices)
    if not 0 <= x < n:
        raise OutOfRange(f"vertex {x} outside [0, {n})")
    digits = []
    for k in reversed(radices):
        x, digit = divmod(x, k)
        digits.append(digit)
    return tuple(reversed(digits))


def index_of(radices: Sequence[int], coord: Sequence[int]) -> int:
    if len(coord) != len(radices):
        raise OutOfRange(f"coordinate {tuple(coord)} has wrong length for radices {tuple(radices)}")
    x = 0
    for digit, k in zip(coord, radices):
        if not 0 <= digit < k:
            raise OutOfRange(f"digit {digit} outside [0, {k})")
        x = x * k + digit
    return x


def coords_array(radices: Sequence[int]) -> np.ndarray:
    """(n, d) array of all coordinates in index order."""
    n = math.prod(radices)
    return np.stack(np.unravel_index(np.arange(n), tuple(radices)), axis=1)


# ---------------------------------------------------------------------------
# topology


@dataclass(frozen=True)
class Switch:
    id: int
    attached: np.ndarray
    dim: int = 0


@dataclass(frozen=True, eq=False)
class Topology:
    """Materialized server graph.

    Plain edges are stored once per unordered pair with a multiplicity
    counter. ``edge_dim`` / ``hyperedge_dim`` / ``Switch.dim`` record the
    0-based product dimension each element came from.
    """

    server_count: int
    radices: tuple[int, ...]
    edges: np.ndarray
    edge_mult: np.ndarray
    edge_dim: np.ndarray
    hyperedges: tuple[np.ndarray, ...] = ()
    hyperedge_dim: tuple[int, ...] = ()
    switches: tuple[Switch, ...] = ()
    cut_model: CutModel = CutModel.PLAIN

    def __post_init__(self):
        for arr in (self.edges, self.edge_mult, self.edge_dim, *self.hyperedges):
            arr.setflags(write=False)
        for sw in self.switches:
            sw.attached.setflags(write=False)

    @property
    def d(self) -> int:
        return len(self.radices)

    @property
    def edge_count(self) -> int:
        """Number of plain edges counted with multiplicity."""
        return int(self.edge_mult.sum())

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.server_count, dtype=np.int64)
        np.add.at(deg, self.edges[:, 0], self.edge_mult)
        np.add.at(deg, self.edges[:, 1], self.edge_mult)
        return deg

    def adjacency(self) -> np.ndarray:
        """Dense multiplicity matrix of the plain edges."""
        a = np.zeros((self.server_count, self.server_count), dtype=np.int64)
        np.add.at(a, (self.edges[:, 0], self.edges[:, 1]), self.edge_mult)
        return a + a.T

    def to_dict(self) -> dict:
        # canonical order: sorted by (u, v)
        order = np.lexsort((self.edges[:, 1], self.edges[:, 0]))
        pairs = []
        for (u, v), m in zip(self.edges[order].tolist(), self.edge_mult[order].tolist()):
            pairs.extend([[u, v]] * m)
        return {
            "servers": self.server_count,
            "radices": list(self.radices),
            "edges": pairs,
            "hyperedges": [h.tolist() for h in self.hyperedges],
            "switches": [{"attached": sw.attached.tolist()} for sw in self.switches],
            "cut_model": self.cut_model.value,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> Topology:
        """Rebuild from the JSON export.

        Dimension labels are recovered from the radices: an element belongs
        to the single coordinate its members differ in.
        """
        n = int(data["servers"])
        radices = tuple(int(k) for k in data["radices"])
        if math.prod(radices) != n:
            raise ValueError("radices do not multiply to the server count")
        coords = coords_array(radices)

        def dim_of(members: Sequence[int]) -> int:
            c = coords[list(members)]
            varying = np.flatnonzero((c != c[0]).any(axis=0))
            if len(varying) != 1:
                raise ValueError(f"element {list(members)} is not aligned with one dimension")
            return int(varying[0])

        raw = [tuple(sorted((int(u), int(v)))) for u, v in data.get("edges", [])]
        for u, v in raw:
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise ValueError(f"bad edge ({u}, {v})")
        edges, mult, dims = _collapse(raw, [dim_of(e) for e in raw])
        hyper = tuple(np.array(sorted(h), dtype=np.int64) for h in data.get("hyperedges", []))
        switches = tuple(
            Switch(i, np.array(sorted(s["attached"]), dtype=np.int64), dim_of(s["attached"]))
            for i, s in enumerate(data.get("switches", []))
        )
        return cls(
            server_count=n,
            radices=radices,
            edges=edges,
            edge_mult=mult,
            edge_dim=dims,
            hyperedges=hyper,
            hyperedge_dim=tuple(dim_of(h) for h in hyper),
            switches=switches,
            cut_model=CutModel(data["cut_model"]),
        )


def _collapse(pairs: Iterable[tuple[int, int]], dims: Iterable[int]):
    counts: dict[tuple[int, int, int], int] = {}
    for (u, v), dim in zip(pairs, dims):
        key = (min(u, v), max(u, v), dim)
        counts[key] = counts.get(key, 0) + 1
    keys = sorted(counts)
    edges = np.array([(u, v) for u, v, _ in keys], dtype=np.int64).reshape(-1, 2)
    mult = np.array([counts[key] for key in keys], dtype=np.int64)
    dim_arr = np.array([dim for _, _, dim in keys], dtype=np.int64)
    return edges, mult, dim_arr


# ---------------------------------------------------------------------------
# factor graphs


@lru_cache(maxsize=1024)
def factor_edges(spec: FactorSpec) -> tuple[tuple[int, int, int], ...]:
    """Plain edges of a factor as (u, v, multiplicity) with u < v, 0-based,
    sorted."""
    k = spec.k
    kind = spec.kind
    if kind is Kind.PATH:
        return tuple((i, i + 1, 1) for i in range(k - 1))
    if kind is Kind.RING:
        if k == 2:
            # (0,1) and (1,0) are the same pair: one double edge
            return ((0, 1, 2),)
        return tuple(sorted([(i, i + 1, 1) for i in range(k - 1)] + [(0, k - 1, 1)]))
    if kind in (Kind.CBT, Kind.XT):
        # heap numbering 1..k stored 0-based
        raw = [(i - 1, c - 1, 1) for i in range(1, k // 2 + 1) for c in (2 * i, 2 * i + 1)]
        if kind is Kind.XT and k > 1:
            first_leaf = (k + 1) // 2
            raw += [(i - 1, i, 1) for i in range(first_leaf, k)]
        return tuple(sorted(raw))
    if kind in (Kind.CLIQUE, Kind.RCLIQUE):
        r = spec.r if kind is Kind.RCLIQUE else 1
        return tuple((i, j, r) for i in range(k) for j in range(i + 1, k))
    return ()


def build_factor(spec: FactorSpec) -> Topology:
    """One-dimensional topology of a single factor (no sorting constraint)."""
    return _materialize((spec,))


def cartesian_product(spec: ProductSpec) -> Topology:
    return _materialize(spec.factors)


def _materialize(factors: Sequence[FactorSpec]) -> Topology:
    kinds = {f.kind for f in factors}
    if Kind.SSA in kinds and Kind.SSB in kinds:
        raise MixedSwitchModels("SSA and SSB factors cannot be combined")
    radices = tuple(f.k for f in factors)
    n = math.prod(radices)
    if n > MAX_MATERIALIZED:
        raise Overflow(f"n = {n} exceeds the materialization limit {MAX_MATERIALIZED}")

    index = np.arange(n, dtype=np.int64)
    edge_parts, mult_parts, dim_parts = [], [], []
    hyperedges, hyper_dims, switches = [], [], []
    stride = n
    for dim, f in enumerate(factors):
        stride //= f.k
        # one base vertex per copy of this factor: digit `dim` equal to zero
        base = index[(index // stride) % f.k == 0]
        if f.kind is Kind.SSA or f.kind is Kind.SSB:
            members = base[:, None] + np.arange(f.k, dtype=np.int64)[None, :] * stride
            for row in members:
                if f.kind is Kind.SSA:
                    switches.append(Switch(len(switches), row.copy(), dim))
                else:
                    hyperedges.append(row.copy())
                    hyper_dims.append(dim)
            continue
        for u, v, m in factor_edges(f):
            edge_parts.append(np.stack([base + u * stride, base + v * stride], axis=1))
            mult_parts.append(np.full(len(base), m, dtype=np.int64))
            dim_parts.append(np.full(len(base), dim, dtype=np.int64))

    if edge_parts:
        edges = np.concatenate(edge_parts)
        mult = np.concatenate(mult_parts)
        dims = np.concatenate(dim_parts)
    else:
        edges = np.zeros((0, 2), dtype=np.int64)
        mult = np.zeros(0, dtype=np.int64)
        dims = np.zeros(0, dtype=np.int64)

    if switches:
        model = CutModel.STAR
    elif hyperedges:
        model = CutModel.HYPER
    else:
        model = CutModel.PLAIN
    return Topology(
        server_count=n,
        radices=radices,
        edges=edges,
        edge_mult=mult,
        edge_dim=dims,
        hyperedges=tuple(hyperedges),
        hyperedge_dim=tuple(hyper_dims),
        switches=tuple(switches),
        cut_model=model,
    )
