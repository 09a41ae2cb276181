"""Per-factor metrics: congestion, normalized congestion and central cut.

Congestion values are the closed forms for each family. Trees get an
independent check in :func:`unique_path_congestion_oracle`, which counts
the routes crossing every edge of a materialized tree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import InvalidK, NotATree, UnsupportedMultiplicity
from .graph import FactorSpec, Kind, Topology, factor_edges


def sigma(k: int) -> int:
    """k^2 for even k, k^2 - 1 for odd k."""
    return k * k if k % 2 == 0 else k * k - 1


@dataclass(frozen=True)
class FactorMetrics:
    m_r: int
    beta_r: Fraction
    cc: int
    r: int


def _multiplicity(spec: FactorSpec, r: int | None) -> int:
    r = spec.r if r is None else int(r)
    if r < 1:
        raise UnsupportedMultiplicity(f"multiplicity must be positive, got {r}")
    if spec.kind in (Kind.RING, Kind.XT) and r != 2:
        raise UnsupportedMultiplicity(f"{spec.kind.value} congestion is only defined at r = 2, got r = {r}")
    return r


def congestion(spec: FactorSpec, r: int | None = None) -> int:
    """Congestion m_r of embedding r parallel copies of K_k into the factor.

    ``r`` defaults to the spec's multiplicity. For rings and XTs the value
    is the dual-route embedding (one copy each way round), the working
    value behind their bounds.
    """
    r = _multiplicity(spec, r)
    k = spec.k
    kind = spec.kind
    if kind in (Kind.PATH, Kind.CBT):
        return r * (k * k // 4)
    if kind in (Kind.RING, Kind.XT):
        return k * k // 4
    if kind is Kind.CLIQUE:
        return r
    if kind is Kind.RCLIQUE:
        # each parallel copy of a pair rides its own parallel edge
        return -(-r // spec.r)
    if kind is Kind.SSA:
        return r * (k - 1)
    if kind is Kind.SSB:
        return r * k * (k - 1) // 2
    raise AssertionError(kind)


def normalized_congestion(spec: FactorSpec, r: int | None = None) -> Fraction:
    r = _multiplicity(spec, r)
    if spec.kind in (Kind.PATH, Kind.CBT):
        # m_r / sigma(k) = r/4 identically; also covers k = 1 where both vanish
        return Fraction(r, 4)
    if spec.kind is Kind.XT and spec.k == 1:
        return Fraction(1, 4)
    return Fraction(congestion(spec, r), sigma(spec.k))


def central_cut(spec: FactorSpec) -> int:
    k = spec.k
    if k < 2:
        raise InvalidK(f"central cut needs k >= 2, got {spec.label()}")
    kind = spec.kind
    if kind in (Kind.PATH, Kind.CBT):
        return 1
    if kind in (Kind.RING, Kind.XT):
        return 2
    if kind is Kind.SSA:
        return k // 2
    if kind is Kind.SSB:
        return 1
    half = k // 2
    balanced = half * (k - half)
    if kind is Kind.CLIQUE:
        return balanced
    if kind is Kind.RCLIQUE:
        return spec.r * balanced
    raise AssertionError(kind)


def metrics(spec: FactorSpec, r: int | None = None) -> FactorMetrics:
    r = _multiplicity(spec, r)
    return FactorMetrics(
        m_r=congestion(spec, r),
        beta_r=normalized_congestion(spec, r),
        cc=central_cut(spec),
        r=r,
    )


def unique_path_congestion_oracle(t: Topology, r: int = 1) -> int:
    """Max over tree edges of r * a * (k - a), a = size of one side of the edge.

    In a tree every pair has exactly one route, so an edge carries r routes
    for each pair it separates.
    """
    k = t.server_count
    if len(t.hyperedges) or len(t.switches):
        raise NotATree("switched topologies are not trees")
    if (t.edge_mult > 1).any() or len(t.edges) != k - 1:
        raise NotATree(f"{len(t.edges)} edges on {k} vertices is not a tree")
    adj: list[list[int]] = [[] for _ in range(k)]
    for u, v in t.edges.tolist():
        adj[u].append(v)
        adj[v].append(u)
    parent = [-1] * k
    seen = [False] * k
    order = []
    stack = [0]
    seen[0] = True
    while stack:
        u = stack.pop()
        order.append(u)
        for w in adj[u]:
            if not seen[w]:
                seen[w] = True
                parent[w] = u
                stack.append(w)
    if len(order) != k:
        raise NotATree("graph is disconnected")
    size = [1] * k
    for u in reversed(order):
        if parent[u] >= 0:
            size[parent[u]] += size[u]
    loads = [size[u] * (k - size[u]) for u in order if parent[u] >= 0]
    return r * max(loads, default=0)


# ---------------------------------------------------------------------------
# central orders


def _inorder(k: int) -> list[int]:
    out = []

    def walk(i: int) -> None:
        if i > k:
            return
        walk(2 * i)
        out.append(i - 1)
        walk(2 * i + 1)

    walk(1)
    return out


def _xt_order(k: int) -> list[int]:
    """Hamiltonian cycle of X_k opened so the root sits in the middle.

    The sequence is: left subtree (ending at the root's left child), root,
    right subtree (starting at the right child). Consecutive entries are
    XT-adjacent and so are the two ends (rightmost left leaf, leftmost
    right leaf).
    """
    if k == 1:
        return [0]
    first_leaf = (k + 1) // 2

    def is_leaf(i: int) -> bool:
        return i >= first_leaf

    # down_right(v): covers subtree(v) from v to its rightmost leaf
    # down_left(v):  covers subtree(v) from v to its leftmost leaf
    # sweep(v):      covers subtree(v) from leftmost leaf to rightmost leaf
    def down_right(v: int) -> list[int]:
        if is_leaf(v):
            return [v]
        return [v] + down_right(2 * v) + sweep(2 * v + 1)

    def down_left(v: int) -> list[int]:
        if is_leaf(v):
            return [v]
        return [v] + down_left(2 * v + 1) + sweep(2 * v)[::-1]

    def sweep(v: int) -> list[int]:
        if is_leaf(v):
            return [v]
        return down_left(2 * v)[::-1] + [v] + down_right(2 * v + 1)

    cycle = down_right(2)[::-1] + [1] + down_left(3)
    return [i - 1 for i in cycle]


@lru_cache(maxsize=4096)
def central_order(spec: FactorSpec) -> tuple[int, ...]:
    """Ordering whose first floor(k/2) and first ceil(k/2) vertices each cut
    at most ``central_cut(spec)`` of the factor."""
    k = spec.k
    if k < 2:
        raise InvalidK(f"central order needs k >= 2, got {spec.label()}")
    if spec.kind is Kind.CBT:
        return tuple(_inorder(k))
    if spec.kind is Kind.XT:
        return tuple(_xt_order(k))
    return tuple(range(k))


def relabel_positions(spec: FactorSpec) -> np.ndarray:
    """pos[v] = position of vertex v in the central order."""
    order = central_order(spec)
    pos = np.empty(spec.k, dtype=np.int64)
    pos[list(order)] = np.arange(spec.k)
    return pos


@lru_cache(maxsize=4096)
def _prefix_cuts(spec: FactorSpec) -> tuple[int, ...]:
    k = spec.k
    a = np.arange(k + 1, dtype=np.int64)
    if spec.kind in (Kind.CLIQUE, Kind.RCLIQUE):
        # every pair is an edge; avoids listing k^2 edges
        return tuple((spec.r * a * (k - a)).tolist())
    if spec.kind is Kind.SSA:
        return tuple(np.minimum(a, k - a).tolist())
    if spec.kind is Kind.SSB:
        return tuple(((a > 0) & (a < k)).astype(np.int64).tolist())
    pos = relabel_positions(spec)
    e = np.array(factor_edges(spec), dtype=np.int64).reshape(-1, 3)
    pu, pv = pos[e[:, 0]], pos[e[:, 1]]
    lo, hi = np.minimum(pu, pv), np.maximum(pu, pv)
    # an edge is split while lo is inside and hi outside: prefix length in (lo, hi]
    diff = np.zeros(k + 2, dtype=np.int64)
    np.add.at(diff, lo + 1, e[:, 2])
    np.add.at(diff, hi + 1, -e[:, 2])
    return tuple(np.cumsum(diff)[: k + 1].tolist())


def prefix_cuts(spec: FactorSpec) -> tuple[int, ...]:
    """cut[a] = cut of the factor when its first ``a`` central-order vertices
    are on one side, for a = 0..k."""
    return _prefix_cuts(spec)

