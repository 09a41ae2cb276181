"""Exact bisection width by exhaustive enumeration, and cut evaluation.

Cut rules per topology element:

* plain edge: counts its multiplicity when its endpoints are split;
* switch (star model): costs ``min(a, m - a)`` where ``a`` of its ``m``
  attached servers lie in the set, i.e. the switch sits on the majority
  side and the minority links are cut;
* hyperedge: costs 1 when it has members on both sides.

Subsets are enumerated as bitmasks in vectorized numpy batches.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .errors import InvalidPartition, TooLarge
from .graph import CutModel, FactorSpec, Kind, ProductSpec, Topology, factor_edges

DEFAULT_CAP = 26
BATCH_BITS = 20


@dataclass(frozen=True)
class Partition:
    """One side of a cut: a set of server indices out of ``n``."""

    members: frozenset[int]
    n: int

    def __post_init__(self):
        members = frozenset(int(x) for x in self.members)
        object.__setattr__(self, "members", members)
        if any(not 0 <= x < self.n for x in members):
            raise InvalidPartition(f"members must lie in [0, {self.n})")

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> Partition:
        mask = np.asarray(mask, dtype=bool)
        return cls(frozenset(np.flatnonzero(mask).tolist()), len(mask))

    @property
    def size(self) -> int:
        return len(self.members)

    def mask(self) -> np.ndarray:
        out = np.zeros(self.n, dtype=bool)
        out[list(self.members)] = True
        return out

    def sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))


@dataclass(frozen=True)
class CutResult:
    width: int
    witness: Partition
    subsets_examined: int
    model: CutModel


def _check(t: Topology, s: Partition) -> np.ndarray:
    if s.n != t.server_count:
        raise InvalidPartition(f"partition is over {s.n} servers, topology has {t.server_count}")
    return s.mask()


def dimension_cuts(t: Topology, member: np.ndarray) -> np.ndarray:
    """Per-dimension cut of a boolean membership vector, shape (d,)."""
    member = np.asarray(member, dtype=bool)
    out = np.zeros(t.d, dtype=np.int64)
    if len(t.edges):
        crossing = member[t.edges[:, 0]] != member[t.edges[:, 1]]
        np.add.at(out, t.edge_dim[crossing], t.edge_mult[crossing])
    for h, dim in zip(t.hyperedges, t.hyperedge_dim):
        a = int(member[h].sum())
        if 0 < a < len(h):
            out[dim] += 1
    for sw in t.switches:
        a = int(member[sw.attached].sum())
        out[sw.dim] += min(a, len(sw.attached) - a)
    return out


def cut_size(t: Topology, s: Partition) -> int:
    return int(dimension_cuts(t, _check(t, s)).sum())


@lru_cache(maxsize=64)
def _factor_arrays(f: FactorSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    e = factor_edges(f)
    u = np.array([x[0] for x in e], dtype=np.int64)
    v = np.array([x[1] for x in e], dtype=np.int64)
    m = np.array([x[2] for x in e], dtype=np.int64)
    return u, v, m


def spec_dimension_cuts(spec: ProductSpec, member: np.ndarray) -> np.ndarray:
    """Per-dimension cut of a membership vector over ``spec``, shape (d,).

    Works line by line on the factor graphs instead of a materialized
    topology: the vector is viewed as (prefix, k_i, suffix) and every factor
    element is applied to all lines of dimension i at once.
    """
    member = np.asarray(member, dtype=bool)
    if member.shape != (spec.n,):
        raise InvalidPartition(f"membership vector must have length {spec.n}")
    out = np.zeros(spec.d, dtype=np.int64)
    outer = 1
    for i, f in enumerate(spec.factors):
        inner = spec.n // (outer * f.k)
        lines = member.reshape(outer, f.k, inner)
        if f.kind is Kind.SSA or f.kind is Kind.SSB:
            a = lines.sum(axis=1, dtype=np.int64)
            if f.kind is Kind.SSA:
                out[i] = np.minimum(a, f.k - a).sum()
            else:
                out[i] = np.count_nonzero((a > 0) & (a < f.k))
        else:
            u, v, m = _factor_arrays(f)
            if len(u):
                split = (lines[:, u, :] != lines[:, v, :]).sum(axis=(0, 2))
                out[i] = int(split @ m)
        outer *= f.k
    return out


def spec_cut_size(spec: ProductSpec, s: Partition | np.ndarray) -> int:
    member = s.mask() if isinstance(s, Partition) else s
    return int(spec_dimension_cuts(spec, member).sum())


# ---------------------------------------------------------------------------
# batched evaluation over bitmasks


def _mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << int(i)
    return m


class MaskEvaluator:
    """Evaluates cut sizes of many subsets at once, each a uint64 bitmask."""

    def __init__(self, t: Topology):
        if t.server_count > 63:
            raise TooLarge("bitmask evaluation supports at most 63 servers", t.server_count, 0)
        self.d = t.d
        self.edges = [(int(u), int(v), int(m), int(dim)) for (u, v), m, dim in
                      zip(t.edges.tolist(), t.edge_mult.tolist(), t.edge_dim.tolist())]
        self.hyper = [(_mask_of(h), dim) for h, dim in zip(t.hyperedges, t.hyperedge_dim)]
        self.switches = [(_mask_of(sw.attached), len(sw.attached), sw.dim) for sw in t.switches]

    def per_dimension(self, masks: np.ndarray) -> np.ndarray:
        """Cut contribution of each dimension, shape (d, len(masks))."""
        masks = masks.astype(np.uint64, copy=False)
        out = np.zeros((self.d, len(masks)), dtype=np.int64)
        one = np.uint64(1)
        for u, v, m, dim in self.edges:
            split = ((masks >> np.uint64(u)) ^ (masks >> np.uint64(v))) & one
            out[dim] += split.astype(np.int64) * m
        for hm, dim in self.hyper:
            inside = masks & np.uint64(hm)
            out[dim] += (inside != 0) & (inside != np.uint64(hm))
        for am, size, dim in self.switches:
            a = np.bitwise_count(masks & np.uint64(am)).astype(np.int64)
            out[dim] += np.minimum(a, size - a)
        return out

    def total(self, masks: np.ndarray) -> np.ndarray:
        masks = masks.astype(np.uint64, copy=False)
        out = np.zeros(len(masks), dtype=np.int64)
        one = np.uint64(1)
        for u, v, m, _ in self.edges:
            split = ((masks >> np.uint64(u)) ^ (masks >> np.uint64(v))) & one
            if m == 1:
                out += split.astype(np.int64)
            else:
                out += split.astype(np.int64) * m
        for hm, _ in self.hyper:
            inside = masks & np.uint64(hm)
            out += (inside != 0) & (inside != np.uint64(hm))
        for am, size, _ in self.switches:
            a = np.bitwise_count(masks & np.uint64(am)).astype(np.int64)
            out += np.minimum(a, size - a)
        return out


def subset_masks(n: int, size: int, fix_first: bool = False, batch_bits: int = BATCH_BITS):
    """Yield uint64 arrays holding every ``size``-subset of ``range(n)``.

    With ``fix_first`` only subsets containing element 0 are produced. Within
    and across batches masks come out in increasing integer order.
    """
    if fix_first:
        for block in subset_masks(n - 1, size - 1, False, batch_bits):
            yield (block << np.uint64(1)) | np.uint64(1)
        return
    if size < 0 or size > n:
        return
    if size == 0:
        yield np.zeros(1, dtype=np.uint64)
        return
    total = 1 << n
    step = 1 << batch_bits
    lo = (1 << size) - 1
    hi = ((1 << size) - 1) << (n - size)
    start = lo - lo % step
    while start <= hi:
        stop = min(start + step, total)
        block = np.arange(start, stop, dtype=np.uint64)
        yield block[np.bitwise_count(block) == size]
        start = stop


def lex_key(masks: np.ndarray, n: int) -> np.ndarray:
    """Bit-reversed masks: larger key means lexicographically smaller sorted subset."""
    masks = masks.astype(np.uint64, copy=False)
    key = np.zeros(len(masks), dtype=np.uint64)
    one = np.uint64(1)
    for i in range(n):
        key |= ((masks >> np.uint64(i)) & one) << np.uint64(n - 1 - i)
    return key


def _scan(t: Topology, n: int, size: int, fix_first: bool, part: int, parts: int):
    ev = MaskEvaluator(t)
    best = None
    best_key = None
    best_mask = 0
    count = 0
    for j, block in enumerate(subset_masks(n, size, fix_first)):
        if j % parts != part or not len(block):
            continue
        count += len(block)
        cuts = ev.total(block)
        lo = int(cuts.min())
        if best is not None and lo > best:
            continue
        cands = block[cuts == lo]
        key = lex_key(cands, n)
        k = int(key.max())
        if best is None or lo < best or k > best_key:
            best, best_key = lo, k
            best_mask = int(cands[int(key.argmax())])
    return best, best_key, best_mask, count


def search_space(n: int) -> int:
    h = n // 2
    if n % 2 == 0 and n > 0:
        return math.comb(n - 1, h - 1)
    return math.comb(n, h)


def exact_bisection_width(
    t: Topology,
    budget: int | None = None,
    cap: int = DEFAULT_CAP,
    jobs: int = 1,
) -> CutResult:
    """Minimum cut over every subset of floor(n/2) servers.

    For even n the complement of a bisection is also a bisection, so only
    subsets containing server 0 are scanned; the reported witness is then the
    lexicographically least optimal subset among those. The result does not
    depend on ``jobs``.
    """
    n = t.server_count
    subsets = search_space(n)
    if n > cap:
        raise TooLarge(f"{n} servers exceeds the oracle cap of {cap}", n, subsets)
    if budget is not None and subsets > budget:
        raise TooLarge(f"{subsets} subsets exceeds the budget of {budget}", n, subsets)
    h = n // 2
    if n < 2:
        return CutResult(0, Partition(frozenset(), n), 1, t.cut_model)
    fix = n % 2 == 0
    jobs = max(1, int(jobs))
    if jobs == 1:
        results = [_scan(t, n, h, fix, 0, 1)]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_scan, t, n, h, fix, p, jobs) for p in range(jobs)]
            results = [f.result() for f in futures]
    results = [r for r in results if r[0] is not None]
    width, _, mask, _ = min(results, key=lambda r: (r[0], -r[1]))
    examined = sum(r[3] for r in results)
    witness = Partition(frozenset(i for i in range(n) if mask >> i & 1), n)
    return CutResult(width, witness, examined, t.cut_model)


def default_jobs() -> int:
    return os.cpu_count() or 1
