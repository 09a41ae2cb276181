"""Psi, dimension-normalized boundaries, and the product-network bounds.

All arithmetic is exact (int / Fraction).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import factors
from .errors import DimensionOutOfRange, MixedBetaInStrictMode, OutOfRange
from .factors import sigma
from .graph import ProductSpec, Topology
from .oracle import Partition, dimension_cuts

STRICT = "strict"
GENERALIZED = "generalized"


@dataclass(frozen=True)
class PsiValue:
    alpha: int
    c: tuple[int, ...]
    psi: int


@dataclass(frozen=True)
class BoundaryProfile:
    per_dim: tuple[int, ...]
    normalized: Fraction


@dataclass(frozen=True)
class LowerBound:
    value: Fraction
    mode: str

    @property
    def ceil(self) -> int:
        return math.ceil(self.value)

    @property
    def derived_extension(self) -> bool:
        return self.mode == GENERALIZED


def suffix_products(radices: Sequence[int]) -> tuple[int, ...]:
    """C_i = prod_{j>i} k_j for i = 1..d (so C_d = 1)."""
    out = [1] * len(radices)
    for i in range(len(radices) - 2, -1, -1):
        out[i] = out[i + 1] * radices[i + 1]
    return tuple(out)


def psi(spec: ProductSpec) -> PsiValue:
    c = suffix_products(spec.radices)
    return PsiValue(spec.alpha, c, sum(c[: spec.alpha]))


def lex_prefix_partition(spec: ProductSpec, size: int) -> Partition:
    n = spec.n
    if not 0 <= size <= n:
        raise OutOfRange(f"prefix size {size} outside [0, {n}]")
    return Partition(frozenset(range(size)), n)


def dimension_boundary(t: Topology, spec: ProductSpec, s: Partition, i: int) -> int:
    """|boundary of s| restricted to dimension i (1-based)."""
    if not 1 <= i <= spec.d:
        raise DimensionOutOfRange(f"dimension {i} outside [1, {spec.d}]")
    if t.radices != spec.radices:
        raise ValueError("topology was not built from this spec")
    return int(dimension_cuts(t, s.mask())[i - 1])


def normalized_boundary(radices: Sequence[int], per_dim: Sequence[int]) -> Fraction:
    return sum((Fraction(b, sigma(k)) for b, k in zip(per_dim, radices)), Fraction(0))


def hamming_prefix_boundary(spec: ProductSpec, r: int = 1) -> BoundaryProfile:
    """Boundary of the first floor(n/2) vertices of the r-Hamming graph with
    the spec's radices, per dimension, in closed form."""
    ks = spec.radices
    c = suffix_products(ks)
    per_dim = []
    for i, (k, ci) in enumerate(zip(ks, c), start=1):
        if i > spec.alpha:
            per_dim.append(0)
        elif k % 2 == 0:
            per_dim.append(r * (k // 2) * ci * (k // 2))
        else:
            per_dim.append(r * ((k - 1) // 2) * ci * ((k + 1) // 2))
    return BoundaryProfile(tuple(per_dim), normalized_boundary(ks, per_dim))


# ---------------------------------------------------------------------------
# lower bound


def _unit_beta(f) -> Fraction:
    # beta_r / r: invariant under the (linear) rescaling of r for every family
    return factors.normalized_congestion(f) / f.r


def common_multiplicity(spec: ProductSpec) -> int:
    return math.lcm(*(f.r for f in spec.factors))


def scaled_betas(spec: ProductSpec, r: int | None = None) -> tuple[int, tuple[Fraction, ...]]:
    """Per-factor beta at a shared multiplicity (default: lcm of the factors' r).

    A factor's beta is rescaled linearly from its own r. That is exact for
    unique-route families and an upper estimate for rings/XTs, which keeps
    every bound derived from it valid.
    """
    if r is None:
        r = common_multiplicity(spec)
    return r, tuple(r * _unit_beta(f) for f in spec.factors)


def is_uniform(spec: ProductSpec) -> bool:
    pairs = {(f.r, factors.normalized_congestion(f)) for f in spec.factors}
    return len(pairs) == 1


def lower_bound(spec: ProductSpec, mode: str | None = None) -> LowerBound:
    """r/(4 beta) * Psi(alpha).

    ``strict`` needs every factor to share one (r, beta). ``generalized``
    divides by the largest per-unit-r beta instead, which is still a valid
    bound for mixed products. ``None`` picks strict when it applies.
    """
    p = psi(spec).psi
    uniform = is_uniform(spec)
    if mode is None:
        mode = STRICT if uniform else GENERALIZED
    if mode == STRICT:
        if not uniform:
            raise MixedBetaInStrictMode(f"factors of {spec.label()} do not share one (r, beta)")
        f = spec.factors[0]
        beta = factors.normalized_congestion(f)
        return LowerBound(Fraction(f.r, 4) / beta * p, STRICT)
    if mode == GENERALIZED:
        worst = max(_unit_beta(f) for f in spec.factors)
        return LowerBound(Fraction(p) / (4 * worst), GENERALIZED)
    raise ValueError(f"unknown mode {mode!r}")


def upper_bound(spec: ProductSpec) -> int:
    return max(factors.central_cut(f) for f in spec.factors) * psi(spec).psi


# ---------------------------------------------------------------------------
# constructive bisection


def constructive_positions(spec: ProductSpec) -> np.ndarray:
    """Array-order rank of every vertex after relabelling factors by their
    central orders; shape (n,)."""
    ranks = np.zeros(spec.n, dtype=np.int64)
    index = np.arange(spec.n, dtype=np.int64)
    stride = spec.n
    for f in spec.factors:
        stride //= f.k
        digit = (index // stride) % f.k
        ranks += factors.relabel_positions(f)[digit] * stride
    return ranks


def constructive_bisection(spec: ProductSpec) -> Partition:
    """floor(n/2) vertices forming an array bisection lifted to the factors.

    In central-order coordinates this is the lexicographic prefix: dimension 1
    is split in half and, when k_1 is odd, the middle hyperplane is split the
    same way recursively.
    """
    return Partition.from_mask(constructive_mask(spec))


def constructive_mask(spec: ProductSpec) -> np.ndarray:
    """Membership vector of ``constructive_bisection``."""
    return constructive_positions(spec) < spec.n // 2


def constructive_dimension_cuts(spec: ProductSpec) -> tuple[int, ...]:
    """Per-dimension cut of ``constructive_bisection`` without building it.

    The set is a lexicographic prefix of length N = floor(n/2) in
    central-order coordinates. Along dimension i write
    N = A*k_i*C_i + B*C_i + Q. Lines before prefix A are full and lines after
    it empty (no cut); of the C_i lines at prefix A, Q hold the first B+1
    central-order vertices and the rest hold B.
    """
    target = spec.n // 2
    c = suffix_products(spec.radices)
    out = []
    for f, ci in zip(spec.factors, c):
        rem = target % (f.k * ci)
        b, q = divmod(rem, ci)
        pc = factors.prefix_cuts(f)
        out.append(q * pc[b + 1] + (ci - q) * pc[b] if q else ci * pc[b])
    return tuple(out)


def constructive_cut(spec: ProductSpec) -> int:
    return sum(constructive_dimension_cuts(spec))

