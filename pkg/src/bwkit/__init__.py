"""Bisection width toolkit for Cartesian-product interconnection networks."""

from .graph import (
    CutModel,
    FactorSpec,
    Kind,
    ProductSpec,
    Topology,
    build_factor,
    cartesian_product,
    coord_of,
    factor,
    index_of,
)
from .oracle import CutResult, Partition, cut_size, exact_bisection_width

__all__ = [
    "CutModel",
    "CutResult",
    "FactorSpec",
    "Kind",
    "Partition",
    "ProductSpec",
    "Topology",
    "build_factor",
    "cartesian_product",
    "coord_of",
    "cut_size",
    "exact_bisection_width",
    "factor",
    "index_of",
]
