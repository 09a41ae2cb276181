"""Exception types raised by bwkit."""

from __future__ import annotations


class BwkitError(Exception):
    """Base class for all bwkit errors."""


class InvalidK(BwkitError, ValueError):
    pass


class Overflow(BwkitError, ValueError):
    pass


class MixedSwitchModels(BwkitError, ValueError):
    pass


class OutOfRange(BwkitError, IndexError):
    pass


class DimensionOutOfRange(OutOfRange):
    pass


class UnsupportedMultiplicity(BwkitError, ValueError):
    pass


class NotATree(BwkitError, ValueError):
    pass


class MixedBetaInStrictMode(BwkitError, ValueError):
    pass


class InvalidPartition(BwkitError, ValueError):
    pass


class WrongFamilies(BwkitError, ValueError):
    pass


class MissingCapacity(BwkitError, ValueError):
    pass


class TooLarge(BwkitError):
    """The exhaustive oracle refused an instance (server cap or subset budget)."""

    def __init__(self, message: str, n: int, subsets: int):
        super().__init__(message)
        self.n = n
        self.subsets = subsets
