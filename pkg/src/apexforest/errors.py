"""Exception types shared across the package."""

from __future__ import annotations


class SizeGuardError(ValueError):
    """An exact routine was asked to run beyond its supported input size."""

    def __init__(self, what: str, size: int, limit: int):
        super().__init__(f"{what}: size {size} exceeds limit {limit}")
        self.what = what
        self.size = size
        self.limit = limit


class NotABlockerError(ValueError):
    """A vertex set passed as a blocker leaves a cycle behind."""


class NotInClassError(ValueError):
    """The input graph has more disjoint cycles than the caller promised."""


class TruncationError(IndexError):
    """A power-series coefficient beyond the known truncation order was requested."""
