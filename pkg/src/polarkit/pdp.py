"""Partial distance profiles, error exponents, and shipped target profiles."""

from __future__ import annotations

import math
from dataclasses import dataclass

from polarkit.gf2 import BitMatrix, coset_min_distance, rank


class SingularKernelError(ValueError):
    """Raised when a square kernel matrix is not full rank."""


@dataclass(frozen=True)
class PartialDistanceProfile:
    ell: int
    distances: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.distances) != self.ell:
            raise ValueError("profile length must equal ell")
        if any(not 1 <= d <= self.ell for d in self.distances):
            raise ValueError("every partial distance must lie in [1, ell]")


@dataclass(frozen=True)
class KernelRecord:
    matrix: BitMatrix
    pdp: PartialDistanceProfile
    exponent: float
    complexity: int | None = None


# Relaxed target profiles for widths 5..16 with their exponents (4 decimals).
# Widths 2..4 were filled in by one-off exhaustive enumeration over all
# non-singular matrices, maximizing the exponent (see tests for the oracle).
_TARGETS: dict[int, tuple[tuple[int, ...], float]] = {
    2: ((1, 2), 0.5000),
    3: ((1, 2, 2), 0.4206),
    4: ((1, 2, 2, 4), 0.5000),
    5: ((1, 2, 2, 2, 4), 0.4307),
    6: ((1, 2, 2, 2, 4, 4), 0.4513),
    7: ((1, 2, 2, 2, 4, 4, 4), 0.4580),
    8: ((1, 2, 2, 2, 4, 4, 4, 8), 0.5000),
    9: ((1, 2, 2, 2, 2, 4, 4, 6, 6), 0.4616),
    10: ((1, 2, 2, 2, 2, 4, 4, 4, 6, 8), 0.4692),
    11: ((1, 2, 2, 2, 2, 4, 4, 4, 6, 6, 8), 0.4775),
    12: ((1, 2, 2, 2, 2, 4, 4, 4, 4, 6, 6, 12), 0.4825),
    13: ((1, 2, 2, 2, 2, 4, 4, 4, 4, 6, 6, 8, 10), 0.4883),
    14: ((1, 2, 2, 2, 2, 4, 4, 4, 4, 6, 6, 8, 8, 8), 0.4910),
    15: ((1, 2, 2, 2, 2, 4, 4, 4, 4, 6, 6, 8, 8, 8, 8), 0.4978),
    16: ((1, 2, 2, 2, 2, 4, 4, 4, 4, 6, 6, 8, 8, 8, 8, 16), 0.5183),
}


def compute_pdp(kernel: BitMatrix) -> PartialDistanceProfile:
    """Distance from each row to the span of the rows below it."""
    ell = kernel.ncols
    if kernel.nrows != ell:
        raise SingularKernelError("kernel must be square")
    if rank(kernel.rows) != ell:
        raise SingularKernelError("kernel must be non-singular")
    distances = []
    for i in range(ell):
        distances.append(coset_min_distance(kernel.rows[i], kernel.rows[i + 1:]))
    return PartialDistanceProfile(ell, tuple(distances))


def error_exponent(pdp: PartialDistanceProfile) -> float:
    ell = pdp.ell
    return sum(math.log(d, ell) for d in pdp.distances) / ell


def target_profile(ell: int) -> PartialDistanceProfile:
    if ell not in _TARGETS:
        raise ValueError(f"unsupported kernel size {ell}; supported range is [2, 16]")
    return PartialDistanceProfile(ell, _TARGETS[ell][0])


def target_exponent(ell: int) -> float:
    """Tabulated exponent of the shipped target profile (4-decimal print)."""
    if ell not in _TARGETS:
        raise ValueError(f"unsupported kernel size {ell}; supported range is [2, 16]")
    return _TARGETS[ell][1]


def supported_sizes() -> list[int]:
    return sorted(_TARGETS)


def meets_target(kernel: BitMatrix, target: PartialDistanceProfile) -> bool:
    if kernel.ncols != target.ell:
        raise ValueError("kernel size and target size differ")
    return compute_pdp(kernel).distances == target.distances


def kernel_record(kernel: BitMatrix, complexity: int | None = None) -> KernelRecord:
    pdp = compute_pdp(kernel)
    return KernelRecord(kernel, pdp, error_exponent(pdp), complexity)
