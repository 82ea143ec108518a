"""Exact edge/path weights with a deterministic tiebreak component.

A weight is a pair (base, tie): `base` is the scaled-integer length and `tie`
is an arbitrary-precision integer holding one bit per contributing edge.
Weights add component-wise and compare lexicographically, so two paths with
different edge sets can never compare equal while base-length order is
preserved. Scalar thresholds (covering radii, 2^i bounds) are always checked
against `base` alone; `tie` exists only to make argmins unique.
"""

from fractions import Fraction
from typing import NamedTuple


class PerturbedWeight(NamedTuple):
    base: int
    tie: int

    def __add__(self, other):  # type: ignore[override]
        return PerturbedWeight(self.base + other[0], self.tie + other[1])


ZERO = PerturbedWeight(0, 0)


def ceil_log2(x: int) -> int:
    """Smallest i >= 0 with 2**i >= x, for x >= 1."""
    if x < 1:
        raise ValueError("ceil_log2 requires x >= 1")
    return (x - 1).bit_length()


def ceil_log2_fraction(q: Fraction) -> int:
    """Smallest i >= 0 with 2**i >= q; clamps to 0 for q <= 1."""
    if q <= 1:
        return 0
    i = 0
    num, den = q.numerator, q.denominator
    while (den << i) < num:
        i += 1
    return i


def floor_log2(x: int) -> int:
    if x < 1:
        raise ValueError("floor_log2 requires x >= 1")
    return x.bit_length() - 1
