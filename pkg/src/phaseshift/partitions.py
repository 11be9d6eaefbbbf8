"""Integer-partition multiplicity tuples and their series coefficients.

Order n of the phase-shift series sums over all ways to write n as a sum of
positive parts; each way is encoded by how many parts of each size appear,
a multiplicity tuple (i_1, ..., i_n) with sum(p * i_p) = n.  The weight each
tuple carries is the corresponding coefficient of the formal logarithm,

    (-1)^(j-1) * (j-1)! / (i_1! i_2! ... i_n!),   j = sum(i_p).

Enumeration is by recursive descent over the largest part, which is both the
standard partition algorithm and a stable deterministic order for golden
tests.  Counts stay tiny at the supported orders (627 tuples at n = 20), so
no generating-function machinery is warranted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import OrderOutOfRange

#: factorials stay exactly representable in a double through this order
MAX_ORDER = 20


@dataclass(frozen=True)
class PartitionTuple:
    """Multiplicity encoding of one partition of n.

    Attributes
    ----------
    multiplicities : tuple of int
        (i_1, ..., i_n); entry p-1 counts the parts of size p.
    j : int
        Total number of parts, sum(i_p).
    coefficient : float
        (-1)^(j-1) (j-1)! / prod(i_p!), exact in double precision for
        n <= MAX_ORDER.
    """

    multiplicities: tuple
    j: int
    coefficient: float

    def __post_init__(self) -> None:
        n = len(self.multiplicities)
        weighted = sum(p * i for p, i in enumerate(self.multiplicities, start=1))
        if weighted != n:
            raise ValueError(
                f"multiplicities {self.multiplicities} do not partition {n}"
            )
        if self.j != sum(self.multiplicities):
            raise ValueError("part count j disagrees with multiplicities")


def log_derivative_coefficient(t: PartitionTuple) -> float:
    """Coefficient (-1)^(j-1) (j-1)! / prod(i_p!) of a multiplicity tuple."""
    denom = 1
    for i in t.multiplicities:
        denom *= math.factorial(i)
    value = Fraction(math.factorial(t.j - 1), denom)
    if t.j % 2 == 0:
        value = -value
    return float(value)


def _make_tuple(n: int, counts: dict) -> PartitionTuple:
    mult = tuple(counts.get(p, 0) for p in range(1, n + 1))
    j = sum(mult)
    raw = PartitionTuple(mult, j, 0.0)
    return PartitionTuple(mult, j, log_derivative_coefficient(raw))


def enumerate_partitions(n: int) -> list:
    """All multiplicity tuples for order `n`, largest part descending.

    The first tuple is always the single part (0, ..., 0, 1) and the last is
    all ones (n, 0, ..., 0).  Every tuple appears exactly once; the list
    length is the partition number p(n).

    Raises
    ------
    OrderOutOfRange
        If n is outside 1 .. MAX_ORDER.
    """
    if not 1 <= n <= MAX_ORDER:
        raise OrderOutOfRange(f"order must be in 1..{MAX_ORDER}, got {n}")

    out = []

    def descend(remaining: int, largest: int, counts: dict) -> None:
        if remaining == 0:
            out.append(_make_tuple(n, counts))
            return
        for part in range(min(remaining, largest), 0, -1):
            counts[part] = counts.get(part, 0) + 1
            descend(remaining - part, part, counts)
            counts[part] -= 1

    descend(n, n, {})
    return out
