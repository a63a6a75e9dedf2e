"""Integer partitions: exact representation, enumeration, counting, asymptotics.

A partition of n is held as a weakly decreasing tuple of positive parts.
Counting is exact (arbitrary precision) via Euler's pentagonal-number
recurrence, cross-checkable against a restricted-count table; the
first-order Hardy-Ramanujan formula gives the asymptotic estimate.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

import mpmath

from .errors import CapacityError

#: Largest n for which full enumeration is allowed by default.
DEFAULT_ENUMERATION_CAP = 60

#: Largest n served by the module-level exact_p() convenience table.
DEFAULT_COUNT_CAP = 10_000

#: Working precision (significant decimal digits) for the asymptotic estimate.
HR_WORKING_DPS = 60


@dataclass(frozen=True)
class Partition:
    """A partition of a non-negative integer, as weakly decreasing parts.

    Value type: two partitions are equal iff their parts are equal.
    """

    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(self.parts)
        object.__setattr__(self, "parts", parts)
        for i, x in enumerate(parts):
            if x < 1:
                raise ValueError(f"parts must be positive, got {x}")
            if i and parts[i - 1] < x:
                raise ValueError(f"parts must be weakly decreasing, got {parts}")

    @classmethod
    def _from_trusted(cls, parts: tuple[int, ...]) -> "Partition":
        # Fast path for generators that produce valid parts by construction.
        obj = object.__new__(cls)
        object.__setattr__(obj, "parts", parts)
        return obj

    @cached_property
    def n(self) -> int:
        """Total size (number of boxes of the Ferrers shape)."""
        return sum(self.parts)

    @property
    def num_parts(self) -> int:
        return len(self.parts)

    @property
    def first_part(self) -> int:
        """Width of the shape; 0 only for the empty partition."""
        return self.parts[0] if self.parts else 0

    def conjugate(self) -> "Partition":
        """Transpose partition: part j counts the rows of length >= j."""
        parts = self.parts
        if not parts:
            return _EMPTY
        counts = [0] * (parts[0] + 1)
        for x in parts:
            counts[x] += 1
        out = [0] * parts[0]
        acc = 0
        for j in range(parts[0], 0, -1):
            acc += counts[j]
            out[j - 1] = acc
        return Partition._from_trusted(tuple(out))

    def durfee_size(self) -> int:
        """Side of the largest square of boxes anchored at the apex."""
        d = 0
        parts = self.parts
        while d < len(parts) and parts[d] >= d + 1:
            d += 1
        return d

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


_EMPTY = Partition(())


def iter_partition_tuples(n: int) -> Iterator[tuple[int, ...]]:
    """All partitions of n as raw tuples, in descending lexicographic order."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        yield ()
        return
    parts = [n]
    while True:
        yield tuple(parts)
        # Strip trailing 1s, decrement the last part > 1, refill greedily.
        k = len(parts) - 1
        while k >= 0 and parts[k] == 1:
            k -= 1
        if k < 0:
            return
        rem = len(parts) - 1 - k + 1
        parts[k] -= 1
        m = parts[k]
        del parts[k + 1 :]
        parts.extend([m] * (rem // m))
        if rem % m:
            parts.append(rem % m)


def enumerate_partitions(n: int, cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[Partition]:
    """Every partition of n exactly once, in descending lexicographic order.

    Raises CapacityError when n exceeds ``cap`` (default
    DEFAULT_ENUMERATION_CAP); raise the cap explicitly for larger runs.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > cap:
        raise CapacityError(
            f"enumeration of n={n} exceeds the enumeration cap {cap}; "
            f"pass a larger cap to enumerate_partitions"
        )
    for parts in iter_partition_tuples(n):
        yield Partition._from_trusted(parts)


class PartitionCountTable:
    """Arbitrary-precision table of p(m) and restricted counts p(m, max part <= k).

    Unrestricted counts come from Euler's pentagonal-number recurrence.
    The restricted table is a second, independent recurrence
    (p(m,k) = p(m,k-1) + p(m-k,k)) built lazily on first use; rows are
    triangular since p(m,k) = p(m,m) for k >= m.
    """

    def __init__(self, max_n: int):
        if max_n < 0:
            raise ValueError("max_n must be >= 0")
        self.max_n = max_n
        self._counts = [1]  # p(0)
        self._rows: list[list[int]] = [[1]]  # row m: p(m, <=k) for k = 0..m

    def count(self, m: int) -> int:
        """Exact p(m) via the pentagonal recurrence."""
        self._check(m)
        counts = self._counts
        while len(counts) <= m:
            t = len(counts)
            total = 0
            j = 1
            sign = 1
            while True:
                g1 = j * (3 * j - 1) // 2
                if g1 > t:
                    break
                total += sign * counts[t - g1]
                g2 = j * (3 * j + 1) // 2
                if g2 <= t:
                    total += sign * counts[t - g2]
                sign = -sign
                j += 1
            counts.append(total)
        return counts[m]

    def count_with_max_part(self, m: int, k: int) -> int:
        """Restricted count p(m, max part <= k)."""
        self._check(m)
        if k < 0:
            raise ValueError("k must be >= 0")
        rows = self._rows
        while len(rows) <= m:
            t = len(rows)
            row = [0] * (t + 1)
            for j in range(1, t + 1):
                prev = rows[t - j]
                row[j] = row[j - 1] + prev[min(j, t - j)]
            rows.append(row)
        return rows[m][min(k, m)]

    def _check(self, m: int) -> None:
        if m < 0:
            raise ValueError("m must be >= 0")
        if m > self.max_n:
            raise CapacityError(
                f"m={m} exceeds this table's max_n cap {self.max_n}; "
                f"construct PartitionCountTable with a larger max_n"
            )


_default_table = PartitionCountTable(DEFAULT_COUNT_CAP)


def exact_p(n: int) -> int:
    """Exact number of partitions of n (module-level convenience table)."""
    return _default_table.count(n)


def hardy_ramanujan_estimate(n: int) -> mpmath.mpf:
    """First-order asymptotic estimate exp(C*sqrt(n)) / (4*n*sqrt(3)).

    C = pi*sqrt(2/3); evaluated at HR_WORKING_DPS significant digits.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    with mpmath.workdps(HR_WORKING_DPS):
        c = mpmath.pi * mpmath.sqrt(mpmath.mpf(2) / 3)
        return mpmath.exp(c * mpmath.sqrt(n)) / (4 * n * mpmath.sqrt(3))
