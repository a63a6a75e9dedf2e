"""Uniform random generation of partitions of n.

Two interchangeable methods:

* ``exact_dp`` inverts the restricted-count table: the largest part is drawn
  with probability proportional to the number of partitions it leads to,
  then the remainder recurses. Exactly uniform; needs the O(n^2) table.
* ``boltzmann`` draws independent geometric multiplicities for each part
  size at the standard calibration rate and rejects until the total is
  exactly n. Exactly uniform conditioned on acceptance; the calibration
  only affects speed. Scales past the table cap.

Both are deterministic streams for a fixed seed.
"""
from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import RejectionBudgetError
from .partitions import Partition, PartitionCountTable

SAMPLER_METHODS = ("exact_dp", "boltzmann")

#: Largest n for which the exact_dp table is built by default.
DEFAULT_EXACT_SAMPLER_CAP = 1000

#: Rejection trials allowed per requested draw before giving up.
DEFAULT_TRIALS_PER_DRAW = 20_000

_BATCH = 2048


@dataclass(frozen=True)
class SamplerSpec:
    n: int
    method: str = "exact_dp"
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.method not in SAMPLER_METHODS:
            raise ValueError(
                f"unknown sampler method {self.method!r}; expected one of {SAMPLER_METHODS}"
            )


class PartitionSampler:
    """Uniform sampler over partitions of spec.n; one stream per instance."""

    def __init__(
        self,
        spec: SamplerSpec,
        exact_cap: int = DEFAULT_EXACT_SAMPLER_CAP,
        trials_per_draw: int = DEFAULT_TRIALS_PER_DRAW,
    ):
        self.spec = spec
        self.trials_per_draw = trials_per_draw
        if spec.method == "exact_dp":
            if spec.n > exact_cap:
                raise ValueError(
                    f"exact_dp sampling is limited to n <= {exact_cap} "
                    f"(table size is quadratic); use method='boltzmann'"
                )
            self._table = PartitionCountTable(spec.n)
            self._table.count_with_max_part(spec.n, spec.n)  # build rows up front
            self._rng = random.Random(spec.seed)
        else:
            self._np_rng = np.random.Generator(np.random.PCG64(spec.seed))
            n = spec.n
            ks = np.arange(1, n + 1)
            # calibration rate: expected total ~ n
            q = math.exp(-math.pi / math.sqrt(6.0 * n))
            self._ks = ks
            self._success = 1.0 - q ** ks
            self._buffer: deque[Partition] = deque()
            self._trials = 0
            self._accepted = 0

    def draw(self) -> Partition:
        if self.spec.method == "exact_dp":
            return self._draw_exact()
        return self._draw_boltzmann()

    def draw_many(self, count: int) -> list[Partition]:
        return [self.draw() for _ in range(count)]

    def draw_distinct(self, count: int) -> list[Partition]:
        """``count`` draws, deduplicated, first occurrence order."""
        seen = set()
        out = []
        for p in self.draw_many(count):
            if p.parts not in seen:
                seen.add(p.parts)
                out.append(p)
        return out

    def _draw_exact(self) -> Partition:
        table, rng = self._table, self._rng
        m, bound = self.spec.n, self.spec.n
        parts = []
        while m > 0:
            u = rng.randrange(table.count_with_max_part(m, bound))
            j = min(m, bound)
            while True:
                w = table.count_with_max_part(m - j, j)
                if u < w:
                    break
                u -= w
                j -= 1
            parts.append(j)
            m -= j
            bound = j
        return Partition._from_trusted(tuple(parts))

    def _draw_boltzmann(self) -> Partition:
        if not self._buffer:
            self._refill()
        return self._buffer.popleft()

    def _refill(self) -> None:
        n = self.spec.n
        trials_this_draw = 0
        while not self._buffer:
            if trials_this_draw >= self.trials_per_draw:
                rate = self._accepted / self._trials if self._trials else 0.0
                raise RejectionBudgetError(
                    f"no accepted sample in {trials_this_draw} trials at n={n} "
                    f"(overall acceptance rate {rate:.2e}); raise trials_per_draw",
                    acceptance_rate=rate,
                )
            mults = self._np_rng.geometric(self._success, size=(_BATCH, n)) - 1
            totals = mults @ self._ks
            self._trials += _BATCH
            trials_this_draw += _BATCH
            for row in mults[totals == n]:
                parts = []
                for k in range(n, 0, -1):
                    parts.extend([k] * int(row[k - 1]))
                self._buffer.append(Partition._from_trusted(tuple(parts)))
                self._accepted += 1


def sample_partition(spec: SamplerSpec) -> Partition:
    """First draw of the stream defined by ``spec`` (deterministic per seed)."""
    return PartitionSampler(spec).draw()
