"""Empirical audits of typical Ferrers shapes and of packing window density.

The lemma1 audit measures, over an exhaustive or sampled population of
shapes of size n, how many violate two named properties:

* property i  -- the first row length x1 and first column length y1 both
  lie strictly inside (c1*sqrt(n)*ln(n), c2*sqrt(n)*ln(n));
* property iii -- the shape has at least c3*sqrt(n) parts of size at
  least c3*sqrt(n).

The middle property is reported as a statistic rather than a pass/fail:
the number of boxes outside the apex-anchored square of side
floor(epsilon*sqrt(n)*ln(n)). All logarithms are natural.

The lemma2 audit slides square windows of side floor(0.8*c1*sqrt(n)*ln(n))
over a packing and reports the maximum covered area, normalized by n*ln(n).
"""
from __future__ import annotations

import csv
import io
import math
import random
from dataclasses import dataclass, field
from typing import Optional

from .errors import DegenerateWindowError
from .geometry import Packing, occupied_row_intervals
from .partitions import (
    DEFAULT_ENUMERATION_CAP,
    Partition,
    exact_p,
    iter_partition_tuples,
)
from .sampling import PartitionSampler, SamplerSpec


@dataclass(frozen=True)
class AuditConstants:
    c1: float = 0.1
    c2: float = 4.0
    c3: float = 0.001
    epsilon: float = 0.25


def first_extents_in_band(p: Partition, c1: float, c2: float) -> bool:
    """Property i: x1 and y1 strictly inside (c1*sqrt(n)*ln n, c2*sqrt(n)*ln n)."""
    return _extents_in_band(p.parts, p.n, c1, c2)


def _extents_in_band(parts: tuple[int, ...], n: int, c1: float, c2: float) -> bool:
    scale = math.sqrt(n) * math.log(n)
    lo, hi = c1 * scale, c2 * scale
    x1 = parts[0]
    y1 = len(parts)
    return lo < x1 < hi and lo < y1 < hi


def area_outside_apex_square(p: Partition, epsilon: float) -> int:
    """Boxes of the shape outside the apex square of side floor(eps*sqrt(n)*ln n).

    The square occupies rows 0..s-1 and columns 0..s-1 (0-based).
    """
    return _area_outside(p.parts, p.n, epsilon)


def _area_outside(parts: tuple[int, ...], n: int, epsilon: float) -> int:
    s = int(epsilon * math.sqrt(n) * math.log(n))
    return sum(max(0, x - s) for x in parts[:s]) + sum(parts[s:])


def has_core_square(p: Partition, c3: float) -> bool:
    """Property iii: at least c3*sqrt(n) parts of size at least c3*sqrt(n)."""
    return _has_core(p.parts, p.n, c3)


def _has_core(parts: tuple[int, ...], n: int, c3: float) -> bool:
    t = c3 * math.sqrt(n)
    count = 0
    for x in parts:
        if x < t:
            break
        count += 1
    return count >= t


@dataclass(frozen=True)
class LemmaOneReport:
    n: int
    sample_size: int
    method: str  # "exhaustive", "exact_dp" or "boltzmann"
    seed: Optional[int]
    c1: float
    c2: float
    c3: float
    epsilon: float
    frac_violating_i: float
    frac_violating_iii: float
    mean_area_outside: float
    max_area_outside: int
    exhaustive: bool

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "sample_size": self.sample_size,
            "method": self.method,
            "seed": self.seed,
            "c1": self.c1,
            "c2": self.c2,
            "c3": self.c3,
            "epsilon": self.epsilon,
            "frac_violating_i": self.frac_violating_i,
            "frac_violating_iii": self.frac_violating_iii,
            "mean_area_outside": self.mean_area_outside,
            "max_area_outside": self.max_area_outside,
            "exhaustive": self.exhaustive,
        }


LEMMA1_CSV_COLUMNS = (
    "n",
    "sample_size",
    "method",
    "seed",
    "c1",
    "c2",
    "c3",
    "epsilon",
    "frac_violating_i",
    "frac_violating_iii",
    "mean_area_outside",
    "max_area_outside",
    "exhaustive",
)


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    if value is None:
        return ""
    return str(value)


def lemma1_reports_to_csv(reports: list[LemmaOneReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(LEMMA1_CSV_COLUMNS)
    for r in reports:
        writer.writerow([_fmt(getattr(r, col)) for col in LEMMA1_CSV_COLUMNS])
    return buf.getvalue()


def audit_lemma1(
    n: int,
    constants: AuditConstants = AuditConstants(),
    *,
    exhaustive: bool = False,
    sample_size: int = 10_000,
    method: str = "exact_dp",
    seed: int = 0,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
) -> LemmaOneReport:
    """Evaluate the three properties over a shape population of size n.

    Exhaustive mode walks every partition of n (population = p(n));
    otherwise ``sample_size`` draws come from the requested sampler.
    """
    viol_i = 0
    viol_iii = 0
    area_sum = 0
    area_max = 0
    count = 0
    c1, c2, c3, eps = constants.c1, constants.c2, constants.c3, constants.epsilon
    if exhaustive:
        if n > enumeration_cap:
            # iter_partition_tuples has no cap of its own; enforce the audit's
            from .errors import CapacityError

            raise CapacityError(
                f"exhaustive audit of n={n} exceeds the enumeration cap "
                f"{enumeration_cap}; sample instead or raise the cap"
            )
        populations = iter_partition_tuples(n)
    else:
        sampler = PartitionSampler(SamplerSpec(n, method=method, seed=seed))
        populations = (p.parts for p in sampler.draw_many(sample_size))
    for parts in populations:
        count += 1
        if not _extents_in_band(parts, n, c1, c2):
            viol_i += 1
        if not _has_core(parts, n, c3):
            viol_iii += 1
        out = _area_outside(parts, n, eps)
        area_sum += out
        if out > area_max:
            area_max = out
    if exhaustive and count != exact_p(n):
        raise AssertionError(f"enumeration produced {count} != p({n})")
    return LemmaOneReport(
        n=n,
        sample_size=count,
        method="exhaustive" if exhaustive else method,
        seed=None if exhaustive else seed,
        c1=c1,
        c2=c2,
        c3=c3,
        epsilon=eps,
        frac_violating_i=viol_i / count,
        frac_violating_iii=viol_iii / count,
        mean_area_outside=area_sum / count,
        max_area_outside=area_max,
        exhaustive=exhaustive,
    )


@dataclass(frozen=True)
class WindowAuditReport:
    n: int
    c1: float
    window_side: int
    windows_checked: int
    max_covered: int
    gamma_hat: float
    seed: int
    covered_samples: tuple[int, ...] = field(repr=False, default=())

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "c1": self.c1,
            "window_side": self.window_side,
            "windows_checked": self.windows_checked,
            "max_covered": self.max_covered,
            "gamma_hat": self.gamma_hat,
            "seed": self.seed,
        }


class _RowIntervalIndex:
    """Per-row sorted disjoint intervals of a packing, for fast window sums."""

    def __init__(self, pk: Packing):
        rows: dict[int, list[tuple[int, int]]] = {}
        for pl in pk.placements:
            for r, c0, c1 in occupied_row_intervals(pl):
                rows.setdefault(r, []).append((c0, c1))
        for ivs in rows.values():
            ivs.sort()
        self.rows = rows

    def covered_in_window(self, top: int, left: int, side: int) -> int:
        right = left + side
        total = 0
        for r in range(top, top + side):
            ivs = self.rows.get(r)
            if not ivs:
                continue
            # linear walk: interval counts per row are small and sorted
            for c0, c1 in ivs:
                if c0 >= right:
                    break
                if c1 > left:
                    total += min(c1, right) - max(c0, left)
        return total


def _grid_positions(extent: int, side: int, step: int) -> list[int]:
    out = list(range(0, extent - side + 1, step))
    if out[-1] != extent - side:
        out.append(extent - side)
    return out


def audit_lemma2_windows(
    pk: Packing,
    c1: float,
    window_count: int = 200,
    seed: int = 0,
    max_grid_windows: int = 20_000,
) -> WindowAuditReport:
    """Max covered area over square windows of side floor(0.8*c1*sqrt(n)*ln n).

    Checks ``window_count`` uniformly random positions plus a deterministic
    grid sweep, and reports gamma_hat = max / (n*ln n). The sweep stride is
    the window side, coarsened as needed to stay under ``max_grid_windows``.
    """
    n = pk.n
    side = int(0.8 * c1 * math.sqrt(n) * math.log(n))
    if side < 1:
        raise DegenerateWindowError(
            f"window side floor(0.8*{c1}*sqrt({n})*ln {n}) < 1; "
            f"use a larger n or a larger c1"
        )
    H, W = pk.rect.height, pk.rect.width
    if side > H or side > W:
        raise DegenerateWindowError(
            f"window side {side} does not fit the {H}x{W} rectangle"
        )
    index = _RowIntervalIndex(pk)
    rng = random.Random(seed)
    positions = []
    for _ in range(window_count):
        positions.append((rng.randint(0, H - side), rng.randint(0, W - side)))
    full = ((H - side) // side + 1) * ((W - side) // side + 1)
    q = -(-full // max_grid_windows)
    factor = math.isqrt(q)
    if factor * factor < q:
        factor += 1
    tops = _grid_positions(H, side, side * factor)
    lefts = _grid_positions(W, side, side * factor)
    positions.extend((t, l) for t in tops for l in lefts)
    covered = tuple(index.covered_in_window(t, l, side) for t, l in positions)
    max_covered = max(covered) if covered else 0
    return WindowAuditReport(
        n=n,
        c1=c1,
        window_side=side,
        windows_checked=len(positions),
        max_covered=max_covered,
        gamma_hat=max_covered / (n * math.log(n)),
        seed=seed,
        covered_samples=covered,
    )
