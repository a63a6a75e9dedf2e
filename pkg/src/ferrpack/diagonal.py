"""Diagonal chain packer and its density measurements.

Shapes that pass the extent-band filter are chained along diagonals: the
next shape's apex sits at the previous apex offset by (d, d), where d is
the previous shape's Durfee size. Box (d+1) of any row past the Durfee
square does not exist, so the offset placement provably cannot collide
with its predecessor; non-overlap is still asserted at runtime against
all previously placed shapes. A chain is cut and restarted at row 0 in a
fresh column strip whenever the next shape would run past the rectangle
height; strips are ceil(stride_slack * max shape width) columns apart.

Density is covered area over the ambient n x width_used rectangle; the
interesting quantity is density * ln(n), which the construction keeps
roughly flat as n grows.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence

from .audit import _extents_in_band
from .errors import ChainOverlapError
from .geometry import Packing, Placement, Rect, overlaps
from .partitions import DEFAULT_ENUMERATION_CAP, Partition, enumerate_partitions
from .sampling import DEFAULT_EXACT_SAMPLER_CAP, PartitionSampler, SamplerSpec

SHAPE_SOURCES = ("auto", "enumerated", "sampled")


@dataclass(frozen=True)
class PackerConfig:
    """Filter thresholds and strip geometry for the diagonal packer."""

    c1: float = 0.1
    c2: float = 4.0
    stride_slack: float = 2.0
    shape_source: str = "auto"
    sample_count: int = 200

    def __post_init__(self):
        if not self.c1 < self.c2:
            raise ValueError("PackerConfig requires c1 < c2")
        if self.stride_slack < 1:
            raise ValueError("stride_slack must be >= 1")
        if self.shape_source not in SHAPE_SOURCES:
            raise ValueError(
                f"unknown shape_source {self.shape_source!r}; expected one of {SHAPE_SOURCES}"
            )


@dataclass(frozen=True)
class DensityReport:
    n: int
    shapes_offered: int
    shapes_packed: int
    width_used: int
    density: float
    density_times_logn: float
    seed: Optional[int]


DENSITY_CSV_COLUMNS = (
    "n",
    "offered",
    "packed",
    "width_used",
    "density",
    "density_times_logn",
    "seed",
)


def density_reports_to_csv(reports: Sequence[DensityReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(DENSITY_CSV_COLUMNS)
    for r in reports:
        writer.writerow(
            [
                r.n,
                r.shapes_offered,
                r.shapes_packed,
                r.width_used,
                f"{r.density:.12g}",
                f"{r.density_times_logn:.12g}",
                "" if r.seed is None else r.seed,
            ]
        )
    return buf.getvalue()


def filter_reduced(shapes: Iterable[Partition], n: int, config: PackerConfig) -> list[Partition]:
    """Keep shapes whose width and height both sit strictly inside the band."""
    out = []
    for p in shapes:
        if p.n != n:
            raise ValueError(f"shape {p} has size {p.n}, expected {n}")
        if _extents_in_band(p.parts, n, config.c1, config.c2):
            out.append(p)
    return out


def pack_diagonal(
    shapes: Sequence[Partition],
    n: int,
    config: PackerConfig = PackerConfig(),
    seed: Optional[int] = None,
) -> tuple[Packing, DensityReport]:
    """Chain the shapes diagonally, in the given order; never drops a shape.

    Orientation is canonical-only (apex top-left). Every placement is
    asserted non-overlapping against all prior placements; a violation
    raises ChainOverlapError, which indicates a stride/offset bug rather
    than a recoverable input condition.
    """
    seen = set()
    for p in shapes:
        if p.n != n:
            raise ValueError(f"shape {p} has size {p.n}, expected {n}")
        if p.parts in seen:
            raise ValueError(f"duplicate shape {p} offered to the packer")
        seen.add(p.parts)
    placements: list[Placement] = []
    boxes: list[tuple[int, int, int, int]] = []
    if shapes:
        max_width = max(p.first_part for p in shapes)
        stride = math.ceil(config.stride_slack * max_width)
        # column bands index prior placements so each non-overlap assertion
        # only inspects bounding-box neighbours, not the whole packing
        bands: dict[int, list[int]] = {}
        strip_col = 0
        row = col = 0
        for p in shapes:
            k = len(p.parts)
            if row + k > n:
                strip_col += stride
                row, col = 0, strip_col
            pl = Placement(p, 0, row, col)
            box = (row, col, k, p.first_part)
            band_range = range(col // stride, (col + box[3] - 1) // stride + 1)
            candidates = sorted(
                {i for band in band_range for i in bands.get(band, ())}
            )
            for i in candidates:
                pbox = boxes[i]
                if (
                    box[0] < pbox[0] + pbox[2]
                    and pbox[0] < box[0] + box[2]
                    and box[1] < pbox[1] + pbox[3]
                    and pbox[1] < box[1] + box[3]
                    and overlaps(placements[i], pl)
                ):
                    prev = placements[i]
                    raise ChainOverlapError(
                        f"diagonal construction produced overlapping placements:\n"
                        f"  earlier: shape={prev.shape} anchor=({prev.row},{prev.col})\n"
                        f"  new:     shape={pl.shape} anchor=({pl.row},{pl.col})\n"
                        f"stride={stride} slack={config.stride_slack}"
                    )
            idx = len(placements)
            placements.append(pl)
            boxes.append(box)
            for band in band_range:
                bands.setdefault(band, []).append(idx)
            d = p.durfee_size()
            row += d
            col += d
    width_used = max((b[1] + b[3] for b in boxes), default=0)
    rect = Rect(n, max(1, width_used))
    packing = Packing(n=n, rect=rect, policy="fixed", placements=tuple(placements))
    packed = len(placements)
    density = (n * packed) / (n * width_used) if width_used else 0.0
    report = DensityReport(
        n=n,
        shapes_offered=len(shapes),
        shapes_packed=packed,
        width_used=width_used,
        density=density,
        density_times_logn=density * math.log(n),
        seed=seed,
    )
    return packing, report


def _derive_seed(rng_seed: int, n: int) -> int:
    # stable per-n stream: documented arithmetic, no global state
    return (rng_seed * 1_000_003 + n) & ((1 << 63) - 1)


def offered_shapes(
    n: int,
    config: PackerConfig,
    rng_seed: int = 0,
    sample_count: Optional[int] = None,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
) -> tuple[list[Partition], Optional[int]]:
    """Shape population for one n: enumerated when feasible, else sampled.

    Sampled draws are deduplicated and both paths are sorted widest-first
    so wide shapes anchor chains early. Returns (shapes, seed used or None).
    """
    count = config.sample_count if sample_count is None else sample_count
    enumerated = config.shape_source == "enumerated" or (
        config.shape_source == "auto" and n <= enumeration_cap
    )
    if enumerated:
        if n > enumeration_cap:
            raise ValueError(
                f"shape_source='enumerated' needs n <= {enumeration_cap}"
            )
        shapes = list(enumerate_partitions(n, cap=enumeration_cap))
        seed = None
    else:
        seed = _derive_seed(rng_seed, n)
        method = "exact_dp" if n <= DEFAULT_EXACT_SAMPLER_CAP else "boltzmann"
        sampler = PartitionSampler(SamplerSpec(n, method=method, seed=seed))
        shapes = sampler.draw_distinct(count)
    shapes.sort(key=lambda p: (-p.first_part, p.parts))
    return shapes, seed


def measure_density_curve(
    n_values: Sequence[int],
    per_n_sample_count: int,
    config: PackerConfig = PackerConfig(),
    rng_seed: int = 0,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
) -> list[DensityReport]:
    """Filter + pack at each n; deterministic for a fixed rng_seed."""
    reports = []
    for n in n_values:
        shapes, seed = offered_shapes(
            n, config, rng_seed, per_n_sample_count, enumeration_cap
        )
        kept = filter_reduced(shapes, n, config)
        _, report = pack_diagonal(kept, n, config, seed=seed)
        # offered counts the drawn population, before the band filter
        reports.append(replace(report, shapes_offered=len(shapes)))
    return reports


def pack_offered(
    n: int,
    config: PackerConfig = PackerConfig(),
    rng_seed: int = 0,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
) -> tuple[Packing, DensityReport]:
    """One-stop shop used by the CLI: source shapes, filter, pack."""
    shapes, seed = offered_shapes(n, config, rng_seed, None, enumeration_cap)
    kept = filter_reduced(shapes, n, config)
    packing, report = pack_diagonal(kept, n, config, seed=seed)
    return packing, replace(report, shapes_offered=len(shapes))
