"""Grid geometry of Ferrers shapes: orientations, placements, packings.

Coordinates are (row, col) with row 0 at the top. A placement never
materializes its cells as a set; all geometry works on one half-open
column interval per occupied row, so rectangles of astronomical width
(n x p(n)) stay cheap.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .partitions import Partition

# Orientation index bits: 4 = transpose, 2 = flip rows, 1 = flip cols.
# The eight values realize the dihedral group of the square; the anchor of a
# placement is always the image of the shape's apex, hence a cell of the shape.
ORIENTATIONS = tuple(range(8))

POLICIES = ("fixed", "rot180", "free")

_T = (0, 1, 1, 0)
_FR = (-1, 0, 0, 1)
_FC = (1, 0, 0, -1)
_ID = (1, 0, 0, 1)


def _matmul(m1, m2):
    a, b, c, d = m1
    e, f, g, h = m2
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _orientation_matrix(o: int):
    m = _T if o & 4 else _ID
    if o & 1:
        m = _matmul(_FC, m)
    if o & 2:
        m = _matmul(_FR, m)
    return m


_MATRICES = {o: _orientation_matrix(o) for o in ORIENTATIONS}
_MATRIX_TO_INDEX = {m: o for o, m in _MATRICES.items()}


def compose(outer: int, inner: int) -> int:
    """Orientation equivalent to applying ``inner`` first, then ``outer``."""
    return _MATRIX_TO_INDEX[_matmul(_MATRICES[outer], _MATRICES[inner])]


def inverse(o: int) -> int:
    a, b, c, d = _MATRICES[o]
    return _MATRIX_TO_INDEX[(a, c, b, d)]  # signed perms are orthogonal


def orientations_for_policy(policy: str) -> tuple[int, ...]:
    """fixed = canonical only; rot180 adds the point reflection; free = all 8."""
    if policy == "fixed":
        return (0,)
    if policy == "rot180":
        return (0, 3)
    if policy == "free":
        return ORIENTATIONS
    raise ValueError(f"unknown orientation policy {policy!r}; expected one of {POLICIES}")


@dataclass(frozen=True)
class Rect:
    height: int
    width: int

    def __post_init__(self):
        if self.height < 1 or self.width < 1:
            raise ValueError("Rect sides must be >= 1")

    @property
    def area(self) -> int:
        return self.height * self.width


@dataclass(frozen=True)
class Placement:
    """One shape anchored in the grid; the anchor is the oriented apex cell."""

    shape: Partition
    orientation: int
    row: int
    col: int

    def __post_init__(self):
        if not self.shape.parts:
            raise ValueError("cannot place the empty shape")
        if self.orientation not in ORIENTATIONS:
            raise ValueError(f"orientation must be in 0..7, got {self.orientation}")
        if self.row < 0 or self.col < 0:
            raise ValueError("anchor coordinates must be non-negative")

    def oriented_parts(self) -> tuple[int, ...]:
        """Row lengths of the oriented bounding box, top to bottom."""
        e = self.shape.conjugate().parts if self.orientation & 4 else self.shape.parts
        return tuple(reversed(e)) if self.orientation & 2 else e

    def bounding_box(self) -> tuple[int, int, int, int]:
        """(top, left, height, width) of the oriented shape in grid coords."""
        e = self.shape.conjugate().parts if self.orientation & 4 else self.shape.parts
        height, width = len(e), e[0]
        top = self.row - (height - 1) if self.orientation & 2 else self.row
        left = self.col - (width - 1) if self.orientation & 1 else self.col
        return top, left, height, width


def occupied_row_intervals(pl: Placement) -> list[tuple[int, int, int]]:
    """One (row, col_start, col_end) half-open interval per occupied row.

    O(number of rows of the oriented shape); interval lengths sum to n.
    """
    top, left, _, width = pl.bounding_box()
    right_justified = bool(pl.orientation & 1)
    out = []
    for i, length in enumerate(pl.oriented_parts()):
        if right_justified:
            out.append((top + i, left + width - length, left + width))
        else:
            out.append((top + i, left, left + length))
    return out


def placement_cells(pl: Placement) -> set[tuple[int, int]]:
    """Explicit cell set; linear in n, for small shapes and debugging."""
    return {
        (r, c) for r, c0, c1 in occupied_row_intervals(pl) for c in range(c0, c1)
    }


def overlaps(a: Placement, b: Placement) -> bool:
    """True iff the two occupied cell sets intersect (row-interval sweep)."""
    atop, aleft, ah, aw = a.bounding_box()
    btop, bleft, bh, bw = b.bounding_box()
    if atop + ah <= btop or btop + bh <= atop:
        return False
    if aleft + aw <= bleft or bleft + bw <= aleft:
        return False
    b_by_row = {r: (c0, c1) for r, c0, c1 in occupied_row_intervals(b)}
    for r, c0, c1 in occupied_row_intervals(a):
        iv = b_by_row.get(r)
        if iv is not None and c0 < iv[1] and iv[0] < c1:
            return True
    return False


@dataclass(frozen=True)
class Packing:
    """A rectangle plus pairwise distinct, non-overlapping placed shapes."""

    n: int
    rect: Rect
    policy: str
    placements: tuple[Placement, ...]

    def __post_init__(self):
        object.__setattr__(self, "placements", tuple(self.placements))

    @property
    def covered_area(self) -> int:
        return sum(pl.shape.n for pl in self.placements)


@dataclass
class ValidationReport:
    """All invariant violations found in a packing; empty report == valid."""

    wrong_size: list[int] = field(default_factory=list)
    out_of_bounds: list[int] = field(default_factory=list)
    duplicate_shapes: list[tuple[int, int]] = field(default_factory=list)
    overlapping_pairs: list[tuple[int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (
            self.wrong_size
            or self.out_of_bounds
            or self.duplicate_shapes
            or self.overlapping_pairs
        )

    def summary(self) -> str:
        if self.ok:
            return "valid"
        lines = []
        if self.wrong_size:
            lines.append(f"wrong-size placements at indices {self.wrong_size}")
        if self.out_of_bounds:
            lines.append(f"out-of-bounds placements at indices {self.out_of_bounds}")
        if self.duplicate_shapes:
            lines.append(f"duplicate shapes at index pairs {self.duplicate_shapes}")
        if self.overlapping_pairs:
            lines.append(f"overlapping placements at index pairs {self.overlapping_pairs}")
        return "; ".join(lines)


def validate_packing(pk: Packing) -> ValidationReport:
    """Report every violation: sizes, bounds, duplicates, overlaps.

    The pairwise overlap check is a per-row interval sweep, so very wide
    rectangles and many placements stay tractable.
    """
    report = ValidationReport()
    seen: dict[tuple[int, ...], int] = {}
    by_row: dict[int, list[tuple[int, int, int]]] = {}
    for i, pl in enumerate(pk.placements):
        if pl.shape.n != pk.n:
            report.wrong_size.append(i)
        top, left, h, w = pl.bounding_box()
        if top < 0 or left < 0 or top + h > pk.rect.height or left + w > pk.rect.width:
            report.out_of_bounds.append(i)
        prev = seen.get(pl.shape.parts)
        if prev is not None:
            report.duplicate_shapes.append((prev, i))
        else:
            seen[pl.shape.parts] = i
        for r, c0, c1 in occupied_row_intervals(pl):
            by_row.setdefault(r, []).append((c0, c1, i))
    pairs = set()
    for ivs in by_row.values():
        ivs.sort()
        for i in range(len(ivs)):
            c0, c1, ia = ivs[i]
            for j in range(i + 1, len(ivs)):
                d0, _, ib = ivs[j]
                if d0 >= c1:
                    break
                pairs.add((min(ia, ib), max(ia, ib)))
    report.overlapping_pairs = sorted(pairs)
    return report


def covered_area_in_window(pk: Packing, top: int, left: int, side: int) -> int:
    """Exact count of covered cells in the axis-aligned square window."""
    if side < 1:
        raise ValueError("window side must be >= 1")
    if top < 0 or left < 0 or top + side > pk.rect.height or left + side > pk.rect.width:
        raise ValueError("window must lie inside the packing rectangle")
    bottom, right = top + side, left + side
    total = 0
    for pl in pk.placements:
        ptop, pleft, h, w = pl.bounding_box()
        if ptop >= bottom or ptop + h <= top or pleft >= right or pleft + w <= left:
            continue
        for r, c0, c1 in occupied_row_intervals(pl):
            if top <= r < bottom:
                total += max(0, min(c1, right) - max(c0, left))
    return total


# --- Packing JSON schema (field order fixed) ---

def packing_to_json_dict(pk: Packing) -> dict:
    return {
        "n": pk.n,
        "rect": {"height": pk.rect.height, "width": pk.rect.width},
        "policy": pk.policy,
        "placements": [
            {
                "parts": list(pl.shape.parts),
                "orientation": pl.orientation,
                "row": pl.row,
                "col": pl.col,
            }
            for pl in pk.placements
        ],
    }


def packing_from_json_dict(d: dict) -> Packing:
    rect = Rect(d["rect"]["height"], d["rect"]["width"])
    placements = tuple(
        Placement(Partition(tuple(p["parts"])), p["orientation"], p["row"], p["col"])
        for p in d["placements"]
    )
    return Packing(n=d["n"], rect=rect, policy=d["policy"], placements=placements)


def packing_to_json(pk: Packing) -> str:
    return json.dumps(packing_to_json_dict(pk), indent=2)


def packing_from_json(text: str) -> Packing:
    return packing_from_json_dict(json.loads(text))
