"""ASCII and SVG rendering of shapes and packings.

Output is byte-stable for fixed inputs: no timestamps, no generated ids,
fixed number formatting. Single shapes are drawn as unit boxes; packings
draw one traced staircase outline per placement so files stay small even
for thousands of cells per shape.
"""
from __future__ import annotations

from dataclasses import dataclass

from .geometry import Packing, Placement, occupied_row_intervals, validate_packing
from .partitions import Partition

# fill colors cycled per placement; fixed palette keeps output reproducible
_PALETTE = (
    "#4e79a7",
    "#f28e2b",
    "#e15759",
    "#76b7b2",
    "#59a14f",
    "#edc948",
    "#b07aa1",
    "#ff9da7",
    "#9c755f",
    "#bab0ac",
)


@dataclass(frozen=True)
class RenderSpec:
    cell_px: int = 20
    draw_diagonals: bool = False
    label_shapes: bool = False

    def __post_init__(self):
        if self.cell_px < 1:
            raise ValueError("cell_px must be >= 1")


def render_shape_ascii(p: Partition) -> str:
    """Left-justified rows of '#', top row first, one line per part."""
    return "".join("#" * x + "\n" for x in p.parts)


def render_shape_svg(p: Partition, spec: RenderSpec = RenderSpec()) -> str:
    px = spec.cell_px
    width = p.first_part * px
    height = len(p.parts) * px
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    ]
    for r, length in enumerate(p.parts):
        for c in range(length):
            lines.append(
                f'<rect x="{c * px}" y="{r * px}" width="{px}" height="{px}" '
                f'fill="white" stroke="black" stroke-width="1"/>'
            )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _outline_points(pl: Placement) -> list[tuple[int, int]]:
    """Vertices of the staircase outline, in cell units, clockwise."""
    ivs = occupied_row_intervals(pl)
    top = ivs[0][0]
    starts = [c0 for _, c0, _ in ivs]
    ends = [c1 for _, _, c1 in ivs]
    pts = [(starts[0], top), (ends[0], top)]
    for i in range(1, len(ivs)):
        if ends[i] != ends[i - 1]:
            pts.append((ends[i - 1], top + i))
            pts.append((ends[i], top + i))
    k = len(ivs)
    pts.append((ends[-1], top + k))
    pts.append((starts[-1], top + k))
    for i in range(k - 2, -1, -1):
        if starts[i] != starts[i + 1]:
            pts.append((starts[i + 1], top + i + 1))
            pts.append((starts[i], top + i + 1))
    return pts


def render_packing_svg(pk: Packing, spec: RenderSpec = RenderSpec()) -> str:
    """One outlined polygon per placement inside the bordered rectangle.

    Refuses packings that fail validation; the exception message carries
    the validation summary.
    """
    report = validate_packing(pk)
    if not report.ok:
        raise ValueError(f"refusing to render an invalid packing: {report.summary()}")
    px = spec.cell_px
    width = pk.rect.width * px
    height = pk.rect.height * px
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" '
        f'fill="white" stroke="black" stroke-width="2"/>',
    ]
    for i, pl in enumerate(pk.placements):
        color = _PALETTE[i % len(_PALETTE)]
        points = " ".join(f"{c * px},{r * px}" for c, r in _outline_points(pl))
        lines.append(
            f'<polygon points="{points}" fill="{color}" fill-opacity="0.8" '
            f'stroke="black" stroke-width="1">'
            f"<title>{pl.shape}</title></polygon>"
        )
        top, left, _, _ = pl.bounding_box()
        if spec.draw_diagonals:
            d = pl.shape.durfee_size()
            lines.append(
                f'<line x1="{left * px}" y1="{top * px}" '
                f'x2="{(left + d) * px}" y2="{(top + d) * px}" '
                f'stroke="black" stroke-width="1" stroke-dasharray="4,3"/>'
            )
        if spec.label_shapes:
            lines.append(
                f'<text x="{left * px + px // 2}" y="{top * px + px}" '
                f'font-size="{px}" font-family="monospace" fill="black">{i}</text>'
            )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
