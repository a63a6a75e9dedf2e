"""ferrpack: Ferrers-shape tilings, packings, and typical-shape audits."""

from .audit import (
    AuditConstants,
    LemmaOneReport,
    WindowAuditReport,
    area_outside_apex_square,
    audit_lemma1,
    audit_lemma2_windows,
    first_extents_in_band,
    has_core_square,
)
from .diagonal import (
    DensityReport,
    PackerConfig,
    filter_reduced,
    measure_density_curve,
    pack_diagonal,
)
from .errors import (
    CapacityError,
    ChainOverlapError,
    DegenerateWindowError,
    FerrpackError,
    RejectionBudgetError,
)
from .geometry import (
    Packing,
    Placement,
    Rect,
    covered_area_in_window,
    occupied_row_intervals,
    overlaps,
    packing_from_json,
    packing_to_json,
    validate_packing,
)
from .partitions import (
    Partition,
    PartitionCountTable,
    enumerate_partitions,
    exact_p,
    hardy_ramanujan_estimate,
)
from .render import RenderSpec, render_packing_svg, render_shape_ascii, render_shape_svg
from .sampling import PartitionSampler, SamplerSpec, sample_partition
from .solver import (
    Budget,
    CoverInstance,
    MaxPackResult,
    SolveResult,
    build_cover_instance,
    max_packing,
    solve_exact_tiling,
)

__version__ = "0.1.0"

__all__ = [
    "AuditConstants",
    "Budget",
    "CapacityError",
    "ChainOverlapError",
    "CoverInstance",
    "DegenerateWindowError",
    "DensityReport",
    "FerrpackError",
    "LemmaOneReport",
    "MaxPackResult",
    "PackerConfig",
    "Packing",
    "Partition",
    "PartitionCountTable",
    "PartitionSampler",
    "Placement",
    "Rect",
    "RejectionBudgetError",
    "RenderSpec",
    "SamplerSpec",
    "SolveResult",
    "WindowAuditReport",
    "area_outside_apex_square",
    "audit_lemma1",
    "audit_lemma2_windows",
    "build_cover_instance",
    "covered_area_in_window",
    "enumerate_partitions",
    "exact_p",
    "filter_reduced",
    "first_extents_in_band",
    "has_core_square",
    "hardy_ramanujan_estimate",
    "max_packing",
    "measure_density_curve",
    "occupied_row_intervals",
    "overlaps",
    "pack_diagonal",
    "packing_from_json",
    "packing_to_json",
    "render_packing_svg",
    "render_shape_ascii",
    "render_shape_svg",
    "sample_partition",
    "solve_exact_tiling",
    "validate_packing",
]
