"""Command-line entry point and experiment orchestration.

Exit codes: 0 success, 1 domain error (capacity, degenerate config,
invalid input data), 2 usage error. Every run logs its fully resolved
configuration to stderr. A TOML config file mirrors every flag; explicit
flags override the file.

Report-producing subcommands (density-curve, audit-lemma1, audit-lemma2)
write a companion matplotlib figure next to the delimited output unless
--no-figure is given.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import __version__
from .audit import (
    AuditConstants,
    audit_lemma1,
    audit_lemma2_windows,
    lemma1_reports_to_csv,
)
from .diagonal import (
    PackerConfig,
    density_reports_to_csv,
    measure_density_curve,
    pack_offered,
)
from .errors import FerrpackError
from .geometry import (
    Packing,
    Rect,
    packing_from_json,
    packing_to_json,
    validate_packing,
)
from .partitions import (
    DEFAULT_ENUMERATION_CAP,
    Partition,
    enumerate_partitions,
    exact_p,
    hardy_ramanujan_estimate,
)
from .render import RenderSpec, render_packing_svg, render_shape_ascii, render_shape_svg
from .solver import (
    DEFAULT_SOLVER_CAP,
    Budget,
    build_cover_instance,
    max_packing,
    solve_exact_tiling,
    solve_result_to_json_dict,
)

log = logging.getLogger("ferrpack")

USAGE_ERROR = 2


class _UsageError(Exception):
    pass


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", type=Path, help="TOML file mirroring the flags")
    sp.add_argument("--out", type=Path, help="output path (default: stdout)")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--threads", type=int, default=None,
                    help="upper bound on internal parallelism (current ops are serial)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ferrpack",
        description="Ferrers-shape tilings, diagonal packings, and shape audits",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("enumerate", help="list all partitions of n")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--cap", type=int, default=None)
    sp.add_argument("--format", choices=["text", "json"], default=None)
    _add_common(sp)

    sp = sub.add_parser("count", help="exact p(n)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--format", choices=["text", "json"], default=None)
    _add_common(sp)

    sp = sub.add_parser("estimate", help="first-order asymptotic estimate of p(n)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--digits", type=int, default=None)
    sp.add_argument("--format", choices=["text", "json"], default=None)
    _add_common(sp)

    sp = sub.add_parser("solve", help="decide the n x p(n) tiling question exactly")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--policy", choices=["fixed", "rot180", "free"], default=None)
    sp.add_argument("--solver-cap", type=int, default=None)
    sp.add_argument("--max-nodes", type=int, default=None)
    sp.add_argument("--max-seconds", type=float, default=None)
    _add_common(sp)

    sp = sub.add_parser("maxpack", help="max distinct-shape packing of a rectangle")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--rect", type=str, default=None,
                    help="HxW (default: the n x p(n) rectangle)")
    sp.add_argument("--policy", choices=["fixed", "rot180", "free"], default=None)
    sp.add_argument("--solver-cap", type=int, default=None)
    sp.add_argument("--max-nodes", type=int, default=None)
    sp.add_argument("--max-seconds", type=float, default=None)
    _add_common(sp)

    sp = sub.add_parser("pack", help="diagonal-chain packing of filtered shapes")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--c1", type=float, default=None)
    sp.add_argument("--c2", type=float, default=None)
    sp.add_argument("--stride-slack", type=float, default=None)
    sp.add_argument("--source", choices=["auto", "enumerated", "sampled"], default=None)
    sp.add_argument("--count", type=int, default=None, help="sample count when sampling")
    sp.add_argument("--report-out", type=Path, default=None, help="density CSV path")
    _add_common(sp)

    sp = sub.add_parser("density-curve", help="packing density across several n")
    sp.add_argument("--n-values", type=str, required=True, help="comma-separated n list")
    sp.add_argument("--count", type=int, default=None, help="samples per n")
    sp.add_argument("--c1", type=float, default=None)
    sp.add_argument("--c2", type=float, default=None)
    sp.add_argument("--stride-slack", type=float, default=None)
    sp.add_argument("--no-figure", action="store_true")
    _add_common(sp)

    sp = sub.add_parser("audit-lemma1", help="typical-shape property audit")
    sp.add_argument("--n-values", type=str, required=True, help="comma-separated n list")
    sp.add_argument("--exhaustive", action="store_true")
    sp.add_argument("--samples", type=int, default=None)
    sp.add_argument("--method", choices=["exact_dp", "boltzmann"], default=None)
    sp.add_argument("--c1", type=float, default=None)
    sp.add_argument("--c2", type=float, default=None)
    sp.add_argument("--c3", type=float, default=None)
    sp.add_argument("--epsilon", type=float, default=None)
    sp.add_argument("--format", choices=["csv", "json"], default=None)
    sp.add_argument("--no-figure", action="store_true")
    _add_common(sp)

    sp = sub.add_parser("audit-lemma2", help="window density audit of a packing")
    sp.add_argument("--packing", type=Path, required=True, help="packing JSON file")
    sp.add_argument("--c1", type=float, default=None)
    sp.add_argument("--windows", type=int, default=None)
    sp.add_argument("--format", choices=["csv", "json"], default=None)
    sp.add_argument("--no-figure", action="store_true")
    _add_common(sp)

    sp = sub.add_parser("render", help="draw a shape or a packing")
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--shape", type=str, help="comma-separated parts, e.g. 4,2,1")
    group.add_argument("--packing", type=Path, help="packing JSON file")
    sp.add_argument("--format", choices=["ascii", "svg"], default=None)
    sp.add_argument("--cell-px", type=int, default=None)
    sp.add_argument("--diagonals", action="store_true")
    sp.add_argument("--labels", action="store_true")
    _add_common(sp)

    return parser


_DEFAULTS = {
    "seed": 0,
    "threads": 1,
    "format": None,
    "cap": DEFAULT_ENUMERATION_CAP,
    "digits": 15,
    "policy": "free",
    "solver_cap": DEFAULT_SOLVER_CAP,
    "max_nodes": None,
    "max_seconds": None,
    "c1": 0.1,
    "c2": 4.0,
    "c3": 0.001,
    "epsilon": 0.25,
    "stride_slack": 2.0,
    "source": "auto",
    "count": 200,
    "samples": 10_000,
    "method": "exact_dp",
    "windows": 200,
    "cell_px": 20,
}


class _Config:
    """Flag > config file > default, resolved per key."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.file: dict = {}
        if getattr(args, "config", None) is not None:
            with open(args.config, "rb") as fh:
                self.file = tomllib.load(fh)
        self.resolved: dict = {}

    def get(self, key: str):
        flag = getattr(self.args, key, None)
        if flag is not None and flag is not False:
            value = flag
        elif key in self.file:
            value = self.file[key]
        else:
            value = _DEFAULTS.get(key)
        self.resolved[key] = value
        return value

    def log_resolved(self, command: str) -> None:
        pairs = " ".join(f"{k}={v}" for k, v in sorted(self.resolved.items()))
        log.info("command=%s %s", command, pairs)


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)
        log.info("wrote %s", out)


def _figure_path(out: Path | None, fallback: str) -> Path:
    return out.with_suffix(".png") if out is not None else Path(fallback)


def _parse_n_values(text: str) -> list[int]:
    try:
        values = [int(tok) for tok in text.replace(" ", "").split(",") if tok]
    except ValueError:
        raise _UsageError(f"--n-values must be comma-separated integers, got {text!r}")
    if not values:
        raise _UsageError("--n-values is empty")
    return values


def _parse_parts(text: str) -> Partition:
    try:
        parts = tuple(int(tok) for tok in text.replace(" ", "").split(",") if tok)
        return Partition(parts)
    except ValueError as exc:
        raise _UsageError(f"--shape: {exc}")


def _parse_rect(text: str | None, n: int) -> Rect:
    if text is None:
        return Rect(n, exact_p(n))
    try:
        h, w = text.lower().split("x")
        return Rect(int(h), int(w))
    except ValueError:
        raise _UsageError(f"--rect must look like HxW, got {text!r}")


def _load_packing(path: Path) -> Packing:
    return packing_from_json(path.read_text())


def _cmd_enumerate(args) -> int:
    cfg = _Config(args)
    n, cap, fmt, out = cfg.get("n"), cfg.get("cap"), cfg.get("format"), args.out
    cfg.log_resolved("enumerate")
    shapes = list(enumerate_partitions(n, cap=cap))
    if fmt == "json":
        _emit(json.dumps({"n": n, "count": len(shapes),
                          "partitions": [list(p.parts) for p in shapes]}), out)
    else:
        _emit("".join(" ".join(map(str, p.parts)) + "\n" for p in shapes), out)
    return 0


def _cmd_count(args) -> int:
    cfg = _Config(args)
    n, fmt, out = cfg.get("n"), cfg.get("format"), args.out
    cfg.log_resolved("count")
    value = exact_p(n)
    _emit(json.dumps({"n": n, "p": value}) if fmt == "json" else str(value), out)
    return 0


def _cmd_estimate(args) -> int:
    cfg = _Config(args)
    n, digits, fmt, out = cfg.get("n"), cfg.get("digits"), cfg.get("format"), args.out
    cfg.log_resolved("estimate")
    import mpmath

    text = mpmath.nstr(hardy_ramanujan_estimate(n), digits)
    _emit(json.dumps({"n": n, "estimate": text}) if fmt == "json" else text, out)
    return 0


def _cmd_solve(args) -> int:
    cfg = _Config(args)
    n, policy = cfg.get("n"), cfg.get("policy")
    solver_cap = cfg.get("solver_cap")
    budget = Budget(cfg.get("max_nodes"), cfg.get("max_seconds"))
    cfg.log_resolved("solve")
    inst = build_cover_instance(n, policy, cap=solver_cap)
    result = solve_exact_tiling(inst, budget)
    _emit(json.dumps(solve_result_to_json_dict(result), indent=2), args.out)
    return 0


def _cmd_maxpack(args) -> int:
    cfg = _Config(args)
    n, policy = cfg.get("n"), cfg.get("policy")
    solver_cap = cfg.get("solver_cap")
    max_nodes, max_seconds = cfg.get("max_nodes"), cfg.get("max_seconds")
    rect = _parse_rect(args.rect, n)
    budget = Budget(max_nodes, max_seconds) if (max_nodes or max_seconds) else None
    cfg.log_resolved("maxpack")
    result = max_packing(n, rect, policy, budget=budget, cap=solver_cap)
    payload = {
        "n": n,
        "policy": policy,
        "rect": {"height": rect.height, "width": rect.width},
        "count": len(result.packing.placements),
        "optimal": result.optimal,
        "nodes": result.nodes_explored,
        "elapsed_ms": round(result.elapsed * 1000.0, 3),
        "packing": json.loads(packing_to_json(result.packing)),
    }
    _emit(json.dumps(payload, indent=2), args.out)
    return 0


def _packer_config(cfg: _Config) -> PackerConfig:
    return PackerConfig(
        c1=cfg.get("c1"),
        c2=cfg.get("c2"),
        stride_slack=cfg.get("stride_slack"),
        shape_source=cfg.get("source"),
        sample_count=cfg.get("count"),
    )


def _cmd_pack(args) -> int:
    cfg = _Config(args)
    n, seed = cfg.get("n"), cfg.get("seed")
    config = _packer_config(cfg)
    cfg.log_resolved("pack")
    packing, report = pack_offered(n, config, rng_seed=seed)
    _emit(packing_to_json(packing), args.out)
    csv_text = density_reports_to_csv([report])
    if args.report_out is not None:
        _emit(csv_text, args.report_out)
    else:
        sys.stdout.write(csv_text)
    return 0


def _cmd_density_curve(args) -> int:
    cfg = _Config(args)
    n_values = _parse_n_values(args.n_values)
    count, seed = cfg.get("count"), cfg.get("seed")
    config = PackerConfig(
        c1=cfg.get("c1"), c2=cfg.get("c2"), stride_slack=cfg.get("stride_slack")
    )
    cfg.log_resolved("density-curve")
    reports = measure_density_curve(n_values, count, config, rng_seed=seed)
    _emit(density_reports_to_csv(reports), args.out)
    if not args.no_figure:
        from .figures import density_curve_figure

        fig_path = _figure_path(args.out, "density-curve.png")
        density_curve_figure(reports, fig_path)
        log.info("wrote %s", fig_path)
    return 0


def _cmd_audit_lemma1(args) -> int:
    cfg = _Config(args)
    n_values = _parse_n_values(args.n_values)
    constants = AuditConstants(
        c1=cfg.get("c1"), c2=cfg.get("c2"), c3=cfg.get("c3"), epsilon=cfg.get("epsilon")
    )
    samples, method, seed = cfg.get("samples"), cfg.get("method"), cfg.get("seed")
    fmt = cfg.get("format") or "csv"
    cfg.log_resolved("audit-lemma1")
    reports = [
        audit_lemma1(
            n,
            constants,
            exhaustive=args.exhaustive,
            sample_size=samples,
            method=method,
            seed=seed,
        )
        for n in n_values
    ]
    if fmt == "json":
        _emit(json.dumps([r.to_json_dict() for r in reports], indent=2), args.out)
    else:
        _emit(lemma1_reports_to_csv(reports), args.out)
    if not args.no_figure:
        from .figures import lemma1_figure

        fig_path = _figure_path(args.out, "audit-lemma1.png")
        lemma1_figure(reports, fig_path)
        log.info("wrote %s", fig_path)
    return 0


def _cmd_audit_lemma2(args) -> int:
    cfg = _Config(args)
    c1, windows, seed = cfg.get("c1"), cfg.get("windows"), cfg.get("seed")
    fmt = cfg.get("format") or "json"
    cfg.log_resolved("audit-lemma2")
    pk = _load_packing(args.packing)
    report = audit_lemma2_windows(pk, c1=c1, window_count=windows, seed=seed)
    if fmt == "csv":
        d = report.to_json_dict()
        header = ",".join(d)
        row = ",".join(
            f"{v:.12g}" if isinstance(v, float) else str(v) for v in d.values()
        )
        _emit(header + "\n" + row + "\n", args.out)
    else:
        _emit(json.dumps(report.to_json_dict(), indent=2), args.out)
    if not args.no_figure:
        from .figures import window_audit_figure

        fig_path = _figure_path(args.out, "audit-lemma2.png")
        window_audit_figure(report, fig_path)
        log.info("wrote %s", fig_path)
    return 0


def _cmd_render(args) -> int:
    cfg = _Config(args)
    fmt = cfg.get("format")
    spec = RenderSpec(
        cell_px=cfg.get("cell_px"),
        draw_diagonals=args.diagonals,
        label_shapes=args.labels,
    )
    cfg.log_resolved("render")
    if args.shape is not None:
        shape = _parse_parts(args.shape)
        if (fmt or "ascii") == "ascii":
            _emit(render_shape_ascii(shape), args.out)
        else:
            _emit(render_shape_svg(shape, spec), args.out)
    else:
        if fmt == "ascii":
            raise _UsageError("packings render to SVG only")
        pk = _load_packing(args.packing)
        _emit(render_packing_svg(pk, spec), args.out)
    return 0


_COMMANDS = {
    "enumerate": _cmd_enumerate,
    "count": _cmd_count,
    "estimate": _cmd_estimate,
    "solve": _cmd_solve,
    "maxpack": _cmd_maxpack,
    "pack": _cmd_pack,
    "density-curve": _cmd_density_curve,
    "audit-lemma1": _cmd_audit_lemma1,
    "audit-lemma2": _cmd_audit_lemma2,
    "render": _cmd_render,
}


def run(argv: list[str] | None = None) -> int:
    """Parse argv and execute; returns the process exit code."""
    logging.basicConfig(
        stream=sys.stderr, level=logging.INFO, format="%(name)s: %(message)s"
    )
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors, 0 for --help
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        log.error("usage error: %s", exc)
        return USAGE_ERROR
    except FerrpackError as exc:
        log.error("%s", exc)
        return 1
    except (ValueError, OSError) as exc:
        log.error("%s", exc)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
