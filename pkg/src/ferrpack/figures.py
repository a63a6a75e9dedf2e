"""Matplotlib figures written next to the delimited report files."""
from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .audit import LemmaOneReport, WindowAuditReport
from .diagonal import DensityReport


def density_curve_figure(reports: Sequence[DensityReport], path: Path) -> None:
    ns = [r.n for r in reports]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
    ax1.plot(ns, [r.density for r in reports], "o-")
    ax1.set_xscale("log")
    ax1.set_xlabel("n")
    ax1.set_ylabel("density")
    ax2.plot(ns, [r.density_times_logn for r in reports], "o-")
    ax2.set_xscale("log")
    ax2.set_xlabel("n")
    ax2.set_ylabel("density * ln(n)")
    ax2.set_ylim(bottom=0)
    fig.suptitle("diagonal packing density")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def lemma1_figure(reports: Sequence[LemmaOneReport], path: Path) -> None:
    ns = [r.n for r in reports]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
    ax1.plot(ns, [r.frac_violating_i for r in reports], "o-", label="property i")
    ax1.plot(ns, [r.frac_violating_iii for r in reports], "s--", label="property iii")
    ax1.set_xlabel("n")
    ax1.set_ylabel("violating fraction")
    ax1.legend()
    ax2.plot(ns, [r.mean_area_outside for r in reports], "o-", label="mean")
    ax2.plot(ns, [r.max_area_outside for r in reports], "s--", label="max")
    ax2.set_xlabel("n")
    ax2.set_ylabel("boxes outside apex square")
    ax2.legend()
    fig.suptitle("typical-shape audit")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def window_audit_figure(report: WindowAuditReport, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.hist(report.covered_samples, bins=30, color="#4e79a7")
    ax.axvline(report.max_covered, color="#e15759", linestyle="--",
               label=f"max={report.max_covered}")
    ax.set_xlabel(f"covered cells per {report.window_side}x{report.window_side} window")
    ax.set_ylabel("windows")
    ax.legend()
    fig.suptitle(f"window audit, n={report.n}, gamma_hat={report.gamma_hat:.4f}")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
