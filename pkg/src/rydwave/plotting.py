"""Figure rendering for the CLI report paths.

Each function writes one matplotlib figure to a file next to the delimited
output it visualizes.  The Agg backend is forced so rendering works headless;
figures are closed after saving to keep batch runs bounded in memory.
"""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .defectlab import LevelShiftProfile
from .packet import AutocorrTrace
from .revival import RevivalReport
from .squeezed import EvolutionSample


def save_trace_figure(trace: AutocorrTrace, path: str, report: RevivalReport | None = None):
    """|A(t)|^2 versus time, optionally annotated with matched revival peaks."""
    fig, ax = plt.subplots(figsize=(8.0, 4.0))
    ax.plot(trace.t_ns, trace.abs2, lw=0.5, color="C0")
    if report is not None:
        for m in report.matches:
            ax.axvline(m.prediction.t_ns, color="C3", lw=0.8, ls="--", alpha=0.6)
            ax.annotate(
                m.prediction.label,
                xy=(m.peak.t_ns, m.peak.height),
                xytext=(0, 4),
                textcoords="offset points",
                ha="center",
                fontsize=7,
            )
    ax.set_xlabel("t (ns)")
    ax.set_ylabel(r"$|A(t)|^2$")
    ax.set_ylim(0.0, 1.05)
    ax.set_xlim(trace.t_start_ns, trace.t_end_ns)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_uncertainty_figure(samples: Sequence[EvolutionSample], path: str):
    """Mean radius and uncertainty product of an evolved packet."""
    t = [s.t_ns for s in samples]
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(8.0, 5.0), sharex=True)
    ax1.plot(t, [s.r_mean for s in samples], color="C0")
    ax1.set_ylabel(r"$\langle r \rangle$ (a.u.)")
    ax2.plot(t, [s.uncertainty_product for s in samples], color="C1")
    ax2.axhline(0.5, color="k", lw=0.8, ls=":")
    ax2.set_ylabel(r"$\Delta r\, \Delta p_r$")
    ax2.set_xlabel("t (ns)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_level_shift_figure(profile: LevelShiftProfile, path: str):
    """Per-level energy displacement of a shifted spectrum."""
    ns = [row.n for row in profile.rows]
    ds = [row.d_n for row in profile.rows]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(ns, ds, "o-", color="C0")
    ax.axhline(0.0, color="k", lw=0.8, ls=":")
    ax.set_xlabel("n")
    ax.set_ylabel(r"$E_{\mathrm{model}}(n) - E_{\mathrm{H}}(n)$ (a.u.)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
