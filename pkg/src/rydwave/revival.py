"""Peak analysis of autocorrelation traces: detection, periodicity, labeling.

The long-time structure of |A(t)|^2 is organized by the superrevival period:
near t_sr/q (q a multiple of 3) the signal becomes locally periodic with
period 3 t_rev / q, and the q = 6 member forms a recurrence taller than the
full revival itself.  This module predicts those times from a set of
:class:`~rydwave.spectrum.TimeScales`, detects peaks in a sampled trace, and
associates the two.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .packet import AutocorrTrace
from .spectrum import TimeScales
from .units import au_to_ns

SUPERREVIVAL_Q = 6

DEFAULT_MIN_HEIGHT = 0.1
DEFAULT_SEPARATION_CL = 0.4     # min peak separation as a fraction of T_cl
DEFAULT_MATCH_TOL = 0.05        # matching tolerance, fraction of predicted time
DEFAULT_PERIOD_HEIGHT_FRACTION = 0.65


@dataclass(frozen=True)
class Peak:
    t_ns: float
    height: float
    local_period_ns: float | None = None


@dataclass(frozen=True)
class Prediction:
    label: str
    q: int | None
    t_ns: float
    period_ns: float


@dataclass(frozen=True)
class Match:
    prediction: Prediction
    peak: Peak
    residual_ns: float


@dataclass(frozen=True)
class RevivalReport:
    peaks: tuple[Peak, ...]
    predictions: tuple[Prediction, ...]
    matches: tuple[Match, ...]
    absent: tuple[Prediction, ...]

    @property
    def superrevival_exceeds_revival(self) -> bool | None:
        """Whether the matched superrevival peak tops the matched revival peak.

        None when either of the two predictions went unmatched.
        """
        by_label = {m.prediction.label: m for m in self.matches}
        rev = by_label.get("revival")
        sup = by_label.get("superrevival")
        if rev is None or sup is None:
            return None
        return sup.peak.height > rev.peak.height


def predict_superrevivals(scales: TimeScales, q_max: int) -> list[tuple[int, float, float]]:
    """Fractional-superrevival times and periods, in atomic units.

    Returns (q, t_sr/q, 3 t_rev/q) for q = 3, 6, ..., q_max.
    """
    if q_max < 3:
        raise ValueError(f"q_max must be at least 3, got {q_max}")
    out = []
    for q in range(3, q_max + 1, 3):
        out.append((q, scales.t_sr / q, 3.0 * scales.t_rev / q))
    return out


def _parabolic_refine(y: np.ndarray, t: np.ndarray, i: int) -> tuple[float, float]:
    """Refine a grid-sampled maximum with a 3-point parabola."""
    denom = y[i - 1] - 2.0 * y[i] + y[i + 1]
    if denom == 0.0:
        return float(t[i]), float(y[i])
    d = 0.5 * (y[i - 1] - y[i + 1]) / denom
    if abs(d) > 1.0:
        return float(t[i]), float(y[i])
    step = t[1] - t[0]
    height = y[i] - 0.25 * (y[i - 1] - y[i + 1]) * d
    return float(t[i] + d * step), float(height)


def detect_peaks(
    trace: AutocorrTrace,
    min_height: float = DEFAULT_MIN_HEIGHT,
    min_separation_ns: float = 0.0,
    noise_floor: float = 1e-12,
) -> list[Peak]:
    """Local maxima of |A|^2 above ``min_height``, thinned and refined.

    Candidates are strict interior maxima of the sampled signal that rise at
    least ``noise_floor`` above a neighbor (rounding ripple on an otherwise
    flat signal is not structure).  Each candidate is sharpened by 3-point
    parabolic interpolation, then the set is thinned greedily from tallest
    to shortest so no two survivors lie closer than ``min_separation_ns``;
    thinning on refined heights keeps the selection stable under grid
    refinement.  An empty result is a valid outcome.
    """
    if not 0.0 < min_height < 1.0:
        raise ValueError(f"min_height must lie in (0, 1), got {min_height}")
    y = trace.abs2
    t = trace.t_ns
    if y.size < 3:
        return []
    if min_separation_ns > 0.0 and min_separation_ns <= float(t[1] - t[0]):
        raise ValueError("min_separation must exceed the grid step")
    inner = y[1:-1]
    idx = np.where(
        (inner > y[:-2]) & (inner > y[2:]) & (inner > min_height)
        & (inner - np.minimum(y[:-2], y[2:]) > noise_floor)
    )[0] + 1
    if idx.size == 0:
        return []
    refined = [_parabolic_refine(y, t, i) for i in idx]
    order = sorted(range(len(refined)), key=lambda i: refined[i][1], reverse=True)
    kept: list[int] = []
    for i in order:
        if all(abs(refined[i][0] - refined[j][0]) >= min_separation_ns for j in kept):
            kept.append(i)
    return [Peak(*refined[i]) for i in sorted(kept, key=lambda i: refined[i][0])]


def local_period(
    trace: AutocorrTrace,
    window_center_ns: float,
    window_width_ns: float,
    height_fraction: float = DEFAULT_PERIOD_HEIGHT_FRACTION,
) -> float | None:
    """Local periodicity of |A|^2 estimated from peak spacings in a window.

    Strict maxima at least ``height_fraction`` of the tallest in-window
    maximum are collected.  When their spacings are mutually consistent their
    median is the period.  Otherwise the signal is a fast comb under a slower
    envelope (the classical period riding on a fractional-superrevival
    pattern); runs of comb teeth closer than twice the finest spacing are
    merged into their tallest member, and the median spacing of the merged
    peaks is returned.  Returns None when fewer than three usable peaks exist.
    """
    t = trace.t_ns
    y = trace.abs2
    half = window_width_ns / 2.0
    m = (t >= window_center_ns - half) & (t <= window_center_ns + half)
    if not m.any():
        raise ValueError("window lies outside the trace")
    tw, yw = t[m], y[m]
    if tw.size < 8:
        return None
    idx = np.where((yw[1:-1] > yw[:-2]) & (yw[1:-1] > yw[2:]))[0] + 1
    if idx.size == 0:
        return None
    threshold = height_fraction * yw[idx].max()
    idx = idx[yw[idx] >= threshold]
    if idx.size < 3:
        return None
    refined = [_parabolic_refine(yw, tw, i) for i in idx]
    times = np.array([rt for rt, _ in refined])
    heights = np.array([rh for _, rh in refined])
    spacings = np.diff(times)
    if spacings.max() <= 2.0 * spacings.min():
        return float(np.median(spacings))
    # comb under an envelope: merge runs of teeth, keep the tallest of each
    gap = 2.0 * spacings.min()
    champ_t, champ_h, last_t = [times[0]], [heights[0]], times[0]
    for ti, hi in zip(times[1:], heights[1:]):
        if ti - last_t <= gap:
            if hi > champ_h[-1]:
                champ_t[-1], champ_h[-1] = ti, hi
        else:
            champ_t.append(ti)
            champ_h.append(hi)
        last_t = ti
    if len(champ_t) < 3:
        return None
    return float(np.median(np.diff(champ_t)))


def classify(
    trace: AutocorrTrace,
    scales: TimeScales,
    q_max: int = 12,
    match_tol: float = DEFAULT_MATCH_TOL,
    min_height: float = DEFAULT_MIN_HEIGHT,
    min_separation_ns: float | None = None,
) -> RevivalReport:
    """Associate detected peaks with revival and superrevival predictions.

    Each prediction is matched to the nearest detected peak within
    ``match_tol`` (a fraction of the predicted time); predictions with no
    peak in range are reported as absent.  Matched peaks carry a local
    period estimated in a window of four predicted periods.

    The default peak separation is 0.4 T_cl, widened to two grid steps on
    grids too coarse to resolve the classical period.
    """
    if min_separation_ns is None:
        min_separation_ns = DEFAULT_SEPARATION_CL * scales.t_cl_ns
        if trace.samples >= 2:
            min_separation_ns = max(min_separation_ns, 2.0 * float(trace.t_ns[1] - trace.t_ns[0]))
    predictions = [Prediction("revival", None, scales.t_rev_ns, scales.t_cl_ns)]
    for q, t_frac, period in predict_superrevivals(scales, q_max):
        label = "superrevival" if q == SUPERREVIVAL_Q else f"fractional superrevival q={q}"
        predictions.append(Prediction(label, q, au_to_ns(t_frac), au_to_ns(period)))
    peaks = detect_peaks(trace, min_height, min_separation_ns)
    if not peaks:
        return RevivalReport((), tuple(predictions), (), tuple(predictions))
    t_end = float(trace.t_ns[-1]) if trace.samples else 0.0
    t_start = float(trace.t_ns[0]) if trace.samples else 0.0

    matches: list[Match] = []
    matched_peaks: dict[int, Peak] = {}
    absent: list[Prediction] = []
    for pred in predictions:
        residuals = [abs(p.t_ns - pred.t_ns) for p in peaks]
        best = int(np.argmin(residuals))
        if residuals[best] > match_tol * pred.t_ns:
            absent.append(pred)
            continue
        peak = peaks[best]
        if best not in matched_peaks:
            width = 4.0 * pred.period_ns
            center = min(max(peak.t_ns, t_start + width / 2.0), t_end - width / 2.0)
            period = None
            eps = 1e-9 * max(abs(t_end), 1.0)
            if t_start - eps <= center - width / 2.0 and center + width / 2.0 <= t_end + eps:
                period = local_period(trace, center, width)
            matched_peaks[best] = Peak(peak.t_ns, peak.height, period)
        matches.append(Match(pred, matched_peaks[best], peaks[best].t_ns - pred.t_ns))

    reported = [matched_peaks.get(i, p) for i, p in enumerate(peaks)]
    return RevivalReport(tuple(reported), tuple(predictions), tuple(matches), tuple(absent))


def _fmt(x: float | None, digits: int = 6) -> str:
    return "none" if x is None else f"{x:.{digits}g}"


def render_report_table(report: RevivalReport) -> str:
    """Human-readable summary of a revival report."""
    lines = []
    if not report.peaks:
        lines.append("no peaks detected")
    else:
        lines.append(f"{'t_ns':>12} {'height':>10} {'period_ns':>12}")
        for p in report.peaks:
            lines.append(f"{p.t_ns:>12.6f} {p.height:>10.6f} {_fmt(p.local_period_ns):>12}")
    lines.append("")
    lines.append(f"{'label':<32} {'t_pred_ns':>12} {'T_frac_ns':>12} {'matched_t':>12} {'residual':>10}")
    by_label = {m.prediction.label: m for m in report.matches}
    for pred in report.predictions:
        m = by_label.get(pred.label)
        if m is None:
            lines.append(f"{pred.label:<32} {pred.t_ns:>12.6f} {pred.period_ns:>12.6f} {'absent':>12} {'-':>10}")
        else:
            lines.append(
                f"{pred.label:<32} {pred.t_ns:>12.6f} {pred.period_ns:>12.6f}"
                f" {m.peak.t_ns:>12.6f} {m.residual_ns:>10.2e}"
            )
    flag = report.superrevival_exceeds_revival
    if flag is not None:
        comp = "exceeds" if flag else "does not exceed"
        lines.append("")
        lines.append(f"superrevival peak height {comp} revival peak height")
    return "\n".join(lines) + "\n"


def render_report_records(report: RevivalReport) -> str:
    """Machine-readable report: one key=value record per line."""
    lines = []
    matched = {id(m.peak): m for m in report.matches}
    for p in report.peaks:
        m = matched.get(id(p))
        label = m.prediction.label if m else "unmatched"
        residual = _fmt(m.residual_ns if m else None, 17)
        lines.append(
            f"peak t_ns={p.t_ns!r} height={p.height!r}"
            f" period_ns={_fmt(p.local_period_ns, 17)} label={label!r} residual_ns={residual}"
        )
    for pred in report.absent:
        lines.append(f"absent label={pred.label!r} t_pred_ns={pred.t_ns!r} period_ns={pred.period_ns!r}")
    return "\n".join(lines) + "\n"
