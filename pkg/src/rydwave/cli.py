"""Command-line front end.

Subcommands mirror the analysis pipelines: ``timescales`` for the expansion
periods, ``autocorr`` for trace CSVs, ``revivals`` for peak classification
reports, ``squeezed`` for the fit/evolution pipeline, and ``defect`` for the
defect-versus-detuning comparison.

Option precedence is CLI flag > ``--config`` key=value file > built-in
default.  All floating output uses shortest round-trip formatting, so
repeated runs with identical inputs are byte-identical.  Exit status is 0 on
success, 1 on usage or I/O errors, and 2 on numerical failures, with a
one-line ``ERROR <code>:`` prefix on stderr.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import defectlab, revival, squeezed
from .errors import NumericsError
from .packet import (
    PacketSpec,
    autocorr_exact,
    autocorr_third_order,
    make_grid,
    trace_from_csv,
    trace_to_csv,
)
from .spectrum import EnergyModel
from .units import au_to_ns

USAGE_EXIT = 1
NUMERIC_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class UsageError(Exception):
    pass


# Built-in defaults, by subcommand and option dest.  ``None`` means the
# option accepts "not provided" as a meaningful state.
DEFAULTS: dict[str, dict[str, object]] = {
    "timescales": {"delta": 0.0, "detuning": 0.0, "q_max": 12},
    "autocorr": {
        "sigma": 1.5, "window": None, "delta": 0.0, "detuning": 0.0,
        "t_start_ns": 0.0, "t_end_ns": 4.0, "grid_step_ns": 2e-4,
        "model": "exact", "out": None, "plot": None,
    },
    "revivals": {
        "input": None, "sigma": 1.5, "window": None, "delta": 0.0, "detuning": 0.0,
        "t_start_ns": 0.0, "t_end_ns": 4.0, "grid_step_ns": 2e-4, "model": "exact",
        "q_max": 12, "min_height": 0.1, "match_tol": 0.05,
        "out": None, "plot": None,
    },
    "squeezed": {
        "tol": 1e-10, "evolve": False, "t_end_ns": 0.05, "samples": 200,
        "half_width": 12, "out": None, "plot": None,
    },
    "defect": {
        "delta": 0.5, "detuning": None, "sigma": 1.5, "window": None,
        "n_lo": None, "n_hi": None, "shift": 0.0, "compare": False,
        "out": None, "plot": None,
    },
}


def _float(name):
    def convert(text):
        try:
            value = float(text)
        except ValueError:
            raise UsageError(f"{name} expects a number, got {text!r}")
        if not math.isfinite(value):
            raise UsageError(f"{name} must be finite")
        return value
    return convert


def build_parser() -> _Parser:
    parser = _Parser(prog="rydwave", description=__doc__)
    parser.add_argument("--config", help="key=value file supplying option defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    ts = sub.add_parser("timescales", help="classical/revival/superrevival periods")
    ts.add_argument("--nbar", type=_float("--nbar"), required=True)
    ts.add_argument("--delta", type=_float("--delta"))
    ts.add_argument("--detuning", type=_float("--detuning"))
    ts.add_argument("--q-max", dest="q_max", type=int)
    ts.add_argument("--out")

    def packet_opts(p):
        p.add_argument("--nbar", type=_float("--nbar"), required=True)
        p.add_argument("--sigma", type=_float("--sigma"))
        p.add_argument("--window", type=int)
        p.add_argument("--delta", type=_float("--delta"))
        p.add_argument("--detuning", type=_float("--detuning"))
        p.add_argument("--t-start-ns", dest="t_start_ns", type=_float("--t-start-ns"))
        p.add_argument("--t-end-ns", dest="t_end_ns", type=_float("--t-end-ns"))
        p.add_argument("--grid-step-ns", dest="grid_step_ns", type=_float("--grid-step-ns"))
        p.add_argument("--model", choices=("exact", "third-order"))
        p.add_argument("--out")
        p.add_argument("--plot")

    ac = sub.add_parser("autocorr", help="autocorrelation trace CSV")
    packet_opts(ac)

    rv = sub.add_parser("revivals", help="peak detection and classification report")
    rv.add_argument("--input", help="trace CSV to analyze instead of simulating")
    packet_opts(rv)
    rv.add_argument("--q-max", dest="q_max", type=int)
    rv.add_argument("--min-height", dest="min_height", type=_float("--min-height"))
    rv.add_argument("--match-tol", dest="match_tol", type=_float("--match-tol"))

    sq = sub.add_parser("squeezed", help="radial squeezed-state fit and evolution")
    sq.add_argument("--nbar", type=_float("--nbar"), required=True)
    sq.add_argument("--tol", type=_float("--tol"))
    sq.add_argument("--evolve", action="store_true", default=None)
    sq.add_argument("--t-end-ns", dest="t_end_ns", type=_float("--t-end-ns"))
    sq.add_argument("--samples", type=int)
    sq.add_argument("--half-width", dest="half_width", type=int)
    sq.add_argument("--out")
    sq.add_argument("--plot")

    df = sub.add_parser("defect", help="quantum defect vs laser detuning comparison")
    df.add_argument("--n", type=int, required=True)
    df.add_argument("--delta", type=_float("--delta"))
    df.add_argument("--detuning", type=_float("--detuning"))
    df.add_argument("--sigma", type=_float("--sigma"))
    df.add_argument("--window", type=int)
    df.add_argument("--n-lo", dest="n_lo", type=int)
    df.add_argument("--n-hi", dest="n_hi", type=int)
    df.add_argument("--shift", type=_float("--shift"))
    df.add_argument("--compare", action="store_true", default=None)
    df.add_argument("--out")
    df.add_argument("--plot")
    return parser


def load_config(path: str) -> dict[str, str]:
    """Parse a key=value config file; '#' starts a comment."""
    try:
        text = open(path, encoding="utf-8").read()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}")
    mapping: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        mapping[key.strip().replace("-", "_")] = value.strip()
    return mapping


def _coerce(key: str, text: str, default):
    if isinstance(default, bool) or key in ("evolve", "compare"):
        if text.lower() in ("1", "true", "yes", "on"):
            return True
        if text.lower() in ("0", "false", "no", "off"):
            return False
        raise UsageError(f"config key {key} expects a boolean, got {text!r}")
    if isinstance(default, int) and not isinstance(default, bool):
        return int(text)
    if isinstance(default, float):
        return _float(key)(text)
    if default is None and key in ("window", "n_lo", "n_hi", "samples", "q_max"):
        return int(text)
    if default is None and key in ("detuning",):
        return _float(key)(text)
    return text


def merge_options(args: argparse.Namespace, config: dict[str, str]) -> argparse.Namespace:
    """Fill unset options from the config file, then from built-in defaults."""
    defaults = DEFAULTS.get(args.command, {})
    for key, default in defaults.items():
        if getattr(args, key, None) is not None:
            continue
        if key in config:
            setattr(args, key, _coerce(key, config[key], default))
        else:
            setattr(args, key, default)
    return args


def _emit(text: str, out_path: str | None):
    if out_path is None:
        sys.stdout.write(text)
    else:
        try:
            with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {out_path}: {exc}")


def _packet_from_args(args) -> PacketSpec:
    model = EnergyModel.quantum_defect(args.delta) if args.delta else EnergyModel.hydrogen()
    return PacketSpec(
        center=args.nbar + args.detuning,
        sigma=args.sigma,
        window=args.window,
        model=model,
    )


def cmd_timescales(args) -> int:
    model = EnergyModel.quantum_defect(args.delta) if args.delta else EnergyModel.hydrogen()
    scales = model.time_scales(args.nbar + args.detuning)
    lines = [
        f"center            {args.nbar + args.detuning!r}",
        f"effective center  {args.nbar + args.detuning - args.delta!r}",
        f"T_cl   = {scales.t_cl!r} a.u. = {scales.t_cl_ns:.6g} ns",
        f"t_rev  = {scales.t_rev!r} a.u. = {scales.t_rev_ns:.6g} ns",
        f"t_sr   = {scales.t_sr!r} a.u. = {scales.t_sr_ns:.6g} ns",
        f"t_rev/T_cl = {scales.t_rev / scales.t_cl:.6g}",
        f"t_sr/t_rev = {scales.t_sr / scales.t_rev:.6g}",
        "",
        f"{'q':>4} {'t_sr/q (ns)':>14} {'T_frac (ns)':>14}",
    ]
    for q, t_frac, period in revival.predict_superrevivals(scales, args.q_max):
        lines.append(f"{q:>4} {au_to_ns(t_frac):>14.6g} {au_to_ns(period):>14.6g}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_autocorr(args) -> int:
    spec = _packet_from_args(args)
    grid = make_grid(args.t_start_ns, args.t_end_ns, args.grid_step_ns)
    compute = autocorr_third_order if args.model == "third-order" else autocorr_exact
    trace = compute(spec, grid)
    _emit(trace_to_csv(trace), args.out)
    if args.plot:
        from .plotting import save_trace_figure

        save_trace_figure(trace, args.plot)
    return 0


def cmd_revivals(args) -> int:
    model = EnergyModel.quantum_defect(args.delta) if args.delta else EnergyModel.hydrogen()
    scales = model.time_scales(args.nbar + args.detuning)
    if args.input is not None:
        try:
            text = open(args.input, encoding="utf-8").read()
        except OSError as exc:
            raise UsageError(f"cannot read trace {args.input}: {exc}")
        trace = trace_from_csv(text)
    else:
        spec = _packet_from_args(args)
        grid = make_grid(args.t_start_ns, args.t_end_ns, args.grid_step_ns)
        compute = autocorr_third_order if args.model == "third-order" else autocorr_exact
        trace = compute(spec, grid)
    report = revival.classify(
        trace, scales, q_max=args.q_max, match_tol=args.match_tol, min_height=args.min_height
    )
    text = revival.render_report_table(report) + "\n" + revival.render_report_records(report)
    _emit(text, args.out)
    if args.plot:
        from .plotting import save_trace_figure

        save_trace_figure(trace, args.plot, report)
    return 0


def cmd_squeezed(args) -> int:
    cond = squeezed.SqueezedFitConditions(n_bar=args.nbar)
    state = squeezed.solve_parameters(cond, tol=args.tol)
    m = squeezed.moments(state)
    h = squeezed.energy_expectation(state, cond.l)
    lines = [
        f"n_bar    = {args.nbar!r}",
        f"r_out    = {cond.r_out!r} a.u.",
        f"E_target = {cond.e_target!r} a.u.",
        f"alpha    = {state.alpha!r}",
        f"gamma0   = {state.gamma0!r}",
        f"gamma1   = {state.gamma1!r}",
        f"residual <p_r>         = {abs(m.p_mean)!r}",
        f"residual <r> - r_out   = {abs(m.r_mean - cond.r_out) / cond.r_out!r} (relative)",
        f"residual <H> - E       = {abs(h - cond.e_target) / abs(cond.e_target)!r} (relative)",
        f"uncertainty product    = {m.uncertainty_product!r}",
        f"analytic (1/2)sqrt((2a+3)/(2a+1)) = {squeezed.analytic_uncertainty_product(state.alpha)!r}",
    ]
    report = "\n".join(lines) + "\n"
    csv_text = ""
    samples = None
    if args.evolve:
        expansion = squeezed.expand_in_eigenbasis(
            state, squeezed.default_level_range(args.nbar, args.half_width)
        )
        report += f"captured probability   = {expansion.captured_probability!r}\n"
        report += f"dominant level         = {expansion.dominant_level}\n"
        evolution = squeezed.PacketEvolution(expansion)
        t_grid = np.linspace(0.0, args.t_end_ns, args.samples)
        samples = evolution.track(t_grid)
        csv_text = squeezed.uncertainty_to_csv(samples)
    if args.out is not None:
        sys.stdout.write(report)
        _emit(csv_text if args.evolve else report, args.out)
    else:
        sys.stdout.write(report + csv_text)
    if args.plot and samples is not None:
        from .plotting import save_uncertainty_figure

        save_uncertainty_figure(samples, args.plot)
    return 0


def cmd_defect(args) -> int:
    n_lo = args.n_lo if args.n_lo is not None else args.n - 4
    n_hi = args.n_hi if args.n_hi is not None else args.n + 4
    detuning = -args.delta if args.detuning is None else args.detuning
    profile = defectlab.level_shift_profile(range(n_lo, n_hi + 1), args.delta, args.shift)

    lines = [
        f"n_center = {args.n}  delta = {args.delta!r}  detuning = {detuning!r}",
        f"level shift spread over n in [{n_lo}, {n_hi}] = {profile.spread!r} a.u.",
    ]
    sd = defectlab.scales_with_defect(args.n, args.delta)
    st = defectlab.scales_with_detuning(args.n, detuning)
    lines.append(f"defect   scales: T_cl={sd.t_cl_ns:.6g} ns t_rev={sd.t_rev_ns:.6g} ns t_sr={sd.t_sr_ns:.6g} ns")
    lines.append(f"detuning scales: T_cl={st.t_cl_ns:.6g} ns t_rev={st.t_rev_ns:.6g} ns t_sr={st.t_sr_ns:.6g} ns")

    hydrogen_sp = defectlab.level_spacings(EnergyModel.hydrogen(), n_lo, n_hi)
    defect_sp = defectlab.level_spacings(EnergyModel.quantum_defect(args.delta), n_lo, n_hi)
    max_spacing_diff = float(np.max(np.abs(hydrogen_sp - defect_sp)))
    lines.append(f"max |spacing difference| = {max_spacing_diff!r} a.u.")

    if args.delta == 0.0 and detuning == 0.0 and args.shift == 0.0:
        lines.append("verdict: identical spectra")
    elif detuning == -args.delta:
        lines.append("verdict: time scales equal, spectra differ")
    else:
        lines.append("verdict: unmatched centers, time scales differ")

    if args.compare:
        cfg = defectlab.ComparisonConfig(
            n_center=args.n, delta=args.delta, detuning=detuning,
            sigma=args.sigma, window=args.window,
        )
        result = defectlab.compare_revival_structure(cfg)
        lines.append(f"revival-structure difference = {result.difference!r}")
        for label in sorted(result.matched_dt_over_tcl):
            lines.append(f"  dt/T_cl[{label}] = {result.matched_dt_over_tcl[label]!r}")
        for label in result.one_sided_labels:
            lines.append(f"  one-sided match: {label}")
        lines.append("")
        lines.append("detuned-hydrogen records:")
        lines.append(revival.render_report_records(result.detuned).rstrip("\n"))
        lines.append("defect-at-resonance records:")
        lines.append(revival.render_report_records(result.defect).rstrip("\n"))

    report = "\n".join(lines) + "\n"
    if args.out is not None:
        sys.stdout.write(report)
        _emit(profile.to_csv(), args.out)
    else:
        sys.stdout.write(report + profile.to_csv())
    if args.plot:
        from .plotting import save_level_shift_figure

        save_level_shift_figure(profile, args.plot)
    return 0


COMMANDS = {
    "timescales": cmd_timescales,
    "autocorr": cmd_autocorr,
    "revivals": cmd_revivals,
    "squeezed": cmd_squeezed,
    "defect": cmd_defect,
}


def main(argv=None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        config = load_config(args.config) if args.config else {}
        args = merge_options(args, config)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"ERROR {USAGE_EXIT}: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except (ValueError, OSError) as exc:
        print(f"ERROR {USAGE_EXIT}: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except NumericsError as exc:
        print(f"ERROR {NUMERIC_EXIT}: {exc}", file=sys.stderr)
        return NUMERIC_EXIT


if __name__ == "__main__":
    sys.exit(main())
