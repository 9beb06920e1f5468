"""Rydberg wave-packet revival simulator and analysis toolkit.

Computes autocorrelation signals of Gaussian-weighted eigenstate
superpositions, the classical/revival/superrevival time-scale hierarchy and
its quantum-defect generalization, radial squeezed states with their fitted
parameters and time evolution, and the asymmetry between quantum defects and
laser detuning.
"""

from .defectlab import (
    ComparisonConfig,
    compare_revival_structure,
    level_shift_profile,
    scales_with_defect,
    scales_with_detuning,
)
from .errors import BracketingError, NumericsError, QuadratureError
from .hydrogenic import (
    QuadratureRule,
    RadialEigenstate,
    overlap,
    radial_eigenfunction,
    radial_eigenfunction_pair,
)
from .packet import (
    AutocorrTrace,
    PacketSpec,
    autocorr_exact,
    autocorr_third_order,
    gaussian_weights,
    make_grid,
    trace_from_csv,
    trace_to_csv,
)
from .revival import (
    RevivalReport,
    classify,
    detect_peaks,
    local_period,
    predict_superrevivals,
)
from .spectrum import EnergyModel, TimeScales
from .squeezed import (
    EigenExpansion,
    PacketEvolution,
    RadialSqueezedState,
    SqueezedFitConditions,
    analytic_uncertainty_product,
    expand_in_eigenbasis,
    moments,
    solve_parameters,
)
from .units import au_to_ns, ns_to_au

__version__ = "0.1.0"

__all__ = [
    "AutocorrTrace",
    "BracketingError",
    "ComparisonConfig",
    "EigenExpansion",
    "EnergyModel",
    "NumericsError",
    "PacketEvolution",
    "PacketSpec",
    "QuadratureError",
    "QuadratureRule",
    "RadialEigenstate",
    "RadialSqueezedState",
    "RevivalReport",
    "SqueezedFitConditions",
    "TimeScales",
    "analytic_uncertainty_product",
    "au_to_ns",
    "autocorr_exact",
    "autocorr_third_order",
    "classify",
    "compare_revival_structure",
    "detect_peaks",
    "expand_in_eigenbasis",
    "gaussian_weights",
    "level_shift_profile",
    "local_period",
    "make_grid",
    "moments",
    "ns_to_au",
    "overlap",
    "predict_superrevivals",
    "radial_eigenfunction",
    "radial_eigenfunction_pair",
    "scales_with_defect",
    "scales_with_detuning",
    "solve_parameters",
    "trace_from_csv",
    "trace_to_csv",
]
