"""Bound-state energy models and the Taylor time scales they generate.

Two spectra are supported through a single parameterization: pure hydrogen
(``delta == 0``) and quantum-defect spectra where each level is shifted to an
effective quantum number ``n - delta``.  A rigid ``global_shift`` can be added
to model a uniform displacement of every level; it cancels out of all
derivatives and therefore out of every time scale.

Expansion centers are real-valued so that a single code path covers both
on-resonance excitation (integer center) and detuned or defect-shifted
excitation (noninteger effective center).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .units import au_to_ns


@dataclass(frozen=True)
class EnergyModel:
    """Rydberg-level energy model E(n) = -1/(2 (n - delta)^2) + global_shift.

    Parameters
    ----------
    delta : float
        Quantum defect (dimensionless, >= 0).  Zero for pure hydrogen.
    global_shift : float
        Rigid additive offset applied to every level, in atomic units.
    """

    delta: float = 0.0
    global_shift: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.delta) or self.delta < 0.0:
            raise ValueError(f"quantum defect must be finite and >= 0, got {self.delta}")
        if not math.isfinite(self.global_shift):
            raise ValueError("global_shift must be finite")

    @classmethod
    def hydrogen(cls, global_shift: float = 0.0) -> "EnergyModel":
        return cls(delta=0.0, global_shift=global_shift)

    @classmethod
    def quantum_defect(cls, delta: float, global_shift: float = 0.0) -> "EnergyModel":
        return cls(delta=delta, global_shift=global_shift)

    @property
    def kind(self) -> str:
        return "hydrogen" if self.delta == 0.0 else "quantum-defect"

    def effective(self, n) -> float:
        """Effective quantum number n - delta."""
        return n - self.delta

    def energy(self, n: int) -> float:
        """Bound-state energy of integer level ``n`` in atomic units."""
        if n != int(n) or n < 1:
            raise ValueError(f"principal quantum number must be an integer >= 1, got {n}")
        return self.energy_at(float(n))

    def energy_at(self, nu: float) -> float:
        """Energy formula extended to a real argument (used for expansions)."""
        eff = nu - self.delta
        if eff <= 0.0:
            raise ValueError(
                f"effective quantum number must be positive: nu={nu}, delta={self.delta}"
            )
        return -0.5 / (eff * eff) + self.global_shift

    def energy_derivatives(self, center: float, order: int = 3) -> list[float]:
        """Analytic d^k E / d nu^k at a real expansion center, k = 1..order.

        The rigid shift contributes nothing.  For the Coulomb form the
        derivatives are (nu-delta)^-3, -3 (nu-delta)^-4, 12 (nu-delta)^-5.
        """
        if order not in (1, 2, 3):
            raise ValueError(f"order must be 1, 2, or 3, got {order}")
        eff = center - self.delta
        if eff <= 0.0:
            raise ValueError(
                f"effective expansion center must be positive: center={center}, delta={self.delta}"
            )
        derivs = [eff**-3, -3.0 * eff**-4, 12.0 * eff**-5]
        return derivs[:order]

    def time_scales(self, center: float) -> "TimeScales":
        """Classical, revival, and superrevival periods at an expansion center.

        Defined from the Taylor derivatives of the spectrum:
        t_cl = 2 pi / E', t_rev = -2 pi / (E''/2), t_sr = 2 pi / (E'''/6).
        All three are stored as positive durations in atomic units.  The
        ordering t_cl < t_rev < t_sr holds for effective centers above 3/2.
        """
        d1, d2, d3 = self.energy_derivatives(center, order=3)
        return TimeScales(
            t_cl=2.0 * math.pi / d1,
            t_rev=-4.0 * math.pi / d2,
            t_sr=12.0 * math.pi / d3,
        )


@dataclass(frozen=True)
class TimeScales:
    """The three expansion time scales, in atomic units, ordered t_cl < t_rev < t_sr."""

    t_cl: float
    t_rev: float
    t_sr: float

    def __post_init__(self):
        for name in ("t_cl", "t_rev", "t_sr"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise ValueError(f"{name} must be positive and finite, got {v}")

    @property
    def t_cl_ns(self) -> float:
        return au_to_ns(self.t_cl)

    @property
    def t_rev_ns(self) -> float:
        return au_to_ns(self.t_rev)

    @property
    def t_sr_ns(self) -> float:
        return au_to_ns(self.t_sr)
