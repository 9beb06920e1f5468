"""Radial squeezed states: construction, fitting, expansion, and evolution.

The three-parameter family

    psi(r) = N r^alpha exp(-gamma0 r) exp(-i gamma1 r)

models a radially localized Rydberg packet at its outer turning point.  All
of its radial moments reduce to Gamma-function ratios, which makes the
three fitting conditions (vanishing mean radial momentum, mean radius at the
outer apsidal point, mean energy matching the dominant level) a one-variable
root-finding problem in alpha.

Time evolution goes through the hydrogen eigenbasis: the state is projected
onto R_{n,1} with adaptive quadrature, each coefficient acquires its level
phase, and radial observables are integrated on a fixed composite Gauss grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import BracketingError, NumericsError
from .hydrogenic import QuadratureRule, overlap, radial_eigenfunction_pair, radial_grid
from .spectrum import EnergyModel
from .units import ns_to_au

# alpha bracket scan: log grid over [ALPHA_MIN, 4 nbar]
ALPHA_MIN = 0.6
ALPHA_SCAN_POINTS = 200


@dataclass(frozen=True)
class RadialSqueezedState:
    """State r^alpha e^{-gamma0 r} e^{-i gamma1 r}, normalized against r^2 dr.

    The normalization constant squared is (2 gamma0)^(2 alpha + 3) divided by
    Gamma(2 alpha + 3); it is carried in log form so large alpha poses no
    overflow risk.
    """

    alpha: float
    gamma0: float
    gamma1: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "gamma0", "gamma1"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (math.isfinite(self.alpha) and self.alpha > 0.0):
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not (math.isfinite(self.gamma0) and self.gamma0 > 0.0):
            raise ValueError(f"gamma0 must be positive, got {self.gamma0}")
        if not math.isfinite(self.gamma1):
            raise ValueError("gamma1 must be finite")

    @property
    def log_norm(self) -> float:
        """log of the normalization constant N (N^2 integrates |psi|^2 r^2 to 1)."""
        return 0.5 * ((2.0 * self.alpha + 3.0) * math.log(2.0 * self.gamma0)
                      - math.lgamma(2.0 * self.alpha + 3.0))

    def envelope(self, r: np.ndarray) -> np.ndarray:
        """Real amplitude N r^alpha e^{-gamma0 r}."""
        r = np.asarray(r, dtype=float)
        return np.exp(self.log_norm + self.alpha * np.log(r) - self.gamma0 * r)

    def __call__(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        if self.gamma1 == 0.0:
            return self.envelope(r).astype(complex)
        return self.envelope(r) * np.exp(-1j * self.gamma1 * r)

    def density(self, r) -> np.ndarray:
        env = self.envelope(np.asarray(r, dtype=float))
        return env * env


@dataclass(frozen=True)
class Moments:
    r_mean: float
    r2_mean: float
    inv_r_mean: float
    inv_r2_mean: float
    p_mean: float
    p2_mean: float

    @property
    def delta_r(self) -> float:
        return math.sqrt(self.r2_mean - self.r_mean**2)

    @property
    def delta_p(self) -> float:
        return math.sqrt(self.p2_mean - self.p_mean**2)

    @property
    def uncertainty_product(self) -> float:
        return self.delta_r * self.delta_p


def moments(state: RadialSqueezedState) -> Moments:
    """Closed-form expectation values of r, r^2, 1/r, 1/r^2, p_r, p_r^2.

    The radial momentum is the symmetric operator p_r = -i (d/dr + 1/r).
    Requires alpha > 1/2 so the momentum variance is finite.
    """
    a, g0, g1 = state.alpha, state.gamma0, state.gamma1
    if a <= 0.5:
        raise ValueError(f"alpha must exceed 1/2 for finite momentum moments, got {a}")
    return Moments(
        r_mean=(2 * a + 3) / (2 * g0),
        r2_mean=(2 * a + 4) * (2 * a + 3) / (2 * g0) ** 2,
        inv_r_mean=2 * g0 / (2 * a + 2),
        inv_r2_mean=(2 * g0) ** 2 / ((2 * a + 2) * (2 * a + 1)),
        p_mean=-g1,
        p2_mean=g1 * g1 + g0 * g0 / (2 * a + 1),
    )


def analytic_uncertainty_product(alpha: float) -> float:
    """Delta r * Delta p_r of the family: (1/2) sqrt((2a+3)/(2a+1))."""
    return 0.5 * math.sqrt((2.0 * alpha + 3.0) / (2.0 * alpha + 1.0))


def energy_expectation(state: RadialSqueezedState, l: int = 1) -> float:
    """<H> = <p_r^2>/2 + l(l+1)/2 <1/r^2> - <1/r> for the Coulomb Hamiltonian."""
    m = moments(state)
    return 0.5 * m.p2_mean + 0.5 * l * (l + 1) * m.inv_r2_mean - m.inv_r_mean


@dataclass(frozen=True)
class SqueezedFitConditions:
    """Fit targets pinned to the Kepler orbit of the dominant level.

    r_out is the outer apsidal (turning) point of the classical orbit with
    energy E = -1/(2 nbar^2) and angular momentum l:
    r_out = nbar^2 (1 + sqrt(1 - l(l+1)/nbar^2)).
    """

    n_bar: float
    l: int = 1
    r_out: float = field(init=False)
    e_target: float = field(init=False)

    def __post_init__(self):
        if self.n_bar < 2:
            raise ValueError(f"n_bar must be at least 2, got {self.n_bar}")
        if self.l != 1:
            raise ValueError("only l = 1 radial packets are supported")
        disc = 1.0 - self.l * (self.l + 1) / self.n_bar**2
        object.__setattr__(self, "r_out", self.n_bar**2 * (1.0 + math.sqrt(disc)))
        object.__setattr__(self, "e_target", -0.5 / self.n_bar**2)


def _bisect_secant(f, lo: float, hi: float, f_lo: float, f_hi: float, iterations: int = 200) -> float:
    """Bracketed root polish: secant step when it stays inside, else bisection."""
    for _ in range(iterations):
        if f_hi != f_lo:
            mid = hi - f_hi * (hi - lo) / (f_hi - f_lo)
            if not lo < mid < hi:
                mid = 0.5 * (lo + hi)
        else:
            mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_lo < 0.0) == (f_mid < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
        if hi - lo <= 4.0 * np.finfo(float).eps * max(abs(lo), abs(hi)):
            break
    return 0.5 * (lo + hi)


def solve_parameters(cond: SqueezedFitConditions, tol: float = 1e-10) -> RadialSqueezedState:
    """Solve the three fit conditions for (alpha, gamma0, gamma1).

    <p_r> = 0 forces gamma1 = 0; <r> = r_out ties gamma0 = (2 alpha + 3) /
    (2 r_out); the remaining energy condition <H> = E is solved for alpha by
    a log-grid sign scan over [0.6, 4 nbar] followed by bisection with
    secant acceleration.  Residuals of all three conditions are verified
    against ``tol`` before returning.
    """

    def residual(alpha: float) -> float:
        g0 = (2.0 * alpha + 3.0) / (2.0 * cond.r_out)
        state = RadialSqueezedState(alpha=alpha, gamma0=g0, gamma1=0.0)
        return energy_expectation(state, cond.l) - cond.e_target

    grid = np.geomspace(ALPHA_MIN, 4.0 * cond.n_bar, ALPHA_SCAN_POINTS)
    values = [residual(a) for a in grid]
    bracket = None
    for a0, a1, f0, f1 in zip(grid[:-1], grid[1:], values[:-1], values[1:]):
        if f0 == 0.0:
            bracket = (a0, a0, f0, f0)
            break
        if (f0 < 0.0) != (f1 < 0.0):
            bracket = (a0, a1, f0, f1)
            break
    if bracket is None:
        raise BracketingError(
            f"no sign change for the energy condition in alpha bracket"
            f" [{grid[0]:.6g}, {grid[-1]:.6g}] at n_bar={cond.n_bar}"
        )
    alpha = bracket[0] if bracket[0] == bracket[1] else _bisect_secant(residual, *bracket)
    gamma0 = (2.0 * alpha + 3.0) / (2.0 * cond.r_out)
    state = RadialSqueezedState(alpha=alpha, gamma0=gamma0, gamma1=0.0)

    m = moments(state)
    checks = (
        abs(m.p_mean),
        abs(m.r_mean - cond.r_out) / cond.r_out,
        abs(energy_expectation(state, cond.l) - cond.e_target) / abs(cond.e_target),
    )
    if max(checks) > tol:
        raise NumericsError(
            f"fit residuals {checks} exceed tolerance {tol} at n_bar={cond.n_bar}"
        )
    return state


@dataclass(frozen=True)
class EigenExpansion:
    """Hydrogen-basis coefficients of a radial state at fixed l."""

    levels: np.ndarray
    coefficients: np.ndarray
    l: int = 1

    @property
    def captured_probability(self) -> float:
        return float(np.sum(np.abs(self.coefficients) ** 2))

    @property
    def dominant_level(self) -> int:
        return int(self.levels[int(np.argmax(np.abs(self.coefficients)))])


def expand_in_eigenbasis(
    state: RadialSqueezedState,
    levels: Sequence[int],
    rule: QuadratureRule | None = None,
) -> EigenExpansion:
    """Project a squeezed state onto hydrogen radial eigenstates.

    Coefficients are c_n = int R_{n,1} psi(r) r^2 dr over the rule's cutoff;
    quadrature failures propagate.  The captured probability
    sum |c_n|^2 reports how much of the state the level range holds.
    """
    rule = rule or QuadratureRule()
    ns = np.array(sorted(int(n) for n in levels))
    coeffs = np.array([overlap(state, int(n), 1, rule) for n in ns])
    if state.gamma1 == 0.0:
        coeffs = coeffs.real.astype(complex)
    return EigenExpansion(levels=ns, coefficients=coeffs, l=1)


def default_level_range(n_bar: float, half_width: int = 12) -> list[int]:
    """Levels n_bar +- half_width, clipped to physical n >= l + 1 = 2."""
    base = int(round(n_bar))
    return [n for n in range(base - half_width, base + half_width + 1) if n >= 2]


@dataclass(frozen=True)
class EvolutionSample:
    t_ns: float
    norm: float
    r_mean: float
    delta_r: float
    delta_p: float

    @property
    def uncertainty_product(self) -> float:
        return self.delta_r * self.delta_p


class PacketEvolution:
    """Time-evolved radial packet with quadrature-based observables.

    Eigenfunctions and their derivatives are tabulated once on a fixed
    composite Gauss grid; each sample time then costs two matrix-vector
    products.  Observables are normalized by the quadrature norm of the
    truncated state, which stays constant in time up to grid error.
    """

    def __init__(
        self,
        expansion: EigenExpansion,
        model: EnergyModel | None = None,
        grid_panels: int = 200,
        grid_points: int = 16,
    ):
        self.expansion = expansion
        self.model = model or EnergyModel.hydrogen()
        n_max = int(expansion.levels.max())
        self.r, self.w = radial_grid(3.0 * n_max**2, grid_panels, grid_points)
        pairs = [radial_eigenfunction_pair(int(n), expansion.l, self.r) for n in expansion.levels]
        self._R = np.array([p[0] for p in pairs])
        self._dR = np.array([p[1] for p in pairs])
        self._energies = np.array([self.model.energy(int(n)) for n in expansion.levels])

    def state_at(self, t_au: float) -> tuple[np.ndarray, np.ndarray]:
        """(psi, dpsi/dr) on the quadrature grid at atomic time t_au."""
        phased = self.expansion.coefficients * np.exp(-1j * self._energies * t_au)
        psi = phased @ self._R
        dpsi = phased @ self._dR
        return psi, dpsi

    def observables_at(self, t_ns: float) -> EvolutionSample:
        psi, dpsi = self.state_at(ns_to_au(t_ns))
        r, w = self.r, self.w
        rho = psi.real**2 + psi.imag**2
        wr2 = w * r * r
        norm = float(np.sum(wr2 * rho))
        r_mean = float(np.sum(wr2 * rho * r)) / norm
        r2_mean = float(np.sum(wr2 * rho * r * r)) / norm
        grad = dpsi + psi / r    # (d/dr + 1/r) psi, the symmetric momentum kernel
        p_mean = float(np.sum(wr2 * (np.conj(psi) * grad).imag)) / norm
        p2_mean = float(np.sum(wr2 * (grad.real**2 + grad.imag**2))) / norm
        return EvolutionSample(
            t_ns=t_ns,
            norm=norm,
            r_mean=r_mean,
            delta_r=math.sqrt(max(r2_mean - r_mean**2, 0.0)),
            delta_p=math.sqrt(max(p2_mean - p_mean**2, 0.0)),
        )

    def track(self, t_ns_grid) -> list[EvolutionSample]:
        return [self.observables_at(float(t)) for t in np.asarray(t_ns_grid, dtype=float)]


UNCERTAINTY_CSV_HEADER = "t_ns,r_mean,delta_r,delta_p,uncertainty_product"


def uncertainty_to_csv(samples: Sequence[EvolutionSample]) -> str:
    """Serialize evolution samples with the same exact-round-trip format as traces."""
    lines = [UNCERTAINTY_CSV_HEADER]
    for s in samples:
        lines.append(
            f"{s.t_ns!r},{s.r_mean!r},{s.delta_r!r},{s.delta_p!r},{s.uncertainty_product!r}"
        )
    return "\n".join(lines) + "\n"
