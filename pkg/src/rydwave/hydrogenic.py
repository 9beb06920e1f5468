"""Stable evaluation of hydrogen radial eigenfunctions and radial quadrature.

At n ~ 50 the textbook closed form for R_{n,l} is numerically hostile: the
factorials in the normalization overflow doubles and the Laguerre polynomial
swings over hundreds of orders of magnitude across the classically allowed
region.  Evaluation here therefore runs the three-term Laguerre recurrence
upward in the degree with per-element rescaling, assembles the normalization
from log-gamma differences, and recombines everything in log space.

Two integration paths are provided.  ``overlap`` uses tolerance-driven
adaptive Gauss panels and fails loudly when its panel budget is exhausted;
``radial_grid`` builds a fixed composite Gauss grid (quadratically spaced
breakpoints, densest near the origin where the eigenfunctions oscillate
fastest) for bulk work such as time evolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import QuadratureError

# Rescaling threshold and factor for the Laguerre recurrence.  2^-512 keeps
# the rescale exactly representable so the log bookkeeping is exact.
_RESCALE_LIMIT = 1e250
_RESCALE_LOG = 512.0 * math.log(2.0)
_RESCALE_FACTOR = 2.0**-512


def _laguerre_scaled(degree: int, order: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Generalized Laguerre L_degree^order(x) as (scaled values, log scale)."""
    prev = np.ones_like(x)
    scale = np.zeros_like(x)
    if degree == 0:
        return prev, scale
    cur = 1.0 + order - x
    for j in range(1, degree):
        prev, cur = cur, ((2.0 * j + 1.0 + order - x) * cur - (j + order) * prev) / (j + 1.0)
        big = np.abs(cur) > _RESCALE_LIMIT
        if big.any():
            factor = np.where(big, _RESCALE_FACTOR, 1.0)
            prev = prev * factor
            cur = cur * factor
            scale = scale + np.where(big, _RESCALE_LOG, 0.0)
    return cur, scale


def _log_norm(n: int, l: int) -> float:
    """log of the radial normalization sqrt((2/n)^3 (n-l-1)! / (2n (n+l)!))."""
    return 0.5 * (
        3.0 * math.log(2.0 / n) + math.lgamma(n - l) - math.log(2.0 * n) - math.lgamma(n + l + 1)
    )


def _validate_nl(n: int, l: int):
    if l < 0:
        raise ValueError(f"angular momentum must be >= 0, got {l}")
    if n < l + 1:
        raise ValueError(f"need n >= l + 1, got n={n}, l={l}")


def radial_eigenfunction(n: int, l: int, r) -> np.ndarray:
    """Normalized hydrogen radial eigenfunction R_{n,l}(r), r > 0 in a.u."""
    R, _ = radial_eigenfunction_pair(n, l, r)
    return R


def radial_eigenfunction_pair(n: int, l: int, r) -> tuple[np.ndarray, np.ndarray]:
    """R_{n,l}(r) together with its radial derivative dR/dr.

    The derivative uses d/dx L_k^a = -L_{k-1}^{a+1}; both Laguerre strands
    carry independent rescale exponents that are recombined on a common
    log scale so no intermediate overflows.
    """
    _validate_nl(n, l)
    r = np.asarray(r, dtype=float)
    if (r <= 0.0).any():
        raise ValueError("radial coordinate must be positive")
    x = 2.0 * r / n
    degree, order = n - l - 1, 2 * l + 1
    L, sL = _laguerre_scaled(degree, order, x)
    if degree >= 1:
        M, sM = _laguerre_scaled(degree - 1, order + 1, x)
    else:
        M, sM = np.zeros_like(x), np.zeros_like(x)
    lnx = np.log(x)
    base = _log_norm(n, l) - x / 2.0 + l * lnx
    R = np.sign(L) * np.exp(base + sL + np.log(np.abs(L), where=L != 0.0, out=np.full_like(L, -np.inf)))
    common = np.maximum(sL, sM)
    term = (l - x / 2.0) * L * np.exp(sL - common) - x * M * np.exp(sM - common)
    dR = (2.0 / n) * np.exp(base - lnx + common) * term
    return R, dR


@dataclass(frozen=True)
class RadialEigenstate:
    """Evaluation handle for one hydrogen radial eigenstate."""

    n: int
    l: int = 1

    def __post_init__(self):
        _validate_nl(self.n, self.l)

    def __call__(self, r) -> np.ndarray:
        return radial_eigenfunction(self.n, self.l, r)

    def derivative(self, r) -> np.ndarray:
        return radial_eigenfunction_pair(self.n, self.l, r)[1]


@dataclass(frozen=True)
class QuadratureRule:
    """Adaptive-subdivision Gauss panel scheme for radial integrals.

    ``r_max_factor`` fixes the integration cutoff r_max = r_max_factor * n^2,
    which must cover the classically allowed region (outer turning point
    near 2 n^2), hence the factor-three floor.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    r_max_factor: float = 3.0
    points: int = 15
    max_panels: int = 4000

    def __post_init__(self):
        if self.abs_tol <= 0.0 or self.rel_tol <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.r_max_factor < 3.0:
            raise ValueError("r_max_factor must be >= 3 to cover the classical region")
        if self.points < 3:
            raise ValueError("need at least 3 Gauss points per panel")

    def r_max(self, n: int) -> float:
        return self.r_max_factor * float(n) ** 2


def _panel_nodes(points: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    lo_x, lo_w = np.polynomial.legendre.leggauss(points)
    hi_x, hi_w = np.polynomial.legendre.leggauss(2 * points)
    return lo_x, lo_w, hi_x, hi_w


def adaptive_integrate(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    rule: QuadratureRule,
    seed_panels: int = 8,
) -> complex:
    """Integrate f over [a, b] with adaptively subdivided Gauss panels.

    Each panel carries a low/high order Gauss pair whose difference
    estimates its error; the worst panel is split until the summed error
    meets max(abs_tol, rel_tol * |integral|).  Raises
    :class:`~rydwave.errors.QuadratureError` once ``max_panels`` panels
    have been spawned without convergence.
    """
    lo_x, lo_w, hi_x, hi_w = _panel_nodes(rule.points)

    def estimates(lo: float, hi: float) -> tuple[complex, float]:
        mid, half = (lo + hi) / 2.0, (hi - lo) / 2.0
        coarse = half * np.sum(lo_w * f(mid + half * lo_x))
        fine = half * np.sum(hi_w * f(mid + half * hi_x))
        return complex(fine), abs(fine - coarse)

    edges = np.linspace(a, b, seed_panels + 1)
    panels = [(e0, e1, *estimates(e0, e1)) for e0, e1 in zip(edges[:-1], edges[1:])]
    while True:
        total = sum(p[2] for p in panels)
        err = sum(p[3] for p in panels)
        if err <= max(rule.abs_tol, rule.rel_tol * abs(total)):
            return total
        if len(panels) >= rule.max_panels:
            raise QuadratureError(
                f"adaptive integration on [{a}, {b}] stalled at {len(panels)} panels"
                f" with error estimate {err:.3e}"
            )
        worst = max(range(len(panels)), key=lambda i: panels[i][3])
        lo, hi, _, _ = panels.pop(worst)
        mid = (lo + hi) / 2.0
        panels.append((lo, mid, *estimates(lo, mid)))
        panels.append((mid, hi, *estimates(mid, hi)))


def overlap(f: Callable[[np.ndarray], np.ndarray], n: int, l: int, rule: QuadratureRule) -> complex:
    """Projection integral of a radial function onto R_{n,l}.

    Computes int_0^{r_max} R_{n,l}(r) f(r) r^2 dr with the rule's adaptive
    panels (the eigenfunction is real, so no conjugation is needed).  The
    cutoff r_max = r_max_factor * n^2 leaves only the exponentially dead
    tail of both factors outside the integration range.
    """
    _validate_nl(n, l)

    def integrand(r: np.ndarray) -> np.ndarray:
        return radial_eigenfunction(n, l, r) * f(r) * r * r

    # Gauss nodes are strictly interior, so the r > 0 domain is respected.
    return adaptive_integrate(integrand, 0.0, rule.r_max(n), rule, seed_panels=max(8, n // 2))


def radial_grid(r_max: float, panels: int = 200, points: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Fixed composite Gauss grid on (0, r_max] with quadratic breakpoints.

    Breakpoints r_j = r_max (j / panels)^2 concentrate nodes near the origin,
    matching the sqrt(r) growth of the local oscillation wavelength of
    high-n eigenfunctions, so a single grid integrates products of all
    states up to the n that fixed r_max to near machine precision.
    """
    if r_max <= 0.0:
        raise ValueError("r_max must be positive")
    xs, ws = np.polynomial.legendre.leggauss(points)
    j = np.arange(panels + 1, dtype=float)
    edges = r_max * (j / panels) ** 2
    mid = (edges[1:] + edges[:-1])[:, None] / 2.0
    half = (edges[1:] - edges[:-1])[:, None] / 2.0
    r = (mid + half * xs[None, :]).ravel()
    w = (half * np.broadcast_to(ws, (panels, points))).ravel()
    return r, w
