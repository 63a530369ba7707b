"""Closed-form long-time density profiles and distance measures.

Three profile families cover the confined models: a unit-width indicator
(linear damping with Newtonian repulsion), a parabola (mollified quadratic
pressure), and a semicircle (logarithmic repulsion).  Profiles are returned
as evaluable objects; comparisons against simulation output happen in
Lagrangian coordinates so no interpolation back to a uniform grid is needed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import FloatArray, PotentialSpec, potential_grad

__all__ = [
    "SteadyProfile",
    "indicator_steady",
    "parabola_steady",
    "semicircle_steady",
    "force_residual",
    "cell_widths",
    "l1_distance",
    "linf_velocity",
]

_CBRT3 = 3.0 ** (1.0 / 3.0)
_SQRT2 = 2.0 ** 0.5


@dataclass(frozen=True)
class SteadyProfile:
    """A nonnegative density with closed-form shape and total mass M0."""

    kind: str                  # "indicator" | "parabola" | "semicircle"
    M0: float
    support: tuple[float, float]

    def __post_init__(self) -> None:
        if not self.M0 > 0.0:
            raise ValueError("total mass must be positive")
        if not self.support[0] < self.support[1]:
            raise ValueError("support must be a nonempty interval")

    def __call__(self, x) -> FloatArray:
        xx = np.asarray(x, dtype=float)
        a, b = self.support
        inside = (xx >= a) & (xx <= b)
        if self.kind == "indicator":
            out = np.where(inside, self.M0, 0.0)
        elif self.kind == "parabola":
            out = np.where(inside, -(self.M0 / 4.0) * (xx * xx - _CBRT3 ** 2), 0.0)
        elif self.kind == "semicircle":
            arg = np.clip(2.0 - xx * xx, 0.0, None)
            out = np.where(inside, (self.M0 / np.pi) * np.sqrt(arg), 0.0)
        else:
            raise ValueError(f"unknown profile kind {self.kind!r}")
        return out if np.ndim(x) else float(out)


def indicator_steady(M0: float, x_com: float = 0.0,
                     momentum: float = 0.0) -> SteadyProfile:
    """Unit-width plateau of height M0 centered at x_com + momentum/M0.

    The center tracks the conserved combination of first moment and
    momentum, so a moving initial state settles onto a shifted interval.
    """
    if not M0 > 0.0:
        raise ValueError("total mass must be positive")
    center = x_com + momentum / M0
    return SteadyProfile("indicator", M0, (center - 0.5, center + 0.5))


def parabola_steady(M0: float) -> SteadyProfile:
    """rho(x) = -(M0/4)(x^2 - 3^(2/3)) on [-3^(1/3), 3^(1/3)].

    The support radius is mass-independent; the quadratic confinement and
    the pressure term x*M + 2*rho_x cancel identically on the support.
    """
    return SteadyProfile("parabola", M0, (-_CBRT3, _CBRT3))


def semicircle_steady(M0: float) -> SteadyProfile:
    """rho(x) = (M0/pi) sqrt(2 - x^2) on [-sqrt(2), sqrt(2)].

    For this shape the Hilbert transform of rho equals (M0/pi)*pi*x = M0*x,
    which cancels the quadratic confinement force exactly, for every M0.
    The support radius sqrt(2) does not depend on the mass; force_residual
    against the log-plus-quadratic potential is the runtime check.
    """
    return SteadyProfile("semicircle", M0, (-_SQRT2, _SQRT2))


def force_residual(rho: FloatArray, grid: FloatArray, potential: PotentialSpec,
                   support_fraction: float = 1.0) -> float:
    """Sup-norm of the quadrature force (K' * rho)(x_i) over support nodes.

    Self-interaction (j = i) is excluded, which doubles as the principal
    value for singular potentials.  ``support_fraction`` < 1 restricts the
    sup to the central part of the support, away from the boundary where
    quadrature of a kink or an endpoint singularity degrades.
    """
    x = np.asarray(grid, dtype=float)
    r = np.asarray(rho, dtype=float)
    if np.any(r < 0.0):
        raise ValueError("profile values must be nonnegative")
    dx = float(x[1] - x[0])

    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)          # dummy, masked below
    kp = potential_grad(potential, diff)
    np.fill_diagonal(kp, 0.0)
    force = dx * (kp @ r)

    supp = np.flatnonzero(r > 0.0)
    if supp.size == 0:
        raise ValueError("profile has empty support on this grid")
    lo, hi = x[supp[0]], x[supp[-1]]
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    sel = supp[np.abs(x[supp] - mid) <= support_fraction * half]
    return float(np.max(np.abs(force[sel])))


def cell_widths(eta: FloatArray) -> FloatArray:
    """Trapezoid-consistent widths (eta_{i+1} - eta_{i-1})/2, halved at ends."""
    e = np.asarray(eta, dtype=float)
    w = np.empty_like(e)
    w[1:-1] = 0.5 * (e[2:] - e[:-2])
    w[0] = 0.5 * (e[1] - e[0])
    w[-1] = 0.5 * (e[-1] - e[-2])
    return w


def l1_distance(h: FloatArray, eta: FloatArray, profile: SteadyProfile) -> float:
    """L1 gap between a Lagrangian density sample and a closed-form profile,
    integrated with the nonuniform cell widths of the deformed grid."""
    hh = np.asarray(h, dtype=float)
    e = np.asarray(eta, dtype=float)
    return float(np.sum(np.abs(hh - profile(e)) * cell_widths(e)))


def linf_velocity(v: FloatArray) -> float:
    return float(np.max(np.abs(np.asarray(v, dtype=float))))
