"""Analytic critical-threshold classifiers and blow-up-time bounds.

Each classifier answers, from initial data alone, whether a 1D alignment
hydrodynamics solution stays classical forever (Subcritical), must break
down (Supercritical), or falls in an analytically undecided band (Gap).
All of them compare the initial velocity slope du0 against barriers built
from the communication kernel, the density, and the interaction strength.

Conventions: du0 holds the sampled initial velocity slope; psi*rho0 is
approximated by the full quadrature dx*sum_j psi(x_i-x_j)*rho0_j.  Margins
are signed so positive means the subcritical side; unconditional verdicts
carry infinite margins.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .kernels import CommunicationKernel, FloatArray, psi_eval

__all__ = [
    "NoBracketError",
    "OutOfScopeError",
    "SUBCRITICAL",
    "SUPERCRITICAL",
    "GAP",
    "ThresholdVerdict",
    "BlowUpBound",
    "psi_conv",
    "sigma_minus",
    "sigma_plus",
    "classify_euler_alignment",
    "classify_euler_poisson",
    "classify_constant_psi",
    "classify_damped_newtonian",
    "blowup_time_bound_newtonian",
    "blowup_time_bound_log",
]

SUBCRITICAL = "Subcritical"
SUPERCRITICAL = "Supercritical"
GAP = "Gap"


class NoBracketError(RuntimeError):
    """Root bracketing failed; inputs are outside the solvable regime."""


class OutOfScopeError(ValueError):
    """The classifier's hypotheses exclude these parameters."""


@dataclass(frozen=True)
class ThresholdVerdict:
    region: str
    witness: Optional[int] = None      # node index of the deciding location
    witness_x: Optional[float] = None
    margin: float = math.inf

    def __post_init__(self) -> None:
        if self.region == SUPERCRITICAL and self.witness is None:
            raise ValueError("supercritical verdicts must carry a witness")


@dataclass(frozen=True)
class BlowUpBound:
    finite: bool
    bound: float                        # inf when no finite bound holds
    witness_set_nonempty: bool
    witness_count: int = 0
    proof_variant_bound: Optional[float] = None

    def __post_init__(self) -> None:
        if self.finite and not self.bound > 0.0:
            raise ValueError("a finite life-span bound must be positive")


def psi_conv(kernel: CommunicationKernel, rho0: FloatArray,
             grid: FloatArray) -> FloatArray:
    """Quadrature convolution (psi * rho0)(x_i) = dx sum_j psi(x_i-x_j) rho0_j."""
    x = np.asarray(grid, dtype=float)
    r = np.asarray(rho0, dtype=float)
    dx = float(x[1] - x[0])
    psi = psi_eval(kernel, np.abs(x[:, None] - x[None, :]))
    return dx * (psi @ r)


def classify_euler_alignment(rho0: FloatArray, du0: FloatArray,
                             kernel: CommunicationKernel,
                             grid: FloatArray) -> ThresholdVerdict:
    """Pure alignment: global existence iff du0 + psi*rho0 >= 0 at every
    node; sharp, so never Gap."""
    q = np.asarray(du0, dtype=float) + psi_conv(kernel, rho0, grid)
    i = int(np.argmin(q))
    m = float(q[i])
    if m >= 0.0:
        return ThresholdVerdict(SUBCRITICAL, margin=m)
    return ThresholdVerdict(SUPERCRITICAL, i, float(grid[i]), m)


def sigma_minus(k: float, rho0_x) -> float | FloatArray:
    """Lower barrier -sqrt(-4 k rho0(x)) for the repulsive coupling k < 0."""
    if k >= 0.0:
        raise ValueError("sigma_minus needs a repulsive coupling k < 0")
    r = np.asarray(rho0_x, dtype=float)
    out = -np.sqrt(-4.0 * k * r)
    return float(out) if np.ndim(rho0_x) == 0 else out


def sigma_plus(k: float, rho0_x: float, psi_M: float = 1.0) -> float:
    """Upper barrier: the unique negative root of

        1/rho - (1/psi_M^2) (2k + psi_M s/rho - 2k e^{psi_M s/(2 k rho)}) = 0.

    Zero density short-circuits to 0.  The function is strictly increasing
    in s on (-inf, 0) with F(0) = 1/rho > 0, so a geometrically expanded
    bracket plus safeguarded Newton always lands the root; residual 1e-12.
    """
    if k >= 0.0:
        raise ValueError("sigma_plus needs a repulsive coupling k < 0")
    if psi_M <= 0.0:
        raise ValueError("psi_M must be positive")
    rho = float(rho0_x)
    if rho < 0.0:
        raise ValueError("density must be nonnegative")
    if rho == 0.0:
        return 0.0

    def _exp(s: float) -> float:
        expo = psi_M * s / (2.0 * k * rho)
        return math.exp(expo) if expo < 700.0 else math.inf

    # Work with the rho-rescaled residual G = rho * F, which stays O(1)
    # near the root even for tiny densities.  Same root, same monotonicity.
    def G(s: float) -> float:
        return 1.0 - (2.0 * k * rho + psi_M * s
                      - 2.0 * k * rho * _exp(s)) / psi_M ** 2

    def dG(s: float) -> float:
        return -(1.0 - _exp(s)) / psi_M

    scale = max(1.0, math.sqrt(-4.0 * k * rho))
    lo = -scale
    while G(lo) > 0.0:
        lo *= 2.0
        if -lo > 1e6 * scale:
            raise NoBracketError("no sign change while expanding the bracket")
    hi = 0.0
    s = 0.5 * (lo + hi)
    for _ in range(300):
        g = G(s)
        if abs(g) <= 1e-13 or (hi - lo) <= 1e-15 * max(1.0, -lo):
            return s
        if g < 0.0:
            lo = s
        else:
            hi = s
        # Newton only near the root; on the stiff exponential side it
        # creeps by O(k*rho) per iteration, so fall back to bisection.
        d = dG(s)
        step = s - g / d if (d != 0.0 and abs(g) <= 10.0
                             and math.isfinite(d)) else math.nan
        s = step if (lo < step < hi) else 0.5 * (lo + hi)
    raise NoBracketError("root refinement stalled")  # pragma: no cover


def classify_euler_poisson(rho0: FloatArray, du0: FloatArray,
                           kernel: CommunicationKernel, grid: FloatArray,
                           k: float, psi_M: float = 1.0) -> ThresholdVerdict:
    """Alignment plus 1D Newtonian coupling k|x|.

    Attractive k > 0: unconditional breakdown.  Repulsive k < 0: classical
    forever when du0 >= -psi*rho0 + sigma_plus holds everywhere, breakdown
    when du0 < -psi*rho0 + sigma_minus holds somewhere, otherwise Gap.
    """
    du = np.asarray(du0, dtype=float)
    if k > 0.0:
        i = int(np.argmin(du))
        return ThresholdVerdict(SUPERCRITICAL, i, float(grid[i]), -math.inf)
    if k == 0.0:
        return classify_euler_alignment(rho0, du, kernel, grid)

    conv = psi_conv(kernel, rho0, grid)
    r = np.asarray(rho0, dtype=float)
    s_plus = np.array([sigma_plus(k, ri, psi_M) for ri in r])
    s_minus = sigma_minus(k, r)

    sub = du + conv - s_plus       # >= 0 everywhere -> Subcritical
    sup = du + conv - s_minus      # < 0 somewhere  -> Supercritical
    i_sub = int(np.argmin(sub))
    i_sup = int(np.argmin(sup))
    if sub[i_sub] >= 0.0:
        return ThresholdVerdict(SUBCRITICAL, margin=float(sub[i_sub]))
    if sup[i_sup] < 0.0:
        return ThresholdVerdict(SUPERCRITICAL, i_sup, float(grid[i_sup]),
                                float(sup[i_sup]))
    return ThresholdVerdict(GAP, i_sub, float(grid[i_sub]), float(sub[i_sub]))


def classify_constant_psi(rho0: FloatArray, du0: FloatArray,
                          grid: FloatArray, k: float) -> ThresholdVerdict:
    """Sharp threshold for constant communication and repulsive k < 0:
    classical forever iff du0 > -M0 + sigma at every node."""
    if k >= 0.0:
        raise ValueError("the sharp constant-kernel threshold needs k < 0")
    r = np.asarray(rho0, dtype=float)
    du = np.asarray(du0, dtype=float)
    x = np.asarray(grid, dtype=float)
    m0 = float((x[1] - x[0]) * r.sum())
    sigma = np.array([sigma_plus(k, ri, 1.0) for ri in r])
    q = du + m0 - sigma
    i = int(np.argmin(q))
    if q[i] > 0.0:
        return ThresholdVerdict(SUBCRITICAL, margin=float(q[i]))
    return ThresholdVerdict(SUPERCRITICAL, i, float(x[i]), float(q[i]))


def classify_damped_newtonian(rho0: FloatArray, du0: FloatArray,
                              grid: FloatArray, M0: float) -> ThresholdVerdict:
    """Sharp threshold for linear damping plus confined Newtonian repulsion,
    total mass M0 < 1/4.

    A node x* forces breakdown exactly when du0 < 0, the base
    A = lambda1*du0 + rho0 - M0 is positive, and

        rho0 <= A^(-lambda2/sqrt(Xi)) * B^(lambda1/sqrt(Xi)),
        B = lambda2*du0 + rho0 - M0,

    evaluated in log space.  (Along characteristics (d/rho, 1/rho) obey a
    damped linear oscillator with spectrum lambda_{1,2}; the inequality
    says the interior minimum of 1/rho reaches zero.)
    """
    if M0 >= 0.25:
        raise OutOfScopeError("sharp threshold requires total mass < 1/4")
    if M0 <= 0.0:
        raise ValueError("total mass must be positive")
    r = np.asarray(rho0, dtype=float)
    du = np.asarray(du0, dtype=float)
    x = np.asarray(grid, dtype=float)
    xi = 1.0 - 4.0 * M0
    sq = math.sqrt(xi)
    lam1 = 0.5 * (-1.0 + sq)
    lam2 = 0.5 * (-1.0 - sq)

    a = lam1 * du + r - M0
    b = lam2 * du + r - M0
    eligible = (du < 0.0) & (a > 0.0)     # b > a > 0 follows when du < 0
    q = np.full_like(r, math.inf)
    if np.any(eligible):
        with np.errstate(divide="ignore"):
            rhs_log = (-lam2 / sq) * np.log(a[eligible]) \
                + (lam1 / sq) * np.log(b[eligible])
            q[eligible] = np.log(r[eligible]) - rhs_log
    i = int(np.argmin(q))
    if q[i] <= 0.0:
        return ThresholdVerdict(SUPERCRITICAL, i, float(x[i]), float(q[i]))
    margin = float(q[i]) if math.isfinite(q[i]) else math.inf
    return ThresholdVerdict(SUBCRITICAL, margin=margin)


def blowup_time_bound_newtonian(rho0: FloatArray, du0: FloatArray,
                                grid: FloatArray) -> BlowUpBound:
    """Life-span bound for the damped confined-Newtonian system.

    Nodes with rho0 > 0, du0 < 0 and
    (1 + du0)/rho0 + 2 log(1 - du0/(2 rho0)) <= 0 force breakdown within
    2 log(1 - du0/(2 rho0)); the factor-2-free variant that appears in an
    intermediate step of the derivation is reported alongside.
    """
    r = np.asarray(rho0, dtype=float)
    du = np.asarray(du0, dtype=float)
    test = (r > 0.0) & (du < 0.0)
    if not np.any(test):
        return BlowUpBound(False, math.inf, False)
    lg = np.log1p(-du[test] / (2.0 * r[test]))
    in_s = (1.0 + du[test]) / r[test] + 2.0 * lg <= 0.0
    count = int(np.count_nonzero(in_s))
    if count == 0:
        return BlowUpBound(False, math.inf, False)
    t_half = float(lg[in_s].min())
    return BlowUpBound(True, 2.0 * t_half, True, witness_count=count,
                       proof_variant_bound=t_half)


def blowup_time_bound_log(rho0: FloatArray, du0: FloatArray,
                          grid: FloatArray, M0: float) -> BlowUpBound:
    """Life-span bound for damped dynamics with logarithmic repulsion:
    finite exactly when min du0 < d_- = (-1 - sqrt(1-4 M0))/2, and then
    T <= 1/(d_- - min du0)."""
    if 1.0 - 4.0 * M0 < 0.0:
        raise OutOfScopeError("bound requires 1 - 4*M0 >= 0")
    d_minus = 0.5 * (-1.0 - math.sqrt(1.0 - 4.0 * M0))
    du = np.asarray(du0, dtype=float)
    d0 = float(du.min())
    if d0 < d_minus:
        count = int(np.count_nonzero(du < d_minus))
        return BlowUpBound(True, 1.0 / (d_minus - d0), True, witness_count=count)
    return BlowUpBound(False, math.inf, False)
