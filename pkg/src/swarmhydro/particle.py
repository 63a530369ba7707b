"""Second-order alignment particle systems and the first-order swarm model.

N particles in d in {1, 2} dimensions interact through a communication
kernel (Cucker-Smale normalization by N, or Motsch-Tadmor normalization by
the local communication mass) and, optionally, through a radial pairwise
potential.  The first-order mode drops velocities entirely and moves
particles down the interaction field.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import _core
from .integrators import IntegratorConfig, MONITOR_STOP, integrate_adaptive, integrate_fixed
from .kernels import (
    CommunicationKernel,
    FloatArray,
    NoRootError,
    PotentialSpec,
    SingularForceError,
    psi_eval,
    solve_R_tilde,
)

__all__ = [
    "NonFiniteError",
    "NotApplicableError",
    "ParticleState",
    "ParticleModel",
    "FlockDiagnostics",
    "ParticleRun",
    "EnvelopeReport",
    "particle_rhs",
    "diagnostics",
    "generate_uniform_ic",
    "generate_two_group_ic",
    "simulate_particles",
    "flocking_envelope_check",
]


class NonFiniteError(RuntimeError):
    """A state entry overflowed or became NaN during integration."""


class NotApplicableError(ValueError):
    """The requested estimate's hypotheses are not met."""


@dataclass
class ParticleState:
    """Positions (N, d) and, unless first-order, velocities (N, d)."""

    t: float
    x: FloatArray
    v: Optional[FloatArray] = None

    def __post_init__(self) -> None:
        self.x = np.atleast_2d(np.asarray(self.x, dtype=float))
        if self.x.shape[1] not in (1, 2):
            raise ValueError("dimension must be 1 or 2")
        if not np.all(np.isfinite(self.x)):
            raise ValueError("positions must be finite")
        if self.v is not None:
            self.v = np.atleast_2d(np.asarray(self.v, dtype=float))
            if self.v.shape != self.x.shape:
                raise ValueError("v must match x in shape")
            if not np.all(np.isfinite(self.v)):
                raise ValueError("velocities must be finite")

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def d(self) -> int:
        return self.x.shape[1]

    def copy(self) -> "ParticleState":
        return ParticleState(self.t, self.x.copy(),
                             None if self.v is None else self.v.copy())


@dataclass(frozen=True)
class ParticleModel:
    alignment: str = "cs"            # "cs" | "mt" | "none"
    kernel: CommunicationKernel = field(default_factory=CommunicationKernel)
    potential: Optional[PotentialSpec] = None
    first_order: bool = False

    def __post_init__(self) -> None:
        if self.alignment not in ("cs", "mt", "none"):
            raise ValueError(f"unknown alignment {self.alignment!r}")
        if self.first_order and self.potential is None:
            raise ValueError("first-order mode needs a potential")

    def describe(self) -> dict:
        out: dict = {"alignment": self.alignment, "first_order": self.first_order,
                     "beta": self.kernel.beta,
                     "constant_kernel": self.kernel.constant_mode}
        if self.potential is not None:
            p = self.potential
            out["potential"] = {"kind": p.kind, "k": p.k, "alpha": p.alpha,
                                "a": p.a, "b": p.b, "eps": p.eps}
        return out


@dataclass(frozen=True)
class FlockDiagnostics:
    """Phase-space diameters and the mean velocity of one state."""

    Rx: float
    Rv: float
    mean_velocity: FloatArray


def _check_singular(model: ParticleModel, x: FloatArray) -> None:
    pot = model.potential
    if pot is None or not pot.singular_at_zero:
        return
    diff = x[:, None, :] - x[None, :, :]
    r2 = np.einsum("ijk,ijk->ij", diff, diff)
    np.fill_diagonal(r2, np.inf)
    if r2.min() == 0.0:
        raise SingularForceError(
            "coincident particles under a potential singular at zero")


def particle_rhs(state: ParticleState, model: ParticleModel):
    """Time derivative of the state.

    Second order: returns (dx, dv) = (v, alignment + potential force).
    First order: returns dx = -(1/N) sum_j grad K(x_i - x_j).
    """
    _check_singular(model, state.x)
    out = np.empty_like(state.x)
    use_psi = model.alignment in ("cs", "mt") and not model.first_order
    beta = 0.0 if model.kernel.constant_mode else model.kernel.beta
    pot = model.potential
    if pot is None:
        code, k, alpha, pa, pb, eps = _core.POT_CODES[None], 0.0, 0.0, 0.0, 0.0, 0.0
    else:
        code, k, alpha, pa, pb, eps = (_core.POT_CODES[pot.kind], pot.k,
                                       pot.alpha, pot.a, pot.b, pot.eps)
    v = state.v if state.v is not None else np.zeros_like(state.x)
    _core.particle_accel(state.x, v, beta, use_psi, model.alignment == "mt",
                         code, k, alpha, pa, pb, eps, model.first_order, out)
    if model.first_order:
        return out
    return state.v.copy(), out


def diagnostics(state: ParticleState) -> FlockDiagnostics:
    """Exact pairwise phase-space diameters (O(N^2)) and mean velocity."""
    diff = state.x[:, None, :] - state.x[None, :, :]
    rx = float(np.sqrt(np.einsum("ijk,ijk->ij", diff, diff).max()))
    if state.v is None:
        return FlockDiagnostics(rx, 0.0, np.zeros(state.d))
    dv = state.v[:, None, :] - state.v[None, :, :]
    rv = float(np.sqrt(np.einsum("ijk,ijk->ij", dv, dv).max()))
    return FlockDiagnostics(rx, rv, state.v.mean(axis=0))


def generate_uniform_ic(n: int,
                        position_box: Sequence[Sequence[float]],
                        velocity_box: Sequence[Sequence[float]],
                        target_mean_velocity: Optional[Sequence[float]] = None,
                        seed: int = 0) -> ParticleState:
    """i.i.d. uniform draws from per-axis boxes; optional exact mean shift.

    Boxes are ((lo, hi), ...) per axis.  When target_mean_velocity is set
    the sampled velocities are rigidly shifted so the empirical mean hits
    the target exactly.
    """
    rng = np.random.default_rng(seed)
    pbox = np.asarray(position_box, dtype=float)
    vbox = np.asarray(velocity_box, dtype=float)
    if pbox.ndim != 2 or np.any(pbox[:, 1] <= pbox[:, 0]):
        raise ValueError("degenerate position box")
    if vbox.shape != pbox.shape or np.any(vbox[:, 1] <= vbox[:, 0]):
        raise ValueError("velocity box must match and be non-degenerate")
    d = pbox.shape[0]
    x = rng.uniform(pbox[:, 0], pbox[:, 1], size=(n, d))
    v = rng.uniform(vbox[:, 0], vbox[:, 1], size=(n, d))
    if target_mean_velocity is not None:
        v = v + (np.asarray(target_mean_velocity, dtype=float) - v.mean(axis=0))
    return ParticleState(0.0, x, v)


def generate_two_group_ic(seed: int = 0,
                          n_large: int = 50,
                          n_small: int = 5) -> ParticleState:
    """A heavy cluster near the origin plus a light one far to the right.

    Large group positions uniform on [-10, 10]^2, small group on
    [60, 63] x [-1.5, 1.5]; all velocities uniform on [-5, 5] x [-4.3, 5.7]
    shifted so the overall mean velocity is exactly (0, 0.7).
    """
    rng = np.random.default_rng(seed)
    xl = rng.uniform([-10.0, -10.0], [10.0, 10.0], size=(n_large, 2))
    xs = rng.uniform([60.0, -1.5], [63.0, 1.5], size=(n_small, 2))
    v = rng.uniform([-5.0, -4.3], [5.0, 5.7], size=(n_large + n_small, 2))
    v = v + (np.array([0.0, 0.7]) - v.mean(axis=0))
    return ParticleState(0.0, np.vstack([xl, xs]), v)


@dataclass
class ParticleRun:
    """Sampled trajectory plus per-sample flocking diagnostics."""

    model: dict
    params: dict
    times: FloatArray
    xs: FloatArray                    # (T, N, d)
    vs: Optional[FloatArray]          # (T, N, d) or None in first-order mode
    Rx: FloatArray
    Rv: FloatArray
    mean_velocity: FloatArray         # (T, d)
    final_state: ParticleState = None
    wall_time: float = 0.0


def simulate_particles(model: ParticleModel,
                       ic: ParticleState,
                       t_end: float,
                       integrator_cfg: Optional[IntegratorConfig] = None) -> ParticleRun:
    """Integrate the particle system and collect diagnostics per sample.

    Raises NonFiniteError if the state overflows mid-run; deterministic
    given the initial state and configuration.
    """
    if t_end <= ic.t:
        raise ValueError("t_end must exceed the initial time")
    cfg = integrator_cfg or IntegratorConfig()
    n, d = ic.n, ic.d
    first = model.first_order
    if not first and ic.v is None:
        raise ValueError("second-order model needs velocities")

    work = ic.copy()

    if first:
        def rhs(t, y):
            work.t = t
            work.x = y.reshape(n, d)
            return particle_rhs(work, model).ravel()
        y0 = ic.x.ravel().copy()
    else:
        def rhs(t, y):
            work.t = t
            work.x = y[:n * d].reshape(n, d)
            work.v = y[n * d:].reshape(n, d)
            dx, dv = particle_rhs(work, model)
            return np.concatenate([dx.ravel(), dv.ravel()])
        y0 = np.concatenate([ic.x.ravel(), ic.v.ravel()])

    def monitor(t_prev, t_new, y_new):
        if not np.all(np.isfinite(y_new)):
            return "non-finite"
        return None

    started = time.perf_counter()
    if cfg.method == "rk4":
        res = integrate_fixed(rhs, y0, ic.t, t_end, cfg, monitor=monitor)
    else:
        res = integrate_adaptive(rhs, y0, ic.t, t_end, cfg, monitor=monitor)
    wall = time.perf_counter() - started
    if res.termination == MONITOR_STOP:
        raise NonFiniteError(f"state overflowed at t = {res.t_final:.6g}")

    xs = res.states[:, :n * d].reshape(-1, n, d)
    vs = None if first else res.states[:, n * d:].reshape(-1, n, d)
    rx = np.empty(len(res.times))
    rv = np.zeros(len(res.times))
    mv = np.zeros((len(res.times), d))
    snap = ic.copy()
    for i, t in enumerate(res.times):
        snap.t = t
        snap.x = xs[i]
        snap.v = None if first else vs[i]
        dg = diagnostics(snap)
        rx[i], rv[i], mv[i] = dg.Rx, dg.Rv, dg.mean_velocity

    final = ParticleState(res.t_final, xs[-1].copy(),
                          None if first else vs[-1].copy())
    params = {"n": n, "d": d, "t_end": t_end, "method": cfg.method,
              "rtol": cfg.rtol, "atol": cfg.atol, "dt": cfg.dt,
              "output_stride": cfg.output_stride,
              "n_accepted": res.n_accepted, "n_rejected": res.n_rejected}
    return ParticleRun(model.describe(), params, res.times, xs, vs, rx, rv, mv,
                       final, wall)


@dataclass(frozen=True)
class EnvelopeReport:
    """Worst-case margins of a velocity-diameter trajectory against the
    two-sided flocking envelope Rv(0) e^{-t} <= Rv(t) <= Rv(0) e^{-psi(R~) t}."""

    R_tilde: float
    psi_at_R_tilde: float
    max_upper_violation: float    # max over samples of Rv - upper (>0 is bad)
    max_lower_violation: float    # max over samples of lower - Rv (>0 is bad)

    @property
    def satisfied(self) -> bool:
        return self.max_upper_violation <= 0.0 and self.max_lower_violation <= 0.0


def flocking_envelope_check(run: ParticleRun,
                            kernel: CommunicationKernel,
                            slack: float = 0.0) -> EnvelopeReport:
    """Evaluate the two-sided flocking envelope along a CS run.

    Applicable when beta <= 1 (unconditional flocking) or when the initial
    diameters admit a finite R~; otherwise NotApplicableError is raised by
    the R~ solver.  ``slack`` loosens both bounds (for integrator error).
    """
    if run.model.get("alignment") != "cs":
        raise NotApplicableError("envelope holds for the CS normalization")
    rx0, rv0 = float(run.Rx[0]), float(run.Rv[0])
    if rv0 == 0.0:
        return EnvelopeReport(rx0, 1.0, 0.0, 0.0)
    try:
        r_tilde = solve_R_tilde(kernel, rx0, rv0)
    except NoRootError as exc:
        raise NotApplicableError(str(exc)) from exc
    psi_r = psi_eval(kernel, r_tilde)
    ts = run.times - run.times[0]
    upper = rv0 * np.exp(-psi_r * ts) + slack
    lower = rv0 * np.exp(-ts) - slack
    return EnvelopeReport(r_tilde, float(psi_r),
                          float((run.Rv - upper).max()),
                          float((lower - run.Rv).max()))
