"""1D Lagrangian solver for alignment hydrodynamics.

Nodes eta_i(t) carry frozen masses dx*rho_i(0); velocities evolve under a
nonlocal alignment force (Cucker-Smale or Motsch-Tadmor normalization, or
plain linear damping) plus an optional pairwise interaction force given by
a PotentialSpec.  Density along the flow is reconstructed from the inverse
Jacobian of the flow map, h_i = rho_i(0)/(d eta_i/dx), with the Jacobian
estimated by fourth-order finite differences on the initial uniform mesh.

A monitor watches every accepted step for loss of classical regularity:
node spacings collapsing, density blowing past a cap, or the velocity
profile developing an arbitrarily steep negative slope (how a shock looks
on a node set kept apart by a singular repulsion).
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from . import _core
from .integrators import (
    DT_UNDERFLOW,
    MONITOR_STOP,
    IntegratorConfig,
    integrate_adaptive,
    integrate_fixed,
)
from .kernels import (
    CommunicationKernel,
    FloatArray,
    PotentialSpec,
    SingularForceError,
    gauss_quadratic,
)

__all__ = [
    "ZeroMassError",
    "JacobianCollapseError",
    "HydroModel",
    "LagrangianState",
    "InitProfile",
    "MonitorThresholds",
    "MonitorVerdict",
    "RunSummary",
    "build_grid",
    "init_profiles",
    "deta_dx",
    "hydro_rhs",
    "density_reconstruct",
    "density_tolerant",
    "blow_up_monitor",
    "velocity_diameter_on_support",
    "simulate_hydro",
    "TERM_REACHED_END",
    "TERM_BLOW_UP",
]

TERM_REACHED_END = "ReachedEnd"
TERM_BLOW_UP = "BlowUpDetected"

ALIGNMENTS = ("cs", "mt", "damping", "none")


class ZeroMassError(ValueError):
    """The un-normalized density profile integrates to zero on the grid."""


class JacobianCollapseError(RuntimeError):
    """Flow-map Jacobian at or below the floor; density undefined."""


@dataclass(frozen=True)
class HydroModel:
    """Which forces act on the Lagrangian nodes.

    alignment: "cs" (mass-weighted alignment), "mt" (same numerator divided
    by the local communication mass), "damping" (-v), or "none".
    pressure_eps > 0 adds a mollified quadratic pressure; it is implemented
    fused with the unit quadratic confinement as the "gauss_quadratic"
    potential, so it requires potential=quadratic(alpha=1) (or None, which
    selects it implicitly).
    """

    alignment: str = "cs"
    kernel: Optional[CommunicationKernel] = None
    potential: Optional[PotentialSpec] = None
    pressure_eps: float = 0.0

    def __post_init__(self) -> None:
        if self.alignment not in ALIGNMENTS:
            raise ValueError(f"unknown alignment {self.alignment!r}")
        if self.alignment in ("cs", "mt") and self.kernel is None:
            object.__setattr__(self, "kernel", CommunicationKernel())
        if self.pressure_eps < 0.0:
            raise ValueError("pressure_eps must be nonnegative")
        if self.pressure_eps > 0.0:
            pot = self.potential
            ok = pot is None or (pot.kind == "quadratic" and pot.alpha == 1.0)
            if not ok:
                raise ValueError(
                    "mollified pressure is fused with the unit quadratic "
                    "confinement; pass potential=quadratic(1.0) or None"
                )

    @property
    def effective_potential(self) -> Optional[PotentialSpec]:
        if self.pressure_eps > 0.0:
            return gauss_quadratic(self.pressure_eps)
        return self.potential

    def describe(self) -> dict:
        """JSON-ready description used by run summaries."""
        out: dict = {"alignment": self.alignment}
        if self.alignment in ("cs", "mt") and self.kernel is not None:
            out["beta"] = self.kernel.beta
            out["constant_kernel"] = self.kernel.constant_mode
        pot = self.potential
        if pot is not None:
            out["potential"] = {"kind": pot.kind, "k": pot.k, "alpha": pot.alpha,
                                "a": pot.a, "b": pot.b, "eps": pot.eps}
        if self.pressure_eps > 0.0:
            out["pressure_eps"] = self.pressure_eps
        return out


@dataclass
class LagrangianState:
    """Node positions/velocities plus the frozen initial density.

    eta must stay strictly increasing while the solution is classical;
    h is filled on demand by density_reconstruct.
    """

    t: float
    eta: FloatArray
    v: FloatArray
    rho0: FloatArray
    dx: float
    h: Optional[FloatArray] = None

    def __post_init__(self) -> None:
        self.eta = np.asarray(self.eta, dtype=float)
        self.v = np.asarray(self.v, dtype=float)
        self.rho0 = np.asarray(self.rho0, dtype=float)
        if not (self.eta.shape == self.v.shape == self.rho0.shape):
            raise ValueError("eta, v, rho0 must share a shape")
        if np.any(self.rho0 < 0.0):
            raise ValueError("rho0 must be nonnegative")

    @property
    def n(self) -> int:
        return self.eta.size

    @property
    def weights(self) -> FloatArray:
        """Quadrature weights dx*rho_i(0) frozen along characteristics."""
        return self.dx * self.rho0

    def copy(self) -> "LagrangianState":
        return LagrangianState(self.t, self.eta.copy(), self.v.copy(),
                               self.rho0, self.dx,
                               None if self.h is None else self.h.copy())


@dataclass(frozen=True)
class InitProfile:
    """Initial-data recipe evaluated on a uniform grid.

    shape "cosine": rho ~ max(cos(pi x / (2 halfwidth)), 0), normalized so
    the quadrature mass dx*sum(rho) equals ``mass`` before the optional
    vacuum floor is added (total mass then grows by floor*|interval|).
    shape "two_group": two cosine bumps on [-1,1] and [5.5,6.5] with mass
    split 10:1, at rest in between.
    velocity shapes: "sine" -> -c sin(pi x / (2 halfwidth)), "linear" ->
    -c x, "two_group" -> +-c cos pieces matching the bumps; ``offset`` is
    added on top in every case.
    """

    shape: str = "cosine"
    halfwidth: float = 0.75
    mass: float = 1.0
    velocity_shape: str = "sine"
    c: float = 0.0
    offset: float = 0.0
    floor: float = 0.0

    _SHAPES = ("cosine", "two_group")
    _VSHAPES = ("sine", "linear", "two_group")

    def __post_init__(self) -> None:
        if self.shape not in self._SHAPES:
            raise ValueError(f"unknown density shape {self.shape!r}")
        if self.velocity_shape not in self._VSHAPES:
            raise ValueError(f"unknown velocity shape {self.velocity_shape!r}")
        if self.mass <= 0.0:
            raise ValueError("mass must be positive")
        if self.floor < 0.0:
            raise ValueError("floor must be nonnegative")
        if self.halfwidth <= 0.0:
            raise ValueError("halfwidth must be positive")


def build_grid(n: int, interval: Sequence[float]) -> tuple[FloatArray, float]:
    """Uniform nodes on [xl, xr]; returns (positions, spacing)."""
    xl, xr = float(interval[0]), float(interval[1])
    if n < 2:
        raise ValueError("need at least two nodes")
    if not xl < xr:
        raise ValueError("empty interval")
    x = np.linspace(xl, xr, n)
    return x, (xr - xl) / (n - 1)


_TG_BUMPS = ((-1.0, 1.0, 0.0, 2.0), (5.5, 6.5, 6.0, 1.0))  # (lo, hi, center, L)
_TG_MASS_SPLIT = (10.0 / 11.0, 1.0 / 11.0)


def init_profiles(profile: InitProfile, grid: FloatArray,
                  dx: float) -> tuple[FloatArray, FloatArray]:
    """Evaluate an InitProfile on the grid; returns (rho0, v0)."""
    x = np.asarray(grid, dtype=float)

    if profile.shape == "cosine":
        # window to the principal lobe so wide grids do not pick up the
        # periodic side bumps of the cosine
        raw = np.where(np.abs(x) <= profile.halfwidth,
                       np.maximum(np.cos(np.pi * x / (2.0 * profile.halfwidth)), 0.0),
                       0.0)
        z = dx * raw.sum()
        if z <= 0.0:
            raise ZeroMassError("density profile vanishes on the whole grid")
        rho0 = raw * (profile.mass / z)
    else:  # two_group
        rho0 = np.zeros_like(x)
        for (lo, hi, center, length), frac in zip(_TG_BUMPS, _TG_MASS_SPLIT):
            sel = (x >= lo) & (x <= hi)
            raw = np.cos(np.pi * (x[sel] - center) / length)
            z = dx * raw.sum()
            if z <= 0.0:
                raise ZeroMassError(f"no grid nodes inside bump [{lo}, {hi}]")
            rho0[sel] = raw * (profile.mass * frac / z)

    if profile.floor > 0.0:
        rho0 = rho0 + profile.floor

    if profile.velocity_shape == "sine":
        v0 = -profile.c * np.sin(np.pi * x / (2.0 * profile.halfwidth))
    elif profile.velocity_shape == "linear":
        v0 = -profile.c * x
    else:  # two_group: bumps move toward each other, vacuum at rest
        v0 = np.zeros_like(x)
        for sign, (lo, hi, center, length) in zip((1.0, -1.0), _TG_BUMPS):
            sel = (x >= lo) & (x <= hi)
            v0[sel] = sign * profile.c * np.cos(np.pi * (x[sel] - center) / length)
    return rho0, v0 + profile.offset


def deta_dx(eta: FloatArray, dx: float) -> FloatArray:
    """Fourth-order flow-map Jacobian estimate on the initial uniform mesh.

    Central five-point stencil inside, one-sided/biased five-point stencils
    at the two nodes on each end.
    """
    eta = np.asarray(eta, dtype=float)
    n = eta.size
    if n < 5:
        raise ValueError("stencils need at least five nodes")
    d = np.empty_like(eta)
    d[2:-2] = (eta[:-4] - 8.0 * eta[1:-3] + 8.0 * eta[3:-1] - eta[4:]) / (12.0 * dx)
    d[0] = (-25.0 * eta[0] + 48.0 * eta[1] - 36.0 * eta[2]
            + 16.0 * eta[3] - 3.0 * eta[4]) / (12.0 * dx)
    d[1] = (-3.0 * eta[0] - 10.0 * eta[1] + 18.0 * eta[2]
            - 6.0 * eta[3] + eta[4]) / (12.0 * dx)
    d[-2] = (3.0 * eta[-1] + 10.0 * eta[-2] - 18.0 * eta[-3]
             + 6.0 * eta[-4] - eta[-5]) / (12.0 * dx)
    d[-1] = (25.0 * eta[-1] - 48.0 * eta[-2] + 36.0 * eta[-3]
             - 16.0 * eta[-4] + 3.0 * eta[-5]) / (12.0 * dx)
    return d


def density_reconstruct(state: LagrangianState,
                        jacobian_floor: float = 1e-6) -> FloatArray:
    """h_i = rho_i(0) / (d eta_i/dx); raises once the Jacobian collapses."""
    jac = deta_dx(state.eta, state.dx)
    bad = jac <= jacobian_floor
    if np.any(bad):
        i = int(np.argmin(jac))
        raise JacobianCollapseError(
            f"Jacobian {jac[i]:.3e} at node {i} is at or below the floor "
            f"{jacobian_floor:.1e}")
    h = state.rho0 / jac
    state.h = h
    return h


def density_tolerant(state: LagrangianState) -> tuple[FloatArray, np.ndarray]:
    """Diagnostic density: nan where the Jacobian estimate is nonpositive.

    Returns (h, valid_mask).  The one-sided edge stencils can report junk
    (including negative values) at a vacuum boundary where the flow map has
    a fractional-power profile, so diagnostics must not crash there.
    """
    jac = deta_dx(state.eta, state.dx)
    valid = jac > 0.0
    h = np.full_like(jac, np.nan)
    h[valid] = state.rho0[valid] / jac[valid]
    return h, valid


def hydro_rhs(state: LagrangianState,
              model: HydroModel) -> tuple[FloatArray, FloatArray]:
    """(d eta/dt, dv/dt) for the current state."""
    pot = model.effective_potential
    if pot is not None and pot.singular_at_zero:
        spacing = np.diff(np.sort(state.eta))
        if spacing.size and spacing.min() == 0.0:
            raise SingularForceError(
                "coincident nodes under a potential singular at zero")
    dv = np.empty_like(state.v)
    use_psi = model.alignment in ("cs", "mt")
    kern = model.kernel if use_psi else None
    beta = 0.0 if kern is None or kern.constant_mode else kern.beta
    code, k, alpha, pa, pb, eps = _pot_args(pot)
    _core.hydro_accel(
        state.eta, state.v, state.weights, beta, use_psi,
        model.alignment == "mt", model.alignment == "damping",
        code, k, alpha, pa, pb, eps, dv)
    return state.v.copy(), dv


def _pot_args(pot: Optional[PotentialSpec]) -> tuple[int, float, float, float, float, float]:
    if pot is None:
        return _core.POT_CODES[None], 0.0, 0.0, 0.0, 0.0, 0.0
    return _core.POT_CODES[pot.kind], pot.k, pot.alpha, pot.a, pot.b, pot.eps


@dataclass(frozen=True)
class MonitorThresholds:
    """When the blow-up monitor declares loss of classical regularity.

    jacobian_floor applies to the first-order spacing ratios
    (eta_{i+1}-eta_i)/dx -- positivity of these is exactly well-definedness
    of the discrete flow map.  density_cap_factor multiplies max h(0).
    slope_cap bounds -(v_{i+1}-v_i)/(eta_{i+1}-eta_i): a shock forming onto
    nodes that a singular repulsion keeps apart shows up as a steep negative
    velocity slope long before any spacing reaches the floor.  dt_floor is
    forwarded to the adaptive integrator's minimum step.
    """

    jacobian_floor: float = 1e-6
    density_cap_factor: float = 1e6
    dt_floor: float = 1e-12
    slope_cap: float = 30.0


@dataclass(frozen=True)
class MonitorVerdict:
    triggered: bool
    quantity: Optional[str] = None   # "jacobian" | "density" | "velocity_slope"
    node: Optional[int] = None
    value: float = 0.0

    NO_TRIGGER = None  # set after class creation


MonitorVerdict.NO_TRIGGER = MonitorVerdict(False)


def blow_up_monitor(state: LagrangianState,
                    thresholds: MonitorThresholds = MonitorThresholds()) -> MonitorVerdict:
    """Check one state against the blow-up criteria; order: spacing,
    velocity slope, density cap."""
    spacing = np.diff(state.eta)
    i = int(np.argmin(spacing))
    ratio = spacing[i] / state.dx
    if ratio <= thresholds.jacobian_floor:
        return MonitorVerdict(True, "jacobian", i, float(ratio))

    slopes = np.diff(state.v) / spacing
    j = int(np.argmin(slopes))
    if slopes[j] <= -thresholds.slope_cap:
        return MonitorVerdict(True, "velocity_slope", j, float(slopes[j]))

    h, valid = density_tolerant(state)
    cap = thresholds.density_cap_factor * state.rho0.max()
    if np.any(valid):
        m = int(np.nanargmax(h))
        if h[m] >= cap:
            return MonitorVerdict(True, "density", m, float(h[m]))
    return MonitorVerdict.NO_TRIGGER


def velocity_diameter_on_support(state: LagrangianState) -> float:
    """max v - min v over nodes carrying mass."""
    mask = state.rho0 > 0.0
    if not np.any(mask):
        return 0.0
    vs = state.v[mask]
    return float(vs.max() - vs.min())


_TS_COLUMNS = ("t", "min_jacobian", "max_density", "sup_speed", "support_left",
               "support_right", "rv_support", "momentum", "mass")


@dataclass
class RunSummary:
    """Everything a hydrodynamic run produced.

    The JSON external interface is to_json_dict(); timeseries, snapshots
    and final_state are in-process extras for analysis and tests.
    """

    model: dict
    params: dict
    termination: str
    blow_up_interval: Optional[tuple[float, float]]
    wall_time: float
    trigger: Optional[dict] = None
    timeseries: dict = field(default_factory=dict)
    snapshots: list = field(default_factory=list)
    final_state: Optional[LagrangianState] = None

    def blow_up_midpoint(self) -> Optional[float]:
        if self.blow_up_interval is None:
            return None
        lo, hi = self.blow_up_interval
        return 0.5 * (lo + hi)

    def to_json_dict(self) -> dict:
        out = {
            "model": self.model,
            "params": self.params,
            "termination": self.termination,
            "blow_up_interval": (None if self.blow_up_interval is None
                                 else list(self.blow_up_interval)),
            "wall_time": self.wall_time,
        }
        if self.trigger is not None:
            out["trigger"] = self.trigger
        return out


def _diag_row(state: LagrangianState) -> tuple:
    jac = deta_dx(state.eta, state.dx)
    h, valid = density_tolerant(state)
    max_h = float(np.nanmax(h)) if np.any(valid) else float("inf")
    widths = np.diff(state.eta)
    hmid = np.where(valid[:-1], h[:-1], 0.0)
    mass = float(np.sum(hmid * widths))
    return (state.t,
            float(jac.min()),
            max_h,
            float(np.abs(state.v).max()),
            float(state.eta[0]),
            float(state.eta[-1]),
            velocity_diameter_on_support(state),
            float(np.sum(state.weights * state.v)),
            mass)


def simulate_hydro(model: HydroModel,
                   state0: LagrangianState,
                   t_end: float,
                   integrator_cfg: Optional[IntegratorConfig] = None,
                   thresholds: Optional[MonitorThresholds] = None,
                   snapshot_times: Sequence[float] = ()) -> RunSummary:
    """Advance a Lagrangian state to t_end or to detected blow-up.

    The monitor runs after every accepted step.  Termination is either
    "ReachedEnd" or "BlowUpDetected"; in the latter case blow_up_interval
    brackets the event between the last clean accepted time and the
    triggering time (step-size underflow in the adaptive integrator counts
    as a detection with quantity "dt_underflow").
    """
    cfg = integrator_cfg or IntegratorConfig()
    thr = thresholds or MonitorThresholds()
    if thr.dt_floor > cfg.dt_min:
        cfg = replace(cfg, dt_min=thr.dt_floor)

    n = state0.n
    work = state0.copy()

    def rhs(t, y):
        work.t = t
        work.eta = y[:n]
        work.v = y[n:]
        de, dv = hydro_rhs(work, model)
        return np.concatenate([de, dv])

    probe = state0.copy()

    def monitor(t_prev, t_new, y_new):
        probe.t = t_new
        probe.eta = y_new[:n]
        probe.v = y_new[n:]
        verdict = blow_up_monitor(probe, thr)
        if verdict.triggered:
            return verdict
        return None

    y0 = np.concatenate([state0.eta, state0.v])
    started = time.perf_counter()
    if cfg.method == "rk4":
        res = integrate_fixed(rhs, y0, state0.t, t_end, cfg, monitor=monitor)
    else:
        res = integrate_adaptive(rhs, y0, state0.t, t_end, cfg, monitor=monitor)
    wall = time.perf_counter() - started

    def as_state(t, y):
        return LagrangianState(float(t), y[:n].copy(), y[n:].copy(),
                               state0.rho0, state0.dx)

    rows = [_diag_row(as_state(t, y)) for t, y in zip(res.times, res.states)]
    cols = np.asarray(rows, dtype=float).T
    timeseries = {name: cols[k] for k, name in enumerate(_TS_COLUMNS)}

    snapshots = []
    for t_s in snapshot_times:
        k = int(np.argmin(np.abs(res.times - t_s)))
        snapshots.append(as_state(res.times[k], res.states[k]))

    final_state = as_state(res.t_final, res.y_final)

    termination = TERM_REACHED_END
    interval = None
    trigger = None
    if res.termination == MONITOR_STOP:
        termination = TERM_BLOW_UP
        interval = (res.t_last_clean, res.t_final)
        verdict: MonitorVerdict = res.monitor_payload
        trigger = {"quantity": verdict.quantity, "node": verdict.node,
                   "value": verdict.value}
    elif res.termination == DT_UNDERFLOW:
        termination = TERM_BLOW_UP
        interval = (res.t_final, res.t_final)
        trigger = {"quantity": "dt_underflow", "node": None, "value": cfg.dt_min}

    params = {
        "n": n,
        "dx": state0.dx,
        "t_start": state0.t,
        "t_end": t_end,
        "t_final": res.t_final,
        "mass_total": float(np.sum(state0.weights)),
        "method": cfg.method,
        "rtol": cfg.rtol,
        "atol": cfg.atol,
        "dt": cfg.dt,
        "output_stride": cfg.output_stride,
        "jacobian_floor": thr.jacobian_floor,
        "density_cap_factor": thr.density_cap_factor,
        "slope_cap": thr.slope_cap,
        "n_accepted": res.n_accepted,
        "n_rejected": res.n_rejected,
    }

    return RunSummary(model=model.describe(), params=params,
                      termination=termination, blow_up_interval=interval,
                      wall_time=wall, trigger=trigger, timeseries=timeseries,
                      snapshots=snapshots, final_state=final_state)
