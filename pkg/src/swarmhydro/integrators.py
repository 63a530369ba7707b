"""Shared explicit time integration.

Two methods: the classical fixed-step RK4 used for convergence/invariant
studies, and an embedded Dormand-Prince 5(4) pair with step-size control
for production runs.  A monitor hook runs after every accepted step and
can terminate the integration (used for blow-up detection).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from .kernels import FloatArray

__all__ = [
    "IntegratorConfig",
    "IntegrationResult",
    "REACHED_END",
    "MONITOR_STOP",
    "DT_UNDERFLOW",
    "step_rk4",
    "integrate_fixed",
    "integrate_adaptive",
]

REACHED_END = "ReachedEnd"
MONITOR_STOP = "MonitorStop"
DT_UNDERFLOW = "DtUnderflow"

RHS = Callable[[float, FloatArray], FloatArray]
# monitor(t_prev, t_new, y_new) -> None to continue, any payload to stop
Monitor = Callable[[float, float, FloatArray], Any]


@dataclass
class IntegratorConfig:
    method: str = "rk45"          # "rk45" or "rk4"
    dt: float = 1e-2              # fixed step (rk4)
    rtol: float = 1e-8
    atol: float = 1e-10
    dt_init: float = 1e-3
    dt_min: float = 1e-12
    dt_max: float = np.inf
    output_stride: float = 0.05   # sampling interval for stored trajectory

    def __post_init__(self) -> None:
        if self.method not in ("rk45", "rk4"):
            raise ValueError(f"unknown integrator method {self.method!r}")
        if min(self.dt, self.rtol, self.atol, self.dt_init, self.output_stride) <= 0:
            raise ValueError("steps, tolerances and stride must be positive")
        if not self.dt_min <= self.dt_max:
            raise ValueError("dt_min must not exceed dt_max")


@dataclass
class IntegrationResult:
    times: FloatArray
    states: FloatArray            # shape (len(times), dim)
    termination: str
    t_final: float
    y_final: FloatArray
    t_last_clean: float           # accepted time preceding the stopping event
    monitor_payload: Any = None
    n_accepted: int = 0
    n_rejected: int = 0


# Dormand-Prince 5(4) tableau.  Row k is the set of a-coefficients feeding
# stage k; B5 propagates the solution, E = B5 - B4 gives the error estimate.
_DP_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_DP_A = (
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
)
_DP_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_DP_E = np.array(
    [71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40]
)


def step_rk4(rhs: RHS, t: float, y: FloatArray, dt: float) -> FloatArray:
    """One classical 4-stage Runge-Kutta step."""
    k1 = rhs(t, y)
    k2 = rhs(t + 0.5 * dt, y + 0.5 * dt * k1)
    k3 = rhs(t + 0.5 * dt, y + 0.5 * dt * k2)
    k4 = rhs(t + dt, y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


class _Sampler:
    """Accumulates (t, y) at multiples of the output stride by linear
    interpolation between accepted steps; always includes t0 and the
    final state."""

    def __init__(self, t0: float, y0: FloatArray, stride: float):
        self.stride = stride
        self.times = [t0]
        self.states = [y0.copy()]
        self.next_t = t0 + stride

    def push(self, t_prev: float, y_prev: FloatArray, t: float, y: FloatArray) -> None:
        while self.next_t <= t + 1e-14:
            w = (self.next_t - t_prev) / (t - t_prev) if t > t_prev else 1.0
            self.times.append(self.next_t)
            self.states.append(y_prev + w * (y - y_prev))
            self.next_t += self.stride

    def finish(self, t: float, y: FloatArray) -> tuple[FloatArray, FloatArray]:
        if not np.isclose(self.times[-1], t, rtol=0.0, atol=1e-12):
            self.times.append(t)
            self.states.append(y.copy())
        return np.asarray(self.times), np.asarray(self.states)


def integrate_fixed(
    rhs: RHS,
    y0: FloatArray,
    t0: float,
    t_end: float,
    cfg: IntegratorConfig,
    monitor: Optional[Monitor] = None,
) -> IntegrationResult:
    """Fixed-step RK4 loop with the same monitor contract as the adaptive
    integrator. The last step is shortened to land exactly on t_end."""
    t = t0
    y = np.asarray(y0, dtype=float).copy()
    samp = _Sampler(t, y, cfg.output_stride)
    n_acc = 0
    while t < t_end - 1e-14:
        dt = min(cfg.dt, t_end - t)
        y_new = step_rk4(rhs, t, y, dt)
        t_new = t + dt
        n_acc += 1
        samp.push(t, y, t_new, y_new)
        if monitor is not None:
            payload = monitor(t, t_new, y_new)
            if payload is not None:
                times, states = samp.finish(t_new, y_new)
                return IntegrationResult(
                    times, states, MONITOR_STOP, t_new, y_new, t,
                    monitor_payload=payload, n_accepted=n_acc,
                )
        t, y = t_new, y_new
    times, states = samp.finish(t, y)
    return IntegrationResult(times, states, REACHED_END, t, y, t, n_accepted=n_acc)


def integrate_adaptive(
    rhs: RHS,
    y0: FloatArray,
    t0: float,
    t_end: float,
    cfg: IntegratorConfig,
    monitor: Optional[Monitor] = None,
) -> IntegrationResult:
    """Embedded 5(4) integration from t0 to t_end.

    Acceptance test: max_i |err_i| / (atol + rtol*max(|y_i|, |y_new_i|))
    must not exceed 1.  Accepted steps grow by 0.9*err^(-1/5) capped at
    x5 (and by dt_max); rejected steps halve.  If the step collapses
    under dt_min the run ends with DT_UNDERFLOW, which callers treat as
    a blow-up signal.
    """
    t = t0
    y = np.asarray(y0, dtype=float).copy()
    dt = min(cfg.dt_init, t_end - t0, cfg.dt_max)
    samp = _Sampler(t, y, cfg.output_stride)
    n_acc = 0
    n_rej = 0
    k1 = rhs(t, y)  # FSAL: reused from the last stage of accepted steps

    while t < t_end - 1e-14:
        dt = min(dt, t_end - t)
        if dt < cfg.dt_min:
            times, states = samp.finish(t, y)
            return IntegrationResult(
                times, states, DT_UNDERFLOW, t, y, t,
                n_accepted=n_acc, n_rejected=n_rej,
            )
        ks = [k1]
        for stage in range(1, 7):
            yi = y + dt * sum(a * k for a, k in zip(_DP_A[stage], ks))
            ks.append(rhs(t + _DP_C[stage] * dt, yi))
        y_new = y + dt * sum(b * k for b, k in zip(_DP_B5, ks) if b != 0.0)
        err_vec = dt * sum(e * k for e, k in zip(_DP_E, ks) if e != 0.0)
        scale = cfg.atol + cfg.rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = float(np.max(np.abs(err_vec) / scale))

        if err <= 1.0:
            t_new = t + dt
            n_acc += 1
            samp.push(t, y, t_new, y_new)
            if monitor is not None:
                payload = monitor(t, t_new, y_new)
                if payload is not None:
                    times, states = samp.finish(t_new, y_new)
                    return IntegrationResult(
                        times, states, MONITOR_STOP, t_new, y_new, t,
                        monitor_payload=payload, n_accepted=n_acc, n_rejected=n_rej,
                    )
            t, y = t_new, y_new
            k1 = ks[6]  # FSAL
            growth = 0.9 * err ** (-0.2) if err > 0.0 else 5.0
            dt = min(dt * min(5.0, max(0.2, growth)), cfg.dt_max)
        else:
            n_rej += 1
            dt *= 0.5

    times, states = samp.finish(t, y)
    return IntegrationResult(
        times, states, REACHED_END, t, y, t, n_accepted=n_acc, n_rejected=n_rej
    )
