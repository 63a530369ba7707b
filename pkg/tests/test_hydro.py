from __future__ import annotations

import math

import numpy as np
import pytest

from swarmhydro.hydro import (HydroModel, InitProfile, JacobianCollapseError,
                              LagrangianState, MonitorThresholds, ZeroMassError,
                              blow_up_monitor, build_grid, density_reconstruct,
                              density_tolerant, deta_dx, hydro_rhs,
                              init_profiles, simulate_hydro,
                              velocity_diameter_on_support)
from swarmhydro.kernels import (CommunicationKernel, newtonian_confined,
                                potential_grad, psi_eval, quadratic)


def _cosine_state(n: int = 200, c: float = 0.2, mass: float = 1.0,
                  velocity_shape: str = "sine") -> LagrangianState:
    grid, dx = build_grid(n, (-0.75, 0.75))
    prof = InitProfile(mass=mass, c=c, velocity_shape=velocity_shape)
    rho0, v0 = init_profiles(prof, grid, dx)
    return LagrangianState(0.0, grid.copy(), v0, rho0, dx)


def test_build_grid() -> None:
    x, dx = build_grid(7, (-3.0, 3.0))
    assert dx == 1.0
    assert x[0] == -3.0 and x[-1] == 3.0
    with pytest.raises(ValueError):
        build_grid(1, (0.0, 1.0))
    with pytest.raises(ValueError):
        build_grid(5, (1.0, 1.0))


def test_cosine_profile_mass_and_symmetry() -> None:
    grid, dx = build_grid(201, (-0.75, 0.75))
    rho0, v0 = init_profiles(InitProfile(mass=0.4, c=0.3), grid, dx)
    assert math.isclose(dx * rho0.sum(), 0.4, rel_tol=1e-12)
    assert np.all(rho0 >= 0.0)
    assert np.allclose(rho0, rho0[::-1])
    # sine velocity profile is odd
    assert np.allclose(v0, -v0[::-1])
    assert v0[0] > 0.0 > v0[-1]


def test_profile_floor_and_offset() -> None:
    grid, dx = build_grid(101, (-0.75, 0.75))
    base, _ = init_profiles(InitProfile(mass=1.0), grid, dx)
    floored, voff = init_profiles(InitProfile(mass=1.0, floor=0.05, offset=0.1,
                                              velocity_shape="linear", c=0.0),
                                  grid, dx)
    assert np.allclose(floored, base + 0.05)
    assert np.allclose(voff, 0.1)


def test_linear_velocity_profile() -> None:
    grid, dx = build_grid(51, (-0.75, 0.75))
    _, v0 = init_profiles(InitProfile(velocity_shape="linear", c=1.1), grid, dx)
    assert np.allclose(v0, -1.1 * grid)


def test_two_group_profile() -> None:
    grid, dx = build_grid(601, (-1.0, 6.5))
    prof = InitProfile(shape="two_group", mass=1.1, velocity_shape="two_group",
                       c=0.1)
    rho0, v0 = init_profiles(prof, grid, dx)
    assert math.isclose(dx * rho0.sum(), 1.1, rel_tol=1e-12)
    left = grid <= 1.0
    right = grid >= 5.5
    assert math.isclose(dx * rho0[left].sum(), 1.0, rel_tol=1e-12)
    assert math.isclose(dx * rho0[right].sum(), 0.1, rel_tol=1e-12)
    # groups move toward each other, the vacuum in between is at rest
    assert v0[np.argmin(np.abs(grid))] > 0.0
    assert v0[np.argmin(np.abs(grid - 6.0))] < 0.0
    gap = (grid > 1.0) & (grid < 5.5)
    assert np.all(v0[gap] == 0.0)


def test_zero_mass_profile_raises() -> None:
    grid, dx = build_grid(20, (1.0, 2.0))
    with pytest.raises(ZeroMassError):
        init_profiles(InitProfile(halfwidth=0.5), grid, dx)


def test_deta_dx_exact_on_quartics() -> None:
    # all five-point stencils differentiate degree-4 polynomials exactly
    grid, dx = build_grid(37, (-1.0, 2.0))
    eta = grid**4 - 2.0 * grid**2 + grid
    expected = 4.0 * grid**3 - 4.0 * grid + 1.0
    assert np.allclose(deta_dx(eta, dx), expected, rtol=1e-11, atol=1e-11)


def test_deta_dx_convergence_order() -> None:
    errs = []
    for n in (101, 201):
        grid, dx = build_grid(n, (0.0, 1.0))
        err = np.abs(deta_dx(np.sin(3.0 * grid), dx) - 3.0 * np.cos(3.0 * grid))
        errs.append(err.max())
    order = math.log2(errs[0] / errs[1])
    assert order >= 3.8


def test_density_reconstruct_identity_map() -> None:
    state = _cosine_state(50)
    h = density_reconstruct(state)
    assert np.allclose(h, state.rho0, rtol=1e-10)
    assert state.h is h


def test_density_reconstruct_collapse() -> None:
    state = _cosine_state(50)
    state.eta[:] = 0.0
    with pytest.raises(JacobianCollapseError):
        density_reconstruct(state)
    # the tolerant variant reports invalid nodes instead of raising
    h, valid = density_tolerant(state)
    assert not valid.any()
    assert np.all(np.isnan(h))


def test_hydro_rhs_cs_alignment_small_oracle() -> None:
    rng = np.random.default_rng(3)
    n = 7
    eta = np.sort(rng.uniform(-1.0, 1.0, n))
    v = rng.uniform(-1.0, 1.0, n)
    rho0 = rng.uniform(0.1, 1.0, n)
    dx = 0.2
    state = LagrangianState(0.0, eta, v, rho0, dx)
    kern = CommunicationKernel(beta=0.5)
    model = HydroModel(alignment="cs", kernel=kern)
    de, dv = hydro_rhs(state, model)
    assert np.array_equal(de, v)
    w = dx * rho0
    expected = np.zeros(n)
    for i in range(n):
        for j in range(n):
            if j != i:
                expected[i] += w[j] * psi_eval(kern, eta[i] - eta[j]) * (v[j] - v[i])
    assert np.allclose(dv, expected, rtol=1e-13, atol=1e-14)


def test_hydro_rhs_mt_normalization_small_oracle() -> None:
    rng = np.random.default_rng(4)
    n = 6
    eta = np.sort(rng.uniform(-1.0, 1.0, n))
    v = rng.uniform(-1.0, 1.0, n)
    rho0 = rng.uniform(0.1, 1.0, n)
    dx = 0.25
    state = LagrangianState(0.0, eta, v, rho0, dx)
    kern = CommunicationKernel(beta=1.2)
    _, dv = hydro_rhs(state, HydroModel(alignment="mt", kernel=kern))
    w = dx * rho0
    expected = np.zeros(n)
    for i in range(n):
        num = 0.0
        den = 0.0
        for j in range(n):
            psi = psi_eval(kern, eta[i] - eta[j])
            den += w[j] * psi  # normalizer keeps the j = i term
            if j != i:
                num += w[j] * psi * (v[j] - v[i])
        expected[i] = num / den
    assert np.allclose(dv, expected, rtol=1e-13, atol=1e-14)


def test_hydro_rhs_potential_small_oracle() -> None:
    rng = np.random.default_rng(5)
    n = 6
    eta = np.sort(rng.uniform(-1.0, 1.0, n))
    rho0 = rng.uniform(0.1, 1.0, n)
    dx = 0.25
    state = LagrangianState(0.0, eta, np.zeros(n), rho0, dx)
    pot = newtonian_confined(k=-0.5, alpha=1.0)
    _, dv = hydro_rhs(state, HydroModel(alignment="none", potential=pot))
    w = dx * rho0
    expected = np.zeros(n)
    for i in range(n):
        for j in range(n):
            if j != i:
                expected[i] -= w[j] * potential_grad(pot, eta[i] - eta[j])
    assert np.allclose(dv, expected, rtol=1e-13, atol=1e-14)


def test_hydro_rhs_momentum_conservation() -> None:
    # alignment is antisymmetric in (i, j) and K' is odd, so the weighted
    # acceleration sums to zero for the mass-weighted model
    state = _cosine_state(80, c=0.4)
    model = HydroModel(alignment="cs", kernel=CommunicationKernel(beta=0.5),
                       potential=newtonian_confined(k=-0.5, alpha=1.0))
    _, dv = hydro_rhs(state, model)
    assert abs(np.sum(state.weights * dv)) < 1e-13


def test_model_validation() -> None:
    with pytest.raises(ValueError):
        HydroModel(alignment="other")
    with pytest.raises(ValueError):
        HydroModel(alignment="none", pressure_eps=1e-4,
                   potential=quadratic(alpha=2.0))
    m = HydroModel(alignment="none", pressure_eps=1e-4)
    assert m.effective_potential.kind == "gauss_quadratic"
    d = m.describe()
    assert d["alignment"] == "none" and d["pressure_eps"] == 1e-4


def test_damping_decays_exponentially() -> None:
    state = _cosine_state(60, c=0.3)
    sup0 = np.abs(state.v).max()
    run = simulate_hydro(HydroModel(alignment="damping"), state, 2.0)
    assert run.termination == "ReachedEnd"
    assert math.isclose(np.abs(run.final_state.v).max(), sup0 * math.exp(-2.0),
                        rel_tol=1e-6)


def test_simulate_smooth_run_diagnostics() -> None:
    state = _cosine_state(120, c=0.2)
    run = simulate_hydro(HydroModel(alignment="cs",
                                    kernel=CommunicationKernel(beta=0.5)),
                         state, 1.0, snapshot_times=(0.5,))
    assert run.termination == "ReachedEnd"
    assert set(run.timeseries) == {"t", "min_jacobian", "max_density",
                                   "sup_speed", "support_left", "support_right",
                                   "rv_support", "momentum", "mass"}
    ts = run.timeseries
    assert ts["t"][0] == 0.0
    assert math.isclose(ts["t"][-1], 1.0, abs_tol=1e-12)
    # alignment-only dynamics preserve weighted momentum
    assert np.all(np.abs(ts["momentum"] - ts["momentum"][0]) < 1e-10)
    m0 = run.params["mass_total"]
    assert np.all(np.abs(ts["mass"] - m0) < 0.05 * m0)
    assert len(run.snapshots) == 1
    assert abs(run.snapshots[0].t - 0.5) < 0.05
    assert run.blow_up_interval is None
    assert run.params["n_accepted"] > 0


def test_simulate_blow_up_detection() -> None:
    grid, dx = build_grid(200, (-0.75, 0.75))
    prof = InitProfile(shape="cosine", halfwidth=0.85, mass=0.2,
                       velocity_shape="linear", c=1.1)
    rho0, v0 = init_profiles(prof, grid, dx)
    state = LagrangianState(0.0, grid.copy(), v0, rho0, dx)
    model = HydroModel(alignment="damping",
                       potential=newtonian_confined(k=-0.1, alpha=0.2))
    run = simulate_hydro(model, state, 5.0)
    assert run.termination == "BlowUpDetected"
    lo, hi = run.blow_up_interval
    assert 0.0 < lo <= hi <= 5.0
    assert run.trigger["quantity"] in ("jacobian", "velocity_slope", "density",
                                       "dt_underflow")


def test_monitor_verdicts() -> None:
    state = _cosine_state(40, c=0.0)
    assert not blow_up_monitor(state).triggered
    # squeeze two nodes together
    squeezed = state.copy()
    squeezed.eta[20] = squeezed.eta[19] + 1e-9
    verdict = blow_up_monitor(squeezed)
    assert verdict.triggered and verdict.quantity == "jacobian"
    assert verdict.node == 19
    # steep downward velocity jump across healthy spacing
    steep = state.copy()
    steep.v[10] = 2.0
    steep.v[11] = -2.0
    verdict = blow_up_monitor(steep)
    assert verdict.triggered and verdict.quantity == "velocity_slope"
    assert verdict.node == 10


def test_velocity_diameter_ignores_vacuum() -> None:
    state = _cosine_state(30, c=0.0)
    state.v[:] = 0.0
    state.rho0 = state.rho0.copy()
    state.rho0[0] = 0.0
    state.v[0] = 99.0  # vacuum node must not count
    assert velocity_diameter_on_support(state) == 0.0


def test_monitor_thresholds_forwarded() -> None:
    # a tighter slope cap fires earlier
    def blow_time(cap: float) -> float:
        grid, dx = build_grid(200, (-0.75, 0.75))
        prof = InitProfile(halfwidth=0.85, mass=0.2, velocity_shape="linear",
                           c=1.1)
        rho0, v0 = init_profiles(prof, grid, dx)
        state = LagrangianState(0.0, grid.copy(), v0, rho0, dx)
        model = HydroModel(alignment="damping",
                           potential=newtonian_confined(k=-0.1, alpha=0.2))
        run = simulate_hydro(model, state, 5.0,
                             thresholds=MonitorThresholds(slope_cap=cap))
        assert run.termination == "BlowUpDetected"
        return run.blow_up_midpoint()

    assert blow_time(5.0) < blow_time(30.0)
