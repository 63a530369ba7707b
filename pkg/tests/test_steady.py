from __future__ import annotations

import math

import numpy as np
import pytest

from swarmhydro.hydro import build_grid
from swarmhydro.kernels import (gauss_quadratic, log_quadratic,
                                newtonian_confined)
from swarmhydro.steady import (SteadyProfile, cell_widths, force_residual,
                               indicator_steady, l1_distance, linf_velocity,
                               parabola_steady, semicircle_steady)


def test_profile_masses_by_quadrature() -> None:
    for prof in (indicator_steady(0.2), parabola_steady(0.7),
                 semicircle_steady(1.3)):
        a, b = prof.support
        x = np.linspace(a, b, 2001)
        dx = x[1] - x[0]
        mass = np.trapezoid(prof(x), x)
        assert abs(mass - prof.M0) <= 10.0 * dx * dx, prof.kind


def test_indicator_center_tracks_momentum() -> None:
    prof = indicator_steady(0.4, x_com=0.3, momentum=0.2)
    a, b = prof.support
    assert math.isclose(b - a, 1.0, rel_tol=1e-14)
    assert math.isclose(0.5 * (a + b), 0.3 + 0.2 / 0.4, rel_tol=1e-14)
    assert prof(0.8) == 0.4
    assert prof(2.0) == 0.0


def test_parabola_shape() -> None:
    prof = parabola_steady(0.2)
    c = 3.0 ** (1.0 / 3.0)
    assert math.isclose(prof(0.0), 0.2 * 3.0 ** (2.0 / 3.0) / 4.0, rel_tol=1e-14)
    assert prof(c) == 0.0 and prof(-c) == 0.0
    assert prof(c + 0.1) == 0.0


def test_semicircle_shape() -> None:
    prof = semicircle_steady(0.3)
    assert math.isclose(prof(0.0), 0.3 * math.sqrt(2.0) / math.pi, rel_tol=1e-14)
    x = np.linspace(-1.4, 1.4, 31)
    assert np.allclose(prof(x), prof(-x))
    assert prof(math.sqrt(2.0) + 1e-12) == 0.0


def test_profile_validation() -> None:
    with pytest.raises(ValueError):
        indicator_steady(0.0)
    with pytest.raises(ValueError):
        SteadyProfile("indicator", 1.0, (1.0, 1.0))


def test_force_residual_indicator() -> None:
    prof = indicator_steady(0.2)
    grid, dx = build_grid(800, prof.support)
    r = force_residual(prof(grid), grid, newtonian_confined(k=-0.5, alpha=1.0))
    assert r <= 2.0 * dx


def test_force_residual_parabola_vs_mollified_pressure() -> None:
    # away from the support edge (where the mollifier overlaps vacuum) the
    # parabola balances the mollified pressure force
    prof = parabola_steady(0.7)
    grid, _ = build_grid(800, prof.support)
    r = force_residual(prof(grid), grid, gauss_quadratic(10.0 ** -4.1),
                       support_fraction=0.9)
    assert r <= 1e-2


def test_force_residual_semicircle() -> None:
    prof = semicircle_steady(0.2)
    grid, _ = build_grid(800, prof.support)
    r = force_residual(prof(grid), grid, log_quadratic(), support_fraction=0.9)
    assert r <= 5e-3
    # the support radius is mass-independent: the balance survives scaling
    big = semicircle_steady(1.0)
    r_big = force_residual(big(grid), grid, log_quadratic(), support_fraction=0.9)
    assert r_big <= 5.0 * r * 1.01


def test_force_residual_center_node_cancellation() -> None:
    prof = semicircle_steady(0.5)
    grid, _ = build_grid(801, prof.support)  # odd count puts a node at 0
    rho = prof(grid)
    x = grid
    dx = x[1] - x[0]
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    from swarmhydro.kernels import potential_grad
    kp = potential_grad(log_quadratic(), diff)
    np.fill_diagonal(kp, 0.0)
    force = dx * (kp @ rho)
    assert abs(force[400]) < 1e-12


def test_force_residual_validation() -> None:
    grid, _ = build_grid(50, (-1.0, 1.0))
    with pytest.raises(ValueError):
        force_residual(-np.ones_like(grid), grid, log_quadratic())
    with pytest.raises(ValueError):
        force_residual(np.zeros_like(grid), grid, log_quadratic())


def test_cell_widths_telescope() -> None:
    eta = np.array([0.0, 0.5, 1.5, 3.0, 3.5])
    w = cell_widths(eta)
    assert np.all(w > 0.0)
    assert math.isclose(w.sum(), eta[-1] - eta[0], rel_tol=1e-14)
    assert w[0] == 0.25 and w[-1] == 0.25
    assert w[2] == 1.25


def test_l1_distance_and_linf() -> None:
    prof = indicator_steady(0.2)
    eta = np.linspace(-0.5, 0.5, 101)
    h = prof(eta)
    assert l1_distance(h, eta, prof) <= 1e-10
    shifted = h + 0.1
    assert math.isclose(l1_distance(shifted, eta, prof), 0.1 * 1.0,
                        rel_tol=1e-12)
    assert linf_velocity(np.zeros(5)) == 0.0
    assert linf_velocity(np.array([0.1, -0.7, 0.3])) == 0.7
