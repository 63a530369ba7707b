from __future__ import annotations

import math

import numpy as np
import pytest

from swarmhydro.kernels import (CommunicationKernel, DivergentIntegralError,
                                NoRootError, SingularForceError, gauss_quadratic,
                                log_quadratic, newtonian_confined, potential_grad,
                                power_law, psi_eval, psi_tail_integral, quadratic,
                                solve_R_tilde)


def test_psi_basic_values() -> None:
    k = CommunicationKernel(beta=0.5)
    assert psi_eval(k, 0.0) == 1.0
    assert math.isclose(psi_eval(k, 1.0), 2.0 ** -0.25, rel_tol=1e-14)
    r = np.linspace(0.0, 10.0, 50)
    vals = psi_eval(k, r)
    assert np.all(np.diff(vals) < 0.0)
    assert np.all(vals > 0.0) and np.all(vals <= 1.0)


def test_psi_constant_mode() -> None:
    k = CommunicationKernel(beta=0.5, constant_mode=True)
    assert psi_eval(k, 3.7) == 1.0
    assert np.all(psi_eval(k, np.array([0.0, 1.0, 100.0])) == 1.0)


def test_psi_negative_argument_even() -> None:
    k = CommunicationKernel(beta=1.2)
    assert math.isclose(psi_eval(k, -2.0), psi_eval(k, 2.0), rel_tol=1e-15)


def test_quadratic_gradient() -> None:
    pot = quadratic(alpha=2.0)
    x = np.array([-1.5, 0.0, 0.25])
    assert np.allclose(potential_grad(pot, x), 2.0 * x)


def test_newtonian_gradient_odd_and_zero() -> None:
    pot = newtonian_confined(k=-0.5, alpha=1.0)
    x = np.array([-2.0, -0.1, 0.1, 2.0])
    g = potential_grad(pot, x)
    assert np.allclose(g, -g[::-1])
    assert potential_grad(pot, 0.0) == 0.0
    assert math.isclose(potential_grad(pot, 0.1), -0.5 + 0.1, rel_tol=1e-14)


def test_power_law_gradient() -> None:
    pot = power_law(a=2.0, b=0.5)
    x = 1.7
    expected = x ** 1.0 - x ** (-0.5)
    assert math.isclose(potential_grad(pot, x), expected, rel_tol=1e-13)


def test_log_quadratic_gradient_and_singularity() -> None:
    pot = log_quadratic()
    assert math.isclose(potential_grad(pot, 2.0), -0.5 + 2.0, rel_tol=1e-14)
    with pytest.raises(SingularForceError):
        potential_grad(pot, 0.0)


def test_gauss_quadratic_gradient_matches_formula() -> None:
    eps = 10.0 ** -4.1
    pot = gauss_quadratic(eps)
    x = 0.013
    bump = 2.0 * x / (eps * math.sqrt(2.0 * math.pi * eps)) * math.exp(
        -x * x / (2.0 * eps))
    assert math.isclose(potential_grad(pot, x), x - bump, rel_tol=1e-13)
    # far from the origin the mollifier is gone and only confinement remains
    assert math.isclose(potential_grad(pot, 1.0), 1.0, rel_tol=1e-12)


def test_tail_integral_against_quadrature() -> None:
    from scipy.integrate import quad

    # measured worst case is ~2e-8 relative at beta=1.05, where the mapped
    # integrand carries an integrable endpoint singularity
    for beta, lower in ((1.05, 26.23), (1.2, 26.23), (1.5, 3.0)):
        kern = CommunicationKernel(beta=beta)
        ref, _ = quad(lambda s: (1.0 + s * s) ** (-beta / 2.0), lower, np.inf)
        got = psi_tail_integral(kern, lower)
        assert math.isclose(got, ref, rel_tol=1e-6), (beta, got, ref)


def test_tail_integral_divergence() -> None:
    with pytest.raises(DivergentIntegralError):
        psi_tail_integral(CommunicationKernel(beta=0.5), 1.0)
    with pytest.raises(DivergentIntegralError):
        psi_tail_integral(CommunicationKernel(beta=1.0), 1.0)


def test_solve_R_tilde_constant_kernel() -> None:
    kern = CommunicationKernel(beta=0.5, constant_mode=True)
    # integral of 1 from Rx0 to R is R - Rx0
    r = solve_R_tilde(kern, Rx0=2.0, Rv0=3.0)
    assert math.isclose(r, 5.0, rel_tol=1e-10)


def test_solve_R_tilde_consistency() -> None:
    from scipy.integrate import quad

    kern = CommunicationKernel(beta=0.8)
    r = solve_R_tilde(kern, Rx0=1.0, Rv0=2.0)
    integral, _ = quad(lambda s: (1.0 + s * s) ** -0.4, 1.0, r)
    assert math.isclose(integral, 2.0, rel_tol=1e-8)


def test_solve_R_tilde_no_root() -> None:
    # convergent tail, demand more velocity contraction than is available
    kern = CommunicationKernel(beta=1.2)
    with pytest.raises(NoRootError):
        solve_R_tilde(kern, Rx0=26.23, Rv0=1e6)
