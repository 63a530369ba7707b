"""Pure numpy implementation of the pairwise O(n^2) force kernels.

Used when the compiled extension is unavailable (or when SWARMHYDRO_PURE=1).
Must stay numerically interchangeable with _speedups: same summation
structure, same potential encoding.
"""
from __future__ import annotations

import numpy as np

# potential kind codes shared with the compiled backend
POT_NONE = 0
POT_QUADRATIC = 1
POT_NEWTONIAN = 2
POT_POWER_LAW = 3
POT_LOG_QUADRATIC = 4
POT_GAUSS_QUADRATIC = 5


def _kprime_matrix(D, pot_kind, k, alpha, pa, pb, eps):
    """K'(D) elementwise with the diagonal zeroed (self-force excluded)."""
    n = D.shape[0]
    out = np.zeros_like(D)
    if pot_kind == POT_NONE:
        return out
    if pot_kind == POT_QUADRATIC:
        out = alpha * D
    elif pot_kind == POT_NEWTONIAN:
        out = k * np.sign(D) + alpha * D
    elif pot_kind == POT_POWER_LAW:
        A = np.abs(D)
        np.fill_diagonal(A, 1.0)  # mask; diagonal zeroed below
        out = np.sign(D) * (A ** (pa - 1.0) - A ** (pb - 1.0))
    elif pot_kind == POT_LOG_QUADRATIC:
        Dm = D.copy()
        np.fill_diagonal(Dm, 1.0)
        out = -1.0 / Dm + D
    elif pot_kind == POT_GAUSS_QUADRATIC:
        out = D - 2.0 * D / (eps * np.sqrt(2.0 * np.pi * eps)) * np.exp(-D * D / (2.0 * eps))
    if n:
        np.fill_diagonal(out, 0.0)
    return out


def hydro_accel(eta, v, w, beta, use_psi, mt, damping,
                pot_kind, k, alpha, pa, pb, eps, out):
    """dv/dt for the Lagrangian nodes; writes into out, returns None.

    w are the frozen quadrature weights dx*rho_i(0).  Alignment sums
    exclude j=i in the numerator; the MT normalizer includes j=i.
    """
    D = eta[:, None] - eta[None, :]
    acc = np.zeros_like(eta)
    if use_psi:
        psi = (1.0 + D * D) ** (-beta / 2.0) if beta != 0.0 else np.ones_like(D)
        np.fill_diagonal(psi, 0.0)
        num = psi @ (w * v) - (psi @ w) * v
        if mt:
            acc += num / (psi @ w + w)  # + w adds the j=i term psi(0) w_i
        else:
            acc += num
    if damping:
        acc -= v
    if pot_kind != POT_NONE:
        Kp = _kprime_matrix(D, pot_kind, k, alpha, pa, pb, eps)
        acc -= Kp @ w
    out[:] = acc


def particle_accel(x, v, beta, use_psi, mt, pot_kind, k, alpha, pa, pb, eps,
                   first_order, out):
    """Pairwise particle forces, d in {1, 2}; writes into out.

    Second order: out = alignment + potential acceleration.
    First order: out = potential velocity (positions only).
    """
    N = x.shape[0]
    diff = x[:, None, :] - x[None, :, :]          # (N, N, d), x_i - x_j
    r2 = np.einsum("ijk,ijk->ij", diff, diff)
    r = np.sqrt(r2)

    acc = np.zeros_like(x)
    if not first_order and use_psi:
        psi = (1.0 + r2) ** (-beta / 2.0) if beta != 0.0 else np.ones_like(r2)
        dv = v[None, :, :] - v[:, None, :]        # v_j - v_i
        num = np.einsum("ij,ijk->ik", psi, dv)
        if mt:
            S = psi.sum(axis=1)                   # includes k=i (psi(0)=1)
            acc += num / S[:, None]
        else:
            acc += num / N

    if pot_kind != POT_NONE:
        # zero separations only occur for smooth potentials (the singular
        # ones raise upstream); their pair contribution is zero anyway
        # because diff = 0, so mask the division.
        r_safe = np.where(r == 0.0, 1.0, r)
        if pot_kind == POT_QUADRATIC:
            kp = alpha * r_safe
        elif pot_kind == POT_NEWTONIAN:
            kp = k + alpha * r_safe               # K'(r) for r > 0
        elif pot_kind == POT_POWER_LAW:
            kp = r_safe ** (pa - 1.0) - r_safe ** (pb - 1.0)
        elif pot_kind == POT_LOG_QUADRATIC:
            kp = -1.0 / r_safe + r_safe
        else:
            kp = r_safe - 2.0 * r_safe / (eps * np.sqrt(2.0 * np.pi * eps)) * np.exp(
                -r_safe * r_safe / (2.0 * eps))
        coef = kp / r_safe                        # radial gradient scale K'(|z|)/|z|
        np.fill_diagonal(coef, 0.0)
        grad = np.einsum("ij,ijk->ik", coef, diff)
        acc -= grad / N

    out[:] = acc
