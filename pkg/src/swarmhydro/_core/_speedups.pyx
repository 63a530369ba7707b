# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled pairwise force kernels; numerically interchangeable with
_fallback.py (same summation order: i outer, j inner)."""

from libc.math cimport exp, fabs, log, pow, sqrt, M_PI

import numpy as np


cdef inline double _sign(double x) noexcept nogil:
    if x > 0.0:
        return 1.0
    elif x < 0.0:
        return -1.0
    return 0.0


cdef inline double _kprime(int pot_kind, double z, double k, double alpha,
                           double pa, double pb, double eps) noexcept nogil:
    # z != 0 guaranteed by callers for singular kinds
    cdef double az
    if pot_kind == 1:      # quadratic
        return alpha * z
    elif pot_kind == 2:    # newtonian confined
        return k * _sign(z) + alpha * z
    elif pot_kind == 3:    # power law
        az = fabs(z)
        return _sign(z) * (pow(az, pa - 1.0) - pow(az, pb - 1.0))
    elif pot_kind == 4:    # log + quadratic
        return -1.0 / z + z
    elif pot_kind == 5:    # mollified pressure bump + quadratic
        return z - 2.0 * z / (eps * sqrt(2.0 * M_PI * eps)) * exp(-z * z / (2.0 * eps))
    return 0.0



cdef inline double _psi_pow(int mode, double q, double half_beta) noexcept nogil:
    # q = 1 + separation^2 >= 1; common exponents via hardware sqrt
    if mode == 1:                      # beta = 0.5
        return 1.0 / sqrt(sqrt(q))
    elif mode == 2:                    # beta = 1
        return 1.0 / sqrt(q)
    elif mode == 3:                    # beta = 2
        return 1.0 / q
    elif mode == 4:                    # beta = 4
        return 1.0 / (q * q)
    return pow(q, -half_beta)


cdef inline int _psi_mode(double half_beta) noexcept nogil:
    if half_beta == 0.25:
        return 1
    elif half_beta == 0.5:
        return 2
    elif half_beta == 1.0:
        return 3
    elif half_beta == 2.0:
        return 4
    return 0


def hydro_accel(double[::1] eta, double[::1] v, double[::1] w,
                double beta, bint use_psi, bint mt, bint damping,
                int pot_kind, double k, double alpha, double pa, double pb,
                double eps, double[::1] out):
    cdef Py_ssize_t n = eta.shape[0]
    cdef Py_ssize_t i, j
    cdef double num, S, force, d, psi, acc
    cdef double half_beta = beta / 2.0
    cdef int psi_mode = _psi_mode(half_beta)
    with nogil:
        for i in range(n):
            num = 0.0
            S = w[i]          # j = i term of the MT normalizer, psi(0) = 1
            force = 0.0
            for j in range(n):
                if j == i:
                    continue
                d = eta[i] - eta[j]
                if use_psi:
                    if beta != 0.0:
                        psi = _psi_pow(psi_mode, 1.0 + d * d, half_beta)
                    else:
                        psi = 1.0
                    num += psi * w[j] * (v[j] - v[i])
                    S += psi * w[j]
                if pot_kind != 0:
                    force += w[j] * _kprime(pot_kind, d, k, alpha, pa, pb, eps)
            acc = 0.0
            if use_psi:
                if mt:
                    acc += num / S
                else:
                    acc += num
            if damping:
                acc -= v[i]
            acc -= force
            out[i] = acc


def particle_accel(double[:, ::1] x, double[:, ::1] v,
                   double beta, bint use_psi, bint mt,
                   int pot_kind, double k, double alpha, double pa, double pb,
                   double eps, bint first_order, double[:, ::1] out):
    cdef Py_ssize_t N = x.shape[0]
    cdef Py_ssize_t d = x.shape[1]
    cdef Py_ssize_t i, j, m
    cdef double r2, r, psi, kp, coef
    cdef double half_beta = beta / 2.0
    cdef double[2] diff
    cdef double[2] align
    cdef double[2] grad
    cdef double S
    cdef int psi_mode = _psi_mode(half_beta)
    with nogil:
        for i in range(N):
            for m in range(d):
                align[m] = 0.0
                grad[m] = 0.0
            S = 1.0               # k = i term of the MT normalizer
            for j in range(N):
                if j == i:
                    continue
                r2 = 0.0
                for m in range(d):
                    diff[m] = x[i, m] - x[j, m]
                    r2 += diff[m] * diff[m]
                if not first_order and use_psi:
                    if beta != 0.0:
                        psi = _psi_pow(psi_mode, 1.0 + r2, half_beta)
                    else:
                        psi = 1.0
                    for m in range(d):
                        align[m] += psi * (v[j, m] - v[i, m])
                    S += psi
                if pot_kind != 0 and r2 > 0.0:
                    r = sqrt(r2)
                    kp = _kprime(pot_kind, r, k, alpha, pa, pb, eps)
                    coef = kp / r
                    for m in range(d):
                        grad[m] += coef * diff[m]
            for m in range(d):
                out[i, m] = 0.0
                if not first_order and use_psi:
                    if mt:
                        out[i, m] += align[m] / S
                    else:
                        out[i, m] += align[m] / N
                out[i, m] -= grad[m] / N
