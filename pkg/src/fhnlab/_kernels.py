"""Numba inner loops: finite-difference RK4 stepping and Pruefer integration.

Kept in one module so the rest of the package stays plain numpy. All kernels
are deterministic and allocate nothing inside the hot loop.
"""
from __future__ import annotations

import numpy as np
from numba import njit

# Model codes for the finite-difference stepper.
KIND_TOY_LINEAR = 0
KIND_TOY_NONLINEAR = 1
KIND_FHN = 2


@njit(cache=True)
def _fd_rhs(u, v, du, dv, kind, alpha, eps, d, c, h):
    n = u.shape[0]
    h2 = h * h
    for i in range(n):
        if i == 0:
            lap = 2.0 * (u[1] - u[0]) / h2
        elif i == n - 1:
            lap = 2.0 * (u[n - 2] - u[n - 1]) / h2
        else:
            # grouped so mirror-image states produce exactly mirrored
            # round-off: (a + b) - 2c negates exactly under u -> -reverse(u)
            lap = ((u[i - 1] + u[i + 1]) - 2.0 * u[i]) / h2
        if kind == KIND_TOY_LINEAR:
            du[i] = alpha * u[i] - v[i] + lap
            dv[i] = u[i]
        elif kind == KIND_TOY_NONLINEAR:
            du[i] = alpha * u[i] - u[i] ** 3 - v[i] + lap
            dv[i] = u[i]
        else:
            du[i] = (3.0 * u[i] - u[i] ** 3 - v[i] + d * lap) / eps
            dv[i] = u[i] - c[i]


@njit(cache=True)
def advance_fd(u, v, n_steps, dt, kind, alpha, eps, d, c, h):
    """Advance (u, v) in place by n_steps classical RK4 steps."""
    n = u.shape[0]
    k1u = np.empty(n); k1v = np.empty(n)
    k2u = np.empty(n); k2v = np.empty(n)
    k3u = np.empty(n); k3v = np.empty(n)
    k4u = np.empty(n); k4v = np.empty(n)
    tu = np.empty(n); tv = np.empty(n)
    for _ in range(n_steps):
        _fd_rhs(u, v, k1u, k1v, kind, alpha, eps, d, c, h)
        for i in range(n):
            tu[i] = u[i] + 0.5 * dt * k1u[i]
            tv[i] = v[i] + 0.5 * dt * k1v[i]
        _fd_rhs(tu, tv, k2u, k2v, kind, alpha, eps, d, c, h)
        for i in range(n):
            tu[i] = u[i] + 0.5 * dt * k2u[i]
            tv[i] = v[i] + 0.5 * dt * k2v[i]
        _fd_rhs(tu, tv, k3u, k3v, kind, alpha, eps, d, c, h)
        for i in range(n):
            tu[i] = u[i] + dt * k3u[i]
            tv[i] = v[i] + dt * k3v[i]
        _fd_rhs(tu, tv, k4u, k4v, kind, alpha, eps, d, c, h)
        for i in range(n):
            u[i] += dt / 6.0 * (k1u[i] + 2.0 * k2u[i] + 2.0 * k3u[i] + k4u[i])
            v[i] += dt / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i])


@njit(cache=True)
def advance_ode(y, n_steps, dt, eps, c):
    """Advance the planar state y = (u, v) in place by n_steps RK4 steps."""
    u = y[0]
    v = y[1]
    for _ in range(n_steps):
        k1u = (3.0 * u - u ** 3 - v) / eps
        k1v = u - c
        u2 = u + 0.5 * dt * k1u
        v2 = v + 0.5 * dt * k1v
        k2u = (3.0 * u2 - u2 ** 3 - v2) / eps
        k2v = u2 - c
        u3 = u + 0.5 * dt * k2u
        v3 = v + 0.5 * dt * k2v
        k3u = (3.0 * u3 - u3 ** 3 - v3) / eps
        k3v = u3 - c
        u4 = u + dt * k3u
        v4 = v + dt * k3v
        k4u = (3.0 * u4 - u4 ** 3 - v4) / eps
        k4v = u4 - c
        u += dt / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    y[0] = u
    y[1] = v


@njit(cache=True, inline="always")
def _theta_rate(theta, q, lam, d):
    s = np.sin(theta)
    c = np.cos(theta)
    return c * c + (q + lam) / d * s * s


@njit(cache=True)
def theta_end(q_half, h_step, lam, d):
    """Integrate the phase equation over [a, b] with RK4; return theta(b).

    q_half holds the potential at a + j * h_step / 2, j = 0..2M, so every RK4
    stage reads the potential directly (no interpolation in the loop).
    theta(a) = pi/2.
    """
    m = (q_half.shape[0] - 1) // 2
    theta = np.pi / 2.0
    for i in range(m):
        q0 = q_half[2 * i]
        qm = q_half[2 * i + 1]
        q1 = q_half[2 * i + 2]
        k1 = _theta_rate(theta, q0, lam, d)
        k2 = _theta_rate(theta + 0.5 * h_step * k1, qm, lam, d)
        k3 = _theta_rate(theta + 0.5 * h_step * k2, qm, lam, d)
        k4 = _theta_rate(theta + h_step * k3, q1, lam, d)
        theta += h_step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return theta


@njit(cache=True)
def theta_logr_path(q_half, h_step, lam, d, record_stride):
    """Joint phase/log-amplitude integration; record every record_stride steps.

    Returns (theta_samples, logr_samples) including both endpoints. The
    log-amplitude form keeps r overflow-safe; r(a) = 1, theta(a) = pi/2.
    """
    m = (q_half.shape[0] - 1) // 2
    n_rec = m // record_stride + 1
    thetas = np.empty(n_rec)
    logrs = np.empty(n_rec)
    theta = np.pi / 2.0
    logr = 0.0
    thetas[0] = theta
    logrs[0] = logr
    idx = 1
    for i in range(m):
        q0 = q_half[2 * i]
        qm = q_half[2 * i + 1]
        q1 = q_half[2 * i + 2]
        t1 = _theta_rate(theta, q0, lam, d)
        r1 = 0.5 * np.sin(2.0 * theta) * (1.0 - (lam + q0) / d)
        th = theta + 0.5 * h_step * t1
        t2 = _theta_rate(th, qm, lam, d)
        r2 = 0.5 * np.sin(2.0 * th) * (1.0 - (lam + qm) / d)
        th = theta + 0.5 * h_step * t2
        t3 = _theta_rate(th, qm, lam, d)
        r3 = 0.5 * np.sin(2.0 * th) * (1.0 - (lam + qm) / d)
        th = theta + h_step * t3
        t4 = _theta_rate(th, q1, lam, d)
        r4 = 0.5 * np.sin(2.0 * th) * (1.0 - (lam + q1) / d)
        theta += h_step / 6.0 * (t1 + 2.0 * t2 + 2.0 * t3 + t4)
        logr += h_step / 6.0 * (r1 + 2.0 * r2 + 2.0 * r3 + r4)
        if (i + 1) % record_stride == 0:
            thetas[idx] = theta
            logrs[idx] = logr
            idx += 1
    return thetas, logrs
