"""Brute-force reference computations, deliberately independent of ionsynth internals."""

import numpy as np
import scipy.linalg


def position_quadrature(cap):
    """a + a^dag on Fock levels 0..cap."""
    a = np.diag(np.sqrt(np.arange(1, cap + 1)), 1)
    return a + a.T


def displacement_eig(eta, cap, pad=16):
    """exp(i eta (a + a^dag)) via eigendecomposition on a padded space, cropped to cap."""
    w, v = np.linalg.eigh(position_quadrature(cap + pad))
    full = (v * np.exp(1j * eta * w)) @ v.T
    return full[:cap + 1, :cap + 1]


def displacement_expm(eta, cap, pad=16):
    """Same operator by scaling-and-squaring."""
    return scipy.linalg.expm(1j * eta * position_quadrature(cap + pad))[:cap + 1, :cap + 1]


def flat(level, m, n, caps):
    cx, cy = caps
    return (level * (cx + 1) + m) * (cy + 1) + n


def resonant_hamiltonian_bruteforce(m, n, eta_x, eta_y, omega, phase, caps, pad=16):
    """Resonant (m, n) sideband Hamiltonian assembled from padded exponentials.

    g1 is level 0, g2 is level 1.
    """
    cx, cy = caps
    Dx = displacement_eig(eta_x, cx, pad)
    Dy = displacement_eig(eta_y, cy, pad)
    dim = 2 * (cx + 1) * (cy + 1)
    H = np.zeros((dim, dim), dtype=complex)
    for k in range(cx + 1 - m):
        for l in range(cy + 1 - n):
            c = omega * np.exp(1j * phase) * Dx[k, k + m] * Dy[l, l + n]
            i, j = flat(1, k, l, caps), flat(0, k + m, l + n, caps)
            H[i, j] = c
            H[j, i] = np.conj(c)
    return H


def evolve_expm(H, psi, t):
    return scipy.linalg.expm(-1j * H * t) @ psi


def rk4_time_dependent(hamiltonian, psi, t0, t1, steps):
    """Plain fixed-step RK4 for i dpsi/dt = H(t) psi."""
    h = (t1 - t0) / steps
    t = t0
    psi = np.array(psi, dtype=complex)

    def f(tt, y):
        return -1j * (hamiltonian(tt) @ y)

    for _ in range(steps):
        k1 = f(t, psi)
        k2 = f(t + h / 2, psi + h / 2 * k1)
        k3 = f(t + h / 2, psi + h / 2 * k2)
        k4 = f(t + h, psi + h * k3)
        psi = psi + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
    return psi


def two_level_rabi(omega, phase, t):
    """|g2> -> amplitudes (g2, g1) under H = omega e^{i phase}|g2><g1| + h.c."""
    return np.cos(omega * t), -1j * np.exp(-1j * phase) * np.sin(omega * t)
