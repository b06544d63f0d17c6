#!/usr/bin/env python3
"""Fixes the sign convention of the ancilla position readout.

Ancilla prepared in |up_z>, coupled by U(t) = exp(-i Omega t sigma_x^A x).
Under the right-handed Pauli convention (sigma_x sigma_y = i sigma_z) the
exact signal is <sigma_y^A(t)> = -<sin(2 Omega t x)>, so the initial slope is
-2 Omega <x>. The readout estimator therefore returns -slope / (2 Omega).
"""
import numpy as np
from scipy.linalg import expm, funm


def main():
    n_fock = 30
    a = np.diag(np.sqrt(np.arange(1, n_fock)), 1)
    x = a + a.T
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]])
    up = np.array([1.0, 0.0], dtype=complex)

    alpha = 0.5
    mode = expm(alpha * a.T - alpha * a) @ np.eye(n_fock)[0]
    x_direct = np.real(mode @ x @ mode)
    print(f"direct <x> = {x_direct:.12f}")

    psi0 = np.kron(up, mode)
    omega = 2 * np.pi * 250.0
    gen = omega * np.kron(sx, x)
    sy_full = np.kron(sy, np.eye(n_fock))

    for t in [2e-6, 4e-6, 8e-6]:
        psi = expm(-1j * gen * t) @ psi0
        y = np.real(psi.conj() @ sy_full @ psi)
        sin_exp = np.real(mode @ funm(2 * omega * t * x, np.sin) @ mode)
        print(f"t={t*1e6:4.0f}us  <sigma_y^A> = {y:+.10e}"
              f"  -<sin(2 Omega t x)> = {-sin_exp:+.10e}"
              f"  -slope/(2 Omega) = {-y / t / (2 * omega):+.8f}")


if __name__ == "__main__":
    main()
