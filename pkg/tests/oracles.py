"""Independent reference computations used by the tests.

Nothing here imports the package's numerical code paths: the oracles are
built from mpmath, scipy.linalg.expm and textbook formulas written out
separately.
"""
import math

import mpmath
import numpy as np
from scipy.linalg import expm

from scipy import constants

HBAR = constants.hbar
EPS0 = constants.epsilon_0
C = constants.c


def airy_mp(x, dps=30):
    with mpmath.workdps(dps):
        return float(mpmath.airyai(x)), float(mpmath.airyai(x, derivative=1))


# --------------------------------------------------------------- scales

def healing_length_harmonic(m, a, n0, length, peak_density):
    """xi = hbar / sqrt(4 m g_1d rho) with a_perp fixed by the peak density."""
    rho = n0 / length
    a_perp2 = rho / (math.pi * peak_density)
    g1 = 4 * math.pi * HBAR**2 * a / m / (2 * math.pi * a_perp2)
    return HBAR / math.sqrt(4 * m * g1 * rho), g1 * rho


def bogoliubov_omega(n, m, mu0, length):
    k = n * math.pi / length
    ek = HBAR**2 * k * k / (2 * m)
    return math.sqrt(ek * (ek + 2 * mu0)) / HBAR


def rabi(d, nu_laser, lc, area):
    w = 2 * math.pi * nu_laser
    return d * math.sqrt(w / (2 * HBAR * EPS0 * lc * area / 2))


# --------------------------------------------------------------- Gaussian states

def _quadratic_generator(h_aa, h_ab, m):
    """Hermitian H = sum h_aa[i,j] b_i^dag b_j + (1/2) sum (h_ab[i,j] b_i b_j + h.c.)

    returns the 2m x 2m complex matrix K with d/dt (b, b^dag) = K (b, b^dag)
    for U = exp(i H): b' = U b U^dag = exp(K) applied to (b, b^dag).
    """
    # [H, b_k] = -sum_j h_aa[k,j] b_j - sum_j conj(h_ab)[k,j] b_j^dag
    K = np.zeros((2 * m, 2 * m), dtype=complex)
    K[:m, :m] = -1j * h_aa
    K[:m, m:] = -1j * np.conj(h_ab)
    K[m:, :m] = np.conj(K[:m, m:])
    K[m:, m:] = np.conj(K[:m, :m])
    return K


def mode_map(h_aa, h_ab):
    """(A, B) with b' = A b + B b^dag for U = exp(i H) (Baker-Campbell-Hausdorff series)."""
    m = h_aa.shape[0]
    T = expm(_quadratic_generator(np.asarray(h_aa, complex), np.asarray(h_ab, complex), m))
    return T[:m, :m], T[:m, m:]


def moments_from_map(A, B, alpha):
    """Mean numbers after b' = A b + B b^dag acting on a coherent state alpha (vector)."""
    mean = A @ alpha + B @ np.conj(alpha)
    vac = np.sum(np.abs(B) ** 2, axis=1)  # <b'^dag b'> vacuum part
    return np.abs(mean) ** 2 + vac


def two_mode_squeeze_map(L):
    """U = exp[(i/2)(L b_n b_l + L* b_n^dag b_l^dag)]."""
    h_aa = np.zeros((2, 2))
    # H = (1/2)(L b_n b_l + h.c.) = (1/2) sum_ij h_ab[i,j] b_i b_j with h_ab symmetric
    h_ab = np.array([[0, L / 2], [L / 2, 0]])
    return mode_map(h_aa, h_ab)


def beam_splitter_map(M):
    """U = exp[i(M b_n^dag b_l + M* b_l^dag b_n)]."""
    h_aa = np.array([[0, M], [np.conj(M), 0]])
    return mode_map(h_aa, np.zeros((2, 2)))


# --------------------------------------------------------------- fidelity QFI

def single_mode_fidelity(d1, s1, d2, s2):
    """Uhlmann fidelity of two single-mode Gaussian states (vacuum covariance = I)."""
    V1, V2 = np.asarray(s1) / 2, np.asarray(s2) / 2
    du = (np.asarray(d2) - np.asarray(d1)) / math.sqrt(2)
    Delta = np.linalg.det(V1 + V2)
    delta = 4 * (np.linalg.det(V1) - 0.25) * (np.linalg.det(V2) - 0.25)
    pref = 1 / (math.sqrt(Delta + delta) - math.sqrt(max(delta, 0.0)))
    return pref * math.exp(-0.5 * du @ np.linalg.solve(V1 + V2, du))


def fidelity_qfi(state_of, theta, h=1e-4):
    """QFI = 8 (1 - sqrt F(theta - h, theta + h)) / (2h)^2, with 1 - sqrt F via expm1."""
    d1, s1 = state_of(theta - h)
    d2, s2 = state_of(theta + h)
    F = single_mode_fidelity(d1, s1, d2, s2)
    one_minus = -math.expm1(0.5 * math.log(F))
    return 8 * one_minus / (2 * h) ** 2


def readout_oracle(chi):
    """Reduced cavity state for mode amplitude theta (QND readout model, written out independently)."""
    def state(theta):
        return np.array([0.0, -4 * chi * theta]), np.diag([1.0, 1 + 4 * chi * chi])
    return state
