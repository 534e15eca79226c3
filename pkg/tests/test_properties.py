"""Invariants as property tests."""
import math

import numpy as np
from hypothesis import given, settings, strategies as st

from qpcavity import damping, dynamics as D, modes

finite = dict(allow_nan=False, allow_infinity=False)
complexes = st.builds(complex, st.floats(-3, 3, **finite), st.floats(-3, 3, **finite))
OM = D.symplectic_form(2)


@given(M=complexes, L=complexes, N=complexes, theta=st.floats(-10, 10, **finite),
       chi=st.floats(-5, 5, **finite))
@settings(max_examples=60, deadline=None)
def test_maps_are_symplectic(M, L, N, theta, chi):
    for S in (D.beam_splitter_matrix(M), D.squeeze_two_matrix(L), D.qnd_matrix(chi),
              np.kron(np.eye(2), D.squeeze_single_matrix(N)),
              np.kron(np.eye(2), D.phase_matrix(theta))):
        scale = max(1.0, np.max(np.abs(S)) ** 2)
        assert np.max(np.abs(S @ OM @ S.T - OM)) < 1e-12 * scale


@given(a=complexes, b=complexes, M=complexes, L=complexes, P=complexes)
@settings(max_examples=60, deadline=None)
def test_operations_keep_states_physical(a, b, M, L, P):
    s = D.GaussianState.coherent((0, 1), {0: a, 1: b})
    s = D.apply_squeeze_two(D.apply_beam_splitter(s, 0, 1, M), 0, 1, L)
    s = D.apply_displacement(s, 1, P)
    assert s.is_physical(tol=1e-9 * max(1.0, np.max(np.abs(s.sigma))))


@given(a=complexes, b=complexes, M=complexes)
@settings(max_examples=60, deadline=None)
def test_beam_splitter_conserves_number(a, b, M):
    s = D.GaussianState.coherent((0, 1), {0: a, 1: b})
    out = D.apply_beam_splitter(s, 0, 1, M)
    assert math.isclose(out.total_number(), s.total_number(), rel_tol=1e-12, abs_tol=1e-12)


@given(c1=st.floats(0, 1e3, **finite), c2=st.floats(0, 1e3, **finite))
def test_qfi_monotone_and_bounded(c1, c2):
    lo, hi = sorted((abs(c1), abs(c2)))
    q1, q2 = D.qfi_displacement(lo), D.qfi_displacement(hi)
    assert 0 <= q1 <= q2 * (1 + 1e-15) + 1e-300 and q2 <= 4


@given(e=st.floats(1e-6, 1e6, **finite))
def test_sigma_identities(e):
    s = modes.sigma_from_energy(e, 1.0)
    a, b = modes.bogoliubov_coefficients(s)
    assert math.isclose(a * a - b * b, 1, rel_tol=1e-9)
    assert math.isclose(a + b, 1 / s, rel_tol=1e-12)
    assert b <= 0  # sigma > 1


@given(n=st.integers(1, 5000))
def test_dispersion_increasing(scales, n):
    w1 = modes.dispersion(n, scales)[2]
    w2 = modes.dispersion(n + 1, scales)[2]
    assert w2 > w1 > 0


@given(g=st.floats(1e-6, 1e3, **finite), n=st.floats(1e-3, 1e3, **finite))
def test_force_gradient_linear(scales, g, n):
    p1 = D.force_gradient_amplitude(g * 1e-24, 0.1, 20, scales)
    p2 = D.force_gradient_amplitude(n * g * 1e-24, 0.1, 20, scales)
    assert math.isclose(abs(p2), n * abs(p1), rel_tol=1e-12)


@given(f=st.floats(0.01, 100, **finite))
def test_damping_scalings(scales, f):
    g = damping.gamma_sc_1d(scales)
    assert math.isclose(damping.gamma_sc_1d(scales, f * scales.line_density), f * f * g,
                        rel_tol=1e-12)
    assert math.isclose(damping.gamma_three_body(1e-41, f * 1e20),
                        f * f * damping.gamma_three_body(1e-41, 1e20), rel_tol=1e-12)
