import math

import numpy as np
import pytest

from qpcavity import dynamics as D
from qpcavity.errors import ConfigError, PhysicsWarning, UnknownMode
from oracles import (beam_splitter_map, fidelity_qfi, moments_from_map, readout_oracle,
                     two_mode_squeeze_map)

OMEGA2 = D.symplectic_form(2)


def _S(op_matrix):
    return op_matrix


@pytest.mark.parametrize("S", [
    D.beam_splitter_matrix(0.3 + 0.4j), D.squeeze_two_matrix(0.9 * np.exp(0.7j)),
    np.kron(np.eye(2), D.squeeze_single_matrix(0.5j)), np.kron(np.eye(2), D.phase_matrix(1.1)),
    D.qnd_matrix(0.7),
])
def test_symplectic(S):
    assert np.max(np.abs(S @ OMEGA2 @ S.T - OMEGA2)) < 1e-12


def test_vacuum_is_physical():
    assert D.GaussianState.vacuum((1, 2)).is_physical()
    bad = D.GaussianState((1,), np.zeros(2), 0.5 * np.eye(2))
    assert not bad.is_physical()


def test_swap_and_split():
    s = D.GaussianState.coherent(("n", "l"), {"n": 2.0})
    sw = D.apply_beam_splitter(s, "n", "l", math.pi / 2)
    assert sw.mean_number("l") == pytest.approx(4, abs=1e-12)
    assert sw.mean_number("n") == pytest.approx(0, abs=1e-12)
    bs = D.apply_beam_splitter(s, "n", "l", math.pi / 4)
    assert bs.mean_number("n") == pytest.approx(2, abs=1e-12)
    assert bs.mean_number("l") == pytest.approx(2, abs=1e-12)
    same = D.apply_beam_splitter(s, "n", "l", 0)
    np.testing.assert_array_equal(same.d, s.d)


@pytest.mark.parametrize("M", [0.3, math.pi / 4, 1.2 * np.exp(0.5j)])
def test_beam_splitter_against_expm_oracle(M):
    A, B = beam_splitter_map(M)
    alpha = np.array([1.0 + 0.5j, -0.3j])
    s = D.GaussianState.coherent((0, 1), {0: alpha[0], 1: alpha[1]})
    out = D.apply_beam_splitter(s, 0, 1, M)
    np.testing.assert_allclose([out.amplitude(0), out.amplitude(1)], A @ alpha, atol=1e-12)
    np.testing.assert_allclose(list(out.mean_numbers().values()),
                               moments_from_map(A, B, alpha), atol=1e-12)


@pytest.mark.parametrize("L", [0.2, 0.8, 1.5 * np.exp(1.0j)])
def test_two_mode_squeeze_against_expm_oracle(L):
    A, B = two_mode_squeeze_map(L)
    out = D.apply_squeeze_two(D.GaussianState.vacuum((0, 1)), 0, 1, L)
    expect = moments_from_map(A, B, np.zeros(2))
    np.testing.assert_allclose(list(out.mean_numbers().values()), expect, rtol=1e-12)
    # generator carries a factor 1/2: sinh^2(|L|/2) per mode
    assert out.mean_number(0) == pytest.approx(math.sinh(abs(L) / 2) ** 2, rel=1e-12)
    assert out.is_physical()


def test_single_mode_squeeze_variances():
    r = 0.6
    out = D.apply_squeeze_single(D.GaussianState.vacuum((0,)), 0, r * np.exp(0.4j))
    ev = np.linalg.eigvalsh(out.sigma)
    assert ev[0] == pytest.approx(math.exp(-2 * r), rel=1e-12)
    assert ev[1] == pytest.approx(math.exp(2 * r), rel=1e-12)
    assert D.apply_squeeze_single(out, 0, 0).sigma == pytest.approx(out.sigma)


def test_displacement():
    s = D.apply_displacement(D.GaussianState.vacuum((0,)), 0, math.sqrt(10) * 1j)
    assert s.mean_number(0) == pytest.approx(10)
    s2 = D.apply_displacement(D.apply_displacement(D.GaussianState.vacuum((0,)), 0, 0.3),
                              0, 0.4)
    assert s2.amplitude(0) == pytest.approx(D.apply_displacement(
        D.GaussianState.vacuum((0,)), 0, 0.7).amplitude(0))
    np.testing.assert_array_equal(s.sigma, np.eye(2))


def test_unknown_mode():
    with pytest.raises(UnknownMode):
        D.apply_displacement(D.GaussianState.vacuum((0,)), 5, 1.0)
    with pytest.raises(ConfigError):
        D.OperationSpec("Teleport", (0,), 1.0)


def test_mzi_fringe_and_bound():
    s = D.GaussianState.coherent(("a", "b"), {"a": math.sqrt(10)})
    th = np.linspace(0, 2 * math.pi, 13)
    na = [D.mzi_run(s, t, "a", "b")[0].mean_number("a") for t in th]
    # BS(pi/4) phase BS(pi/4): n_a = 10 sin^2(theta/2)
    np.testing.assert_allclose(na, 10 * np.sin(th / 2) ** 2, atol=1e-12)
    out, bound = D.mzi_run(s, 0.0, "a", "b")
    assert bound == pytest.approx(1 / math.sqrt(10))
    assert out.mean_number("b") == pytest.approx(10)
    vac, _ = D.mzi_run(D.GaussianState.vacuum(("a", "b")), 1.3, "a", "b")
    assert vac.total_number() == pytest.approx(0, abs=1e-12)


def test_mzi_as_sequence_is_identical():
    s = D.GaussianState.coherent(("a", "b"), {"a": 1.7})
    a = D.mzi_run(s, 0.9, "a", "b")[0]
    b = D.protocol_run(D.mzi_sequence("a", "b", 0.9), s)[-1]
    np.testing.assert_array_equal(a.d, b.d)
    np.testing.assert_array_equal(a.sigma, b.sigma)


def test_swap_displace_swap():
    traj = D.protocol_run(D.swap_displace_swap(20, 1026, 0.6 - 0.8j),
                          D.GaussianState.vacuum((20, 1026)))
    out = traj[-1]
    assert out.mean_number(1026) == pytest.approx(1.0, abs=1e-12)
    assert out.mean_number(20) == pytest.approx(0.0, abs=1e-12)
    assert len(D.protocol_run([], out)) == 1


def test_protocol_propagates_hazards():
    with pytest.warns(PhysicsWarning):
        D.protocol_run([], D.GaussianState.vacuum((0,)), [{"hazards": [{"message": "x"}]}])


def test_protocol_file(tmp_path):
    p = tmp_path / "p.json"
    p.write_text('[{"op": "Displace", "modes": [0], "parameter": [0, 1], "duration_s": 0.1}]')
    seq = D.load_protocol(p)
    assert seq[0].parameter == 1j and D.total_duration(seq) == 0.1


def test_pulsed_readout_snr_one():
    k = -6.2e-29
    s = D.GaussianState.coherent(("b",), {"b": 1.0})
    r = D.pulsed_readout(k, D.readout_threshold(k), s, "b", 1e8)
    assert r["snr"] == 1.0
    v = D.pulsed_readout(k, 1e-7, D.GaussianState.vacuum(("b",)), "b", 1e8)
    assert v["delta_P_L"] == 0
    with pytest.warns(PhysicsWarning):
        D.pulsed_readout(k, 1e-3, s, "b", 1e8, omega=1e5)


def test_readout_state_matches_model():
    st = D.readout_state(0.7, 1.3)
    d, s = readout_oracle(0.7)(1.3)
    np.testing.assert_allclose(st.d, d, atol=1e-14)
    np.testing.assert_allclose(st.sigma, s, atol=1e-14)


@pytest.mark.parametrize("chi", [0.1, 0.5, 0.7, 1.0, 2.0, 10.0])
def test_qfi_vs_fidelity_oracle(chi):
    q = fidelity_qfi(readout_oracle(chi), 0.3)
    assert D.qfi_displacement(chi) == pytest.approx(q, rel=1e-6)
    st = D.readout_state(chi, 1.0)
    assert D.displacement_qfi([0, -4 * chi], st.sigma) == pytest.approx(
        D.qfi_displacement(chi), rel=1e-12)


def test_cramer_rao_limits():
    assert D.qfi_displacement(0) == 0
    assert D.qfi_displacement(1e3) == pytest.approx(4, rel=1e-5)
    assert D.cramer_rao(1e3) == pytest.approx(0.25, rel=1e-5)
    assert D.cramer_rao(1.0, 100) == pytest.approx((0.25 + 1 / 16) / 100)
    with pytest.warns(PhysicsWarning):
        assert D.cramer_rao(0.0) == math.inf


def test_scattering_length_precision():
    r = D.scattering_length_precision(2 * math.pi * 170, 0.1, 10)
    assert r.value == pytest.approx(0.006, rel=0.3)
    assert D.scattering_length_precision(2 * math.pi * 170, 0.1, 40).value == \
        pytest.approx(r.value / 2)
    assert D.scattering_length_precision(2 * math.pi * 170, 0.2, 10).value == \
        pytest.approx(r.value / 2)


def test_force_gradient(scales):
    assert D.force_gradient_amplitude(1e-23, 0.1, 21, scales) == 0
    rep = D.min_force_gradient(scales, 0.1)
    P = D.force_gradient_amplitude(rep.value, 0.1, 20, scales)
    assert abs(P) == pytest.approx(1, rel=1e-12)
    assert abs(D.force_gradient_amplitude(2 * rep.value, 0.1, 20, scales)) == pytest.approx(2)
    assert D.min_force_gradient(scales, 0.2).value == pytest.approx(rep.value / 2)
    assert rep.extras["phonon_limit_N_per_m"] == pytest.approx(rep.value, rel=0.02)
