import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from holodfs.gates import (LeakageError, angle_from_gamma, closed_form_u1, closed_form_u2,
                           controlled_locality_test, controlled_rotation_form, dfs_frame_1q,
                           gamma_from_angle, ideal_gate, logical_gate, logical_gate_1q,
                           logical_gate_2q, operator_schmidt_coefficients, projected_gate, propagator,
                           restricted_propagator, schmidt_rank, synthesize_1q, synthesize_2q,
                           target_from_unitary, target_gate_1q)
from holodfs.hamiltonians import (GateTarget, OneQubitPulse, TwoQubitPulse, build_hamiltonian,
                                  one_qubit_couplings, two_qubit_couplings)
from holodfs.linalg import fidelity_gate, is_unitary, max_norm
from holodfs.qubits import SIGMA

from oracles import expm_taylor, random_unitary

phis = st.floats(-math.pi / 2, math.pi / 2)
polars = st.floats(0, math.pi)
azimuths = st.floats(0, 2 * math.pi)
gammas = st.floats(0, 2 * math.pi)


def _equal_up_to_phase(a, b, tol):
    return 1.0 - fidelity_gate(a, b) <= tol


def test_closed_form_examples():
    assert np.allclose(closed_form_u1(OneQubitPulse(phi=math.pi / 6)), np.diag([1j, 1j, 1]), atol=1e-15)
    assert np.allclose(closed_form_u1(OneQubitPulse(phi=-math.pi / 2)), np.eye(3), atol=1e-15)
    assert np.allclose(closed_form_u2(TwoQubitPulse(zeta=0.0)), np.diag([-1, -1, -1, 1, -1, 1]), atol=1e-15)


@settings(max_examples=100, deadline=None)
@given(phis, polars, azimuths, st.floats(0.2, 5.0))
def test_brute_force_matches_closed_form_1q(phi, theta, varphi, j):
    p = OneQubitPulse(j, phi, theta, varphi)
    assert max_norm(restricted_propagator(p) - closed_form_u1(p)) <= 1e-10


@settings(max_examples=30, deadline=None)
@given(phis, polars, azimuths)
def test_brute_force_matches_closed_form_2q(zeta, alpha, beta):
    p = TwoQubitPulse(1.0, zeta, alpha, beta)
    assert max_norm(restricted_propagator(p) - closed_form_u2(p)) <= 1e-10


def test_propagator_against_independent_exponentials(rng):
    p = OneQubitPulse(1.0, 0.3, 1.2, 4.0)
    h = build_hamiltonian(one_qubit_couplings(p))
    for t in (0.0, 0.4, p.tau, 7.5):
        u = propagator(one_qubit_couplings(p), t)
        assert max_norm(u - scipy.linalg.expm(-1j * h * t)) <= 1e-12
        assert max_norm(u - expm_taylor(h, t)) <= 1e-12
    with pytest.raises(ValueError):
        propagator(one_qubit_couplings(p), -1.0)


def test_spectrum_on_ancilla_bright_span():
    p = OneQubitPulse(1.7, 0.4, 2.0, 1.0)
    frame = dfs_frame_1q(p)[:, :2]
    h = build_hamiltonian(one_qubit_couplings(p))
    w = np.linalg.eigvalsh(frame.conj().T @ h @ frame)
    want = sorted([1.7 * (math.sin(0.4) - 1), 1.7 * (math.sin(0.4) + 1)])
    assert np.allclose(w, want, atol=1e-12)


def test_logical_gate_examples():
    assert np.allclose(logical_gate_1q(OneQubitPulse()), np.diag([1, -1]), atol=1e-12)
    assert np.allclose(logical_gate_1q(OneQubitPulse(theta=math.pi / 2)), SIGMA["x"], atol=1e-12)
    assert np.allclose(logical_gate_2q(TwoQubitPulse()), np.diag([1, -1, -1, 1]), atol=1e-12)
    assert np.allclose(logical_gate_2q(TwoQubitPulse(zeta=-math.pi / 2, alpha=1.0)), np.eye(4), atol=1e-12)
    with pytest.raises(TypeError):
        logical_gate_1q(TwoQubitPulse())


def test_leakage_detected_for_wrong_pulse_area():
    p = OneQubitPulse(theta=1.0)
    with pytest.raises(LeakageError):
        projected_gate(p, one_qubit_couplings(p).scaled(0.5))
    _, leak = projected_gate(p, one_qubit_couplings(p).scaled(0.5), check_leakage=False)
    assert leak > 0.1


@settings(max_examples=100, deadline=None)
@given(phis, polars, azimuths)
def test_logical_gate_matches_ideal_1q(phi, theta, varphi):
    p = OneQubitPulse(1.0, phi, theta, varphi)
    g, leak = projected_gate(p)
    assert leak <= 1e-10 and is_unitary(g)
    assert max_norm(g - ideal_gate(p)) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(phis, polars, azimuths)
def test_logical_gate_matches_controlled_form_2q(zeta, alpha, beta):
    p = TwoQubitPulse(1.0, zeta, alpha, beta)
    g = logical_gate(p)
    n = (math.sin(alpha) * math.cos(beta), math.sin(alpha) * math.sin(beta), math.cos(alpha))
    assert max_norm(g - ideal_gate(p)) <= 1e-10
    assert max_norm(g - controlled_rotation_form(p.gamma, n)) <= 1e-10


@settings(max_examples=50, deadline=None)
@given(phis, polars, azimuths)
def test_two_qubit_block_phases(zeta, alpha, beta):
    # the b1 and b2 eigenphases differ by 2 gamma
    p = TwoQubitPulse(1.0, zeta, alpha, beta)
    w = np.linalg.eigvals(logical_gate_2q(p))
    far = sorted(w, key=lambda z: abs(z - 1))[-2:]
    rel = (np.angle(far[0]) - np.angle(far[1])) % (2 * math.pi)
    want = (2 * p.gamma) % (2 * math.pi)
    if abs(far[0] - 1) > 1e-6:
        assert min(abs(rel - want), abs(rel - (2 * math.pi - want)),
                   2 * math.pi - abs(rel - want)) <= 1e-9


def test_gamma_angle_inverse():
    assert angle_from_gamma(math.pi / 2) == pytest.approx(-math.pi / 6)
    assert angle_from_gamma(2 * math.pi) == pytest.approx(math.pi / 2)
    for a in np.linspace(-math.pi / 2, math.pi / 2, 11):
        assert angle_from_gamma(gamma_from_angle(a)) == pytest.approx(a, abs=1e-7)
    with pytest.raises(ValueError):
        angle_from_gamma(7.0)


def test_synthesis_examples():
    p = synthesize_1q(GateTarget((0.0, 0.0, 1.0), math.pi / 2))
    assert p.phi == pytest.approx(-math.pi / 6) and p.theta == 0.0
    assert synthesize_2q(2 * math.pi, (1.0, 0.0, 0.0)).zeta == pytest.approx(math.pi / 2)


@settings(max_examples=100, deadline=None)
@given(polars, azimuths, gammas)
def test_synthesis_reproduces_target_1q(polar, az, gamma):
    axis = (math.sin(polar) * math.cos(az), math.sin(polar) * math.sin(az), math.cos(polar))
    t = GateTarget(axis, gamma)
    assert max_norm(logical_gate_1q(synthesize_1q(t)) - target_gate_1q(t)) <= 1e-9


@settings(max_examples=40, deadline=None)
@given(polars, azimuths, gammas)
def test_synthesis_reproduces_target_2q(polar, az, gamma):
    axis = (math.sin(polar) * math.cos(az), math.sin(polar) * math.sin(az), math.cos(polar))
    g = logical_gate_2q(synthesize_2q(gamma, axis))
    assert max_norm(g - controlled_rotation_form(gamma, axis)) <= 1e-9


def test_any_one_qubit_unitary_is_reachable(rng):
    for _ in range(100):
        u = random_unitary(rng, 2)
        g = logical_gate_1q(synthesize_1q(target_from_unitary(u)))
        assert _equal_up_to_phase(g, u, 1e-9)


def test_composition_of_synthesized_gates(rng):
    for _ in range(20):
        u, v = random_unitary(rng, 2), random_unitary(rng, 2)
        gu = logical_gate_1q(synthesize_1q(target_from_unitary(u)))
        gv = logical_gate_1q(synthesize_1q(target_from_unitary(v)))
        assert _equal_up_to_phase(gv @ gu, v @ u, 1e-9)


def test_target_from_identity():
    assert target_from_unitary(np.eye(2)).gamma == 0.0
    with pytest.raises(ValueError):
        target_from_unitary(np.eye(3))


def test_locality_examples():
    ent = controlled_locality_test(controlled_rotation_form(math.pi, (math.sin(math.pi / 4), 0, math.cos(math.pi / 4))))
    assert not ent.is_local and ent.method == "controlled"
    assert ent.entangling_measure == pytest.approx(2.0, abs=1e-9)
    assert np.allclose(ent.schmidt_coefficients, [math.sqrt(2), math.sqrt(2), 0, 0], atol=1e-9)
    loc = controlled_locality_test(controlled_rotation_form(1.3, (0, 0, 1)))
    assert loc.is_local and loc.entangling_measure <= 1e-12


def test_locality_of_products_and_cnot(rng):
    for _ in range(20):
        a, b = random_unitary(rng, 2), random_unitary(rng, 2)
        r = controlled_locality_test(np.kron(a, b))
        assert r.is_local and schmidt_rank(np.kron(a, b)) == 1
    cnot = np.eye(4)[[0, 1, 3, 2]]
    r = controlled_locality_test(cnot)
    assert not r.is_local and schmidt_rank(cnot) == 2
    swap = np.eye(4)[[0, 2, 1, 3]]
    assert schmidt_rank(swap) == 4 and not controlled_locality_test(swap).is_local


@settings(max_examples=60, deadline=None)
@given(polars, azimuths, gammas)
def test_locality_agrees_with_schmidt_rank(polar, az, gamma):
    axis = (math.sin(polar) * math.cos(az), math.sin(polar) * math.sin(az), math.cos(polar))
    u = controlled_rotation_form(gamma, axis)
    r = controlled_locality_test(u)
    sv = operator_schmidt_coefficients(u)
    assert np.isclose(np.sum(sv**2), 4.0)  # ||U||_F^2 = 4
    if r.entangling_measure > 1e-6:
        assert not r.is_local and schmidt_rank(u) > 1
    if r.entangling_measure < 1e-12:
        assert r.is_local and schmidt_rank(u) == 1
