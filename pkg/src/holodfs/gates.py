"""Propagators, projected logical gates, parameter synthesis and locality analysis."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hamiltonians import (CouplingSet, GateTarget, OneQubitPulse, TwoQubitPulse,
                           bright_dark_states, build_hamiltonian, couplings_for, encoding_for,
                           two_qubit_states)
from .linalg import dagger, expm_hermitian, max_norm, require_unitary
from .qubits import SIGMA

LEAKAGE_TOL = 1e-8
LOCALITY_TOL = 1e-8
BLOCK_TOL = 1e-10

I2 = np.eye(2, dtype=np.complex128)


class LeakageError(RuntimeError):
    """Population left outside the computational subspace at the end of a pulse."""


def propagator(c: CouplingSet, t: float) -> np.ndarray:
    if t < 0:
        raise ValueError(f"evolution time must be non-negative, got {t}")
    return expm_hermitian(build_hamiltonian(c), t)


def gamma_from_angle(angle: float) -> float:
    """Rotation phase pi + pi*sin(angle); ``angle`` is phi (one qubit) or zeta (two qubits)."""
    return math.pi + math.pi * math.sin(angle)


def angle_from_gamma(gamma: float) -> float:
    """Inverse of :func:`gamma_from_angle` on the branch [-pi/2, pi/2]."""
    if not 0.0 <= gamma <= 2 * math.pi:
        raise ValueError(f"gamma={gamma!r} outside [0, 2pi]")
    return math.asin(min(1.0, max(-1.0, gamma / math.pi - 1.0)))


def closed_form_u1(p: OneQubitPulse) -> np.ndarray:
    """Period-tau evolution on the ordered basis (a, b, d)."""
    ph = np.exp(-1j * p.gamma)
    return np.diag([ph, ph, 1.0]).astype(np.complex128)


def closed_form_u2(p: TwoQubitPulse) -> np.ndarray:
    """Period-tau evolution on the ordered basis (a1, a2, b1, d1, b2, d2)."""
    m, pl = np.exp(-1j * p.gamma), np.exp(1j * p.gamma)
    return np.diag([m, pl, m, 1.0, pl, 1.0]).astype(np.complex128)


def dfs_frame_1q(p: OneQubitPulse) -> np.ndarray:
    b, d, a = bright_dark_states(p)
    return np.column_stack([a, b, d])


def dfs_frame_2q(p: TwoQubitPulse) -> np.ndarray:
    b1, d1, b2, d2, a1, a2 = two_qubit_states(p)
    return np.column_stack([a1, a2, b1, d1, b2, d2])


def restricted_propagator(pulse) -> np.ndarray:
    """Brute-force propagator at tau expressed in the ancilla/bright/dark frame."""
    frame = dfs_frame_1q(pulse) if isinstance(pulse, OneQubitPulse) else dfs_frame_2q(pulse)
    u = propagator(couplings_for(pulse), pulse.tau)
    return dagger(frame) @ u @ frame


def projected_gate(pulse, couplings: CouplingSet | None = None, *, check_leakage: bool = True,
                   leakage_tol: float = LEAKAGE_TOL) -> tuple[np.ndarray, float]:
    """Evolution at ``pulse.tau`` compressed onto the logical basis.

    Returns the logical block ``L^dag U L`` and the leakage ``max|U L - L L^dag U L|``.
    """
    enc = encoding_for(pulse)
    c = couplings_for(pulse) if couplings is None else couplings
    u = propagator(c, pulse.tau)
    basis = enc.logical_matrix()
    ul = u @ basis
    block = dagger(basis) @ ul
    leak = max_norm(ul - basis @ block)
    if check_leakage and leak > leakage_tol:
        raise LeakageError(f"leakage {leak:.3e} out of the computational subspace exceeds {leakage_tol:.1e}")
    return block, leak


def logical_gate_1q(p: OneQubitPulse) -> np.ndarray:
    if not isinstance(p, OneQubitPulse):
        raise TypeError("logical_gate_1q needs a OneQubitPulse")
    return projected_gate(p)[0]


def logical_gate_2q(p: TwoQubitPulse) -> np.ndarray:
    if not isinstance(p, TwoQubitPulse):
        raise TypeError("logical_gate_2q needs a TwoQubitPulse")
    return projected_gate(p)[0]


def logical_gate(pulse) -> np.ndarray:
    return projected_gate(pulse)[0]


def logical_coordinates(pulse, kets):
    """Components of physical kets along the logical basis of the pulse's encoding."""
    basis = encoding_for(pulse).logical_matrix()
    return [dagger(basis) @ k for k in kets]


def ideal_gate_1q(p: OneQubitPulse) -> np.ndarray:
    """``|d><d| + exp(-i gamma)|b><b|`` in logical coordinates, from the state formulas."""
    b, d = logical_coordinates(p, bright_dark_states(p)[:2])
    return np.outer(d, d.conj()) + np.exp(-1j * p.gamma) * np.outer(b, b.conj())


def ideal_gate_2q(p: TwoQubitPulse) -> np.ndarray:
    b1, d1, b2, d2 = logical_coordinates(p, two_qubit_states(p)[:4])
    g = p.gamma
    return (np.outer(d1, d1.conj()) + np.exp(-1j * g) * np.outer(b1, b1.conj())
            + np.outer(d2, d2.conj()) + np.exp(1j * g) * np.outer(b2, b2.conj()))


def ideal_gate(pulse) -> np.ndarray:
    return ideal_gate_1q(pulse) if isinstance(pulse, OneQubitPulse) else ideal_gate_2q(pulse)


def pauli_dot(v) -> np.ndarray:
    return v[0] * SIGMA["x"] + v[1] * SIGMA["y"] + v[2] * SIGMA["z"]


def bloch_axis(theta: float, varphi: float) -> np.ndarray:
    return np.array([math.sin(theta) * math.cos(varphi), math.sin(theta) * math.sin(varphi), math.cos(theta)])


def controlled_rotation_form(gamma: float, axis) -> np.ndarray:
    """Two-qubit gate written as rotations of the target conditioned on the control.

    Control |0>: exp(-i g/2) exp(+i g n.sigma/2); control |1>: exp(+i g/2) exp(-i g m.sigma/2),
    with n = ``axis`` and m its mirror image through the xy plane.
    """
    n = np.asarray(axis, dtype=float)
    m = np.array([n[0], n[1], -n[2]])
    c, s = math.cos(gamma / 2), math.sin(gamma / 2)
    v0 = np.exp(-0.5j * gamma) * (c * I2 + 1j * s * pauli_dot(n))
    v1 = np.exp(0.5j * gamma) * (c * I2 - 1j * s * pauli_dot(m))
    p0 = np.diag([1.0, 0.0]).astype(np.complex128)
    p1 = np.diag([0.0, 1.0]).astype(np.complex128)
    return np.kron(p0, v0) + np.kron(p1, v1)


def target_gate_1q(target: GateTarget) -> np.ndarray:
    """Gate named by a target, built from the dark-state projector ``(I + n.sigma)/2``."""
    pd = 0.5 * (I2 + pauli_dot(target.axis))
    return pd + np.exp(-1j * target.gamma) * (I2 - pd)


def _axis_angles(axis) -> tuple[float, float]:
    x, y, z = (float(a) for a in axis)
    rho = math.hypot(x, y)
    polar = math.atan2(rho, z)  # acos(z) loses precision near the poles
    if rho == 0.0:
        return polar, 0.0
    az = math.atan2(y, x) % (2 * math.pi)
    if az >= 2 * math.pi:
        az = 0.0
    return polar, az


def synthesize_1q(target: GateTarget, j: float = 1.0) -> OneQubitPulse:
    """Pulse realizing ``target`` in one shot: the axis fixes (theta, varphi), gamma fixes phi."""
    theta, varphi = _axis_angles(target.axis)
    return OneQubitPulse(j=j, phi=angle_from_gamma(target.gamma), theta=theta, varphi=varphi)


def synthesize_2q(target_gamma: float, axis, lam: float = 1.0) -> TwoQubitPulse:
    alpha, beta = _axis_angles(GateTarget(tuple(axis), target_gamma).axis)
    return TwoQubitPulse(lam=lam, zeta=angle_from_gamma(target_gamma), alpha=alpha, beta=beta)


def target_from_unitary(u) -> GateTarget:
    """Axis/phase target reproducing a 2x2 unitary up to global phase.

    Writes ``u ~ exp(-i w k.sigma/2)`` with ``w`` in [0, 2pi]; the single-shot
    gate with dark-state axis ``-k`` and ``gamma = w`` is that rotation.
    """
    u = require_unitary(u)
    if u.shape != (2, 2):
        raise ValueError("expected a 2x2 unitary")
    v = u / np.sqrt(np.linalg.det(u))
    a0 = float(np.real(np.trace(v)) / 2)
    s = np.array([float(np.real(1j * np.trace(v @ SIGMA[k])) / 2) for k in "xyz"])
    ns = float(np.linalg.norm(s))
    if ns < 1e-15:
        return GateTarget((0.0, 0.0, 1.0), 0.0)
    w = 2 * math.atan2(ns, a0)
    k = -s / ns
    return GateTarget(tuple(k / np.linalg.norm(k)), min(w, 2 * math.pi))


# -- locality -----------------------------------------------------------------

@dataclass(frozen=True)
class LocalityResult:
    is_local: bool
    entangling_measure: float
    method: str
    schmidt_coefficients: tuple[float, ...]

    def to_dict(self) -> dict:
        return {"is_local": self.is_local, "entangling_measure": self.entangling_measure,
                "method": self.method, "schmidt_coefficients": list(self.schmidt_coefficients)}


def operator_schmidt_coefficients(u) -> np.ndarray:
    """Operator-Schmidt coefficients of a 4x4 operator across the 2|2 cut, descending."""
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (4, 4):
        raise ValueError("expected a 4x4 two-qubit operator")
    t = u.reshape(2, 2, 2, 2)  # (a, b, a', b')
    realigned = t.transpose(0, 2, 1, 3).reshape(4, 4)  # ((a a'), (b b'))
    return np.linalg.svd(realigned, compute_uv=False)


def controlled_locality_test(u, tol: float = LOCALITY_TOL) -> LocalityResult:
    """Whether a two-qubit unitary factorizes into one-qubit unitaries.

    For a gate block diagonal in the first qubit, ``|0><0| V0 + |1><1| V1``, the
    gate is local iff ``W = V0 V1^dag`` is a phase times the identity; the
    reported measure is the Frobenius distance of W from the nearest such
    matrix. Other gates fall back to the operator-Schmidt rank, with the
    measure being the weight outside the leading Schmidt term.
    """
    u = require_unitary(u)
    if u.shape != (4, 4):
        raise ValueError("expected a 4x4 unitary")
    sv = operator_schmidt_coefficients(u)
    off = max(max_norm(u[:2, 2:]), max_norm(u[2:, :2]))
    if off <= BLOCK_TOL:
        w = u[:2, :2] @ dagger(u[2:, 2:])
        tr = np.trace(w)
        phase = tr / abs(tr) if abs(tr) > 0 else 1.0
        measure = float(np.linalg.norm(w - phase * I2))
        return LocalityResult(measure <= tol, measure, "controlled", tuple(float(s) for s in sv))
    measure = float(math.sqrt(float(np.sum(sv[1:] ** 2))))
    return LocalityResult(bool(sv[1] <= tol * sv[0]), measure, "schmidt", tuple(float(s) for s in sv))


def schmidt_rank(u, tol: float = LOCALITY_TOL) -> int:
    sv = operator_schmidt_coefficients(u)
    return int(np.sum(sv > tol * sv[0]))
