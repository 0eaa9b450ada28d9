"""Collective dephasing and control-error robustness.

The environment couples through ``S_N (x) B``. Rather than modelling ``B`` we
take the induced reduced dynamics to be Gaussian collective phase diffusion:
a random phase ``phi ~ Normal(0, var=kappa_t)`` applied as
``exp(-i phi S_N)``. Averaging gives the exact sector-dephasing map

    rho_uv -> rho_uv * exp(-kappa_t (s_u - s_v)^2 / 2),

where ``s_u`` is the ``S_N`` eigenvalue of bitstring ``u``. Coherences inside
one weight sector are untouched.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .gates import ideal_gate, logical_coordinates, projected_gate
from .hamiltonians import (CouplingSet, OneQubitPulse, TwoQubitPulse, bright_dark_states,
                           build_hamiltonian, couplings_for, encoding_for, two_qubit_states)
from .linalg import STRUCTURAL_TOL, dagger, expm_hermitian, fidelity_gate
from .qubits import QubitRegister, collective_z_spectrum

EXACT = "exact_sector"
MONTE_CARLO = "monte_carlo"
_MC_CHUNK = 4096


@dataclass(frozen=True)
class DephasingChannel:
    n: int
    kappa_t: float
    mode: str = EXACT
    samples: int = 100_000
    seed: int = 0

    def __post_init__(self):
        QubitRegister(self.n)
        if not math.isfinite(self.kappa_t) or self.kappa_t < 0:
            raise ValueError(f"kappa_t must be finite and non-negative, got {self.kappa_t}")
        if self.mode not in (EXACT, MONTE_CARLO):
            raise ValueError(f"unknown dephasing mode {self.mode!r}")
        if self.samples < 1:
            raise ValueError("monte carlo needs at least one sample")

    def with_strength(self, kappa_t: float, seed: int | None = None) -> "DephasingChannel":
        return DephasingChannel(self.n, kappa_t, self.mode, self.samples,
                                self.seed if seed is None else seed)


def density_matrix(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=np.complex128)
    return np.outer(psi, psi.conj())


def validate_density(rho, tol: float = STRUCTURAL_TOL) -> np.ndarray:
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got {rho.shape}")
    if np.max(np.abs(rho - dagger(rho))) > tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > tol:
        raise ValueError(f"density matrix trace {np.trace(rho).real!r} != 1")
    if np.linalg.eigvalsh(0.5 * (rho + dagger(rho)))[0] < -1e-10:
        raise ValueError("density matrix is not positive semidefinite")
    return rho


def _sector_differences(n: int) -> np.ndarray:
    s = collective_z_spectrum(n)
    return s[:, None] - s[None, :]


def dephasing_mask(n: int, kappa_t: float) -> np.ndarray:
    return np.exp(-0.5 * kappa_t * _sector_differences(n) ** 2)


def _monte_carlo(rho: np.ndarray, ch: DephasingChannel) -> np.ndarray:
    rng = np.random.default_rng(ch.seed)
    s = collective_z_spectrum(ch.n)
    acc = np.zeros_like(rho)
    done = 0
    while done < ch.samples:
        m = min(_MC_CHUNK, ch.samples - done)
        phis = rng.normal(0.0, math.sqrt(ch.kappa_t), size=m)
        # exp(-i phi S) is diagonal; conjugation multiplies rho_uv by exp(-i phi (s_u - s_v))
        kicks = np.exp(-1j * phis[:, None] * s[None, :])
        acc += np.einsum("ku,uv,kv->uv", kicks, rho, kicks.conj())
        done += m
    return acc / ch.samples


def apply_dephasing(rho, ch: DephasingChannel) -> np.ndarray:
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (2**ch.n, 2**ch.n):
        raise ValueError(f"density matrix shape {rho.shape} does not match {ch.n} qubits")
    if ch.kappa_t == 0:
        return rho.copy()
    if ch.mode == MONTE_CARLO:
        return _monte_carlo(rho, ch)
    return rho * dephasing_mask(ch.n, ch.kappa_t)


def dfs_survival(state, ch: DephasingChannel) -> float:
    """Overlap ``<psi| E(|psi><psi|) |psi>`` after one application of the channel."""
    psi = np.asarray(state, dtype=np.complex128)
    if abs(np.linalg.norm(psi) - 1) > STRUCTURAL_TOL:
        raise ValueError("state must be normalized")
    out = apply_dephasing(density_matrix(psi), ch)
    return float(np.real(np.vdot(psi, out @ psi)))


def _trotter_fidelity(h: np.ndarray, tau: float, embed: np.ndarray, ideal: np.ndarray,
                      ch: DephasingChannel, steps: int) -> float:
    """Process (entanglement) fidelity of the sliced evolution with ``ideal``.

    F = (1/d^2) sum_ij <i|G^dag E(|i><j|) G|j>; the map is linear, so each
    operator |i><j| of the logical basis is propagated on its own.
    """
    if steps < 1:
        raise ValueError("trotter_steps must be at least 1")
    u_slice = expm_hermitian(h, tau / steps)
    u_dag = dagger(u_slice)
    slices = [ch.with_strength(ch.kappa_t / steps, int(s))
              for s in np.random.SeedSequence(ch.seed).generate_state(steps)]
    d = ideal.shape[0]
    targets = embed @ ideal
    total = 0.0
    for i in range(d):
        for j in range(d):
            x = np.outer(embed[:, i], embed[:, j].conj())
            for sl in slices:
                x = apply_dephasing(u_slice @ x @ u_dag, sl)
            total += np.vdot(targets[:, i], x @ targets[:, j])
    return float(min(1.0, np.real(total) / d**2))


def gate_under_dephasing(pulse, ch: DephasingChannel, trotter_steps: int = 100) -> float:
    """Process fidelity of the encoded gate with dephasing slices interleaved.

    Hamiltonian slices of length ``tau/steps`` alternate with dephasing slices of
    strength ``kappa_t/steps``.
    """
    enc = encoding_for(pulse)
    if ch.n != enc.n:
        raise ValueError(f"channel acts on {ch.n} qubits, the encoding needs {enc.n}")
    h = build_hamiltonian(couplings_for(pulse))
    return _trotter_fidelity(h, pulse.tau, enc.logical_matrix(), ideal_gate(pulse), ch, trotter_steps)


def bare_generator(pulse) -> np.ndarray:
    """Hamiltonian on unencoded qubits whose period-tau evolution is the same logical gate.

    One qubit: ``(gamma/tau)|b><b|``; two qubits: ``(gamma/tau)(|b1><b1| - |b2><b2|)``.
    """
    rate = pulse.gamma / pulse.tau
    if isinstance(pulse, OneQubitPulse):
        (b,) = logical_coordinates(pulse, bright_dark_states(pulse)[:1])
        return rate * np.outer(b, b.conj())
    b1, _, b2, _ = logical_coordinates(pulse, two_qubit_states(pulse)[:4])
    return rate * (np.outer(b1, b1.conj()) - np.outer(b2, b2.conj()))


def bare_gate_under_dephasing(pulse, kappa_t: float, trotter_steps: int = 100,
                              mode: str = EXACT, samples: int = 100_000, seed: int = 0) -> float:
    """Same protocol as :func:`gate_under_dephasing` on 1 or 2 physical, unencoded qubits."""
    h = bare_generator(pulse)
    k = h.shape[0].bit_length() - 1
    ch = DephasingChannel(k, kappa_t, mode, samples, seed)
    return _trotter_fidelity(h, pulse.tau, np.eye(2**k, dtype=np.complex128), ideal_gate(pulse),
                             ch, trotter_steps)


@dataclass(frozen=True)
class RobustnessSweep:
    pulse: OneQubitPulse | TwoQubitPulse
    epsilons: tuple[float, ...]
    fidelities: tuple[float, ...]
    leakages: tuple[float, ...] = field(default=())

    def rows(self) -> list[tuple[float, float, float]]:
        return list(zip(self.epsilons, self.fidelities, self.leakages))


def control_error_sweep(pulse, epsilons, per_coupling: dict | None = None) -> RobustnessSweep:
    """Gate fidelity when every coupling is off by a factor ``1 + eps`` at fixed ``tau``.

    The fidelity is ``|tr(G^dag M)|/d`` with ``M`` the compressed logical block,
    so population leaked to the ancillas lowers it. ``per_coupling`` optionally
    adds independent relative offsets keyed ``("jx", (k, l))``, ``("jz", m)`` etc.
    """
    base = couplings_for(pulse)
    ideal = ideal_gate(pulse)
    eps_out, fids, leaks = [], [], []
    for eps in epsilons:
        eps = float(eps)
        if not math.isfinite(eps):
            raise ValueError(f"non-finite control error {eps!r}")
        c = base.scaled(1.0 + eps)
        if per_coupling:
            c = _perturb(c, per_coupling)
        block, leak = projected_gate(pulse, c, check_leakage=False)
        eps_out.append(eps)
        fids.append(fidelity_gate(ideal, block))
        leaks.append(leak)
    return RobustnessSweep(pulse, tuple(eps_out), tuple(fids), tuple(leaks))


def _perturb(c: CouplingSet, offsets: dict) -> CouplingSet:
    parts = {"jx": dict(c.jx), "jy": dict(c.jy), "jz": dict(c.jz)}
    for (kind, key), rel in offsets.items():
        if key in parts[kind]:
            parts[kind][key] *= 1.0 + rel
    return CouplingSet(c.n, parts["jx"], parts["jy"], parts["jz"])
