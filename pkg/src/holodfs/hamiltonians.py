"""Coupling sets, pulse parameterizations and the encoded bright/dark states.

A ``CouplingSet`` fixes the spin-chain Hamiltonian

    H_N = sum_{k<l} (Jx_kl R^x_kl + Jy_kl R^y_kl) + sum_m Jz_m sz_m

with R^x the XY exchange and R^y the Dzyaloshinskii-Moriya term. Units have
hbar = 1, so couplings are energies and durations are inverse energies.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .qubits import basis_state, dm_term, pauli_at, xy_term

PHASE_TOL = 1e-12
_ANGLE_SLACK = 1e-12


def _finite(name: str, value) -> float:
    v = float(value)
    if not math.isfinite(v):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return v


def _in_range(name: str, value: float, lo: float, hi: float) -> None:
    if not lo - _ANGLE_SLACK <= value <= hi + _ANGLE_SLACK:
        raise ValueError(f"{name}={value!r} outside [{lo}, {hi}]")


@dataclass(frozen=True)
class CouplingSet:
    n: int
    jx: dict = field(default_factory=dict)
    jy: dict = field(default_factory=dict)
    jz: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 1 <= self.n <= 10:
            raise ValueError(f"qubit count must be in 1..10, got {self.n}")
        for name in ("jx", "jy"):
            clean = {}
            for (k, l), v in dict(getattr(self, name)).items():
                k, l = int(k), int(l)
                if not (1 <= k < l <= self.n):
                    raise ValueError(f"{name} key ({k}, {l}) needs 1 <= k < l <= {self.n}")
                clean[(k, l)] = _finite(f"{name}[{k},{l}]", v)
            object.__setattr__(self, name, clean)
        clean = {}
        for m, v in dict(self.jz).items():
            m = int(m)
            if not 1 <= m <= self.n:
                raise ValueError(f"jz key {m} out of range 1..{self.n}")
            clean[m] = _finite(f"jz[{m}]", v)
        object.__setattr__(self, "jz", clean)

    def scaled(self, factor: float) -> "CouplingSet":
        """Every coupling multiplied by ``factor`` (common-mode control error)."""
        return CouplingSet(
            self.n,
            {k: factor * v for k, v in self.jx.items()},
            {k: factor * v for k, v in self.jy.items()},
            {k: factor * v for k, v in self.jz.items()},
        )

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "jx": {f"{k},{l}": v for (k, l), v in sorted(self.jx.items())},
            "jy": {f"{k},{l}": v for (k, l), v in sorted(self.jy.items())},
            "jz": {str(m): v for m, v in sorted(self.jz.items())},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CouplingSet":
        unknown = set(d) - {"n", "jx", "jy", "jz"}
        if unknown:
            raise ValueError(f"unknown coupling keys: {sorted(unknown)}")

        def pairs(m):
            out = {}
            for key, v in (m or {}).items():
                k, l = (int(x) for x in key.split(","))
                out[(k, l)] = v
            return out

        return cls(int(d["n"]), pairs(d.get("jx")), pairs(d.get("jy")),
                   {int(m): v for m, v in (d.get("jz") or {}).items()})


def build_hamiltonian(c: CouplingSet) -> np.ndarray:
    dim = 2**c.n
    h = np.zeros((dim, dim), dtype=np.complex128)
    for (k, l), v in c.jx.items():
        h += v * xy_term(c.n, k, l)
    for (k, l), v in c.jy.items():
        h += v * dm_term(c.n, k, l)
    for m, v in c.jz.items():
        h += v * pauli_at(c.n, "z", m)
    return h


# -- pulses -----------------------------------------------------------------

@dataclass(frozen=True)
class OneQubitPulse:
    """Control parameters of the single-shot one-qubit gate.

    ``phi`` sets the phase (gamma = pi + pi sin phi), ``theta`` and ``varphi``
    the Bloch direction of the dark state. ``tau`` defaults to ``pi / j``.
    """

    j: float = 1.0
    phi: float = 0.0
    theta: float = 0.0
    varphi: float = 0.0
    tau: float | None = None

    def __post_init__(self):
        for name in ("j", "phi", "theta", "varphi"):
            object.__setattr__(self, name, _finite(name, getattr(self, name)))
        if self.j <= 0:
            raise ValueError(f"energy scale j must be positive, got {self.j}")
        _in_range("phi", self.phi, -math.pi / 2, math.pi / 2)
        _in_range("theta", self.theta, 0.0, math.pi)
        _in_range("varphi", self.varphi, 0.0, 2 * math.pi)
        tau = math.pi / self.j if self.tau is None else _finite("tau", self.tau)
        if abs(self.j * tau - math.pi) > PHASE_TOL:
            raise ValueError(f"pulse area j*tau = {self.j * tau!r} must equal pi")
        object.__setattr__(self, "tau", tau)

    @property
    def gamma(self) -> float:
        return math.pi + math.pi * math.sin(self.phi)

    def to_dict(self) -> dict:
        return {"j": self.j, "phi": self.phi, "theta": self.theta, "varphi": self.varphi, "tau": self.tau}


@dataclass(frozen=True)
class TwoQubitPulse:
    """Control parameters of the two-qubit gate; ``tau`` defaults to ``pi / lam``."""

    lam: float = 1.0
    zeta: float = 0.0
    alpha: float = 0.0
    beta: float = 0.0
    tau: float | None = None

    def __post_init__(self):
        for name in ("lam", "zeta", "alpha", "beta"):
            object.__setattr__(self, name, _finite(name, getattr(self, name)))
        if self.lam <= 0:
            raise ValueError(f"energy scale lambda must be positive, got {self.lam}")
        _in_range("zeta", self.zeta, -math.pi / 2, math.pi / 2)
        _in_range("alpha", self.alpha, 0.0, math.pi)
        _in_range("beta", self.beta, 0.0, 2 * math.pi)
        tau = math.pi / self.lam if self.tau is None else _finite("tau", self.tau)
        if abs(self.lam * tau - math.pi) > PHASE_TOL:
            raise ValueError(f"pulse area lambda*tau = {self.lam * tau!r} must equal pi")
        object.__setattr__(self, "tau", tau)

    @property
    def gamma(self) -> float:
        return math.pi + math.pi * math.sin(self.zeta)

    def to_dict(self) -> dict:
        return {"lambda": self.lam, "zeta": self.zeta, "alpha": self.alpha, "beta": self.beta, "tau": self.tau}


@dataclass(frozen=True)
class LogicalEncoding:
    kind: str
    logical_basis: tuple[str, ...]
    ancillas: tuple[str, ...]

    @property
    def n(self) -> int:
        return len(self.logical_basis[0])

    def logical_matrix(self) -> np.ndarray:
        """Physical kets of the logical basis as columns (2^n x 2^k)."""
        return np.column_stack([basis_state(s) for s in self.logical_basis])

    def ancilla_states(self) -> list[np.ndarray]:
        return [basis_state(s) for s in self.ancillas]


ONE_QUBIT_ENCODING = LogicalEncoding("one_qubit", ("010", "001"), ("100",))
TWO_QUBIT_ENCODING = LogicalEncoding("two_qubit", ("010010", "010001", "001010", "001001"),
                                     ("011000", "000011"))


@dataclass(frozen=True)
class GateTarget:
    """A one-qubit gate |d><d| + exp(-i gamma)|b><b| named by the dark-state Bloch axis."""

    axis: tuple[float, float, float]
    gamma: float

    def __post_init__(self):
        axis = tuple(_finite("axis", a) for a in self.axis)
        if len(axis) != 3:
            raise ValueError("axis must have three components")
        if abs(math.sqrt(sum(a * a for a in axis)) - 1.0) > PHASE_TOL:
            raise ValueError(f"axis {axis} is not a unit vector")
        g = _finite("gamma", self.gamma)
        if not 0.0 <= g <= 2 * math.pi:
            raise ValueError(f"gamma={g!r} outside [0, 2pi]")
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "gamma", g)


def one_qubit_couplings(p: OneQubitPulse) -> CouplingSet:
    c, s = math.cos(p.phi), math.sin(p.phi)
    jx = {(1, 2): p.j * c * math.sin(p.theta / 2) * math.cos(p.varphi),
          (1, 3): -p.j * c * math.cos(p.theta / 2)}
    jy = {(1, 2): -p.j * c * math.sin(p.theta / 2) * math.sin(p.varphi)}
    jz = {2: p.j * s, 3: p.j * s}
    return _drop_zeros(3, jx, jy, jz)


def two_qubit_couplings(p: TwoQubitPulse) -> CouplingSet:
    c, s = math.cos(p.zeta), math.sin(p.zeta)
    jx = {(3, 5): p.lam * c * math.sin(p.alpha / 2) * math.cos(p.beta),
          (3, 6): -p.lam * c * math.cos(p.alpha / 2)}
    jy = {(3, 5): -p.lam * c * math.sin(p.alpha / 2) * math.sin(p.beta)}
    jz = {5: p.lam * s, 6: p.lam * s}
    return _drop_zeros(6, jx, jy, jz)


def _drop_zeros(n, jx, jy, jz) -> CouplingSet:
    return CouplingSet(n, {k: v for k, v in jx.items() if v != 0.0},
                       {k: v for k, v in jy.items() if v != 0.0},
                       {k: v for k, v in jz.items() if v != 0.0})


def couplings_for(pulse) -> CouplingSet:
    if isinstance(pulse, OneQubitPulse):
        return one_qubit_couplings(pulse)
    if isinstance(pulse, TwoQubitPulse):
        return two_qubit_couplings(pulse)
    raise TypeError(f"not a pulse: {pulse!r}")


def encoding_for(pulse) -> LogicalEncoding:
    return ONE_QUBIT_ENCODING if isinstance(pulse, OneQubitPulse) else TWO_QUBIT_ENCODING


def bright_dark_states(p: OneQubitPulse, enc: LogicalEncoding = ONE_QUBIT_ENCODING):
    """Bright, dark and ancilla kets (8-dim) for a one-qubit pulse."""
    if enc.kind != "one_qubit":
        raise ValueError("bright_dark_states needs the one-qubit encoding")
    zero, one = (basis_state(s) for s in enc.logical_basis)
    ch, sh = math.cos(p.theta / 2), math.sin(p.theta / 2)
    bright = sh * np.exp(-1j * p.varphi) * zero - ch * one
    dark = ch * zero + sh * np.exp(1j * p.varphi) * one
    return bright, dark, basis_state(enc.ancillas[0])


def two_qubit_states(p: TwoQubitPulse, enc: LogicalEncoding = TWO_QUBIT_ENCODING):
    """``(b1, d1, b2, d2, a1, a2)`` as 64-dim kets."""
    if enc.kind != "two_qubit":
        raise ValueError("two_qubit_states needs the two-qubit encoding")
    l00, l01, l10, l11 = (basis_state(s) for s in enc.logical_basis)
    ch, sh = math.cos(p.alpha / 2), math.sin(p.alpha / 2)
    ep, em = np.exp(1j * p.beta), np.exp(-1j * p.beta)
    b1 = sh * em * l00 - ch * l01
    d1 = ch * l00 + sh * ep * l01
    b2 = ch * l10 - sh * ep * l11
    d2 = sh * em * l10 + ch * l11
    a1, a2 = (basis_state(s) for s in enc.ancillas)
    return b1, d1, b2, d2, a1, a2
