"""Numerical checks of the decoherence-free and holonomic subspace conditions.

Conditions (a) and (b) make a subspace decoherence free: every noise operator
acts on it as a common scalar, and the Hamiltonian leaves it invariant.
Conditions (c) and (d) make a smaller computational subspace holonomic: the
evolution over one period maps it onto itself, and the dynamical part of the
evolution vanishes on it. Each check returns a ``ConditionReport`` holding the
worst residual rather than a bare boolean.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .linalg import (UNITARY_TOL, as_matrix, dagger, max_norm, projector,
                     require_hermitian, require_unitary)
from .qubits import basis_state, collective_z, format_bitstring

DEFAULT_TOL = 1e-10
DEFAULT_TIME_POINTS = 50
MAX_WITNESSES = 5


@dataclass(frozen=True)
class Subspace:
    """Orthonormal basis (as matrix columns) of a subspace of a 2^n space."""

    basis: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=np.complex128)
        if b.ndim != 2 or b.shape[1] == 0:
            raise ValueError("subspace basis must be a non-empty matrix of column vectors")
        gram_err = max_norm(dagger(b) @ b - np.eye(b.shape[1]))
        if gram_err > DEFAULT_TOL:
            raise ValueError(f"basis is not orthonormal (Gram error {gram_err:.3e})")
        if self.labels is not None and len(self.labels) != b.shape[1]:
            raise ValueError("one label per basis vector required")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))

    @classmethod
    def from_bitstrings(cls, bitstrings: Sequence[str]) -> "Subspace":
        cols = [basis_state(s) for s in bitstrings]
        return cls(np.column_stack(cols), tuple(bitstrings))

    @classmethod
    def from_vectors(cls, vectors: Sequence[np.ndarray], labels=None) -> "Subspace":
        return cls(np.column_stack([np.asarray(v, dtype=np.complex128) for v in vectors]), labels)

    @property
    def dim_ambient(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def vectors(self) -> list[np.ndarray]:
        return [self.basis[:, k] for k in range(self.dim)]

    def projector(self) -> np.ndarray:
        return projector(self.basis)


@dataclass(frozen=True)
class ConditionReport:
    condition: str
    max_violation: float
    tolerance: float
    passed: bool
    witnesses: tuple[tuple[tuple[int, int], float], ...] = ()
    eigenvalues: tuple[float, ...] = field(default=())

    def to_dict(self) -> dict:
        out = {
            "condition": self.condition,
            "max_violation": self.max_violation,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "witnesses": [{"indices": list(ix), "violation": v} for ix, v in self.witnesses],
        }
        if self.eigenvalues:
            out["eigenvalues"] = list(self.eigenvalues)
        return out


def _report(condition: str, entries: list[tuple[tuple[int, int], float]], tol: float,
            eigenvalues=()) -> ConditionReport:
    # stable sort keeps ties in index order, so reports are reproducible bit for bit
    ranked = sorted(entries, key=lambda e: -e[1])
    worst = ranked[0][1] if ranked else 0.0
    return ConditionReport(
        condition=condition,
        max_violation=float(worst),
        tolerance=float(tol),
        passed=bool(worst <= tol),
        witnesses=tuple((ix, float(v)) for ix, v in ranked[:MAX_WITNESSES]),
        eigenvalues=tuple(float(x) for x in eigenvalues),
    )


def _check_dim(op: np.ndarray, sub: Subspace) -> np.ndarray:
    op = as_matrix(op)
    if op.shape != (sub.dim_ambient, sub.dim_ambient):
        raise ValueError(f"operator shape {op.shape} does not match subspace ambient dimension {sub.dim_ambient}")
    return op


def check_condition_a(s_ops: Sequence[np.ndarray], sub: Subspace, tol: float = DEFAULT_TOL) -> ConditionReport:
    """Every noise operator acts on the subspace as one common eigenvalue.

    The eigenvalue for each operator is read off the first basis vector; any
    disagreement among the other vectors shows up as the violation.
    """
    if not s_ops:
        raise ValueError("need at least one system noise operator")
    entries, lams = [], []
    psi = sub.basis
    for alpha, s in enumerate(s_ops):
        s = _check_dim(s, sub)
        lam = np.vdot(psi[:, 0], s @ psi[:, 0])
        lams.append(lam.real)
        resid = np.linalg.norm(s @ psi - lam * psi, axis=0)
        entries += [((alpha, k), float(r)) for k, r in enumerate(resid)]
    return _report("a", entries, tol, lams)


def check_condition_b(h: np.ndarray, sub: Subspace, tol: float = DEFAULT_TOL) -> ConditionReport:
    """The Hamiltonian maps the subspace into itself."""
    h = require_hermitian(_check_dim(h, sub))
    hp = h @ sub.basis
    outside = hp - sub.projector() @ hp
    resid = np.linalg.norm(outside, axis=0)
    return _report("b", [((k, k), float(r)) for k, r in enumerate(resid)], tol)


def check_condition_c(u_tau: np.ndarray, sub: Subspace, tol: float = DEFAULT_TOL) -> ConditionReport:
    """The period-``tau`` evolution maps the subspace projector onto itself."""
    u = require_unitary(_check_dim(u_tau, sub), UNITARY_TOL)
    p = sub.projector()
    diff = np.abs(u @ p @ dagger(u) - p)
    entries = [((int(i), int(j)), float(diff[i, j])) for i, j in zip(*np.nonzero(diff))]
    return _report("c", entries, tol)


def check_condition_d(h: np.ndarray, sub: Subspace, times: Sequence[float] | None = None,
                      u_of_t: Callable[[float], np.ndarray] | None = None, *,
                      tau: float | None = None, tol: float = DEFAULT_TOL) -> ConditionReport:
    """Matrix elements of ``U(t)^dag H U(t)`` vanish on the subspace for all t.

    Without a propagator the Hamiltonian is taken as time independent, where
    ``U^dag H U = H`` and a single check of ``<i|H|j>`` suffices. With one, the
    check runs over ``times`` (default: 50 points on ``[0, tau]``).
    """
    h = require_hermitian(_check_dim(h, sub))
    psi = sub.basis
    if u_of_t is None:
        grid = [0.0]
        blocks = [dagger(psi) @ h @ psi]
    else:
        if times is None:
            if tau is None:
                raise ValueError("a time grid or the period tau is required with a propagator")
            times = np.linspace(0.0, tau, DEFAULT_TIME_POINTS)
        grid = list(times)
        if not grid:
            raise ValueError("time grid must be non-empty")
        blocks = []
        for t in grid:
            up = as_matrix(u_of_t(t)) @ psi
            blocks.append(dagger(up) @ h @ up)
    worst: dict[tuple[int, int], float] = {}
    for blk in blocks:
        a = np.abs(blk)
        for i, j in itertools.product(range(sub.dim), repeat=2):
            worst[(i, j)] = max(worst.get((i, j), 0.0), float(a[i, j]))
    return _report("d", list(worst.items()), tol)


def enumerate_dephasing_dfs(reg) -> list[Subspace]:
    """Eigenspaces of the collective spin, one per Hamming weight 0..n.

    Entry ``w`` of the list spans all bitstrings of weight ``w`` and carries
    the eigenvalue ``n - 2w``. Bitstrings are listed with the excitation on
    the leftmost qubits first (``100, 010, 001`` for n=3, w=1).
    """
    n = reg.n if hasattr(reg, "n") else int(reg)
    collective_z(n)  # validates n
    sectors = []
    for w in range(n + 1):
        labels = []
        for ones in itertools.combinations(range(n), w):
            bits = [0] * n
            for k in ones:
                bits[k] = 1
            labels.append(format_bitstring(bits))
        sectors.append(Subspace.from_bitstrings(labels))
    return sectors


def summarize(reports: Sequence[ConditionReport]) -> bool:
    return all(r.passed for r in reports)
