"""N-qubit operators and computational-basis states.

Conventions (fixed globally, sign flips here silently negate gate phases):

* qubits are indexed from 1, matching coupling subscripts like ``J^x_13``;
* qubit 1 is the most significant bit of the basis index, so the bitstring
  ``"100"`` is basis index 4;
* ``|0>`` is the +1 eigenvector of sigma_z, ``|1>`` the -1 eigenvector.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

MAX_QUBITS = 10

SIGMA = {
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}
IDENTITY2 = np.eye(2, dtype=np.complex128)


@dataclass(frozen=True)
class QubitRegister:
    n: int

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or not 1 <= self.n <= MAX_QUBITS:
            raise ValueError(f"register size must be an integer in 1..{MAX_QUBITS}, got {self.n!r}")

    @property
    def dim(self) -> int:
        return 2**self.n


def _size(reg: QubitRegister | int) -> int:
    if isinstance(reg, QubitRegister):
        return reg.n
    return QubitRegister(reg).n


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


# -- bitstrings -------------------------------------------------------------

def parse_bitstring(text: str, n: int | None = None) -> tuple[int, ...]:
    """Parse ``"010010"`` (qubit 1 leftmost) into a tuple of bits."""
    if not isinstance(text, str) or not text or set(text) - {"0", "1"}:
        raise ValueError(f"invalid bitstring {text!r}")
    if n is not None and len(text) != n:
        raise ValueError(f"bitstring {text!r} has length {len(text)}, register has {n} qubits")
    return tuple(int(c) for c in text)


def format_bitstring(bits) -> str:
    return "".join(str(int(b)) for b in bits)


def basis_index(bits) -> int:
    if isinstance(bits, str):
        bits = parse_bitstring(bits)
    n = len(bits)
    return sum(int(b) << (n - 1 - k) for k, b in enumerate(bits))


def bits_of_index(index: int, n: int) -> tuple[int, ...]:
    if not 0 <= index < 2**n:
        raise ValueError(f"index {index} out of range for {n} qubits")
    return tuple((index >> (n - 1 - k)) & 1 for k in range(n))


def hamming_weight(bits) -> int:
    if isinstance(bits, str):
        bits = parse_bitstring(bits)
    return int(sum(bits))


def basis_state(bits) -> np.ndarray:
    """Computational basis ket for a bitstring (text or bit sequence)."""
    if isinstance(bits, str):
        bits = parse_bitstring(bits)
    n = _size(len(bits))
    ket = np.zeros(2**n, dtype=np.complex128)
    ket[basis_index(bits)] = 1.0
    return ket


# -- operators --------------------------------------------------------------

def _check_site(n: int, site: int) -> None:
    if not 1 <= site <= n:
        raise ValueError(f"qubit index {site} out of range 1..{n}")


@lru_cache(maxsize=None)
def _pauli_at(n: int, axis: str, site: int) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.complex128)
    for k in range(1, n + 1):
        out = np.kron(out, SIGMA[axis] if k == site else IDENTITY2)
    return _frozen(out)


def pauli_at(reg: QubitRegister | int, axis: str, site: int) -> np.ndarray:
    """Pauli ``axis`` on qubit ``site`` (1-based), identity elsewhere."""
    n = _size(reg)
    if axis not in SIGMA:
        raise ValueError(f"axis must be one of x, y, z; got {axis!r}")
    _check_site(n, site)
    return _pauli_at(n, axis, site)


def _check_pair(n: int, k: int, l: int) -> None:
    _check_site(n, k)
    _check_site(n, l)
    if k == l:
        raise ValueError(f"pair coupling needs two distinct qubits, got ({k}, {l})")


@lru_cache(maxsize=None)
def _xy_term(n: int, k: int, l: int) -> np.ndarray:
    x = _pauli_at(n, "x", k) @ _pauli_at(n, "x", l)
    y = _pauli_at(n, "y", k) @ _pauli_at(n, "y", l)
    return _frozen(0.5 * (x + y))


@lru_cache(maxsize=None)
def _dm_term(n: int, k: int, l: int) -> np.ndarray:
    xy = _pauli_at(n, "x", k) @ _pauli_at(n, "y", l)
    yx = _pauli_at(n, "y", k) @ _pauli_at(n, "x", l)
    return _frozen(0.5 * (xy - yx))


def xy_term(reg: QubitRegister | int, k: int, l: int) -> np.ndarray:
    """XY exchange ``(sx_k sx_l + sy_k sy_l) / 2``; hops ``|01> <-> |10>`` on the pair."""
    n = _size(reg)
    _check_pair(n, k, l)
    return _xy_term(n, k, l)


def dm_term(reg: QubitRegister | int, k: int, l: int) -> np.ndarray:
    """Dzyaloshinskii-Moriya term ``(sx_k sy_l - sy_k sx_l) / 2``.

    On the ordered pair (k, l) it maps ``|01> -> -i|10>`` and ``|10> -> i|01>``;
    swapping k and l flips the sign.
    """
    n = _size(reg)
    _check_pair(n, k, l)
    return _dm_term(n, k, l)


@lru_cache(maxsize=None)
def _collective_z(n: int) -> np.ndarray:
    diag = np.array([n - 2 * sum(bits_of_index(i, n)) for i in range(2**n)], dtype=np.float64)
    return _frozen(np.diag(diag).astype(np.complex128))


def collective_z(reg: QubitRegister | int) -> np.ndarray:
    """Collective spin ``S_N = sum_k sz_k``; a bitstring of weight w has eigenvalue n - 2w."""
    return _collective_z(_size(reg))


def collective_z_spectrum(reg: QubitRegister | int) -> np.ndarray:
    """Diagonal of ``S_N`` as a real vector indexed by basis index."""
    return np.real(np.diag(_collective_z(_size(reg)))).copy()
