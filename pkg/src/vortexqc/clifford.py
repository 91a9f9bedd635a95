"""Fock space of vortex-local fermion modes and their Majorana operators.

Basis convention: the occupation tuple ``(n_1, ..., n_k)`` sits at index
``sum(n_i * 2**(k - i))``, i.e. mode 1 is the most significant bit.  The
annihilator ``c_i`` carries a Jordan-Wigner parity string over modes
``1..i-1``, which makes every ``gamma_i = c_i + c_i^dagger`` a real matrix.

Operators and states are plain complex ``numpy`` arrays.  Arrays handed out
by :class:`FockSpace` are read-only.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import ContractError, DimensionError, SizeError

MAX_MODES = 12

_LOWER = np.array([[0, 1], [0, 0]], dtype=complex)  # |1> -> |0>
_Z = np.diag([1.0, -1.0]).astype(complex)
_I2 = np.eye(2, dtype=complex)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class FockSpace:
    """The ``2**n_modes`` dimensional space of ``n_modes`` fermion modes.

    Modes are labelled ``1..n_modes`` to match vortex numbering; the tuples
    ``annihilators``, ``creators`` and ``majoranas`` are 0-based.
    """

    def __init__(self, n_modes: int):
        if not isinstance(n_modes, (int, np.integer)) or not 1 <= n_modes <= MAX_MODES:
            raise SizeError(f"n_modes must be an integer in [1, {MAX_MODES}], got {n_modes!r}")
        self.n_modes = int(n_modes)
        self.dim = 2**self.n_modes
        cs = []
        for i in range(self.n_modes):
            m = np.ones((1, 1), dtype=complex)
            for j in range(self.n_modes):
                m = np.kron(m, _Z if j < i else (_LOWER if j == i else _I2))
            cs.append(m)
        self.annihilators = tuple(_frozen(c) for c in cs)
        self.creators = tuple(_frozen(c.conj().T.copy()) for c in cs)
        self.majoranas = tuple(_frozen(c + c.conj().T) for c in cs)
        self.identity = _frozen(np.eye(self.dim, dtype=complex))

    def __repr__(self) -> str:
        return f"FockSpace(n_modes={self.n_modes})"

    def c(self, i: int) -> np.ndarray:
        """Annihilator of mode ``i`` (1-based)."""
        return self.annihilators[self._check_mode(i)]

    def cdag(self, i: int) -> np.ndarray:
        return self.creators[self._check_mode(i)]

    def gamma(self, i: int) -> np.ndarray:
        """Majorana operator ``c_i + c_i^dagger`` of vortex ``i`` (1-based)."""
        return self.majoranas[self._check_mode(i)]

    def _check_mode(self, i: int) -> int:
        if not 1 <= i <= self.n_modes:
            raise ContractError(f"mode index {i} outside 1..{self.n_modes}")
        return i - 1

    def index(self, occupations: Sequence[int]) -> int:
        if len(occupations) != self.n_modes or any(n not in (0, 1) for n in occupations):
            raise ContractError(f"need {self.n_modes} occupations in {{0, 1}}, got {occupations!r}")
        idx = 0
        for n in occupations:
            idx = 2 * idx + int(n)
        return idx

    def occupations(self, index: int) -> tuple[int, ...]:
        return tuple((index >> (self.n_modes - 1 - k)) & 1 for k in range(self.n_modes))

    def basis_state(self, occupations: Sequence[int] | str) -> np.ndarray:
        """Occupation basis vector, e.g. ``basis_state("110")``."""
        if isinstance(occupations, str):
            occupations = [int(ch) for ch in occupations]
        v = np.zeros(self.dim, dtype=complex)
        v[self.index(occupations)] = 1.0
        return v

    def vacuum(self) -> np.ndarray:
        return self.basis_state([0] * self.n_modes)


@lru_cache(maxsize=None)
def build_fock_space(n_vortices: int) -> FockSpace:
    """Fock space with one Majorana mode per vortex (cached per size)."""
    return FockSpace(n_vortices)


def _same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _same_shape(a, b)
    return a @ b + b @ a


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _same_shape(a, b)
    return a @ b - b @ a


def parity_operator(space: FockSpace) -> np.ndarray:
    """Diagonal ``(-1)**N`` in the occupation basis."""
    counts = np.array([bin(k).count("1") for k in range(space.dim)])
    return np.diag((-1.0) ** counts).astype(complex)


def max_abs(a: np.ndarray) -> float:
    """Entrywise max norm, the residual measure used throughout."""
    return float(np.max(np.abs(a))) if a.size else 0.0


def is_hermitian(a: np.ndarray, tol: float = 1e-12) -> bool:
    return a.ndim == 2 and a.shape[0] == a.shape[1] and max_abs(a - a.conj().T) <= tol


def is_unitary(a: np.ndarray, tol: float = 1e-12) -> bool:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return max_abs(a.conj().T @ a - np.eye(a.shape[0])) <= tol


def normalize(psi: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise ContractError("cannot normalize the zero vector")
    return np.asarray(psi, dtype=complex) / norm


def check_normalized(psi: np.ndarray, tol: float = 1e-10) -> None:
    if abs(np.linalg.norm(psi) - 1.0) > tol:
        raise ContractError(f"state is not normalized (norm={np.linalg.norm(psi):.3g})")


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """``|<a|b>|**2`` for normalized states; invariant under global phase."""
    _same_shape(a, b)
    check_normalized(a)
    check_normalized(b)
    return float(min(1.0, abs(np.vdot(a, b)) ** 2))


def expectation(op: np.ndarray, psi: np.ndarray) -> complex:
    return complex(np.vdot(psi, op @ psi))
