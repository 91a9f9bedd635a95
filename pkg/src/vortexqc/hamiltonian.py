"""Coupled-Majorana Hamiltonians, quasiparticle operators and eigenstates.

For three vortices the couplings ``(J23, J31, J12)`` are a vector of length
``J`` with polar angles ``(theta, phi)``; the Hamiltonian then has two
four-fold levels at ``-J`` and ``+J`` and a decoupled Majorana zero mode.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .clifford import FockSpace, max_abs, parity_operator
from .errors import ConsistencyError, ContractError

DEGENERACY_TOL = 1e-9


@dataclass(frozen=True)
class CouplingSet:
    """Real couplings ``J_ij`` for pairs ``i < j`` (1-based vortex labels).

    ``i J_ij gamma_i gamma_j`` with ``i > j`` is stored as ``(j, i, -J_ij)``.
    """

    pairs: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        canon = {}
        for i, j, val in self.pairs:
            if i == j:
                raise ContractError(f"self-coupling ({i}, {j}) is not allowed")
            if not np.isfinite(val):
                raise ContractError(f"coupling J_{i}{j} is not finite")
            if i > j:
                i, j, val = j, i, -val
            canon[(i, j)] = canon.get((i, j), 0.0) + float(val)
        object.__setattr__(self, "pairs", tuple((i, j, v) for (i, j), v in sorted(canon.items())))

    @classmethod
    def three_vortex(cls, j23: float, j31: float, j12: float) -> "CouplingSet":
        return cls(((2, 3, j23), (3, 1, j31), (1, 2, j12)))

    def get(self, i: int, j: int) -> float:
        """``J_ij`` with the antisymmetry ``J_ji = -J_ij``."""
        sign = 1.0
        if i > j:
            i, j, sign = j, i, -1.0
        for a, b, v in self.pairs:
            if (a, b) == (i, j):
                return sign * v
        return 0.0

    @property
    def max_index(self) -> int:
        return max((j for _, j, _ in self.pairs), default=0)

    def vector(self) -> np.ndarray:
        """``(J23, J31, J12)`` for the three-vortex case."""
        return np.array([self.get(2, 3), self.get(3, 1), self.get(1, 2)])

    def angles(self) -> "SphericalCouplings":
        return angles_from_couplings(*self.vector())


@dataclass(frozen=True)
class SphericalCouplings:
    J: float
    theta: float
    phi: float
    phi_degenerate: bool = False


def couplings_from_angles(J: float, theta: float, phi: float) -> CouplingSet:
    """``(J23, J31, J12) = J (sin t cos p, sin t sin p, cos t)``."""
    if J < 0:
        raise ContractError(f"J must be non-negative, got {J}")
    st = np.sin(theta)
    return CouplingSet.three_vortex(J * st * np.cos(phi), J * st * np.sin(phi), J * np.cos(theta))


def phi_from_couplings(j23: float, j31: float) -> tuple[float, bool]:
    """Azimuth ``atan2(J31, J23)`` and a flag set when both vanish.

    With both couplings zero the angle is undefined; 0 is returned.
    """
    if j23 == 0 and j31 == 0:
        return 0.0, True
    return float(np.arctan2(j31, j23)), False


def angles_from_couplings(j23: float, j31: float, j12: float) -> SphericalCouplings:
    J = float(np.sqrt(j23**2 + j31**2 + j12**2))
    theta = float(np.arccos(np.clip(j12 / J, -1.0, 1.0))) if J > 0 else 0.0
    phi, degenerate = phi_from_couplings(j23, j31)
    phi = phi % (2 * np.pi)
    return SphericalCouplings(J, theta, phi, degenerate)


def build_hamiltonian(space: FockSpace, couplings: CouplingSet) -> np.ndarray:
    """``H = sum_(i<j) i J_ij gamma_i gamma_j``."""
    if couplings.max_index > space.n_modes:
        raise ContractError(
            f"coupling index {couplings.max_index} exceeds {space.n_modes} vortices"
        )
    H = np.zeros((space.dim, space.dim), dtype=complex)
    for i, j, val in couplings.pairs:
        H += 1j * val * space.gamma(i) @ space.gamma(j)
    return H


@dataclass
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns
    levels: list[tuple[float, int]] = field(default_factory=list)

    def residual(self, H: np.ndarray) -> float:
        return max_abs(H @ self.eigenvectors - self.eigenvectors * self.eigenvalues)


def spectrum(H: np.ndarray, tol: float = DEGENERACY_TOL) -> Spectrum:
    """Dense Hermitian diagonalization with degenerate levels grouped."""
    w, v = np.linalg.eigh(H)
    levels: list[tuple[float, int]] = []
    start = 0
    for k in range(1, len(w) + 1):
        if k == len(w) or w[k] - w[k - 1] > tol:
            levels.append((float(np.mean(w[start:k])), k - start))
            start = k
    return Spectrum(w, v, levels)


@dataclass(frozen=True)
class QuasiparticleOps:
    alpha: np.ndarray
    alpha_dagger: np.ndarray
    beta: np.ndarray
    theta: float
    phi: float


def _require_three(space: FockSpace) -> None:
    if space.n_modes != 3:
        raise ContractError(f"three-vortex space required, got {space.n_modes} modes")


def quasiparticle_ops(space: FockSpace, theta: float, phi: float) -> QuasiparticleOps:
    """The fermion ``alpha`` diagonalizing H and the zero mode ``beta``.

    ``H = J (2 alpha^dagger alpha - 1)`` for couplings at angles
    ``(theta, phi)``; ``beta`` anticommutes with ``alpha`` and commutes with H.
    """
    _require_three(space)
    g1, g2, g3 = space.majoranas
    ct, st, cp, sp = np.cos(theta), np.sin(theta), np.cos(phi), np.sin(phi)
    alpha_dag = 0.5 * ((ct * cp + 1j * sp) * g1 + (ct * sp - 1j * cp) * g2 - st * g3)
    alpha = alpha_dag.conj().T
    beta = st * cp * g1 + st * sp * g2 + ct * g3
    return QuasiparticleOps(alpha, alpha_dag, beta, float(theta), float(phi))


@dataclass(frozen=True)
class LabeledState:
    label: str
    vector: np.ndarray
    energy: float  # in units of omega: -1 ground, +1 excited
    parity: int
    operator: np.ndarray

    @property
    def level(self) -> str:
        return "ground" if self.energy < 0 else "excited"


# (label, energy in units of omega, parity); label is the operator product
# applied to the vacuum, "ad" standing for alpha^dagger and "b" for beta.
TABLE_LAYOUT = (
    ("a", -1, -1),
    ("a.ad.b", -1, -1),
    ("a.ad", -1, +1),
    ("a.b", -1, +1),
    ("ad", +1, -1),
    ("ad.a.b", +1, -1),
    ("ad.a", +1, +1),
    ("ad.b", +1, +1),
)


def label_operator(label: str, ops: QuasiparticleOps, identity: np.ndarray) -> np.ndarray:
    table = {"a": ops.alpha, "ad": ops.alpha_dagger, "b": ops.beta}
    out = identity
    for name in label.split("."):
        out = out @ table[name]
    return out


def eigenstate_table(space: FockSpace, phi: float = 0.0) -> dict[str, LabeledState]:
    """The eight normalized eigenstates in the ``J12``-dominant limit.

    ``alpha = e^{-i phi}/2 (gamma_1 + i gamma_2)`` and ``beta = gamma_3``.
    Each operator product applied to ``|000)`` has norm ``1/sqrt(2)``; the
    returned vectors are rescaled to unit norm.
    """
    _require_three(space)
    ops = quasiparticle_ops(space, 0.0, phi)
    vac = space.vacuum()
    P = np.real(np.diag(parity_operator(space)))
    table = {}
    for label, energy, parity in TABLE_LAYOUT:
        op = label_operator(label, ops, space.identity)
        v = op @ vac
        v = v / np.linalg.norm(v)
        measured = float(np.real(np.vdot(v, P * v)))
        if abs(measured - parity) > 1e-12:
            raise ConsistencyError(f"state {label} has parity {measured}, expected {parity}")
        table[label] = LabeledState(label, v, float(energy), parity, op)
    return table


def table_states(table: dict[str, LabeledState], labels: Iterable[str]) -> np.ndarray:
    """Stack the named states as columns."""
    return np.column_stack([table[k].vector for k in labels])
