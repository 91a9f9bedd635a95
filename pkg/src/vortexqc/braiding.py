"""Vortex exchanges, dynamical phases and the continuous one-qubit gate family.

Two representations of an exchange are provided.  :func:`braid_unitary` is
the exponential ``exp(pi/4 gamma_b gamma_a)`` whose conjugation sends
``gamma_a -> gamma_b`` and ``gamma_b -> -gamma_a``.  :func:`braid_substitution`
acts on a state written as ``O|0)`` by substituting the exchanged Majoranas
into ``O`` and leaving the Fock vacuum in place; the 4x4 exchange matrices and
the two-qubit braid state are expressed in this representation.

The 4x4 matrices follow the operator-substitution convention: row ``k`` lists
the coefficients of the image of basis state ``k``.  A sequence of steps is
therefore composed left to right.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .clifford import FockSpace, build_fock_space, max_abs
from .errors import ConsistencyError, ContractError
from .hamiltonian import eigenstate_table, table_states

CCW, CW = "ccw", "cw"

# Basis orderings (labels of ``eigenstate_table``): ground state, its excited
# Rabi partner, second ground state, its partner.
ODD_BASIS = ("a", "ad.a.b", "a.ad.b", "ad")
EVEN_BASIS = ("a.b", "ad.a", "a.ad", "ad.b")
SECTOR_BASES = {"odd": ODD_BASIS, "even": EVEN_BASIS}

BLOCK_TOL = 1e-10

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


@dataclass(frozen=True)
class BraidMove:
    a: int
    b: int
    orientation: str = CCW

    def __post_init__(self):
        if self.a == self.b:
            raise ContractError(f"cannot exchange vortex {self.a} with itself")
        if self.orientation not in (CCW, CW):
            raise ContractError(f"orientation must be 'ccw' or 'cw', got {self.orientation!r}")

    def inverse(self) -> "BraidMove":
        return BraidMove(self.a, self.b, CW if self.orientation == CCW else CCW)


@dataclass(frozen=True)
class BraidWord:
    moves: tuple[BraidMove, ...] = ()

    @classmethod
    def of(cls, *moves: tuple) -> "BraidWord":
        return cls(tuple(m if isinstance(m, BraidMove) else BraidMove(*m) for m in moves))

    def inverse(self) -> "BraidWord":
        return BraidWord(tuple(m.inverse() for m in reversed(self.moves)))

    def __len__(self) -> int:
        return len(self.moves)


def braid_unitary(space: FockSpace, a: int, b: int, orientation: str = CCW) -> np.ndarray:
    """``exp(s pi/4 gamma_b gamma_a)``, ``s = +1`` counterclockwise.

    Counterclockwise conjugation maps ``gamma_a -> gamma_b`` and
    ``gamma_b -> -gamma_a``; clockwise is the inverse.
    """
    move = BraidMove(a, b, orientation)
    s = 1.0 if move.orientation == CCW else -1.0
    # (gamma_b gamma_a)^2 = -1, so the exponential is a cosine/sine pair
    return (space.identity + s * space.gamma(b) @ space.gamma(a)) / np.sqrt(2)


def majorana_image(space: FockSpace, U: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Signed permutation ``U gamma_i U^dagger = sign[i] gamma_{perm[i]}`` (0-based).

    Raises if the conjugation does not permute the Majoranas up to sign.
    """
    n = space.n_modes
    R = np.empty((n, n))
    for i in range(n):
        gi = U @ space.majoranas[i] @ U.conj().T
        for j in range(n):
            R[i, j] = np.real(np.trace(space.majoranas[j] @ gi)) / space.dim
    perm = np.argmax(np.abs(R), axis=1)
    signs = np.sign(R[np.arange(n), perm])
    if len(set(perm.tolist())) != n or max_abs(np.abs(R[np.arange(n), perm]) - 1) > 1e-10:
        raise ConsistencyError("conjugation is not a signed permutation of the Majoranas")
    return perm, signs


def substitution_operator(space: FockSpace, perm: Sequence[int], signs: Sequence[float]) -> np.ndarray:
    """Operator sending ``gamma_S |0)`` to ``gamma'_S |0)`` for every mode subset S.

    ``gamma'_i = signs[i] gamma_{perm[i]}``.  For sorted S, ``gamma_S|0)`` is
    the occupation state with exactly the modes in S filled, so the result is
    a signed permutation matrix fixing the vacuum.
    """
    n = space.n_modes
    K = np.zeros((space.dim, space.dim), dtype=complex)
    for k in range(n + 1):
        for S in combinations(range(n), k):
            image = [int(perm[i]) for i in S]
            sign = float(np.prod([signs[i] for i in S])) if S else 1.0
            # reorder the image product into increasing mode order
            inversions = sum(1 for x in range(k) for y in range(x + 1, k) if image[x] > image[y])
            sign *= (-1) ** inversions
            src = sum(1 << (n - 1 - i) for i in S)
            dst = sum(1 << (n - 1 - i) for i in image)
            K[dst, src] = sign
    return K


def braid_substitution(space: FockSpace, a: int, b: int, orientation: str = CCW) -> np.ndarray:
    """Exchange acting on states ``O|0)`` as ``O -> U O U^dagger`` with ``|0)`` fixed."""
    perm, signs = majorana_image(space, braid_unitary(space, a, b, orientation))
    return substitution_operator(space, perm, signs)


def word_operator(space: FockSpace, word: BraidWord, kind: str = "substitution") -> np.ndarray:
    """Product of the moves in application order (first move acts first)."""
    single = {"substitution": braid_substitution, "exponential": braid_unitary}[kind]
    out = space.identity.copy()
    for m in word.moves:
        out = single(space, m.a, m.b, m.orientation) @ out
    return out


def _sector_matrix(space: FockSpace, phi: float, sector: str) -> np.ndarray:
    if space.n_modes != 3:
        raise ContractError("exchange matrices are defined on the three-vortex space")
    E = table_states(eigenstate_table(space, phi), SECTOR_BASES[sector])
    if max_abs(E.conj().T @ E - np.eye(4)) > 1e-10:
        raise ConsistencyError(f"{sector} basis is not orthonormal")
    K = braid_substitution(space, 3, 1, CCW)
    P = E.conj().T @ K @ E
    defect = max_abs(np.linalg.norm(P, axis=0) - 1)
    if defect > 1e-10:
        raise ConsistencyError(f"exchange leaks out of the {sector} sector (defect {defect:.2e})")
    return P.T


def m31_odd(space: FockSpace | None = None, phi: float = 0.0) -> np.ndarray:
    """Counterclockwise (3,1) exchange on the odd basis ``ODD_BASIS``."""
    return _sector_matrix(space or build_fock_space(3), phi, "odd")


def m31_even(space: FockSpace | None = None, phi: float = 0.0) -> np.ndarray:
    """Counterclockwise (3,1) exchange on the even basis ``EVEN_BASIS``."""
    return _sector_matrix(space or build_fock_space(3), phi, "even")


def m31_reference(phi: float) -> np.ndarray:
    """Closed form of the odd-sector exchange matrix."""
    e = np.exp(1j * phi)
    ec = e.conjugate()
    return 0.5 * np.array(
        [
            [1, -ec, -ec, -(ec**2)],
            [e, 1, -1, ec],
            [e, -1, 1, ec],
            [-(e**2), -e, -e, 1],
        ]
    )


def global_phase(a: np.ndarray, b: np.ndarray) -> float:
    """Phase ``chi`` minimizing ``|a - e^{i chi} b|``."""
    return float(np.angle(np.vdot(b.ravel(), a.ravel())))


def m31_phase_alignment(space: FockSpace | None = None) -> float:
    """Global phase between the computed and closed-form matrices, fixed at phi = 0."""
    return global_phase(m31_odd(space, 0.0), m31_reference(0.0))


def dynamical_phase_matrix(eta: float) -> np.ndarray:
    """Ground states pick up ``e^{-i eta}``, excited states ``e^{+i eta}``."""
    return np.diag(np.exp(1j * eta * np.array([-1.0, 1.0, -1.0, 1.0])))


def block_residual(G: np.ndarray) -> float:
    return max(max_abs(G[:2, 2:]), max_abs(G[2:, :2]))


def composite_gate(eta: float, phi: float, sector: str = "odd", space: FockSpace | None = None) -> np.ndarray:
    """Exchange, dwell, reverse exchange; block diagonal with ``M(eta, phi)`` upper left."""
    m = _sector_matrix(space or build_fock_space(3), phi, sector)
    G = m @ dynamical_phase_matrix(eta) @ np.linalg.inv(m)
    res = block_residual(G)
    if res > BLOCK_TOL:
        raise ConsistencyError(f"composite gate is not block diagonal (residual {res:.2e})")
    return G


def composite_reference(eta: float, phi: float) -> np.ndarray:
    G = np.zeros((4, 4), dtype=complex)
    G[:2, :2] = m_gate(eta, phi).matrix
    G[2:, 2:] = m_gate(-eta, phi).matrix
    return G


@dataclass(frozen=True)
class MGate:
    """``cos(eta) - i sin(eta) (cos(phi) X + sin(phi) Y)``."""

    eta: float
    phi: float

    @property
    def matrix(self) -> np.ndarray:
        c, s = np.cos(self.eta), np.sin(self.eta)
        return np.array(
            [
                [c, -1j * np.exp(-1j * self.phi) * s],
                [-1j * np.exp(1j * self.phi) * s, c],
            ]
        )

    def inverse(self) -> "MGate":
        return MGate(-self.eta, self.phi)


def m_gate(eta: float, phi: float) -> MGate:
    return MGate(float(eta), float(phi))


def sequence_matrix(seq: Iterable[tuple[float, float] | MGate]) -> np.ndarray:
    """Product of M factors, first element applied first."""
    out = np.eye(2, dtype=complex)
    for item in seq:
        g = item if isinstance(item, MGate) else MGate(*item)
        out = g.matrix @ out
    return out


def gate_fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """``|tr(a^dagger b)|^2 / d^2``: 1 iff equal up to global phase (unitaries)."""
    d = a.shape[0]
    return float(abs(np.trace(a.conj().T @ b)) ** 2 / d**2)


def _to_su2(target: np.ndarray, tol: float) -> np.ndarray:
    U = np.asarray(target, dtype=complex)
    if U.shape != (2, 2) or max_abs(U.conj().T @ U - np.eye(2)) > tol:
        raise ContractError("target must be a 2x2 unitary")
    return U / np.sqrt(np.linalg.det(U))


def decompose_su2(target: np.ndarray, tol: float = 1e-10, drop_tol: float = 1e-12) -> list[tuple[float, float]]:
    """Factor a one-qubit unitary into at most three M gates.

    Returns ``[(eta, phi), ...]`` in application order with axes phi = 0 and
    phi = pi/2: ``target ~ M(a, 0) M(b, pi/2) M(c, 0)``.  Factors equal to
    ``+-1`` are dropped.
    """
    V = _to_su2(target, tol)
    # Hadamard conjugation turns the X-Y-X product into Z-Y-Z:
    # H V H = diag(e^{-ia}, e^{ia}) [[cos b, sin b], [-sin b, cos b]] diag(e^{-ic}, e^{ic})
    W = HADAMARD @ V @ HADAMARD
    b = float(np.arctan2(abs(W[0, 1]), abs(W[0, 0])))
    s_plus = -np.angle(W[0, 0]) if abs(W[0, 0]) > drop_tol else None
    s_minus = -np.angle(W[0, 1]) if abs(W[0, 1]) > drop_tol else None
    if s_plus is None or s_minus is None:
        # only a + c (or a - c) is determined; put it all in one factor
        a, c = float(s_plus if s_minus is None else s_minus), 0.0
    else:
        a = float((s_plus + s_minus) / 2)
        c = float((s_plus - s_minus) / 2)
    seq = [(c, 0.0), (b, np.pi / 2), (a, 0.0)]
    return [(eta, phi) for eta, phi in seq if abs(np.sin(eta)) > drop_tol]
