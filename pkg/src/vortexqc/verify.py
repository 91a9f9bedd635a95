"""Identity suite: algebra, spectrum, zero mode, eigenstates, exchange and gate matrices.

Each check reports the achieved residual against a tolerance.  Passing a
single ``tol`` overrides every default tolerance.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .braiding import (
    HADAMARD,
    block_residual,
    composite_gate,
    composite_reference,
    gate_fidelity,
    m31_even,
    m31_odd,
    m31_phase_alignment,
    m31_reference,
    sequence_matrix,
)
from .clifford import anticommutator, build_fock_space, commutator, max_abs, parity_operator
from .hamiltonian import build_hamiltonian, couplings_from_angles, eigenstate_table, quasiparticle_ops

DEFAULT_SEED = 20080131
M31_PHIS = (0.0, np.pi / 6, np.pi / 4, 1.0)

# Explicit expansions of the eight J12-dominant eigenstates (normalized):
# label -> (k, {occupations: amplitude}) meaning e^{i k phi} * sum(amp |occ)).
_R = 1 / np.sqrt(2)
EIGENSTATE_EXPANSIONS = {
    "a": (-1, {"100": _R, "010": 1j * _R}),
    "a.ad.b": (0, {"001": _R, "111": -1j * _R}),
    "a.ad": (0, {"000": _R, "110": -1j * _R}),
    "a.b": (-1, {"101": _R, "011": 1j * _R}),
    "ad": (1, {"100": _R, "010": -1j * _R}),
    "ad.a.b": (0, {"001": _R, "111": 1j * _R}),
    "ad.a": (0, {"000": _R, "110": 1j * _R}),
    "ad.b": (1, {"101": _R, "011": -1j * _R}),
}


def expansion_vector(label: str, phi: float) -> np.ndarray:
    space = build_fock_space(3)
    k, amps = EIGENSTATE_EXPANSIONS[label]
    v = sum(a * space.basis_state(occ) for occ, a in amps.items())
    return np.exp(1j * k * phi) * v


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tol: float
    mode: str = "max"  # "max": value <= tol, "min": value >= tol

    @property
    def passed(self) -> bool:
        if not np.isfinite(self.value):
            return False
        return self.value <= self.tol if self.mode == "max" else self.value >= self.tol


def _algebra(n: int) -> float:
    sp = build_fock_space(n)
    return max(
        max_abs(anticommutator(sp.gamma(i), sp.gamma(j)) - 2 * (i == j) * sp.identity)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
    )


def _hermitian_unitary(n: int) -> float:
    sp = build_fock_space(n)
    return max(
        max(max_abs(g - g.conj().T), max_abs(g @ g - sp.identity)) for g in sp.majoranas
    )


def _random_angles(rng: np.random.Generator, count: int):
    for _ in range(count):
        yield rng.uniform(0.1, 3.0), np.arccos(rng.uniform(-1, 1)), rng.uniform(0, 2 * np.pi)


def _spectrum_checks(rng: np.random.Generator) -> tuple[float, float, float]:
    sp = build_fock_space(3)
    spec_err = form_err = zero_err = 0.0
    for J, theta, phi in _random_angles(rng, 50):
        H = build_hamiltonian(sp, couplings_from_angles(J, theta, phi))
        w = np.linalg.eigvalsh(H)
        spec_err = max(spec_err, max_abs(w - np.repeat([-J, J], 4)))
        ops = quasiparticle_ops(sp, theta, phi)
        form_err = max(form_err, max_abs(H - J * (2 * ops.alpha_dagger @ ops.alpha - sp.identity)))
        zero_err = max(zero_err, max_abs(commutator(H, ops.beta)))
    return spec_err, form_err, zero_err


def _table_checks(phi: float) -> tuple[float, float]:
    sp = build_fock_space(3)
    table = eigenstate_table(sp, phi)
    P = parity_operator(sp)
    amp_err = max(max_abs(s.vector - expansion_vector(k, phi)) for k, s in table.items())
    par_err = max(max_abs(P @ s.vector - s.parity * s.vector) for s in table.values())
    return amp_err, par_err


def run_identity_suite(
    tol: float | None = None, name_filter: str | None = None, seed: int = DEFAULT_SEED
) -> list[Check]:
    """Run every identity check; ``name_filter`` keeps names containing it."""
    rng = np.random.default_rng(seed)
    checks: list[Check] = []

    def add(name: str, value: float, default_tol: float, mode: str = "max") -> None:
        if name_filter and name_filter not in name:
            return
        checks.append(Check(name, float(value), default_tol if tol is None else tol, mode))

    groups = ("algebra", "spectrum", "zero_mode", "eigenstate_table", "m31", "composite", "hadamard")
    selected = {
        g for g in groups if not name_filter or g.startswith(name_filter) or name_filter.startswith(g)
    } or set(groups)

    def want(group: str) -> bool:
        return group in selected

    if want("algebra"):
        for n in (3, 4):
            add(f"algebra.anticommutator.n{n}", _algebra(n), 1e-12)
            add(f"algebra.hermitian_unitary.n{n}", _hermitian_unitary(n), 1e-12)
    if want("spectrum") or want("zero_mode"):
        spec_err, form_err, zero_err = _spectrum_checks(rng)
        add("spectrum.levels", spec_err, 1e-10)
        add("spectrum.quasiparticle_form", form_err, 1e-12)
        add("zero_mode.commutator", zero_err, 1e-12)
    if want("eigenstate_table"):
        for phi in (0.0, 0.7):
            amp_err, par_err = _table_checks(phi)
            add(f"eigenstate_table.expansion.phi={phi:g}", amp_err, 1e-10)
            add(f"eigenstate_table.parity.phi={phi:g}", par_err, 1e-12)
    if want("m31"):
        add("m31.phase_alignment", abs(m31_phase_alignment()), 1e-10)
        for phi in M31_PHIS:
            m = m31_odd(None, phi)
            add(f"m31.odd.phi={phi:.6g}", max_abs(m - m31_reference(phi)), 1e-10)
            add(f"m31.odd.unitarity.phi={phi:.6g}", max_abs(m @ m.conj().T - np.eye(4)), 1e-10)
            me = m31_even(None, phi)
            add(f"m31.even.unitarity.phi={phi:.6g}", max_abs(me @ me.conj().T - np.eye(4)), 1e-10)
    if want("composite"):
        odd_err = odd_block = even_err = even_block = 0.0
        for _ in range(20):
            eta, phi = rng.uniform(-np.pi, np.pi), rng.uniform(0, 2 * np.pi)
            ref = composite_reference(eta, phi)
            g = composite_gate(eta, phi, "odd")
            odd_err, odd_block = max(odd_err, max_abs(g - ref)), max(odd_block, block_residual(g))
            g = composite_gate(eta, phi, "even")
            even_err, even_block = max(even_err, max_abs(g - ref)), max(even_block, block_residual(g))
        add("composite.odd.entries", odd_err, 1e-10)
        add("composite.odd.blocks", odd_block, 1e-10)
        add("composite.even.entries", even_err, 1e-10)
        add("composite.even.blocks", even_block, 1e-10)
    if want("hadamard"):
        product = sequence_matrix([(np.pi / 2, 0.0), (np.pi / 4, -np.pi / 2)])
        add("hadamard.infidelity", 1 - gate_fidelity(product, HADAMARD), 1e-10)
    return checks
