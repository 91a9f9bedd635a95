"""Time evolution under static and driven Majorana couplings.

Driven schedules are integrated with one exact exponential per step.  The
default step is the fourth-order Magnus generator built from two Gauss points,
``H_eff = (H_1 + H_2)/2 - i (sqrt(3)/12) h [H_2, H_1]``; ``method="midpoint"``
instead samples H once at the step midpoint (second order).  When every drive
shares one period, the per-step propagators repeat and are computed once.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping

import numpy as np

from .braiding import CCW, CW, SECTOR_BASES, braid_substitution, braid_unitary
from .clifford import (
    FockSpace,
    build_fock_space,
    check_normalized,
    is_hermitian,
    parity_operator,
)
from .errors import ContractError, ResourceError
from .hamiltonian import CouplingSet, build_hamiltonian, eigenstate_table, table_states

MIN_STEPS_PER_PERIOD = 32
DEFAULT_STEPS_PER_PERIOD = 256
MAX_STEPS = 10**8
METHODS = ("magnus4", "midpoint")
_GAUSS = np.sqrt(3) / 6

# Ground/excited pairs connected by a drive at twice the level spacing.
RABI_PAIRS = (("a", "ad.a.b"), ("a.ad.b", "ad"), ("a.ad", "ad.b"), ("a.b", "ad.a"))


def propagator(H: np.ndarray, t: float) -> np.ndarray:
    if not is_hermitian(H, 1e-10):
        raise ContractError("Hamiltonian is not Hermitian")
    w, v = np.linalg.eigh(H)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def evolve_constant(H: np.ndarray, t: float, psi: np.ndarray) -> np.ndarray:
    """``exp(-i H t) psi`` by spectral decomposition."""
    check_normalized(psi)
    return propagator(H, t) @ psi


def evolve_times(H: np.ndarray, times: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """States at every time in ``times`` (rows), from one diagonalization."""
    if not is_hermitian(H, 1e-10):
        raise ContractError("Hamiltonian is not Hermitian")
    check_normalized(psi)
    w, v = np.linalg.eigh(H)
    coeff = v.conj().T @ psi
    phases = np.exp(-1j * np.outer(np.asarray(times, dtype=float), w))
    return (phases * coeff) @ v.T


@dataclass(frozen=True)
class DriveTerm:
    """``amplitude * cos(frequency * t + phase) * i gamma_i gamma_j``."""

    i: int
    j: int
    amplitude: float
    frequency: float
    phase: float = 0.0


@dataclass(frozen=True)
class PulseSchedule:
    static: CouplingSet
    drives: tuple[DriveTerm, ...] = ()
    duration: float = 0.0
    steps_per_drive_period: int = DEFAULT_STEPS_PER_PERIOD
    n_modes: int = 3
    method: str = "magnus4"

    def __post_init__(self):
        if not self.duration >= 0:
            raise ContractError(f"duration must be >= 0, got {self.duration}")
        if self.steps_per_drive_period < MIN_STEPS_PER_PERIOD:
            raise ContractError(f"steps_per_drive_period must be >= {MIN_STEPS_PER_PERIOD}")
        if self.method not in METHODS:
            raise ContractError(f"method must be one of {METHODS}, got {self.method!r}")
        object.__setattr__(self, "drives", tuple(self.drives))

    @property
    def space(self) -> FockSpace:
        return build_fock_space(self.n_modes)

    def reference_period(self, H0: np.ndarray) -> float:
        freqs = [abs(d.frequency) for d in self.drives if d.frequency != 0]
        if freqs:
            return 2 * np.pi / max(freqs)
        scale = float(np.max(np.abs(np.linalg.eigvalsh(H0)))) if H0.size else 0.0
        if scale > 0:
            return 2 * np.pi / (2 * scale)
        return self.duration if self.duration > 0 else 1.0

    def step_size(self, H0: np.ndarray) -> float:
        return self.reference_period(H0) / self.steps_per_drive_period


@dataclass
class EvolutionTrace:
    times: np.ndarray
    labels: tuple[str, ...]
    populations: np.ndarray  # (n_samples, n_labels)
    parity: np.ndarray
    norm: np.ndarray
    final_state: np.ndarray
    extra: dict = field(default_factory=dict)

    def population(self, label: str) -> np.ndarray:
        return self.populations[:, self.labels.index(label)]

    def norm_drift(self) -> float:
        return float(np.max(np.abs(self.norm - 1.0)))

    def parity_drift(self) -> float:
        return float(np.max(np.abs(self.parity - self.parity[0])))


def _drive_operators(space: FockSpace, drives) -> list[np.ndarray]:
    return [1j * space.gamma(d.i) @ space.gamma(d.j) for d in drives]


def _steps(schedule: PulseSchedule, psi: np.ndarray) -> Iterator[tuple[float, np.ndarray]]:
    """Yield ``(t, psi(t))`` after every integration step."""
    space = schedule.space
    H0 = build_hamiltonian(space, schedule.static)
    V = _drive_operators(space, schedule.drives)
    dt = schedule.step_size(H0)
    n_full = int(math.floor(schedule.duration / dt + 1e-9))
    tail = schedule.duration - n_full * dt
    n_total = n_full + (1 if tail > 1e-12 * dt else 0)
    if n_total > MAX_STEPS:
        raise ResourceError(f"schedule needs {n_total} steps, limit is {MAX_STEPS}")

    freqs = {d.frequency for d in schedule.drives}
    periodic = len(freqs) <= 1
    cache: dict[int, np.ndarray] = {}

    def hamiltonian_at(t: float) -> np.ndarray:
        H = H0.copy()
        for d, op in zip(schedule.drives, V):
            H += d.amplitude * np.cos(d.frequency * t + d.phase) * op
        return H

    def one_step(t0: float, h: float) -> np.ndarray:
        if schedule.method == "midpoint" or not V:
            return propagator(hamiltonian_at(t0 + h / 2), h)
        H1 = hamiltonian_at(t0 + (0.5 - _GAUSS) * h)
        H2 = hamiltonian_at(t0 + (0.5 + _GAUSS) * h)
        H_eff = 0.5 * (H1 + H2) - 1j * (np.sqrt(3) / 12) * h * (H2 @ H1 - H1 @ H2)
        return propagator(H_eff, h)

    def step_propagator(k: int, t0: float, h: float) -> np.ndarray:
        if h != dt or not periodic:
            return one_step(t0, h)
        key = k % schedule.steps_per_drive_period
        if key not in cache:
            cache[key] = one_step(key * dt, dt)
        return cache[key]

    state = np.asarray(psi, dtype=complex).copy()
    t = 0.0
    for k in range(n_total):
        h = dt if k < n_full else tail
        state = step_propagator(k, t, h) @ state
        t = (k + 1) * dt if k < n_full else schedule.duration
        yield t, state


def _sample(psi, basis, P) -> tuple[np.ndarray, float, float]:
    amps = basis.conj().T @ psi
    return np.abs(amps) ** 2, float(np.real(np.vdot(psi, P @ psi))), float(np.linalg.norm(psi))


def _default_basis(schedule: PulseSchedule) -> dict[str, np.ndarray]:
    H0 = build_hamiltonian(schedule.space, schedule.static)
    _, v = np.linalg.eigh(H0)
    return {f"E{k}": v[:, k] for k in range(v.shape[1])}


def evolve_schedule(
    schedule: PulseSchedule,
    psi: np.ndarray,
    states: Mapping[str, np.ndarray] | None = None,
    sample_every: int = 1,
) -> EvolutionTrace:
    """Integrate the driven Schroedinger equation and record populations.

    ``states`` names the vectors whose populations are recorded; it defaults
    to the eigenbasis of the static Hamiltonian.
    """
    check_normalized(psi)
    states = dict(states) if states is not None else _default_basis(schedule)
    labels = tuple(states)
    basis = np.column_stack([states[k] for k in labels])
    P = parity_operator(schedule.space)
    times, pops, par, norms = [0.0], [], [], []
    p, q, n = _sample(psi, basis, P)
    pops.append(p), par.append(q), norms.append(n)
    final = np.asarray(psi, dtype=complex)
    k = 0
    for k, (t, state) in enumerate(_steps(schedule, psi), start=1):
        final = state
        if k % sample_every == 0:
            times.append(t)
            p, q, n = _sample(state, basis, P)
            pops.append(p), par.append(q), norms.append(n)
    if k and k % sample_every:
        times.append(schedule.duration)
        p, q, n = _sample(final, basis, P)
        pops.append(p), par.append(q), norms.append(n)
    return EvolutionTrace(
        np.array(times), labels, np.array(pops), np.array(par), np.array(norms), final.copy()
    )


@dataclass
class RabiTransition:
    ground: str
    excited: str
    max_transfer: float
    peak_time: float
    parity_drift: float
    norm_drift: float
    cross_parity_leakage: float
    trace: EvolutionTrace | None = None


def rabi_transition_check(
    omega: float = 1.0,
    drive_amplitude: float = 0.02,
    drive_pair: tuple[int, int] = (2, 3),
    phi: float = 0.0,
    steps_per_drive_period: int = DEFAULT_STEPS_PER_PERIOD,
    max_periods: int = 400,
    sample_every: int | None = None,
    method: str = "magnus4",
) -> list[RabiTransition]:
    """Drive each ground state at ``2 omega`` and locate its first transfer peak.

    The static Hamiltonian is ``i omega gamma_1 gamma_2``.  Each run stops once
    the excited-partner population has passed a maximum above 1/2, or after
    ``max_periods`` drive periods.
    """
    if omega <= 0:
        raise ContractError("omega must be positive")
    space = build_fock_space(3)
    table = eigenstate_table(space, phi)
    static = CouplingSet(((1, 2, omega),))
    drive = DriveTerm(drive_pair[0], drive_pair[1], drive_amplitude, 2 * omega)
    period = np.pi / omega
    schedule = PulseSchedule(static, (drive,), max_periods * period, steps_per_drive_period, 3, method)
    sample_every = sample_every or max(1, steps_per_drive_period // 8)
    labels = tuple(table)
    basis = table_states(table, labels)
    P = parity_operator(space)

    results = []
    for ground, excited in RABI_PAIRS:
        psi0 = table[ground].vector
        p0 = table[ground].parity
        other = [k for k, lab in enumerate(labels) if table[lab].parity != p0]
        target = labels.index(excited)
        best, t_best, leak, par_drift, norm_drift = 0.0, 0.0, 0.0, 0.0, 0.0
        times, pops, pars, norms = [0.0], [], [], []
        p, q, n = _sample(psi0, basis, P)
        pops.append(p), pars.append(q), norms.append(n)
        final = psi0
        for k, (t, state) in enumerate(_steps(schedule, psi0), start=1):
            final = state
            p, q, n = _sample(state, basis, P)
            leak = max(leak, float(p[other].sum()))
            par_drift = max(par_drift, abs(q - p0))
            norm_drift = max(norm_drift, abs(n - 1.0))
            if p[target] > best:
                best, t_best = float(p[target]), t
            if k % sample_every == 0:
                times.append(t), pops.append(p), pars.append(q), norms.append(n)
            if best > 0.5 and p[target] < best - 0.05:
                break
        trace = EvolutionTrace(
            np.array(times), labels, np.array(pops), np.array(pars), np.array(norms), final.copy()
        )
        results.append(
            RabiTransition(ground, excited, best, t_best, par_drift, norm_drift, leak, trace)
        )
    return results


def dwell_time(eta: float, omega: float) -> float:
    """Dwell at ``J12 = omega > 0`` giving ground states the phase ``e^{-i eta}``.

    The ``-omega`` level evolves as ``e^{+i omega t}``, so ``eta = -omega t``
    modulo ``2 pi``; the shortest non-negative time is returned.
    """
    if omega <= 0:
        raise ContractError("omega must be positive")
    return float(((-eta) % (2 * np.pi)) / omega)


def dwell_phase_matrix(t: float, omega: float = 1.0, phi: float = 0.0, sector: str = "odd") -> np.ndarray:
    """Dwell propagator projected on a sector basis (rows are images)."""
    space = build_fock_space(3)
    E = table_states(eigenstate_table(space, phi), SECTOR_BASES[sector])
    H = build_hamiltonian(space, CouplingSet(((1, 2, omega),)))
    return (E.conj().T @ propagator(H, t) @ E).T


def gate_by_evolution(
    eta: float, phi: float, omega: float = 1.0, sector: str = "odd", kind: str = "substitution"
) -> np.ndarray:
    """State-level exchange, dwell and reverse exchange, projected on a sector.

    ``kind`` picks the exchange representation ("substitution" or
    "exponential"); both give the same sector matrix.  Rows are images, as in
    :func:`vortexqc.braiding.composite_gate`.
    """
    space = build_fock_space(3)
    single = {"substitution": braid_substitution, "exponential": braid_unitary}[kind]
    forward = single(space, 3, 1, CCW)
    backward = single(space, 3, 1, CW)
    E = table_states(eigenstate_table(space, phi), SECTOR_BASES[sector])
    H = build_hamiltonian(space, CouplingSet(((1, 2, omega),)))
    total = backward @ propagator(H, dwell_time(eta, omega)) @ forward
    return (E.conj().T @ total @ E).T
