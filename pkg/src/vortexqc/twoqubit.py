"""Two qubits from four Majoranas and the exchange-coupling entangling protocol.

Modes 1, 2 hold ``gamma_1, gamma_2`` of qubit 1 and modes 3, 4 hold
``gamma_1', gamma_2'`` of qubit 2.  Each qubit has ``alpha = (gamma_1 + i
gamma_2)/2``; its logical levels are ``|0> = alpha|0)`` and ``|1> =
alpha^dagger alpha|0)``.  The spectator Majoranas of the three-vortex qubits
are left out, so the two logical levels of a qubit differ in fermion parity.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.signal import find_peaks

from .braiding import CCW, MGate, braid_substitution
from .clifford import FockSpace, build_fock_space, check_normalized, max_abs, parity_operator
from .dynamics import EvolutionTrace, evolve_times, propagator
from .errors import ContractError, LeakageError, ProtocolFailure
from .hamiltonian import CouplingSet, build_hamiltonian

GAMMA_1, GAMMA_2, GAMMA_1P, GAMMA_2P = 1, 2, 3, 4
STRONG_THRESHOLD = 20.0
WEAK_THRESHOLD = 20.0
LEAKAGE_TOL = 1e-9

SQRT_HALF = 1 / np.sqrt(2)


@dataclass(frozen=True)
class ConditionReport:
    ratio_strong: float  # min(|J12|, |J1'2'|) / |J11'|
    ratio_weak: float  # |J11'| / |J12 - J1'2'|
    strong_threshold: float = STRONG_THRESHOLD
    weak_threshold: float = WEAK_THRESHOLD

    @property
    def strong_ok(self) -> bool:
        return self.ratio_strong >= self.strong_threshold

    @property
    def weak_ok(self) -> bool:
        return self.ratio_weak >= self.weak_threshold

    @property
    def satisfied(self) -> bool:
        return self.strong_ok and self.weak_ok


@dataclass(frozen=True)
class TwoQubitSystem:
    J12: float
    J1p2p: float
    J11p: float

    def __post_init__(self):
        if not all(np.isfinite([self.J12, self.J1p2p, self.J11p])):
            raise ContractError("couplings must be finite")

    @property
    def space(self) -> FockSpace:
        return build_fock_space(4)

    @property
    def couplings(self) -> CouplingSet:
        return CouplingSet(
            ((GAMMA_1, GAMMA_2, self.J12), (GAMMA_1P, GAMMA_2P, self.J1p2p), (GAMMA_1, GAMMA_1P, self.J11p))
        )

    @cached_property
    def hamiltonian(self) -> np.ndarray:
        return build_hamiltonian(self.space, self.couplings)

    @cached_property
    def alpha(self) -> np.ndarray:
        sp = self.space
        return 0.5 * (sp.gamma(GAMMA_1) + 1j * sp.gamma(GAMMA_2))

    @cached_property
    def alpha_p(self) -> np.ndarray:
        sp = self.space
        return 0.5 * (sp.gamma(GAMMA_1P) + 1j * sp.gamma(GAMMA_2P))

    def conditions(self, strong: float = STRONG_THRESHOLD, weak: float = WEAK_THRESHOLD) -> ConditionReport:
        j11 = abs(self.J11p)
        diff = abs(self.J12 - self.J1p2p)
        ratio_strong = min(abs(self.J12), abs(self.J1p2p)) / j11 if j11 else np.inf
        ratio_weak = j11 / diff if diff else np.inf
        return ConditionReport(float(ratio_strong), float(ratio_weak), strong, weak)

    def with_couplings(self, J12=None, J1p2p=None, J11p=None) -> "TwoQubitSystem":
        return TwoQubitSystem(
            self.J12 if J12 is None else J12,
            self.J1p2p if J1p2p is None else J1p2p,
            self.J11p if J11p is None else J11p,
        )


def build_two_qubit(J12: float, J1p2p: float, J11p: float) -> TwoQubitSystem:
    return TwoQubitSystem(float(J12), float(J1p2p), float(J11p))


def _qubit_ops(system: TwoQubitSystem, qubit: int) -> np.ndarray:
    if qubit not in (1, 2):
        raise ContractError(f"qubit must be 1 or 2, got {qubit}")
    return system.alpha if qubit == 1 else system.alpha_p


def level_operator(system: TwoQubitSystem, qubit: int, level: int) -> np.ndarray:
    a = _qubit_ops(system, qubit)
    return a if level == 0 else a.conj().T @ a


def logical_state(system: TwoQubitSystem, bits: str) -> np.ndarray:
    """Normalized ``O_1 O_2 |0)`` for ``bits`` in {"00", "01", "10", "11"}."""
    op = level_operator(system, 1, int(bits[0])) @ level_operator(system, 2, int(bits[1]))
    v = op @ system.space.vacuum()
    return v / np.linalg.norm(v)


def bell_phi_plus(system: TwoQubitSystem) -> np.ndarray:
    return SQRT_HALF * (logical_state(system, "00") + logical_state(system, "11"))


def bell_phi_minus(system: TwoQubitSystem) -> np.ndarray:
    """``(-|00> + |11>)/sqrt(2)``, the state the protocol produces."""
    return SQRT_HALF * (-logical_state(system, "00") + logical_state(system, "11"))


def exchange_superposition(system: TwoQubitSystem) -> np.ndarray:
    """``(|01> + |10>)/sqrt(2)``, reached midway through the coupled dwell."""
    return SQRT_HALF * (logical_state(system, "01") + logical_state(system, "10"))


def _local_levels() -> np.ndarray:
    """Logical levels of one qubit in its own two-mode factor (columns)."""
    sp = build_fock_space(2)
    a = 0.5 * (sp.gamma(1) + 1j * sp.gamma(2))
    vac = sp.vacuum()
    cols = [a @ vac, a.conj().T @ a @ vac]
    return np.column_stack([c / np.linalg.norm(c) for c in cols])


def _embed(local: np.ndarray, qubit: int) -> np.ndarray:
    eye = np.eye(4)
    return np.kron(local, eye) if qubit == 1 else np.kron(eye, local)


def apply_logical_gate(
    system: TwoQubitSystem, qubit: int, gate: MGate | np.ndarray, psi: np.ndarray, tol: float = LEAKAGE_TOL
) -> np.ndarray:
    """Act with a 2x2 gate on one qubit's logical levels (columns are images).

    States ``O_1 O_2|0)`` factor as ``(O_1|00)) x (O_2|00))`` in the
    occupation basis, so the gate acts on the addressed factor only.
    """
    _qubit_ops(system, qubit)
    G = gate.matrix if isinstance(gate, MGate) else np.asarray(gate, dtype=complex)
    if G.shape != (2, 2) or max_abs(G.conj().T @ G - np.eye(2)) > 1e-10:
        raise ContractError("gate must be a 2x2 unitary")
    check_normalized(psi)
    L = _local_levels()
    outside = np.eye(4) - L @ L.conj().T
    leak = float(np.linalg.norm(_embed(outside, qubit) @ psi))
    if leak > tol:
        raise LeakageError(f"state has weight {leak:.2e} outside qubit {qubit}'s logical levels")
    return _embed(L @ G @ L.conj().T + outside, qubit) @ psi


def ivanov_braid(psi: np.ndarray, system: TwoQubitSystem | None = None, orientation: str = CCW) -> np.ndarray:
    """Exchange ``gamma_1`` and ``gamma_1'`` (counterclockwise by default)."""
    space = build_fock_space(4)
    check_normalized(psi)
    return braid_substitution(space, GAMMA_1, GAMMA_1P, orientation) @ psi


def ivanov_expansion(system: TwoQubitSystem) -> np.ndarray:
    """Normalized ``(aa' + a^d a'^d - a a^d a' a'^d + a^d a a'^d a')|0) / 2``."""
    a, ap = system.alpha, system.alpha_p
    ad, apd = a.conj().T, ap.conj().T
    op = 0.5 * (a @ ap + ad @ apd - a @ ad @ ap @ apd + ad @ a @ apd @ ap)
    v = op @ system.space.vacuum()
    return v / np.linalg.norm(v)


@dataclass
class BeatScan:
    times: np.ndarray
    states: np.ndarray  # rows
    time_scale: float | None  # 2 pi / smallest populated gap


def beat_scan(
    system: TwoQubitSystem, psi: np.ndarray, window_periods: int = 10, samples_per_period: int = 512
) -> BeatScan:
    """Evolve ``psi`` under H on a grid covering ``window_periods`` of its slowest beat.

    The slowest beat is ``2 pi / g`` with ``g`` the smallest gap between
    eigenvalues carrying weight above 1e-4 in ``psi``.  Without such a gap
    the state is stationary and a single short window is returned.
    """
    H = system.hamiltonian
    w, v = np.linalg.eigh(H)
    weight = np.abs(v.conj().T @ psi) ** 2
    levels = np.sort(w[weight > 1e-4])
    gaps = np.diff(levels)
    gaps = gaps[gaps > 1e-9]
    if gaps.size:
        scale = 2 * np.pi / float(gaps.min())
    else:
        spread = float(np.max(np.abs(w))) or 1.0
        scale = None
    window = window_periods * (scale if scale is not None else 2 * np.pi / spread)
    times = np.linspace(0.0, window, window_periods * samples_per_period + 1)
    return BeatScan(times, evolve_times(H, times, psi), scale)


def _first_peak(times: np.ndarray, values: np.ndarray) -> float | None:
    peaks, _ = find_peaks(values, prominence=1e-3)
    return float(times[peaks[0]]) if peaks.size else None


@dataclass
class ProtocolResult:
    final_state: np.ndarray
    fidelity_phi_minus: float
    fidelity_phi_plus: float
    fidelity_initial: float
    conditions: ConditionReport
    dwell_time: float
    beat_period: float | None
    beat_detected: bool
    max_exchange: float
    step3_fidelity: float
    step3_parity_drift: float
    norm_drift: float
    states: dict = field(default_factory=dict)

    @property
    def fidelity(self) -> float:
        return self.fidelity_phi_minus


def entangling_protocol(
    J12: float,
    J1p2p: float,
    J11p: float,
    strict: bool = False,
    window_periods: int = 10,
    strong: float = STRONG_THRESHOLD,
    weak: float = WEAK_THRESHOLD,
) -> ProtocolResult:
    """Prepare ``|00>``, flip qubit 2, dwell with ``J11'`` on, flip qubit 2 again.

    The flips are ``M(pi/2, pi/2)``.  The dwell time is the first time within
    ``window_periods`` beat periods at which the state best matches
    ``(|01> + |10>)/sqrt(2)``.  If the ``|01> <-> |10>`` exchange never reaches
    half population the beat counts as undetected: ``strict`` then raises
    :class:`ProtocolFailure`, otherwise the run completes with the best dwell
    found (zero when nothing moves).
    """
    system = build_two_qubit(J12, J1p2p, J11p)
    report = system.conditions(strong, weak)
    flip = MGate(np.pi / 2, np.pi / 2)
    P = parity_operator(system.space)

    psi1 = logical_state(system, "00")
    psi2 = apply_logical_gate(system, 2, flip, psi1)

    scan = beat_scan(system, psi2, window_periods)
    s10 = logical_state(system, "10")
    exchange = np.abs(scan.states @ s10.conj()) ** 2
    max_exchange = float(exchange.max())
    beat_detected = scan.time_scale is not None and max_exchange >= 0.5
    first = _first_peak(scan.times, exchange)
    beat_period = 2 * first if (beat_detected and first is not None) else None
    if strict and not beat_detected:
        raise ProtocolFailure(
            f"no |01> <-> |10> exchange within {window_periods} beat periods "
            f"(max transfer {max_exchange:.3g})"
        )

    target3 = exchange_superposition(system)
    f3 = np.abs(scan.states @ target3.conj()) ** 2
    k = int(np.flatnonzero(f3 >= f3.max() - 1e-3)[0])
    # climb to the top of that first peak before refining between grid points
    while k + 1 < f3.size and f3[k + 1] > f3[k]:
        k += 1
    if np.ptp(f3) < 1e-9:  # nothing moves: the dwell is a no-op
        k = 0
    t_dwell = float(scan.times[k])
    if k > 0:
        dt = scan.times[1] - scan.times[0]
        H = system.hamiltonian

        def loss(t):
            return -abs(np.vdot(target3, propagator(H, t) @ psi2)) ** 2

        opt = minimize_scalar(loss, bounds=(t_dwell - dt, t_dwell + dt), method="bounded",
                              options={"xatol": 1e-10})
        t_dwell = float(opt.x)
    psi3 = propagator(system.hamiltonian, t_dwell) @ psi2
    parities = np.real(np.einsum("ti,i,ti->t", scan.states.conj(), np.diag(P), scan.states))
    p0 = float(np.real(np.vdot(psi2, P @ psi2)))
    drift = max(float(np.max(np.abs(parities - p0))), abs(float(np.real(np.vdot(psi3, P @ psi3))) - p0))

    psi4 = apply_logical_gate(system, 2, flip, psi3, tol=1.0)
    norm_drift = abs(float(np.linalg.norm(psi4)) - 1.0)
    psi4 = psi4 / np.linalg.norm(psi4)
    return ProtocolResult(
        final_state=psi4,
        fidelity_phi_minus=float(abs(np.vdot(bell_phi_minus(system), psi4)) ** 2),
        fidelity_phi_plus=float(abs(np.vdot(bell_phi_plus(system), psi4)) ** 2),
        fidelity_initial=float(abs(np.vdot(psi1, psi4)) ** 2),
        conditions=report,
        dwell_time=t_dwell,
        beat_period=beat_period,
        beat_detected=beat_detected,
        max_exchange=max_exchange,
        step3_fidelity=float(abs(np.vdot(target3, psi3)) ** 2),
        step3_parity_drift=drift,
        norm_drift=norm_drift,
        states={"prepared": psi1, "flipped": psi2, "dwelled": psi3, "final": psi4},
    )


def beat_oscillation_probe(
    system: TwoQubitSystem, duration: float | None = None, n_samples: int = 4001
) -> EvolutionTrace:
    """Populations of ``|01>`` and ``|10>`` starting from ``|01>``.

    ``extra`` carries the oscillation period (twice the first peak time of
    the ``|10>`` population, None if no peak) and the maximum transfer.
    """
    psi = logical_state(system, "01")
    if duration is None:
        scan = beat_scan(system, psi, window_periods=2)
        duration = float(scan.times[-1])
    times = np.linspace(0.0, duration, n_samples)
    states = evolve_times(system.hamiltonian, times, psi)
    labels = ("01", "10")
    basis = np.column_stack([logical_state(system, b) for b in labels])
    pops = np.abs(states @ basis.conj()) ** 2
    P = np.diag(parity_operator(system.space))
    parity = np.real(np.einsum("ti,i,ti->t", states.conj(), P, states))
    norm = np.linalg.norm(states, axis=1)
    first = _first_peak(times, pops[:, 1])
    max_transfer = float(pops[:, 1].max())
    period = 2 * first if (first is not None and max_transfer > 1e-6) else None
    return EvolutionTrace(
        times, labels, pops, parity, norm, states[-1].copy(),
        extra={"period": period, "max_transfer": max_transfer},
    )


def stationarity(system: TwoQubitSystem, duration: float, bits: str = "00") -> float:
    """Fidelity of a logical state with itself after evolving for ``duration``."""
    psi = logical_state(system, bits)
    return float(abs(np.vdot(psi, propagator(system.hamiltonian, duration) @ psi)) ** 2)


def post_protocol_drift(
    result: ProtocolResult,
    separated: tuple[float, float, float] = (0.0, 0.0, 0.0),
    duration: float | None = None,
) -> float:
    """Change of the target fidelity while the qubits sit in the separated regime.

    ``separated`` are the couplings ``(J12, J1'2', J11')`` after the
    protocol; ``duration`` defaults to one beat period of the run.
    """
    system = build_two_qubit(*separated)
    t = duration if duration is not None else (result.beat_period or 0.0)
    psi = propagator(system.hamiltonian, t) @ result.final_state
    after = float(abs(np.vdot(bell_phi_minus(system), psi)) ** 2)
    return abs(after - result.fidelity_phi_minus)


def fidelity_sweep(J11p_values, J12: float = 1.0, J1p2p: float = 1.0) -> list[ProtocolResult]:
    return [entangling_protocol(J12, J1p2p, j) for j in J11p_values]
