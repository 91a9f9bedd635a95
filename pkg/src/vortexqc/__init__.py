"""Exact simulation of qubits stored in Majorana modes bound to vortices.

Submodules:

* :mod:`vortexqc.clifford` -- Fock space, mode and Majorana operators.
* :mod:`vortexqc.hamiltonian` -- coupling Hamiltonians, quasiparticles, eigenstates.
* :mod:`vortexqc.braiding` -- exchanges, the continuous gate family ``M(eta, phi)``.
* :mod:`vortexqc.dynamics` -- time evolution and the Rabi drive.
* :mod:`vortexqc.twoqubit` -- four-Majorana two-qubit system and entangling protocol.
"""
from .braiding import (
    BraidMove,
    BraidWord,
    MGate,
    braid_substitution,
    braid_unitary,
    composite_gate,
    decompose_su2,
    dynamical_phase_matrix,
    gate_fidelity,
    m31_even,
    m31_odd,
    m_gate,
    sequence_matrix,
)
from .clifford import FockSpace, anticommutator, build_fock_space, fidelity, parity_operator
from .dynamics import (
    DriveTerm,
    EvolutionTrace,
    PulseSchedule,
    evolve_constant,
    evolve_schedule,
    rabi_transition_check,
)
from .errors import (
    ConsistencyError,
    ContractError,
    DimensionError,
    LeakageError,
    ProtocolFailure,
    ResourceError,
    SizeError,
)
from .hamiltonian import (
    CouplingSet,
    build_hamiltonian,
    couplings_from_angles,
    eigenstate_table,
    phi_from_couplings,
    quasiparticle_ops,
    spectrum,
)
from .twoqubit import (
    TwoQubitSystem,
    apply_logical_gate,
    beat_oscillation_probe,
    build_two_qubit,
    entangling_protocol,
    ivanov_braid,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
