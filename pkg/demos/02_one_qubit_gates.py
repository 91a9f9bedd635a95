"""Exchange, dwell, exchange back: a continuous family of one-qubit gates.

Exchanging vortices 3 and 1 mixes the degenerate states; dwelling with J12
switched on gives the two levels opposite phases; undoing the exchange
leaves a rotation M(eta, phi) on the qubit.

Run:  python demos/02_one_qubit_gates.py
"""
import numpy as np

from vortexqc.braiding import (
    HADAMARD,
    composite_gate,
    decompose_su2,
    gate_fidelity,
    m31_odd,
    m_gate,
    sequence_matrix,
)
from vortexqc.dynamics import dwell_time, gate_by_evolution

np.set_printoptions(precision=3, suppress=True)

phi = np.pi / 6
print("(3,1) exchange on the odd sector, phi = pi/6:")
print(m31_odd(None, phi))

eta = 0.4
G = composite_gate(eta, phi)
print(f"\ncomposite gate for eta = {eta}: block diagonal, upper block is M(eta, phi)")
print(G)
print("M(eta, phi):")
print(m_gate(eta, phi).matrix)

# The same gate by explicit time evolution: exchange, exp(-iHt), exchange back.
t = dwell_time(eta, omega=1.0)
print(f"\ndwell time at J12 = 1: t = {t:.4f}")
print(f"|evolved - composite| = {np.abs(gate_by_evolution(eta, phi) - G).max():.1e}")

# Two gates from the family make a Hadamard.
product = m_gate(np.pi / 4, -np.pi / 2).matrix @ m_gate(np.pi / 2, 0).matrix
print(f"\nM(pi/4,-pi/2) M(pi/2,0) vs Hadamard: fidelity {gate_fidelity(product, HADAMARD):.15f}")

# Any one-qubit unitary needs at most three.
rng = np.random.default_rng(1)
z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
U, _ = np.linalg.qr(z)
seq = decompose_su2(U)
print("\nrandom target decomposed (application order):")
for e, p in seq:
    print(f"  M(eta={e:+.4f}, phi={p:.4f})")
print(f"reconstruction fidelity: {gate_fidelity(sequence_matrix(seq), U):.15f}")
