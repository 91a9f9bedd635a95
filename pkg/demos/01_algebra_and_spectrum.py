"""Three vortices, three Majoranas: operators, spectrum and the zero mode.

Run:  python demos/01_algebra_and_spectrum.py
"""
import numpy as np

from vortexqc.clifford import anticommutator, build_fock_space, max_abs
from vortexqc.hamiltonian import (
    build_hamiltonian,
    couplings_from_angles,
    eigenstate_table,
    quasiparticle_ops,
    spectrum,
)

np.set_printoptions(precision=3, suppress=True)

sp = build_fock_space(3)
print("gamma_1 on three modes (real, Hermitian, squares to 1):")
print(sp.gamma(1).real)

worst = max(
    max_abs(anticommutator(sp.gamma(i), sp.gamma(j)) - 2 * (i == j) * sp.identity)
    for i in range(1, 4)
    for j in range(1, 4)
)
print(f"\nworst anticommutator residual: {worst:.1e}")

# A generic coupling vector of length J = 1.5 has two four-fold levels +-J.
J, theta, phi = 1.5, 0.8, 2.1
H = build_hamiltonian(sp, couplings_from_angles(J, theta, phi))
s = spectrum(H)
print("\nlevels (energy, degeneracy):", [(round(e, 12), d) for e, d in s.levels])

ops = quasiparticle_ops(sp, theta, phi)
print(f"|H - J(2 a^+ a - 1)|  = {max_abs(H - J * (2 * ops.alpha_dagger @ ops.alpha - sp.identity)):.1e}")
print(f"|[H, beta]|           = {max_abs(H @ ops.beta - ops.beta @ H):.1e}   (beta is the zero mode)")

# The eight eigenstates when J12 dominates, written in the occupation basis.
print("\neigenstates at phi = 0 (amplitudes on |n1 n2 n3)):")
for label, state in eigenstate_table(sp, 0.0).items():
    terms = [
        f"{a.real:+.3f}{a.imag:+.3f}i |{''.join(map(str, sp.occupations(k)))})"
        for k, a in enumerate(state.vector)
        if abs(a) > 1e-12
    ]
    print(f"  {label:7s} E={state.energy:+.0f}w  P={state.parity:+d}  " + "  ".join(terms))
