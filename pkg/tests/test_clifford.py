import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vortexqc.clifford import (
    FockSpace,
    anticommutator,
    build_fock_space,
    commutator,
    fidelity,
    is_hermitian,
    is_unitary,
    max_abs,
    normalize,
    parity_operator,
)
from vortexqc.errors import ContractError, DimensionError, SizeError


def test_single_mode_majorana_is_bit_flip():
    sp = build_fock_space(1)
    assert np.array_equal(sp.gamma(1), np.array([[0, 1], [1, 0]]))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_dimension_and_orthonormal_basis(n):
    sp = build_fock_space(n)
    assert sp.dim == 2**n
    basis = np.column_stack([sp.basis_state(sp.occupations(k)) for k in range(sp.dim)])
    assert np.allclose(basis, np.eye(sp.dim))


@pytest.mark.parametrize("n", [0, 13, -1, 2.5])
def test_size_out_of_range(n):
    with pytest.raises(SizeError):
        FockSpace(n)


def test_index_mode_one_most_significant():
    sp = build_fock_space(3)
    assert sp.index((1, 0, 0)) == 4
    assert sp.index((0, 0, 1)) == 1
    assert sp.occupations(6) == (1, 1, 0)


@pytest.mark.parametrize("n", [3, 4])
def test_majorana_anticommutation(n):
    sp = build_fock_space(n)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            expected = 2 * (i == j) * sp.identity
            assert max_abs(anticommutator(sp.gamma(i), sp.gamma(j)) - expected) < 1e-12


@pytest.mark.parametrize("n", [3, 4])
def test_mode_operator_relations(n):
    sp = build_fock_space(n)
    for i in range(1, n + 1):
        assert np.count_nonzero(sp.c(i) @ sp.c(i)) == 0
        for j in range(1, n + 1):
            assert max_abs(anticommutator(sp.c(i), sp.cdag(j)) - (i == j) * sp.identity) < 1e-12


def test_majoranas_real_hermitian_unitary():
    sp = build_fock_space(4)
    for g in sp.majoranas:
        assert np.all(g.imag == 0)
        assert is_hermitian(g) and is_unitary(g)


def test_operators_are_read_only():
    sp = build_fock_space(3)
    with pytest.raises(ValueError):
        sp.gamma(1)[0, 0] = 5


def test_gamma12_on_vacuum():
    sp = build_fock_space(3)
    out = sp.gamma(1) @ sp.gamma(2) @ sp.vacuum()
    # with this sign convention gamma_1 gamma_2 |000) = +|110)
    assert np.allclose(out, sp.basis_state("110"))
    # consistent with alpha alpha^dagger |000) = (|000) - i|110))/2
    a = 0.5 * (sp.gamma(1) + 1j * sp.gamma(2))
    assert np.allclose(a @ a.conj().T @ sp.vacuum(), 0.5 * (sp.vacuum() - 1j * sp.basis_state("110")))


def test_mode_index_validation():
    sp = build_fock_space(3)
    with pytest.raises(ContractError):
        sp.gamma(4)
    with pytest.raises(ContractError):
        sp.index((1, 0))


def test_parity_small_cases():
    assert np.allclose(parity_operator(build_fock_space(1)), np.diag([1, -1]))
    sp = build_fock_space(3)
    v = sp.basis_state("110")
    assert np.allclose(parity_operator(sp) @ v, v)


def test_parity_anticommutes_with_gamma_commutes_with_pairs():
    sp = build_fock_space(4)
    P = parity_operator(sp)
    for i in range(1, 5):
        assert max_abs(anticommutator(P, sp.gamma(i))) < 1e-12
        for j in range(1, 5):
            assert max_abs(commutator(P, sp.gamma(i) @ sp.gamma(j))) < 1e-12


def test_anticommutator_dimension_mismatch():
    with pytest.raises(DimensionError):
        anticommutator(build_fock_space(2).gamma(1), build_fock_space(3).gamma(1))


def test_fidelity_basics():
    sp = build_fock_space(3)
    assert fidelity(sp.vacuum(), sp.basis_state("100")) == 0
    psi = normalize(np.arange(8) + 1j)
    assert fidelity(psi, psi) == pytest.approx(1.0)
    with pytest.raises(ContractError):
        fidelity(2 * psi, psi)


complex_vectors = st.lists(
    st.tuples(st.floats(-1, 1), st.floats(-1, 1)), min_size=8, max_size=8
).map(lambda xs: np.array([a + 1j * b for a, b in xs])).filter(lambda v: np.linalg.norm(v) > 1e-3)


@settings(max_examples=50, deadline=None)
@given(complex_vectors, st.floats(-10, 10))
def test_fidelity_global_phase_invariant(v, chi):
    psi = normalize(v)
    assert fidelity(psi, np.exp(1j * chi) * psi) == pytest.approx(1.0, abs=1e-12)
