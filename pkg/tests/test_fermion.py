"""Fermionic operator construction against the occupation-basis sign rule."""

import numpy as np
import pytest

from spinsmith.fermion import (
    FermionHamiltonian,
    IntegralTable,
    build_fermion_hamiltonian,
    ladder_matrix,
    number_operator,
    occupation_matrix,
    parity_operator,
    parse_integral_text,
)


def random_table(n, rng):
    h = rng.uniform(-1, 1, size=(n, n))
    h = 0.5 * (h + h.T)
    g = rng.uniform(-1, 1, size=(n, n, n, n))
    g = 0.5 * (g + g.transpose(3, 2, 1, 0))
    return IntegralTable(n, h, g)


def test_single_orbital_number_term():
    t = IntegralTable(1, np.array([[1.0]]), np.zeros((1, 1, 1, 1)))
    ham = build_fermion_hamiltonian(t)
    assert ham.monomials == ((1.0, ((0, True), (0, False))),)


def test_two_body_half_factor():
    g = np.zeros((2, 2, 2, 2))
    g[0, 1, 1, 0] = 2.0
    g[0, 1, 1, 0] = 2.0  # self-conjugate under (i,j,k,l)->(l,k,j,i)
    t = IntegralTable(2, np.zeros((2, 2)), g)
    ham = build_fermion_hamiltonian(t)
    assert ham.monomials == (
        (1.0, ((0, True), (1, True), (1, False), (0, False))),
    )


def test_asymmetric_tables_rejected_with_indices():
    h = np.zeros((2, 2))
    h[0, 1] = 0.5
    with pytest.raises(ValueError, match=r"h\[0\]\[1\]"):
        IntegralTable(2, h, np.zeros((2, 2, 2, 2)))
    g = np.zeros((2, 2, 2, 2))
    g[0, 1, 0, 1] = 0.25
    with pytest.raises(ValueError, match="two-body"):
        IntegralTable(2, np.zeros((2, 2)), g)


def test_creation_on_vacuum():
    a0dag = ladder_matrix(1, 0, creation=True)
    assert a0dag[1, 0] == 1.0  # |0> -> |1>
    assert np.all(a0dag[:, 1] == 0.0)  # a0dag |1> = 0


def test_hopping_sign():
    # a_1^dag a_0 on |01> gives +|10>; all other basis states annihilate.
    ham = FermionHamiltonian(2, ((1.0, ((1, True), (0, False))),))
    mat = occupation_matrix(ham)
    want = np.zeros((4, 4))
    want[2, 1] = 1.0
    np.testing.assert_array_equal(mat, want)


def test_anticommutation_relations_exact():
    n = 5
    ops = {
        (j, dag): ladder_matrix(n, j, dag)
        for j in range(n)
        for dag in (False, True)
    }
    eye = np.eye(1 << n)
    for j in range(n):
        for k in range(n):
            a_j, a_k = ops[(j, False)], ops[(k, False)]
            adj_j, adj_k = ops[(j, True)], ops[(k, True)]
            np.testing.assert_array_equal(a_j @ a_k + a_k @ a_j, 0 * eye)
            np.testing.assert_array_equal(adj_j @ adj_k + adj_k @ adj_j, 0 * eye)
            want = eye if j == k else 0 * eye
            np.testing.assert_array_equal(a_j @ adj_k + adj_k @ a_j, want)


def test_random_tables_give_hermitian_matrices():
    rng = np.random.default_rng(5)
    for _ in range(4):
        table = random_table(4, rng)
        mat = occupation_matrix(build_fermion_hamiltonian(table))
        assert np.abs(mat - mat.T).max() < 1e-12


def test_particle_number_conserved():
    rng = np.random.default_rng(9)
    table = random_table(4, rng)
    ham = occupation_matrix(build_fermion_hamiltonian(table))
    num = occupation_matrix(number_operator(4))
    np.testing.assert_allclose(ham @ num - num @ ham, 0.0, atol=1e-12)


def test_number_operator_spectrum():
    num = occupation_matrix(number_operator(3))
    evals = np.sort(np.linalg.eigvalsh(num))
    np.testing.assert_allclose(evals, [0, 1, 1, 1, 2, 2, 2, 3], atol=1e-12)
    # |11> has eigenvalue 2
    num2 = occupation_matrix(number_operator(2))
    assert num2[3, 3] == 2.0


def test_parity_commutes_with_hamiltonian():
    rng = np.random.default_rng(13)
    table = random_table(3, rng)
    ham = occupation_matrix(build_fermion_hamiltonian(table))
    par = parity_operator(3)
    np.testing.assert_array_equal(ham @ par, par @ ham)


def test_size_guard():
    with pytest.raises(ValueError, match="guard"):
        occupation_matrix(number_operator(15))


def test_integral_parser_roundtrip():
    text = """
# minimal example
norb 2
h 0 0 -1.25
h 1 1 -0.5
g 0 1 1 0 0.674493
"""
    table = parse_integral_text(text)
    assert table.n_orbitals == 2
    assert table.h[0, 0] == -1.25
    assert table.g[0, 1, 1, 0] == 0.674493


def test_integral_parser_errors():
    with pytest.raises(ValueError, match="norb"):
        parse_integral_text("h 0 0 1.0\n")
    with pytest.raises(ValueError, match="line 2"):
        parse_integral_text("norb 2\nh 0 5 1.0\n")
    # symmetry violations surface through IntegralTable validation
    with pytest.raises(ValueError, match=r"h\[0\]\[1\]"):
        parse_integral_text("norb 2\nh 0 1 0.5\n")
