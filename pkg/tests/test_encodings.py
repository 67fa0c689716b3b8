"""Jordan-Wigner and Bravyi-Kitaev lowering, validated against the
occupation-basis oracle and the published H2 coefficients."""

from pathlib import Path

import numpy as np
import pytest

from spinsmith.encodings import (
    EncodingScheme,
    encode_ladder,
    index_sets,
    max_locality,
    transform,
)
from spinsmith.fermion import (
    IntegralTable,
    build_fermion_hamiltonian,
    ladder_matrix,
    occupation_matrix,
    read_integral_file,
)
from spinsmith.pauli import PauliSum, PauliTerm

DATA = Path(__file__).resolve().parents[1] / "src" / "spinsmith" / "data"

JW = EncodingScheme.JORDAN_WIGNER
BK = EncodingScheme.BRAVYI_KITAEV


def random_table(n, rng):
    h = rng.uniform(-1, 1, size=(n, n))
    h = 0.5 * (h + h.T)
    g = rng.uniform(-1, 1, size=(n, n, n, n))
    g = 0.5 * (g + g.transpose(3, 2, 1, 0))
    return IntegralTable(n, h, g)


def test_index_sets_examples():
    s0 = index_sets(0, 4)
    assert (s0.update, s0.parity, s0.flip) == (frozenset({1, 3}), frozenset(), frozenset())
    s3 = index_sets(3, 4)
    assert s3.update == frozenset()
    assert s3.parity == frozenset({1, 2})
    assert s3.flip == frozenset({1, 2})
    assert s3.remainder == frozenset()
    s = index_sets(0, 1)
    assert s.update == s.parity == s.flip == frozenset()
    with pytest.raises(ValueError):
        index_sets(4, 4)


def test_index_set_invariants():
    import math

    for n in (2, 3, 4, 6, 8, 11, 16):
        bound = math.ceil(math.log2(n))
        for j in range(n):
            s = index_sets(j, n)
            assert len(s.update) <= bound
            assert len(s.parity) <= bound
            assert not (s.update & s.parity)
            assert s.remainder <= s.parity


def test_jw_ladder_examples():
    op = encode_ladder(0, True, JW, 1)
    assert op.coefficient(PauliTerm.from_label("X0")) == 0.5
    assert op.coefficient(PauliTerm.from_label("Y0")) == -0.5j

    op = encode_ladder(2, True, JW, 3)
    assert op.coefficient(PauliTerm.from_label("X2 Z1 Z0")) == 0.5
    assert op.coefficient(PauliTerm.from_label("Y2 Z1 Z0")) == -0.5j
    assert op.num_terms() == 2


def test_bk_ladder_example():
    op = encode_ladder(0, True, BK, 4)
    assert op.coefficient(PauliTerm.from_label("X3 X1 X0")) == 0.5
    assert op.coefficient(PauliTerm.from_label("X3 X1 Y0")) == -0.5j
    assert op.num_terms() == 2


@pytest.mark.parametrize("scheme", [JW, BK])
def test_encoded_anticommutation(scheme):
    for n in range(1, 7):
        ops = {}
        for j in range(n):
            for dag in (False, True):
                ops[(j, dag)] = encode_ladder(j, dag, scheme, n).dense()
        eye = np.eye(1 << n)
        for j in range(n):
            for k in range(n):
                a_j, a_k = ops[(j, False)], ops[(k, False)]
                c_j, c_k = ops[(j, True)], ops[(k, True)]
                assert np.allclose(a_j @ a_k + a_k @ a_j, 0.0, atol=1e-14)
                assert np.allclose(c_j @ c_k + c_k @ c_j, 0.0, atol=1e-14)
                want = eye if j == k else 0.0 * eye
                assert np.allclose(a_j @ c_k + c_k @ a_j, want, atol=1e-14)


def test_jw_ladders_equal_occupation_oracle():
    # Under the shared bit conventions JW is the identity embedding, so the
    # matrices agree exactly, not just in spectrum.
    for n in (1, 2, 4, 5):
        for j in range(n):
            for dag in (False, True):
                enc = encode_ladder(j, dag, JW, n).dense()
                np.testing.assert_allclose(
                    enc, ladder_matrix(n, j, dag), atol=1e-15
                )


def test_number_operator_transform():
    from spinsmith.fermion import FermionHamiltonian

    h = FermionHamiltonian(1, ((1.0, ((0, True), (0, False))),))
    p = transform(h, JW)
    assert p.coefficient(PauliTerm.identity(1)) == pytest.approx(0.5)
    assert p.coefficient(PauliTerm.from_label("Z0")) == pytest.approx(-0.5)
    assert p.num_terms() == 2


def test_transform_hermitian_and_even_y():
    rng = np.random.default_rng(21)
    table = random_table(4, rng)
    ham = build_fermion_hamiltonian(table)
    for scheme in (JW, BK):
        p = transform(ham, scheme)
        assert p.is_hermitian()
    bk = transform(ham, BK)
    assert all(term.y_count() % 2 == 0 for term, _ in bk.terms())


def test_jw_bk_isospectral_random_tables():
    rng = np.random.default_rng(33)
    for n in (2, 3, 4, 5):
        for _ in range(5 if n < 5 else 2):
            ham = build_fermion_hamiltonian(random_table(n, rng))
            occ = np.linalg.eigvalsh(occupation_matrix(ham))
            jw = np.linalg.eigvalsh(transform(ham, JW).dense())
            bk = np.linalg.eigvalsh(transform(ham, BK).dense())
            np.testing.assert_allclose(jw, occ, atol=1e-9)
            np.testing.assert_allclose(bk, occ, atol=1e-9)


def test_h2_fixture_reproduces_published_coefficients():
    table = read_integral_file(DATA / "h2_sto3g.int")
    spin_h = transform(build_fermion_hamiltonian(table), BK)
    published = {
        "": -0.812610,
        "Z0": 0.171201,
        "Z1": 0.168623,
        "Z2": -0.222780,
        "Z0 Z1": 0.171201,
        "Z0 Z2": 0.120546,
        "Z1 Z3": 0.174349,
        "X0 Z1 X2": 0.0453218,
        "Y0 Z1 Y2": 0.0453218,
        "Z0 Z1 Z2": 0.165868,
        "Z0 Z2 Z3": 0.120546,
        "Z1 Z2 Z3": -0.222780,
        "X0 Z1 X2 Z3": 0.0453218,
        "Y0 Z1 Y2 Z3": 0.0453218,
        "Z0 Z1 Z2 Z3": 0.165868,
    }
    assert spin_h.num_terms() == 15
    # The published values are independently rounded, so 5e-6 is the level at
    # which any single integral set can reproduce all fifteen at once.
    for label, want in published.items():
        got = spin_h.coefficient(PauliTerm.from_label(label, 4))
        assert got.imag == pytest.approx(0.0, abs=1e-12)
        assert got.real == pytest.approx(want, abs=5e-6), label


def test_max_locality():
    from spinsmith.pauli import read_pauli_file

    h2 = read_pauli_file(DATA / "h2_bravyi_kitaev.pauli")
    assert max_locality(h2) == 4
    half = PauliSum.from_label(0.5, "", 1) - PauliSum.from_label(0.5, "Z0", 1)
    assert max_locality(half) == 1

    from spinsmith.fermion import FermionHamiltonian

    hop = FermionHamiltonian(
        8,
        (
            (1.0, ((7, True), (0, False))),
            (1.0, ((0, True), (7, False))),
        ),
    )
    assert max_locality(transform(hop, JW)) == 8


def test_bk_locality_grows_logarithmically():
    rng = np.random.default_rng(55)
    from spinsmith.fermion import FermionHamiltonian

    jw_loc, bk_loc = {}, {}
    for n in (4, 8, 16):
        h = rng.uniform(-1, 1, size=(n, n))
        h = 0.5 * (h + h.T)
        monos = []
        for i in range(n):
            for j in range(n):
                monos.append((float(h[i, j]), ((i, True), (j, False))))
        ham = FermionHamiltonian(n, tuple(monos))
        jw_loc[n] = max_locality(transform(ham, JW))
        bk_loc[n] = max_locality(transform(ham, BK))
    assert jw_loc[4] <= jw_loc[8] <= jw_loc[16]
    assert jw_loc[16] == 16  # linear-in-n Z strings
    assert bk_loc[16] < jw_loc[16]
    assert bk_loc[16] <= 9  # O(log n) with a small constant
