"""Splitting, YY elimination, and commuting factorization."""

from pathlib import Path

import numpy as np
import pytest

from spinsmith.pauli import PauliSum, PauliTerm, equal_within, read_pauli_file
from spinsmith.shaping import (
    DEFAULT_ALLOWED,
    FactoredTerm,
    eliminate_yy,
    factor_commuting,
    interaction_class,
    parse_allowed,
    shape_hamiltonian,
    split_two_local,
    validate_factored,
)

DATA = Path(__file__).resolve().parents[1] / "src" / "spinsmith" / "data"

F = dict(
    f0=-0.812610, f1=0.171201, f2=0.168623, f3=-0.222780,
    f4=0.120546, f5=0.174349, f6=0.0453218, f7=0.165868,
)


@pytest.fixture
def h2():
    return read_pauli_file(DATA / "h2_bravyi_kitaev.pauli")


def label_sum(n, *pairs):
    return PauliSum.from_terms(
        [(c, PauliTerm.from_label(label, n)) for c, label in pairs], n
    )


def test_parse_allowed():
    assert parse_allowed("zz,xx,xz") == DEFAULT_ALLOWED
    assert parse_allowed("zx") == frozenset({"XZ"})
    with pytest.raises(ValueError):
        parse_allowed("qq")


def test_interaction_class():
    assert interaction_class(PauliTerm.from_label("Z0 Z1")) == "ZZ"
    assert interaction_class(PauliTerm.from_label("X0 Z1")) == "XZ"
    assert interaction_class(PauliTerm.from_label("Z0 X1")) == "XZ"
    assert interaction_class(PauliTerm.from_label("Y0 Y2")) == "YY"
    assert interaction_class(PauliTerm.from_label("Z0")) is None


def test_split_two_local_h2(h2):
    realizable, groups = split_two_local(h2)
    want = label_sum(
        4,
        (F["f0"], ""),
        (F["f1"], "Z0"),
        (F["f2"], "Z1"),
        (F["f3"], "Z2"),
        (F["f1"], "Z0 Z1"),
        (F["f4"], "Z0 Z2"),
        (F["f5"], "Z1 Z3"),
    )
    assert equal_within(realizable, want, 1e-14)
    assert len(groups) == 3
    total = realizable
    for g in groups:
        total = total + g
    assert equal_within(total, h2, 1e-14)


def test_split_passthrough_cases():
    two_local = label_sum(2, (0.5, "Z0 Z1"), (0.25, "X0"))
    realizable, groups = split_two_local(two_local)
    assert equal_within(realizable, two_local, 1e-15)
    assert groups == []

    lone = label_sum(4, (1.0, "X0 X1 X2 X3"))
    realizable, groups = split_two_local(lone)
    assert realizable.num_terms() == 0
    assert len(groups) == 1 and equal_within(groups[0], lone, 1e-15)


def test_disallowed_two_local_goes_to_groups():
    yy = label_sum(2, (0.3, "Y0 Y1"))
    realizable, groups = split_two_local(yy)
    assert realizable.num_terms() == 0
    assert len(groups) == 1
    ft = factor_commuting(groups[0])
    assert ft.k == 3  # (-c XX)(Z)(Z)
    assert all(
        term.y_count() == 0 for f in ft.factors for term, _ in f.terms()
    )


def test_eliminate_yy_examples():
    t = PauliTerm.from_label("Z0 Y1 Y2")
    factors = eliminate_yy(t, 1.0)
    labels = [(c, str(term)) for c, term in factors]
    assert labels == [(1.0, "Z0"), (-1.0, "X1 X2"), (1.0, "Z1 Z2")]

    plain = PauliTerm.from_label("Z0 X1")
    assert eliminate_yy(plain, 0.7) == [(0.7, plain)]

    quad = PauliTerm.from_label("Y0 Y1 Y2 Y3")
    factors = eliminate_yy(quad, 1.0)
    assert [(c, str(t)) for c, t in factors] == [
        (-1.0, "X0 X1"),
        (1.0, "Z0 Z1"),
        (-1.0, "X2 X3"),
        (1.0, "Z2 Z3"),
    ]
    # dense product check (16x16)
    prod = np.eye(16, dtype=complex)
    for c, term in factors:
        prod = prod @ (c * term.dense())
    np.testing.assert_allclose(prod, quad.dense(), atol=1e-12)


def test_eliminate_yy_odd_count_rejected():
    with pytest.raises(ValueError, match="odd Y count"):
        eliminate_yy(PauliTerm.from_label("X0 Y1 Z2"), 1.0)


def test_eliminate_yy_output_never_contains_y():
    rng = np.random.default_rng(17)
    letters = np.array(list("IXYZ"))
    for _ in range(40):
        lab = rng.choice(letters, size=5)
        ys = (lab == "Y").sum()
        if ys % 2:
            continue
        ops = {q: l for q, l in enumerate(lab) if l != "I"}
        if not ops:
            continue
        term = PauliTerm.from_ops(5, ops)
        for c, factor in eliminate_yy(term, 0.5):
            assert factor.y_count() == 0


def test_h2_factoring_matches_worked_example(h2):
    _, groups = split_two_local(h2)
    factored = [factor_commuting(g, 3) for g in groups]
    assert [ft.k for ft in factored] == [3, 3, 3]

    expected = [
        # (f7 Z0)(Z2)(Z1 + Z1 Z3)
        [
            label_sum(4, (F["f7"], "Z0")),
            label_sum(4, (1.0, "Z2")),
            label_sum(4, (1.0, "Z1"), (1.0, "Z1 Z3")),
        ],
        # (f4 Z0 + f3 Z1)(Z2)(Z3)
        [
            label_sum(4, (F["f4"], "Z0"), (F["f3"], "Z1")),
            label_sum(4, (1.0, "Z2")),
            label_sum(4, (1.0, "Z3")),
        ],
        # (f6 X0 X2)(1 - Z0 Z2)(Z1 + Z1 Z3)
        [
            label_sum(4, (F["f6"], "X0 X2")),
            label_sum(4, (1.0, ""), (-1.0, "Z0 Z2")),
            label_sum(4, (1.0, "Z1"), (1.0, "Z1 Z3")),
        ],
    ]
    for ft, want in zip(factored, expected):
        for got, exp in zip(ft.factors, want):
            assert equal_within(got, exp, 1e-12)


def test_factored_terms_validate(h2):
    _, factored = shape_hamiltonian(h2)
    for ft in factored:
        report = validate_factored(ft)
        assert report.commuting
        assert report.residual <= 1e-12
        assert report.dense_residual <= 1e-12


def test_validate_flags_noncommuting_factors():
    bad = FactoredTerm(
        (
            PauliSum.from_label(1.0, "Z0", 2),
            PauliSum.from_label(1.0, "X0", 2),
        ),
        PauliSum.from_label(1.0, "Z0", 2),
    )
    report = validate_factored(bad)
    assert not report.commuting
    assert (0, 1) in report.commutation_violations
    assert report.residual > 0


def test_lone_term_per_letter_factoring():
    g = PauliSum.from_label(2.5, "X1 Y2 Z3", 4)
    ft = factor_commuting(g)
    got = [
        [(c, str(t)) for t, c in f.terms()]
        for f in ft.factors
    ]
    assert got == [
        [(2.5, "X1")],
        [(1.0, "Y2")],
        [(1.0, "Z3")],
    ]


def test_end_to_end_reconstruction(h2):
    realizable, factored = shape_hamiltonian(h2)
    total = realizable
    for ft in factored:
        total = total + ft.product()
    assert equal_within(total, h2, 1e-12)


def test_chunking_respects_target_k():
    g = PauliSum.from_label(1.0, "Z0 Z1 Z2 Z3 Z4", 5)
    ft = factor_commuting(g, target_k=3)
    assert ft.k == 3
    assert equal_within(ft.product(), g, 1e-12)
