"""Fermion-to-qubit encodings: Jordan-Wigner and Bravyi-Kitaev.

Jordan-Wigner stores occupancy locally and parity in Z strings over all lower
qubits, so operator weight grows linearly.  Bravyi-Kitaev stores partial
occupancy sums in a Fenwick-tree layout, so both occupancy updates (X on the
update set) and parity reads (Z on the parity set) touch O(log n) qubits.

The tree is built on n padded up to the next power of two; padding indices can
only ever enter update sets, where they would carry an X letter shared by every
ladder operator, so stripping them changes no products or anticommutators.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .fermion import FermionHamiltonian
from .pauli import PauliSum, PauliTerm


class EncodingScheme(enum.Enum):
    JORDAN_WIGNER = "jw"
    BRAVYI_KITAEV = "bk"

    @classmethod
    def parse(cls, name: str) -> "EncodingScheme":
        key = name.strip().lower()
        for scheme in cls:
            if key in (scheme.value, scheme.name.lower()):
                return scheme
        raise ValueError(f"unknown encoding scheme {name!r} (use 'jw' or 'bk')")


@dataclass(frozen=True)
class IndexSets:
    """Fenwick-tree qubit sets controlling one Bravyi-Kitaev ladder operator."""

    j: int
    update: frozenset[int]
    parity: frozenset[int]
    flip: frozenset[int]

    @property
    def remainder(self) -> frozenset[int]:
        return self.parity - self.flip


def _lowbit(i: int) -> int:
    return i & (-i)


def index_sets(j: int, n: int) -> IndexSets:
    """Update/parity/flip sets for mode j of an n-mode register."""
    if not 0 <= j < n:
        raise ValueError(f"mode {j} out of range for n={n}")
    size = 1
    while size < n:
        size *= 2
    # Classic binary-indexed-tree arithmetic, 1-indexed internally: node m
    # stores the occupancy sum of modes [m - lowbit(m), m - 1] (0-based).
    m = j + 1
    update = []
    i = m + _lowbit(m)
    while i <= size:
        update.append(i - 1)
        i += _lowbit(i)
    parity = []
    i = j
    while i > 0:
        parity.append(i - 1)
        i -= _lowbit(i)
    flip = []
    low = _lowbit(m)
    t = 1
    while t < low:
        flip.append(m - t - 1)
        t *= 2
    # Padding nodes (index >= n) appear only among ancestors; drop them.
    return IndexSets(
        j,
        frozenset(q for q in update if q < n),
        frozenset(parity),
        frozenset(flip),
    )


def _string(n: int, x_qubits, z_qubits, y_qubit: int | None = None) -> PauliTerm:
    x = z = 0
    for q in x_qubits:
        x |= 1 << q
    for q in z_qubits:
        z |= 1 << q
    if y_qubit is not None:
        x |= 1 << y_qubit
        z |= 1 << y_qubit
    return PauliTerm(n, x, z)


def encode_ladder(
    j: int, creation: bool, scheme: EncodingScheme, n: int
) -> PauliSum:
    """Qubit image of a_j (or a_j^dag): two strings with weights 1/2 and -+i/2."""
    if not 0 <= j < n:
        raise ValueError(f"mode {j} out of range for n={n}")
    if scheme is EncodingScheme.JORDAN_WIGNER:
        z_string = range(j)
        x_part = _string(n, [j], z_string)
        y_part = _string(n, [], z_string, y_qubit=j)
    else:
        sets = index_sets(j, n)
        x_part = _string(n, sets.update | {j}, sets.parity)
        # The Y-component reads parity through the remainder set on odd modes,
        # where the flip set already accounts for the mode's own stored bits;
        # even modes are Fenwick leaves with an empty flip set.
        rho = sets.parity if j % 2 == 0 else sets.remainder
        y_part = _string(n, sets.update, rho, y_qubit=j)
    sign = -1j if creation else 1j
    return PauliSum.from_terms([(0.5, x_part), (0.5 * sign, y_part)])


def transform(h: FermionHamiltonian, scheme: EncodingScheme) -> PauliSum:
    """Lower a fermionic Hamiltonian to a qubit PauliSum under the scheme."""
    n = h.n_orbitals
    cache: dict[tuple[int, bool], PauliSum] = {}

    def ladder(j: int, creation: bool) -> PauliSum:
        key = (j, creation)
        if key not in cache:
            cache[key] = encode_ladder(j, creation, scheme, n)
        return cache[key]

    total = PauliSum.zero(n)
    for coeff, word in h.monomials:
        prod: PauliSum | None = None
        for orbital, creation in word:
            op = ladder(orbital, creation)
            prod = op if prod is None else prod.product(op)
        if prod is not None:
            total = total + prod.scale(coeff)
    return total.simplify()


def max_locality(p: PauliSum) -> int:
    """Maximum number of non-identity letters over the sum's terms."""
    return p.max_weight()
