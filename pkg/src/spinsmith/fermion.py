"""Second-quantized Hamiltonians and an occupation-number-basis matrix oracle.

The Hamiltonian is a sum of one-body terms h[i,j] a_i^dag a_j and two-body
terms (1/2) g[i,j,k,l] a_i^dag a_j^dag a_k a_l, with g in physicist index
order: g[i,j,k,l] multiplies the ladder word exactly as written.  The matrix
oracle realizes a_j on |f_{n-1}...f_0> with the standard sign rule
(-1)^(sum of occupancies below j), which every encoding is validated against.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SYMMETRY_TOL = 1e-12
MAX_ORBITALS_DENSE = 14  # memory guard for the 2^n x 2^n oracle

# A ladder word is a tuple of (orbital, is_creation) pairs, leftmost first.
LadderWord = tuple[tuple[int, bool], ...]


@dataclass(frozen=True)
class IntegralTable:
    """One- and two-electron integrals over n spin orbitals (Hartree)."""

    n_orbitals: int
    h: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        n = self.n_orbitals
        if n < 1:
            raise ValueError("need at least one spin orbital")
        h = np.asarray(self.h, dtype=float)
        g = np.asarray(self.g, dtype=float)
        if h.shape != (n, n):
            raise ValueError(f"h must be {n}x{n}, got {h.shape}")
        if g.shape != (n, n, n, n):
            raise ValueError(f"g must be {n}^4, got {g.shape}")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "g", g)
        bad = np.argwhere(np.abs(h - h.T) > SYMMETRY_TOL)
        if bad.size:
            i, j = bad[0]
            raise ValueError(
                f"one-body integrals not symmetric: h[{i}][{j}] != h[{j}][{i}]"
            )
        # Hermiticity of the two-body operator requires g[i,j,k,l] == g[l,k,j,i].
        bad = np.argwhere(np.abs(g - g.transpose(3, 2, 1, 0)) > SYMMETRY_TOL)
        if bad.size:
            i, j, k, l = bad[0]
            raise ValueError(
                f"two-body integrals violate g[{i}][{j}][{k}][{l}] == "
                f"g[{l}][{k}][{j}][{i}]"
            )


@dataclass(frozen=True)
class FermionHamiltonian:
    """Hermitian sum of coefficient-weighted ladder words (a+a and a+a+aa)."""

    n_orbitals: int
    monomials: tuple[tuple[float, LadderWord], ...] = field(default_factory=tuple)


def build_fermion_hamiltonian(table: IntegralTable) -> FermionHamiltonian:
    """One monomial per nonzero integral, with the 1/2 on two-body terms."""
    n = table.n_orbitals
    monomials: list[tuple[float, LadderWord]] = []
    for i in range(n):
        for j in range(n):
            if table.h[i, j] != 0.0:
                monomials.append((float(table.h[i, j]), ((i, True), (j, False))))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    v = table.g[i, j, k, l]
                    if v != 0.0:
                        word = ((i, True), (j, True), (k, False), (l, False))
                        monomials.append((0.5 * float(v), word))
    return FermionHamiltonian(n, tuple(monomials))


def number_operator(n_orbitals: int) -> FermionHamiltonian:
    words = tuple(
        (1.0, ((j, True), (j, False))) for j in range(n_orbitals)
    )
    return FermionHamiltonian(n_orbitals, words)


def parity_operator(n_orbitals: int) -> np.ndarray:
    """Dense matrix of (-1)^N in the occupation basis."""
    dim = 1 << n_orbitals
    idx = np.arange(dim, dtype=np.uint64)
    signs = 1.0 - 2.0 * (np.bitwise_count(idx) & np.uint64(1)).astype(float)
    return np.diag(signs)


def ladder_matrix(n_orbitals: int, orbital: int, creation: bool) -> np.ndarray:
    """Dense matrix of a single a_j or a_j^dag in the occupation basis."""
    if not 0 <= orbital < n_orbitals:
        raise ValueError(f"orbital {orbital} out of range")
    _check_size(n_orbitals)
    dim = 1 << n_orbitals
    mat = np.zeros((dim, dim))
    bit = 1 << orbital
    below = bit - 1
    for state in range(dim):
        occupied = state & bit
        if creation == bool(occupied):
            continue
        sign = -1.0 if (state & below).bit_count() % 2 else 1.0
        mat[state ^ bit, state] = sign
    return mat


def occupation_matrix(h: FermionHamiltonian) -> np.ndarray:
    """Exact dense matrix of the operator; Hermitian for valid inputs."""
    _check_size(h.n_orbitals)
    dim = 1 << h.n_orbitals
    mat = np.zeros((dim, dim))
    for coeff, word in h.monomials:
        for col in range(dim):
            state, sign = col, 1.0
            # Rightmost ladder operator acts first.
            for orbital, creation in reversed(word):
                bit = 1 << orbital
                occupied = state & bit
                if creation == bool(occupied):
                    state = -1
                    break
                if (state & (bit - 1)).bit_count() % 2:
                    sign = -sign
                state ^= bit
            if state >= 0:
                mat[state, col] += coeff * sign
    return mat


def _check_size(n: int) -> None:
    if n > MAX_ORBITALS_DENSE:
        raise ValueError(
            f"{n} orbitals exceeds the dense-oracle guard of {MAX_ORBITALS_DENSE}"
        )


# -- integral file format -----------------------------------------------------
#
# Header `norb N`, then `h i j value` and `g i j k l value` lines with 0-based
# spin-orbital indices; `#` starts a comment.  The two-body indices follow the
# ladder word a_i^dag a_j^dag a_k a_l (physicist order), which the parser
# enforces via the symmetry checks in IntegralTable.


def parse_integral_text(text: str) -> IntegralTable:
    n = None
    h = g = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kind = tokens[0].lower()
        if kind == "norb":
            if n is not None:
                raise ValueError(f"line {lineno}: duplicate norb header")
            if len(tokens) != 2 or not tokens[1].isdigit() or int(tokens[1]) < 1:
                raise ValueError(f"line {lineno}: bad norb header")
            n = int(tokens[1])
            h = np.zeros((n, n))
            g = np.zeros((n, n, n, n))
            continue
        if n is None:
            raise ValueError(f"line {lineno}: integral before norb header")
        if kind == "h":
            if len(tokens) != 4:
                raise ValueError(f"line {lineno}: h lines need `h i j value`")
            i, j = _indices(tokens[1:3], n, lineno)
            h[i, j] = float(tokens[3])
        elif kind == "g":
            if len(tokens) != 6:
                raise ValueError(f"line {lineno}: g lines need `g i j k l value`")
            i, j, k, l = _indices(tokens[1:5], n, lineno)
            g[i, j, k, l] = float(tokens[5])
        else:
            raise ValueError(f"line {lineno}: unknown record {tokens[0]!r}")
    if n is None:
        raise ValueError("missing norb header")
    return IntegralTable(n, h, g)


def _indices(tokens, n, lineno):
    out = []
    for t in tokens:
        if not t.isdigit() or int(t) >= n:
            raise ValueError(f"line {lineno}: orbital index {t!r} out of range")
        out.append(int(t))
    return tuple(out)


def read_integral_file(path) -> IntegralTable:
    with open(path) as fh:
        return parse_integral_text(fh.read())


def write_integral_file(path, table: IntegralTable) -> None:
    n = table.n_orbitals
    with open(path, "w") as fh:
        fh.write(f"norb {n}\n")
        for i in range(n):
            for j in range(n):
                if table.h[i, j] != 0.0:
                    fh.write(f"h {i} {j} {table.h[i, j]!r}\n")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for l in range(n):
                        if table.g[i, j, k, l] != 0.0:
                            fh.write(f"g {i} {j} {k} {l} {table.g[i, j, k, l]!r}\n")
