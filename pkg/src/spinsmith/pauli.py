"""Exact algebra for Pauli strings and complex-weighted Pauli sums.

Pauli strings are stored in symplectic form as a pair of bitmasks: bit q of
``x_mask``/``z_mask`` records an X/Z component on qubit q, with (1,1) meaning
Y.  Qubit 0 is the least-significant bit of basis-state indices, so the dense
matrix of a string on n qubits is ``kron(P_{n-1}, ..., P_0)``.  Every stored
string is one of the 4^n Hermitian Paulis; phases produced by multiplication
live in coefficients, never in the string itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np

# Default magnitude below which simplify() drops a coefficient (Hartree).
DROP_TOLERANCE = 1e-12

_LETTERS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_BITS = {v: k for k, v in _LETTERS.items()}

# i^k lookup so phases stay exact.
_PHASES = (1.0, 1j, -1.0, -1j)


@dataclass(frozen=True, slots=True)
class PauliTerm:
    """A single n-qubit Pauli string in symplectic bitmask form."""

    n_qubits: int
    x_mask: int = 0
    z_mask: int = 0

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be positive, got {self.n_qubits}")
        full = (1 << self.n_qubits) - 1
        if self.x_mask & ~full or self.z_mask & ~full:
            raise ValueError("mask has support outside the qubit register")

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliTerm":
        return cls(n_qubits)

    @classmethod
    def from_ops(cls, n_qubits: int, ops: Mapping[int, str]) -> "PauliTerm":
        """Build from a {qubit: letter} mapping, e.g. {0: 'X', 2: 'Z'}."""
        x = z = 0
        for q, letter in ops.items():
            if not 0 <= q < n_qubits:
                raise ValueError(f"qubit {q} out of range for n={n_qubits}")
            try:
                xb, zb = _BITS[letter]
            except KeyError:
                raise ValueError(f"unknown Pauli letter {letter!r}") from None
            x |= xb << q
            z |= zb << q
        return cls(n_qubits, x, z)

    @classmethod
    def from_label(cls, label: str, n_qubits: int | None = None) -> "PauliTerm":
        """Parse tokens like ``"X0 Z1 X2"``; an empty label is the identity."""
        ops: dict[int, str] = {}
        for tok in label.split():
            letter, idx = tok[0].upper(), tok[1:]
            if letter not in _BITS or letter == "I" or not idx.isdigit():
                raise ValueError(f"bad Pauli token {tok!r}")
            q = int(idx)
            if q in ops:
                raise ValueError(f"qubit {q} repeated in {label!r}")
            ops[q] = letter
        if n_qubits is None:
            n_qubits = max(ops) + 1 if ops else 1
        return cls.from_ops(n_qubits, ops)

    def letter(self, q: int) -> str:
        return _LETTERS[((self.x_mask >> q) & 1, (self.z_mask >> q) & 1)]

    def weight(self) -> int:
        """Number of non-identity letters (the locality k of the term)."""
        return (self.x_mask | self.z_mask).bit_count()

    def support(self) -> frozenset[int]:
        m = self.x_mask | self.z_mask
        return frozenset(q for q in range(self.n_qubits) if (m >> q) & 1)

    def y_count(self) -> int:
        return (self.x_mask & self.z_mask).bit_count()

    def mul(self, other: "PauliTerm") -> tuple[complex, "PauliTerm"]:
        """Exact product: returns (phase, string) with phase in {1,-1,i,-i}.

        Per qubit, X^x Z^z carries an i^{xz} factor (so Y = iXZ is Hermitian);
        commuting Z components of self past X components of other contributes
        (-1)^{|z1 & x2|}.
        """
        if self.n_qubits != other.n_qubits:
            raise ValueError(
                f"qubit count mismatch: {self.n_qubits} vs {other.n_qubits}"
            )
        x1, z1, x2, z2 = self.x_mask, self.z_mask, other.x_mask, other.z_mask
        x3, z3 = x1 ^ x2, z1 ^ z2
        e = (
            (x1 & z1).bit_count()
            + (x2 & z2).bit_count()
            - (x3 & z3).bit_count()
            + 2 * (z1 & x2).bit_count()
        ) % 4
        return _PHASES[e], PauliTerm(self.n_qubits, x3, z3)

    def commutes(self, other: "PauliTerm") -> bool:
        """True iff the strings commute (even symplectic overlap)."""
        if self.n_qubits != other.n_qubits:
            raise ValueError(
                f"qubit count mismatch: {self.n_qubits} vs {other.n_qubits}"
            )
        overlap = (self.x_mask & other.z_mask).bit_count() + (
            self.z_mask & other.x_mask
        ).bit_count()
        return overlap % 2 == 0

    def embed(self, mapping: Mapping[int, int], new_n: int) -> "PauliTerm":
        """Relabel qubits through an injective map into [0, new_n)."""
        targets = set(mapping.values())
        if len(targets) != len(mapping):
            raise ValueError("qubit relabeling must be injective")
        if any(not 0 <= t < new_n for t in targets):
            raise ValueError("relabeled qubit out of range")
        x = z = 0
        for q in range(self.n_qubits):
            xb, zb = (self.x_mask >> q) & 1, (self.z_mask >> q) & 1
            if not (xb or zb):
                continue
            t = mapping.get(q)
            if t is None:
                raise ValueError(f"qubit {q} has support but no relabeling")
            x |= xb << t
            z |= zb << t
        return PauliTerm(new_n, x, z)

    def extended(self, new_n: int) -> "PauliTerm":
        """Same string on a wider register (new qubits act as identity)."""
        if new_n < self.n_qubits:
            raise ValueError("cannot shrink a Pauli term")
        return PauliTerm(new_n, self.x_mask, self.z_mask)

    def dense(self) -> np.ndarray:
        """Dense 2^n x 2^n matrix of the string."""
        dim = 1 << self.n_qubits
        idx = np.arange(dim, dtype=np.uint64)
        signs = 1.0 - 2.0 * (
            np.bitwise_count(idx & np.uint64(self.z_mask)) & np.uint64(1)
        ).astype(np.float64)
        mat = np.zeros((dim, dim), dtype=complex)
        mat[idx ^ np.uint64(self.x_mask), idx] = _PHASES[self.y_count() % 4] * signs
        return mat

    def __str__(self) -> str:
        toks = [
            f"{self.letter(q)}{q}"
            for q in range(self.n_qubits)
            if self.letter(q) != "I"
        ]
        return " ".join(toks) if toks else "I"


class PauliSum:
    """A complex-weighted sum of Pauli strings on a fixed qubit register.

    Instances behave as immutable values: every operation returns a new sum.
    Term iteration is in canonical (x_mask, z_mask) lexicographic order so
    that serialized output is reproducible bit for bit.
    """

    __slots__ = ("n_qubits", "_terms")

    def __init__(
        self,
        n_qubits: int,
        terms: Mapping[tuple[int, int], complex] | None = None,
    ):
        if n_qubits < 1:
            raise ValueError(f"n_qubits must be positive, got {n_qubits}")
        self.n_qubits = n_qubits
        self._terms: dict[tuple[int, int], complex] = dict(terms) if terms else {}

    # -- construction ------------------------------------------------------

    @classmethod
    def zero(cls, n_qubits: int) -> "PauliSum":
        return cls(n_qubits)

    @classmethod
    def from_terms(
        cls, pairs: Iterable[tuple[complex, PauliTerm]], n_qubits: int | None = None
    ) -> "PauliSum":
        pairs = list(pairs)
        if n_qubits is None:
            if not pairs:
                raise ValueError("cannot infer qubit count from an empty sum")
            n_qubits = pairs[0][1].n_qubits
        out = cls(n_qubits)
        for coeff, term in pairs:
            if term.n_qubits != n_qubits:
                raise ValueError("mixed qubit counts in term list")
            key = (term.x_mask, term.z_mask)
            out._terms[key] = out._terms.get(key, 0.0) + complex(coeff)
        return out

    @classmethod
    def from_label(
        cls, coeff: complex, label: str, n_qubits: int | None = None
    ) -> "PauliSum":
        term = PauliTerm.from_label(label, n_qubits)
        return cls.from_terms([(coeff, term)])

    # -- inspection --------------------------------------------------------

    def terms(self) -> Iterator[tuple[PauliTerm, complex]]:
        for x, z in sorted(self._terms):
            yield PauliTerm(self.n_qubits, x, z), self._terms[(x, z)]

    def coefficient(self, term: PauliTerm) -> complex:
        if term.n_qubits != self.n_qubits:
            raise ValueError("qubit count mismatch")
        return self._terms.get((term.x_mask, term.z_mask), 0.0)

    def num_terms(self) -> int:
        return len(self._terms)

    def max_weight(self) -> int:
        """Largest locality among stored terms (0 for the zero sum)."""
        return max(((x | z).bit_count() for x, z in self._terms), default=0)

    def is_hermitian(self, tol: float = DROP_TOLERANCE) -> bool:
        """All-real coefficients; strings themselves are Hermitian."""
        return all(abs(c.imag) <= tol for c in self._terms.values())

    def norm_bound(self) -> float:
        """Triangle-inequality upper bound on the operator norm."""
        return float(sum(abs(c) for c in self._terms.values()))

    # -- algebra -----------------------------------------------------------

    def _require_same_register(self, other: "PauliSum") -> None:
        if self.n_qubits != other.n_qubits:
            raise ValueError(
                f"qubit count mismatch: {self.n_qubits} vs {other.n_qubits}"
            )

    def __add__(self, other: "PauliSum") -> "PauliSum":
        self._require_same_register(other)
        out = dict(self._terms)
        for key, c in other._terms.items():
            out[key] = out.get(key, 0.0) + c
        return PauliSum(self.n_qubits, out)

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + other.scale(-1.0)

    def scale(self, factor: complex) -> "PauliSum":
        return PauliSum(
            self.n_qubits, {k: factor * c for k, c in self._terms.items()}
        )

    def __mul__(self, other):
        if isinstance(other, PauliSum):
            return self.product(other)
        return self.scale(other)

    def __rmul__(self, factor: complex) -> "PauliSum":
        return self.scale(factor)

    def product(self, other: "PauliSum") -> "PauliSum":
        """Operator product, expanded term by term (exact phases)."""
        self._require_same_register(other)
        out: dict[tuple[int, int], complex] = {}
        n = self.n_qubits
        for (x1, z1), c1 in self._terms.items():
            for (x2, z2), c2 in other._terms.items():
                x3, z3 = x1 ^ x2, z1 ^ z2
                e = (
                    (x1 & z1).bit_count()
                    + (x2 & z2).bit_count()
                    - (x3 & z3).bit_count()
                    + 2 * (z1 & x2).bit_count()
                ) % 4
                key = (x3, z3)
                out[key] = out.get(key, 0.0) + c1 * c2 * _PHASES[e]
        return PauliSum(n, out)

    def simplify(self, tol: float = DROP_TOLERANCE) -> "PauliSum":
        """Merge equal strings (already merged by storage) and drop tiny
        coefficients; idempotent."""
        kept = {}
        for key, c in self._terms.items():
            if abs(c) >= tol:
                kept[key] = c.real if abs(c.imag) < tol else c
        return PauliSum(self.n_qubits, kept)

    def extended(self, new_n: int) -> "PauliSum":
        """Widen the register; existing strings act as identity on new qubits."""
        if new_n < self.n_qubits:
            raise ValueError("cannot shrink a Pauli sum")
        return PauliSum(new_n, dict(self._terms))

    def embed(self, mapping: Mapping[int, int], new_n: int) -> "PauliSum":
        out: dict[tuple[int, int], complex] = {}
        for term, c in self.terms():
            t = term.embed(mapping, new_n)
            key = (t.x_mask, t.z_mask)
            out[key] = out.get(key, 0.0) + c
        return PauliSum(new_n, out)

    def restricted(self, predicate) -> tuple["PauliSum", "PauliSum"]:
        """Split into (terms satisfying predicate, the rest)."""
        yes: dict[tuple[int, int], complex] = {}
        no: dict[tuple[int, int], complex] = {}
        for key, c in self._terms.items():
            term = PauliTerm(self.n_qubits, *key)
            (yes if predicate(term) else no)[key] = c
        return PauliSum(self.n_qubits, yes), PauliSum(self.n_qubits, no)

    def dense(self) -> np.ndarray:
        dim = 1 << self.n_qubits
        idx = np.arange(dim, dtype=np.uint64)
        mat = np.zeros((dim, dim), dtype=complex)
        for (x, z), c in self._terms.items():
            signs = 1.0 - 2.0 * (
                np.bitwise_count(idx & np.uint64(z)) & np.uint64(1)
            ).astype(np.float64)
            mat[idx ^ np.uint64(x), idx] += c * _PHASES[(x & z).bit_count() % 4] * signs
        return mat

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self.n_qubits == other.n_qubits and self._terms == other._terms

    def __repr__(self) -> str:
        parts = [f"({c:g}) {term}" for term, c in self.terms()]
        return f"PauliSum({self.n_qubits}q: " + " + ".join(parts) + ")"


def equal_within(a: PauliSum, b: PauliSum, tol: float = DROP_TOLERANCE) -> bool:
    """Symbolic equality check: every coefficient of a-b below tol."""
    diff = (a - b).simplify(tol)
    return diff.num_terms() == 0


# -- text format -------------------------------------------------------------
#
# One term per line: `<real> [<imag>] <LETTER><index> ...`, identity terms have
# an empty letter list.  `#` starts a comment; the emitter writes a
# `# qubits: N` header so register size survives round trips.


def _fmt(v: float) -> str:
    # repr() is the shortest exact round-trip form, so parse(emit(x)) == x.
    return repr(float(v))


def dumps(p: PauliSum) -> str:
    lines = [f"# qubits: {p.n_qubits}"]
    for term, c in p.terms():
        label = str(term)
        fields = [_fmt(c.real)]
        if c.imag != 0.0:
            fields.append(_fmt(c.imag))
        if label != "I":
            fields.append(label)
        lines.append(" ".join(fields))
    return "\n".join(lines) + "\n"


def loads(text: str, n_qubits: int | None = None) -> PauliSum:
    declared = n_qubits
    entries: list[tuple[int, complex, dict[int, str]]] = []
    max_q = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("#"):
            body = line[1:].strip()
            if body.lower().startswith("qubits:") and declared is None:
                try:
                    declared = int(body.split(":", 1)[1])
                except ValueError:
                    raise ValueError(f"line {lineno}: bad qubits header") from None
            continue
        if not line:
            continue
        tokens = line.split()
        try:
            real = float(tokens[0])
        except ValueError:
            raise ValueError(f"line {lineno}: expected a coefficient, got {tokens[0]!r}")
        rest = tokens[1:]
        imag = 0.0
        if rest:
            try:
                imag = float(rest[0])
            except ValueError:
                pass
            else:
                rest = rest[1:]
        ops: dict[int, str] = {}
        for tok in rest:
            letter, idx = tok[0].upper(), tok[1:]
            if letter not in "XYZ" or not idx.isdigit():
                raise ValueError(f"line {lineno}: bad Pauli token {tok!r}")
            q = int(idx)
            if q in ops:
                raise ValueError(f"line {lineno}: qubit {q} repeated")
            ops[q] = letter
            max_q = max(max_q, q)
        entries.append((lineno, complex(real, imag), ops))
    n = declared if declared is not None else max(max_q + 1, 1)
    if max_q >= n:
        raise ValueError(f"qubit index {max_q} exceeds declared register size {n}")
    out = PauliSum(n)
    for lineno, coeff, ops in entries:
        term = PauliTerm.from_ops(n, ops)
        key = (term.x_mask, term.z_mask)
        out._terms[key] = out._terms.get(key, 0.0) + coeff
    return out


def write_pauli_file(path, p: PauliSum) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(p))


def read_pauli_file(path, n_qubits: int | None = None) -> PauliSum:
    with open(path) as fh:
        return loads(fh.read(), n_qubits)
