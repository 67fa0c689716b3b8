"""Split a Hamiltonian into a realizable 2-local part plus factored k-local
groups ready for gadgetization.

The grouping is a fixed greedy pipeline over the non-realizable terms, applied
in canonical term order so results are reproducible:

1. *Z-extension pairing*: absorb pairs c*T and c*T*Z_S (S outside T's support)
   into c*T*(1 + Z_S).
2. *XX/YY merging*: absorb a pair differing only by X,X <-> Y,Y on two qubits
   into c*T*(1 - Z_i Z_j), which removes the YY coupling since
   Y_i Y_j = -X_i X_j Z_i Z_j.
3. *Common-factor merging*: absorb terms equal outside a single qubit into
   (sum of 1-local prefixes) * (common rest).

Each group is then factored into pairwise-commuting operators: the
coefficient rides on the first factor, an (1 - ZZ) partner follows its XX
factor, plain letters come in ascending qubit order, and extension-bearing or
unweighted sum factors go last.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .pauli import DROP_TOLERANCE, PauliSum, PauliTerm, equal_within

# Interaction classes a 2-local device can be asked to realize.
ALL_CLASSES = frozenset({"ZZ", "XX", "XZ", "YY", "XY", "YZ"})
DEFAULT_ALLOWED = frozenset({"ZZ", "XX", "XZ"})


def parse_allowed(spec: str) -> frozenset[str]:
    names = {s.strip().upper() for s in spec.split(",") if s.strip()}
    classes = {"".join(sorted(n)).replace("ZX", "XZ") for n in names}
    classes = {{"XZ": "XZ", "XX": "XX", "ZZ": "ZZ", "YY": "YY", "XY": "XY", "YZ": "YZ"}.get(c, c) for c in classes}
    bad = classes - ALL_CLASSES
    if bad:
        raise ValueError(f"unknown interaction classes: {sorted(bad)}")
    return frozenset(classes)


def interaction_class(term: PauliTerm) -> str | None:
    """Two-letter class of a weight-2 term ('ZZ', 'XX', 'XZ', ...), else None."""
    if term.weight() != 2:
        return None
    letters = sorted(term.letter(q) for q in term.support())
    return "".join(letters)


def is_realizable(term: PauliTerm, allowed: frozenset[str]) -> bool:
    w = term.weight()
    if w <= 1:
        return True
    if w == 2:
        return interaction_class(term) in allowed
    return False


@dataclass(frozen=True)
class FactoredTerm:
    """A k-local group expressed as a product of pairwise-commuting factors."""

    factors: tuple[PauliSum, ...]
    original: PauliSum

    @property
    def k(self) -> int:
        return len(self.factors)

    def product(self) -> PauliSum:
        out = self.factors[0]
        for f in self.factors[1:]:
            out = out.product(f)
        return out.simplify()


@dataclass(frozen=True)
class FactorReport:
    """Diagnostics from validate_factored."""

    commuting: bool
    commutation_violations: tuple[tuple[int, int], ...]
    residual: float
    dense_residual: float | None


def validate_factored(f: FactoredTerm, tol: float = DROP_TOLERANCE) -> FactorReport:
    violations = []
    for i in range(f.k):
        for j in range(i + 1, f.k):
            for term_i, _ in f.factors[i].terms():
                for term_j, _ in f.factors[j].terms():
                    if not term_i.commutes(term_j):
                        violations.append((i, j))
                        break
                else:
                    continue
                break
    diff = (f.product() - f.original).simplify(0.0)
    residual = max((abs(c) for _, c in diff.terms()), default=0.0)
    dense_residual = None
    if f.original.n_qubits <= 12:
        import numpy as np

        dense_residual = float(
            np.abs(f.product().dense() - f.original.dense()).max()
        )
    return FactorReport(
        commuting=not violations,
        commutation_violations=tuple(violations),
        residual=residual,
        dense_residual=dense_residual,
    )


# -- Y elimination ------------------------------------------------------------


def eliminate_yy(term: PauliTerm, coeff: complex) -> list[tuple[complex, PauliTerm]]:
    """Rewrite paired Y letters via Y_i Y_j -> -X_i X_j Z_i Z_j.

    Returns signed commuting factors whose product is exactly coeff * term;
    no factor contains a Y.  Terms with an odd Y count cannot be paired and
    must be gadgetized directly (their lone Y becomes its own factor).
    """
    n = term.n_qubits
    y_qubits = sorted(
        q for q in term.support() if term.letter(q) == "Y"
    )
    if len(y_qubits) % 2:
        raise ValueError(
            f"term has an odd Y count ({len(y_qubits)}); gadgetize it directly "
            "with the Y letter as its own factor"
        )
    if not y_qubits:
        return [(coeff, term)]
    rest_x = term.x_mask
    rest_z = term.z_mask
    for q in y_qubits:
        rest_x &= ~(1 << q)
        rest_z &= ~(1 << q)
    factors: list[tuple[complex, PauliTerm]] = []
    rest = PauliTerm(n, rest_x, rest_z)
    if rest.weight() > 0:
        factors.append((coeff, rest))
        coeff = None  # consumed
    for a, b in zip(y_qubits[::2], y_qubits[1::2]):
        xx = PauliTerm(n, (1 << a) | (1 << b), 0)
        zz = PauliTerm(n, 0, (1 << a) | (1 << b))
        lead = -1.0 if coeff is None else -coeff
        factors.append((lead, xx))
        factors.append((1.0, zz))
        coeff = None
    return factors


# -- grouping -----------------------------------------------------------------


def _coeffs_equal(a: complex, b: complex) -> bool:
    return abs(a - b) <= 1e-9 * max(1.0, abs(a), abs(b))


@dataclass
class _Item:
    # base terms in canonical order, plus an optional pure-Z extension set
    entries: list[tuple[complex, PauliTerm]]
    ext: frozenset[int] | None = None

    def to_sum(self, n: int) -> PauliSum:
        parts = []
        for c, t in self.entries:
            parts.append((c, t))
            if self.ext:
                z_extra = 0
                for q in self.ext:
                    z_extra |= 1 << q
                parts.append((c, PauliTerm(n, t.x_mask, t.z_mask | z_extra)))
        return PauliSum.from_terms(parts, n)


def _try_extension(t1: PauliTerm, t2: PauliTerm) -> frozenset[int] | None:
    """Qubits S such that t2 == t1 * Z_S with S outside t1's support."""
    if t1.x_mask != t2.x_mask:
        return None
    extra = t1.z_mask ^ t2.z_mask
    if not extra or (t2.z_mask & extra) != extra:
        return None
    if extra & (t1.x_mask | t1.z_mask):
        return None
    return frozenset(q for q in range(t1.n_qubits) if (extra >> q) & 1)


def _try_xx_yy(t1: PauliTerm, t2: PauliTerm) -> tuple[int, int] | None:
    """Qubit pair (i, j) where t1 has X,X and t2 has Y,Y, otherwise equal."""
    if t1.x_mask != t2.x_mask:
        return None
    diff = t1.z_mask ^ t2.z_mask
    if diff.bit_count() != 2 or (diff & t1.x_mask) != diff:
        return None
    if t1.z_mask & diff:
        return None  # t1 must carry the X pair, t2 the Y pair
    pair = [q for q in range(t1.n_qubits) if (diff >> q) & 1]
    return pair[0], pair[1]


def _group_residual(residual: PauliSum) -> list[_Item]:
    n = residual.n_qubits
    items: list[_Item] = [
        _Item([(c, t)]) for t, c in residual.terms()
    ]

    # Pass 1: pair off pure-Z extensions with equal coefficients.
    merged: list[_Item] = []
    used = [False] * len(items)
    for i, item in enumerate(items):
        if used[i]:
            continue
        c1, t1 = item.entries[0]
        for j in range(i + 1, len(items)):
            if used[j]:
                continue
            c2, t2 = items[j].entries[0]
            ext = _try_extension(t1, t2)
            if ext is not None and _coeffs_equal(c1, c2):
                merged.append(_Item([(c1, t1)], ext))
                used[i] = used[j] = True
                break
        if not used[i]:
            merged.append(item)
            used[i] = True
    items = merged

    # Pass 2: merge an X-pair item with its Y-pair twin (same extension).
    merged = []
    used = [False] * len(items)
    for i, item in enumerate(items):
        if used[i]:
            continue
        for j in range(i + 1, len(items)):
            if used[j]:
                continue
            other = items[j]
            if item.ext != other.ext:
                continue
            if len(item.entries) != 1 or len(other.entries) != 1:
                continue
            (c1, t1), (c2, t2) = item.entries[0], other.entries[0]
            pair = _try_xx_yy(t1, t2)
            if pair is not None and _coeffs_equal(c1, c2):
                merged.append(_Item([(c1, t1), (c2, t2)], item.ext))
                used[i] = used[j] = True
                break
        if not used[i]:
            merged.append(item)
            used[i] = True
    items = merged

    # Pass 3: merge plain terms sharing everything but one qubit's letter.
    plain = [
        (idx, it)
        for idx, it in enumerate(items)
        if it.ext is None and len(it.entries) == 1 and it.entries[0][1].y_count() == 0
    ]
    used_idx: set[int] = set()
    groups: list[_Item] = []
    for idx, item in plain:
        if idx in used_idx:
            continue
        c1, t1 = item.entries[0]
        best: tuple[int, list[int]] | None = None
        for q in sorted(t1.support()):
            rest_x = t1.x_mask & ~(1 << q)
            rest_z = t1.z_mask & ~(1 << q)
            if not (rest_x | rest_z):
                continue
            members = [idx]
            for jdx, other in plain:
                if jdx <= idx or jdx in used_idx:
                    continue
                t2 = other.entries[0][1]
                for q2 in sorted(t2.support()):
                    if (
                        t2.x_mask & ~(1 << q2) == rest_x
                        and t2.z_mask & ~(1 << q2) == rest_z
                    ):
                        members.append(jdx)
                        break
            if len(members) > 1 and (best is None or len(members) > len(best[1])):
                best = (q, members)
        if best is not None:
            _, members = best
            entries = [items[m].entries[0] for m in members]
            groups.append(_Item(entries))
            used_idx.update(members)
    survivors = [it for idx, it in enumerate(items) if idx not in used_idx]

    # Deterministic emission order: canonical key of each group's first term.
    def key(it: _Item):
        t = it.entries[0][1]
        return (t.x_mask, t.z_mask)

    return sorted(survivors + groups, key=key)


def split_two_local(
    h: PauliSum, allowed: frozenset[str] = DEFAULT_ALLOWED
) -> tuple[PauliSum, list[PauliSum]]:
    """Separate directly realizable terms from k-local groups.

    Returns (realizable, groups); realizable + sum(groups) == h exactly.
    """
    realizable, residual = h.restricted(lambda t: is_realizable(t, allowed))
    items = _group_residual(residual.simplify(0.0))
    return realizable, [item.to_sum(h.n_qubits) for item in items]


# -- factoring ----------------------------------------------------------------


def _single_sum(n: int, coeff: complex, term: PauliTerm) -> PauliSum:
    return PauliSum.from_terms([(coeff, term)], n)


def _letter_term(n: int, term: PauliTerm, q: int) -> PauliTerm:
    bit = 1 << q
    return PauliTerm(n, term.x_mask & bit, term.z_mask & bit)


def _chunk_letters(
    n: int, term: PauliTerm, qubits: list[int], coeff: complex, limit: int
) -> list[PauliSum]:
    """One factor per letter, coefficient on the first; trailing letters are
    merged when the factor count would exceed `limit`."""
    if not qubits:
        return [PauliSum.from_terms([(coeff, PauliTerm.identity(n))], n)]
    keep = max(1, limit)
    factors: list[PauliSum] = []
    head = qubits[: keep - 1] if len(qubits) > keep else qubits[:-1]
    tail = qubits[len(head):]
    first = True
    for q in head:
        c = coeff if first else 1.0
        factors.append(_single_sum(n, c, _letter_term(n, term, q)))
        first = False
    x = z = 0
    for q in tail:
        x |= term.x_mask & (1 << q)
        z |= term.z_mask & (1 << q)
    c = coeff if first else 1.0
    factors.append(_single_sum(n, c, PauliTerm(n, x, z)))
    return factors


def _factor_single(
    n: int, coeff: complex, term: PauliTerm, target_k: int
) -> list[PauliSum]:
    y_count = term.y_count()
    if y_count >= 2 and y_count % 2 == 0:
        pieces = eliminate_yy(term, coeff)
        # A Y-free rest factor leads the list only when the term has support
        # beyond its Y pairs; XX/ZZ pair factors must never be split apart.
        has_rest = term.weight() > y_count
        if has_rest:
            lead_coeff, rest = pieces[0]
            pair_factors = pieces[1:]
            budget = max(1, target_k - len(pair_factors))
            factors = _chunk_letters(
                n, rest, sorted(rest.support()), lead_coeff, budget
            )
            factors.extend(_single_sum(n, c, t) for c, t in pair_factors)
        else:
            factors = [_single_sum(n, c, t) for c, t in pieces]
        return factors
    qubits = sorted(term.support())
    return _chunk_letters(n, term, qubits, coeff, target_k)


def _attach_extension(
    n: int, factors: list[PauliSum], ext: frozenset[int], target_k: int
) -> list[PauliSum]:
    """Multiply one factor by (1 + Z_S), preferring the lowest-index plain
    letter after the coefficient factor; ordered last either way."""
    z_ext = 0
    for q in ext:
        z_ext |= 1 << q
    ext_sum = PauliSum.from_terms(
        [(1.0, PauliTerm.identity(n)), (1.0, PauliTerm(n, 0, z_ext))], n
    )
    candidates = [
        i
        for i in range(1, len(factors))
        if factors[i].num_terms() == 1
        and next(iter(factors[i].terms()))[0].weight() == 1
    ]
    if candidates and len(factors) >= max(3, target_k):
        i = min(
            candidates,
            key=lambda i: min(next(iter(factors[i].terms()))[0].support()),
        )
        carrier = factors.pop(i)
        factors.append(carrier.product(ext_sum).simplify(0.0))
    else:
        factors.append(ext_sum)
    return factors


def factor_commuting(group: PauliSum, target_k: int = 3) -> FactoredTerm:
    """Express a group as a product of pairwise-commuting factors.

    Recognizes the shapes emitted by split_two_local (extension pairs, XX/YY
    pairs, common-factor sums); a lone term falls back to one factor per
    non-identity position.  A factor count below 3 is padded with identity.
    """
    group = group.simplify(0.0)
    n = group.n_qubits
    entries = [(c, t) for t, c in group.terms()]
    if not entries:
        raise ValueError("cannot factor an empty group")

    # Peel one (1 + Z_S) extension layer if every term pairs up under it.
    ext: frozenset[int] | None = None
    base = entries
    if len(entries) % 2 == 0 and len(entries) >= 2:
        for cand in _candidate_extensions(entries):
            peeled = _peel(entries, cand)
            if peeled is not None:
                ext, base = cand, peeled
                break

    factors: list[PauliSum] | None = None
    if len(base) == 1:
        c, t = base[0]
        factors = _factor_single(n, c, t, max(3, target_k))
    elif len(base) == 2:
        (c1, t1), (c2, t2) = base
        pair = _try_xx_yy(t1, t2)
        if pair is not None and _coeffs_equal(c1, c2):
            i, j = pair
            bits = (1 << i) | (1 << j)
            xx = PauliTerm(n, bits, 0)
            partner = PauliSum.from_terms(
                [(1.0, PauliTerm.identity(n)), (-1.0, PauliTerm(n, 0, bits))], n
            )
            rest = PauliTerm(n, t1.x_mask & ~bits, t1.z_mask & ~bits)
            factors = [_single_sum(n, c1, xx), partner]
            for q in sorted(rest.support()):
                factors.append(_single_sum(n, 1.0, _letter_term(n, rest, q)))
        if factors is None:
            factors = _factor_common_rest(n, base, target_k)
    else:
        factors = _factor_common_rest(n, base, target_k)

    if factors is None:
        raise ValueError("group does not match any supported factor shape")
    if ext:
        factors = _attach_extension(n, factors, ext, target_k)
    while len(factors) < 3:
        factors.append(
            PauliSum.from_terms([(1.0, PauliTerm.identity(n))], n)
        )
    out = FactoredTerm(tuple(factors), group)
    report = validate_factored(out)
    if not report.commuting or report.residual > 1e-10:
        raise ValueError(
            f"internal factoring error: commuting={report.commuting} "
            f"residual={report.residual:.2e}"
        )
    return out


def _candidate_extensions(entries):
    seen = []
    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            ext = _try_extension(entries[i][1], entries[j][1])
            if ext and ext not in seen:
                seen.append(ext)
    return seen


def _peel(entries, ext: frozenset[int]):
    z_ext = 0
    for q in ext:
        z_ext |= 1 << q
    remaining = list(entries)
    base = []
    while remaining:
        c, t = remaining.pop(0)
        partner = None
        for idx, (c2, t2) in enumerate(remaining):
            if (
                t2.x_mask == t.x_mask
                and t2.z_mask == (t.z_mask | z_ext)
                and not (t.z_mask & z_ext)
                and not (t.x_mask & z_ext)
                and _coeffs_equal(c, c2)
            ):
                partner = idx
                break
        if partner is None:
            return None
        remaining.pop(partner)
        base.append((c, t))
    return base


def _factor_common_rest(n, entries, target_k):
    """Factor c1*P1*R + c2*P2*R + ... into (sum of prefixes) * letters of R."""
    c0, t0 = entries[0]
    for q0 in sorted(t0.support()):
        rest_x = t0.x_mask & ~(1 << q0)
        rest_z = t0.z_mask & ~(1 << q0)
        if not (rest_x | rest_z):
            continue
        prefixes = [(c0, _letter_term(n, t0, q0))]
        ok = True
        for c, t in entries[1:]:
            found = False
            for q in sorted(t.support()):
                if t.x_mask & ~(1 << q) == rest_x and t.z_mask & ~(1 << q) == rest_z:
                    prefixes.append((c, _letter_term(n, t, q)))
                    found = True
                    break
            if not found:
                ok = False
                break
        if not ok:
            continue
        rest = PauliTerm(n, rest_x, rest_z)
        rest_qubits = sorted(rest.support())
        coeffs = [c for c, _ in prefixes]
        equal = all(_coeffs_equal(coeffs[0], c) for c in coeffs[1:])
        if equal:
            # Fold the shared coefficient into the first rest letter and put
            # the unweighted prefix sum last.
            letter_factors = _chunk_letters(
                n, rest, rest_qubits, coeffs[0], max(1, max(3, target_k) - 1)
            )
            prefix_sum = PauliSum.from_terms([(1.0, t) for _, t in prefixes], n)
            return letter_factors + [prefix_sum]
        prefix_sum = PauliSum.from_terms(prefixes, n)
        letter_factors = _chunk_letters(
            n, rest, rest_qubits, 1.0, max(1, max(3, target_k) - 1)
        )
        return [prefix_sum] + letter_factors
    return None


def shape_hamiltonian(
    h: PauliSum,
    allowed: frozenset[str] = DEFAULT_ALLOWED,
    target_k: int = 3,
) -> tuple[PauliSum, list[FactoredTerm]]:
    """Full shaping pass: split, group, and factor a Hamiltonian."""
    realizable, groups = split_two_local(h, allowed)
    return realizable, [factor_commuting(g, target_k) for g in groups]
