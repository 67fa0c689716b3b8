"""Matrix-free spectral engine: dense and Lanczos diagonalization, ancilla
sector filtering, gadget verification, and gap sweeps.

Every gadget register carries an exact Z2 symmetry, the product of X over its
ancillas: it commutes with the penalty (ZZ is complement-even), with every
coupling (X meets X), and with all logical terms.  Low eigenvectors therefore
organize into flip sectors, and the compiled spectrum reproduces the target in
the all-+1 sector.  The engine exploits this directly: it block-diagonalizes
into sectors by working in the orbit basis (|p> + sigma |p-complement>)/sqrt2
per register, which shrinks the dimension by 2^registers and makes sector
labels exact instead of estimated from eigenvector expectations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.linalg

from .gadgets import GadgetHamiltonian
from .pauli import PauliSum, PauliTerm

MAX_DENSE_QUBITS = 14
MAX_LANCZOS_QUBITS = 24
_PHASES = (1.0, 1j, -1.0, -1j)


# -- matrix-free application ---------------------------------------------------


def matvec(h: PauliSum, v: np.ndarray) -> np.ndarray:
    """Apply a PauliSum to an amplitude vector without materializing it.

    X/Y components permute basis indices, Z/Y components contribute signs,
    each Y contributes a factor i.
    """
    dim = 1 << h.n_qubits
    if v.shape != (dim,):
        raise ValueError(f"vector must have length 2^{h.n_qubits} = {dim}")
    idx = np.arange(dim, dtype=np.uint64)
    complex_out = np.iscomplexobj(v) or any(
        t.y_count() % 2 or abs(c.imag) > 0 for t, c in h.terms()
    )
    out = np.zeros(dim, dtype=complex if complex_out else float)
    for term, c in h.terms():
        amp = c * _PHASES[term.y_count() % 4]
        if not complex_out:
            amp = amp.real
        signs = 1.0 - 2.0 * (
            np.bitwise_count(idx & np.uint64(term.z_mask)) & np.uint64(1)
        ).astype(float)
        if term.x_mask:
            out[idx ^ np.uint64(term.x_mask)] += amp * signs * v
        else:
            out += amp * signs * v
    return out


class _FullOperator:
    """Precompiled matvec over the full 2^n space, terms grouped by X mask."""

    def __init__(self, h: PauliSum):
        self.n_qubits = h.n_qubits
        self.dim = 1 << h.n_qubits
        idx = np.arange(self.dim, dtype=np.uint64)
        self.is_complex = any(
            term.y_count() % 2 or abs(c.imag) > 1e-15 for term, c in h.terms()
        )
        groups: dict[int, np.ndarray] = {}
        for term, c in h.terms():
            amp = c * _PHASES[term.y_count() % 4]
            signs = 1.0 - 2.0 * (
                np.bitwise_count(idx & np.uint64(term.z_mask)) & np.uint64(1)
            ).astype(float)
            w = amp * signs if self.is_complex else amp.real * signs
            if term.x_mask in groups:
                groups[term.x_mask] = groups[term.x_mask] + w
            else:
                groups[term.x_mask] = w
        self.groups = sorted(groups.items())

    def __call__(self, v: np.ndarray) -> np.ndarray:
        idx = np.arange(self.dim, dtype=np.uint64)
        out = np.zeros(self.dim, dtype=complex if self.is_complex else float)
        for x_mask, w in self.groups:
            if x_mask:
                out[idx ^ np.uint64(x_mask)] += w * v
            else:
                out += w * v
        return out


def eig_dense(
    h: PauliSum, vectors: bool = False, max_qubits: int = MAX_DENSE_QUBITS
):
    """Full ascending spectrum via dense diagonalization (guarded size)."""
    if h.n_qubits > max_qubits:
        raise ValueError(
            f"{h.n_qubits} qubits exceeds the dense guard of {max_qubits}"
        )
    mat = h.dense()
    if np.abs(mat.imag).max() < 1e-14:
        mat = mat.real
    if vectors:
        vals, vecs = np.linalg.eigh(mat)
        return vals, vecs
    return np.linalg.eigvalsh(mat)


@dataclass
class LanczosResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None
    residuals: np.ndarray
    iterations: int
    converged: bool


def lanczos_lowest(
    apply_h: Callable[[np.ndarray], np.ndarray],
    dim: int,
    m: int = 1,
    max_iters: int = 300,
    tol: float = 1e-10,
    seed: int = 7,
    project: Callable[[np.ndarray], np.ndarray] | None = None,
    want_vectors: bool = False,
    is_complex: bool = False,
) -> LanczosResult:
    """Lanczos with full reorthogonalization and a seeded start vector.

    `project`, when given, is applied to the start vector and every new
    Krylov vector; with a symmetry projector this confines the iteration to
    an invariant subspace.  Inner products use einsum, which keeps reduction
    order fixed regardless of BLAS threading.
    """
    if m < 1:
        raise ValueError("need at least one eigenvalue")
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim)
    if is_complex:
        v = v + 1j * rng.standard_normal(dim)
    if project is not None:
        v = project(v)
    norm = np.sqrt(np.real(np.einsum("i,i->", v.conj(), v)))
    if norm < 1e-14:
        raise ValueError("start vector vanishes under the projector")
    v = v / norm
    basis = [v]
    alphas: list[float] = []
    betas: list[float] = []
    vals = np.zeros(0)
    vecs_tri = None
    residuals = np.full(m, np.inf)
    iters = 0
    for it in range(1, max_iters + 1):
        iters = it
        w = apply_h(basis[-1])
        if project is not None:
            w = project(w)
        alpha = float(np.real(np.einsum("i,i->", basis[-1].conj(), w)))
        alphas.append(alpha)
        # full reorthogonalization (twice for numerical safety)
        vmat = np.asarray(basis)
        for _ in range(2):
            overlaps = np.einsum("ki,i->k", vmat.conj(), w)
            w = w - np.einsum("k,ki->i", overlaps, vmat)
        beta = float(np.sqrt(np.real(np.einsum("i,i->", w.conj(), w))))
        if len(alphas) >= m:
            vals, vecs_tri = scipy.linalg.eigh_tridiagonal(
                np.array(alphas), np.array(betas)
            )
            residuals = np.abs(beta * vecs_tri[-1, :m])
            scale = np.maximum(1.0, np.abs(vals[:m]))
            if np.all(residuals <= tol * scale):
                break
        if beta < 1e-13:  # Krylov space exhausted; spectrum is exact
            vals, vecs_tri = scipy.linalg.eigh_tridiagonal(
                np.array(alphas), np.array(betas)
            )
            residuals = np.zeros(min(m, len(vals)))
            break
        betas.append(beta)
        basis.append(w / beta)
    if len(vals) < m:
        raise ValueError(
            f"Krylov space of dimension {len(vals)} has fewer than {m} "
            "eigenvalues"
        )
    converged = bool(
        np.all(residuals[: min(m, len(residuals))] <= tol * np.maximum(1.0, np.abs(vals[:m])))
    )
    vectors = None
    if want_vectors:
        vmat = np.asarray(basis[: len(alphas)])
        vectors = np.einsum("ki,km->im", vmat, vecs_tri[:, :m])
    return LanczosResult(
        eigenvalues=vals[:m],
        eigenvectors=vectors,
        residuals=residuals[:m],
        iterations=iters,
        converged=converged,
    )


def eig_lanczos(
    h: PauliSum,
    m: int = 1,
    max_iters: int = 300,
    tol: float = 1e-10,
    seed: int = 7,
) -> np.ndarray:
    """m lowest eigenvalues of a PauliSum, matrix-free."""
    if h.n_qubits > MAX_LANCZOS_QUBITS:
        raise ValueError(
            f"{h.n_qubits} qubits exceeds the Lanczos guard of "
            f"{MAX_LANCZOS_QUBITS}"
        )
    op = _FullOperator(h)
    result = lanczos_lowest(
        op, op.dim, m=m, max_iters=max_iters, tol=tol, seed=seed,
        is_complex=op.is_complex,
    )
    if not result.converged:
        raise ValueError(
            f"Lanczos did not converge in {result.iterations} iterations; "
            f"residuals {result.residuals}"
        )
    return result.eigenvalues


# -- register flip sectors ------------------------------------------------------


class SectorOperator:
    """A Hamiltonian restricted to one flip sector of its ancilla registers.

    Basis states are (|p> + sign |p-complement>)/sqrt2 per register tensored
    with computational states of the free qubits; the reduced dimension is
    2^(n - #registers).  Requires every term to commute with every register
    flip (even Z weight on each register), which compiled gadgets satisfy.
    """

    def __init__(
        self,
        h: PauliSum,
        registers: Sequence[Sequence[int]],
        sector: Sequence[int] | None = None,
    ):
        self.n_qubits = h.n_qubits
        regs = [tuple(sorted(r)) for r in registers]
        claimed = [u for reg in regs for u in reg]
        if len(set(claimed)) != len(claimed):
            raise ValueError("registers overlap")
        if any(u >= h.n_qubits for u in claimed):
            raise ValueError("register qubit out of range")
        self.registers = tuple(regs)
        self.sector = tuple(1 for _ in regs) if sector is None else tuple(sector)
        if len(self.sector) != len(regs) or any(s not in (-1, 1) for s in self.sector):
            raise ValueError("sector must be +-1 per register")
        in_reg = set(claimed)
        self.free = tuple(q for q in range(h.n_qubits) if q not in in_reg)
        # reduced layout: free bits first, then (k-1)-bit fields per register
        offsets = []
        pos = len(self.free)
        for reg in regs:
            offsets.append(pos)
            pos += len(reg) - 1
        self._field_offsets = offsets
        self.dim = 1 << pos
        self._build(h)

    def _build(self, h: PauliSum) -> None:
        idx = np.arange(self.dim, dtype=np.uint64)
        free_pos = {q: i for i, q in enumerate(self.free)}
        self.is_complex = any(
            term.y_count() % 2 or abs(c.imag) > 1e-15 for term, c in h.terms()
        )
        amp_dtype = complex if self.is_complex else float
        # group terms by their full permutation action (reduced x-mask plus
        # register complement pattern is determined by masks alone)
        perms: dict[tuple, dict] = {}
        for term, c in h.terms():
            x_free_red = 0
            z_free = 0
            for q in self.free:
                bit = 1 << q
                if term.x_mask & bit:
                    x_free_red |= 1 << free_pos[q]
                if term.z_mask & bit:
                    z_free |= 1 << free_pos[q]
            reg_parts = []
            for reg, off in zip(self.registers, self._field_offsets):
                k = len(reg)
                x_bits = sum(((term.x_mask >> u) & 1) << i for i, u in enumerate(reg))
                z_bits = sum(((term.z_mask >> u) & 1) << i for i, u in enumerate(reg))
                if bin(z_bits).count("1") % 2:
                    raise ValueError(
                        f"term {term} anticommutes with the flip of register {reg}"
                    )
                reg_parts.append((off, k, x_bits, z_bits))
            key = (x_free_red, tuple((off, k, x) for off, k, x, _ in reg_parts))
            amp = c * _PHASES[term.y_count() % 4]
            entry = perms.setdefault(key, {"zs": []})
            entry["zs"].append((z_free, reg_parts, amp))
        compiled = []
        for (x_free_red, _), entry in sorted(perms.items()):
            # destination indices (same for all z variants in the group)
            z0_free, reg_parts0, _ = entry["zs"][0]
            dest = idx ^ np.uint64(x_free_red)
            sector_sign = np.ones(self.dim)
            for (off, k, x_bits, _z) in reg_parts0:
                if k == 1:
                    # single-ancilla register: field width 0; flip maps the
                    # orbit to itself with the sector sign when x acts
                    if x_bits:
                        sector_sign = sector_sign * self._sector_for_offset(off)
                    continue
                field_mask = np.uint64(((1 << (k - 1)) - 1) << off)
                x_low = np.uint64((x_bits & ((1 << (k - 1)) - 1)) << off)
                top = (x_bits >> (k - 1)) & 1
                dest = dest ^ x_low
                if top:
                    dest = dest ^ field_mask
                    sector_sign = sector_sign * self._sector_for_offset(off)
            amp_total = np.zeros(self.dim, dtype=amp_dtype)
            for z_free, reg_parts, amp in entry["zs"]:
                signs = 1.0 - 2.0 * (
                    np.bitwise_count(idx & np.uint64(z_free)) & np.uint64(1)
                ).astype(float)
                for (off, k, _x, z_bits) in reg_parts:
                    if k == 1 or not z_bits:
                        continue
                    field = (idx >> np.uint64(off)) & np.uint64((1 << (k - 1)) - 1)
                    z_low = np.uint64(z_bits & ((1 << (k - 1)) - 1))
                    signs = signs * (
                        1.0
                        - 2.0
                        * (np.bitwise_count(field & z_low) & np.uint64(1)).astype(
                            float
                        )
                    )
                    # top ancilla bit is 0 on canonical representatives, so it
                    # contributes no sign
                amp_total += (amp if self.is_complex else amp.real) * signs
            compiled.append((dest, amp_total * sector_sign))
        self._compiled = compiled

    def _sector_for_offset(self, off: int) -> int:
        for reg_off, s in zip(self._field_offsets, self.sector):
            if reg_off == off:
                return s
        raise KeyError(off)

    def __call__(self, v: np.ndarray) -> np.ndarray:
        out = np.zeros(
            self.dim, dtype=complex if (self.is_complex or np.iscomplexobj(v)) else float
        )
        for dest, amp in self._compiled:
            out[dest] += amp * v
        return out

    def dense(self, max_dim: int = 1 << 13) -> np.ndarray:
        if self.dim > max_dim:
            raise ValueError(f"reduced dimension {self.dim} too large for dense")
        idx = np.arange(self.dim)
        mat = np.zeros(
            (self.dim, self.dim), dtype=complex if self.is_complex else float
        )
        for dest, amp in self._compiled:
            mat[dest, idx] += amp
        return mat

    def expand(self, v: np.ndarray) -> np.ndarray:
        """Lift a reduced vector to the full 2^n space (orthonormal embedding)."""
        full = np.zeros(
            1 << self.n_qubits, dtype=complex if np.iscomplexobj(v) else float
        )
        idx = np.arange(1 << self.n_qubits, dtype=np.uint64)
        red = np.zeros(1 << self.n_qubits, dtype=np.uint64)
        sign = np.ones(1 << self.n_qubits)
        for i, q in enumerate(self.free):
            red |= ((idx >> np.uint64(q)) & np.uint64(1)) << np.uint64(i)
        for reg, off, s in zip(self.registers, self._field_offsets, self.sector):
            k = len(reg)
            top = (idx >> np.uint64(reg[-1])) & np.uint64(1)
            bits = np.zeros_like(idx)
            for i, u in enumerate(reg[:-1]):
                bits |= ((idx >> np.uint64(u)) & np.uint64(1)) << np.uint64(i)
            canon = np.where(top == 1, bits ^ np.uint64((1 << (k - 1)) - 1), bits)
            red |= canon << np.uint64(off)
            if s == -1:
                sign = sign * np.where(top == 1, -1.0, 1.0)
        scale = 1.0 / np.sqrt(2.0 ** len(self.registers))
        full = sign * v[red] * scale
        return full


def sector_labels(sector: Sequence[int]) -> str:
    return "".join("+" if s == 1 else "-" for s in sector)


def all_sectors(n_registers: int):
    for bits in range(1 << n_registers):
        yield tuple(
            1 if not (bits >> i) & 1 else -1 for i in range(n_registers)
        )


# -- gadget verification --------------------------------------------------------


@dataclass(frozen=True)
class Theorem1Hypotheses:
    """Per-round diagnostics for the gadget theorem's assumptions."""

    delta: float
    lambda_star: float
    lambda_plus: float
    lambda_minus: float
    v_norm_bound: float
    satisfied: bool


@dataclass
class SpectrumReport:
    """Sector-filtered gadget spectrum compared index-wise with the target."""

    eigenvalues: tuple[float, ...]
    target_eigenvalues: tuple[float, ...]
    errors: tuple[float, ...]
    max_error: float
    sector_labels: tuple[str, ...] | None
    delta_used: tuple[float, ...]
    eps_target: float | None
    passed: bool | None
    theorem1: tuple[Theorem1Hypotheses, ...]
    method: str
    other_sectors: dict[str, tuple[float, ...]] = field(default_factory=dict)

    def to_text(self) -> str:
        lines = ["spectrum comparison (Hartree)"]
        lines.append(f"method: {self.method}")
        lines.append(f"deltas: {', '.join(f'{d:.12g}' for d in self.delta_used)}")
        for rnd, hyp in enumerate(self.theorem1):
            status = "ok" if hyp.satisfied else "WARNING ||V|| bound exceeds Delta/2"
            lines.append(
                f"round {rnd}: delta={hyp.delta:.12g} cutoff={hyp.lambda_star:.12g} "
                f"||V||<= {hyp.v_norm_bound:.12g} [{status}]"
            )
        lines.append(f"{'idx':>4} {'gadget':>18} {'target':>18} {'error':>12}")
        for i, (ev, tv, er) in enumerate(
            zip(self.eigenvalues, self.target_eigenvalues, self.errors)
        ):
            lines.append(f"{i:>4} {ev:>18.12g} {tv:>18.12g} {er:>12.6g}")
        lines.append(f"max error: {self.max_error:.12g}")
        if self.eps_target is not None:
            verdict = "PASS" if self.passed else "FAIL"
            lines.append(f"target eps: {self.eps_target:.12g} -> {verdict}")
        return "\n".join(lines) + "\n"

    def to_kv(self) -> str:
        lines = [
            f"method {self.method}",
            f"count {len(self.eigenvalues)}",
            f"max_error {self.max_error!r}",
        ]
        if self.eps_target is not None:
            lines.append(f"eps_target {self.eps_target!r}")
            lines.append(f"passed {int(bool(self.passed))}")
        for i, d in enumerate(self.delta_used):
            lines.append(f"delta {i} {d!r}")
        for rnd, hyp in enumerate(self.theorem1):
            lines.append(f"round {rnd} v_norm_bound {hyp.v_norm_bound!r}")
            lines.append(f"round {rnd} hypothesis_satisfied {int(hyp.satisfied)}")
        for i, (ev, tv, er) in enumerate(
            zip(self.eigenvalues, self.target_eigenvalues, self.errors)
        ):
            label = self.sector_labels[i] if self.sector_labels else "?"
            lines.append(f"eig {i} {ev!r} {tv!r} {er!r} {label}")
        return "\n".join(lines) + "\n"


def flip_expectations(
    vec: np.ndarray, registers: Sequence[Sequence[int]], n_qubits: int
) -> list[float]:
    """<psi| (|0..0><1..1| + h.c.) |psi> per register (diagnostic estimator)."""
    out = []
    idx = np.arange(1 << n_qubits, dtype=np.uint64)
    for reg in registers:
        bits = np.uint64(sum(1 << u for u in reg))
        vals = idx & bits
        lo = vals == 0
        pair = idx[lo] ^ bits
        overlap = 2.0 * np.real(
            np.einsum("i,i->", vec[lo].conj(), vec[pair.astype(np.int64)])
        )
        out.append(float(overlap))
    return out


def _theorem1(g: GadgetHamiltonian) -> tuple[Theorem1Hypotheses, ...]:
    return tuple(
        Theorem1Hypotheses(
            delta=rnd.delta,
            lambda_star=rnd.lambda_star,
            lambda_plus=rnd.lambda_plus,
            lambda_minus=rnd.lambda_minus,
            v_norm_bound=rnd.v_norm_bound,
            satisfied=rnd.hypothesis_satisfied,
        )
        for rnd in g.rounds
    )


def verify_gadget(
    target: PauliSum,
    g: GadgetHamiltonian,
    eps: float | None = None,
    count: int | None = None,
    max_dense_qubits: int = MAX_DENSE_QUBITS,
    lanczos_iters: int = 400,
    lanczos_tol: float = 1e-9,
    seed: int = 7,
) -> SpectrumReport:
    """Compare the gadget's all-+ sector spectrum with the target's.

    Dense route diagonalizes every flip sector of the reduced operator and
    reports the complementary sectors alongside; the Lanczos route targets the
    all-+ sector ground band only.
    """
    target_vals = np.sort(eig_dense(target, max_qubits=max_dense_qubits))
    registers = g.registers
    n = g.n_qubits
    if count is None:
        count = len(target_vals)
    count = min(count, len(target_vals))
    theorem1 = _theorem1(g)

    if not registers:
        vals = np.sort(eig_dense(g.hamiltonian, max_qubits=max_dense_qubits))
        filtered = vals[:count]
        labels = tuple("" for _ in range(count))
        method = "dense"
        others: dict[str, tuple[float, ...]] = {}
    elif n - len(registers) <= max_dense_qubits - 1 and n <= 2 * max_dense_qubits:
        others = {}
        filtered = None
        for sector in all_sectors(len(registers)):
            op = SectorOperator(g.hamiltonian, registers, sector)
            mat = op.dense()
            if np.iscomplexobj(mat) and np.abs(mat.imag).max() < 1e-14:
                mat = mat.real
            vals = np.sort(np.linalg.eigvalsh(mat))
            if all(s == 1 for s in sector):
                filtered = vals[:count]
            else:
                others[sector_labels(sector)] = tuple(
                    float(x) for x in vals[: min(count, 8)]
                )
        labels = tuple(sector_labels((1,) * len(registers)) for _ in range(count))
        method = "dense-sector"
    else:
        op = SectorOperator(g.hamiltonian, registers)
        result = lanczos_lowest(
            op,
            op.dim,
            m=count,
            max_iters=lanczos_iters,
            tol=lanczos_tol,
            seed=seed,
            is_complex=op.is_complex,
        )
        if not result.converged:
            raise ValueError(
                f"Lanczos did not converge to {count} eigenvalues in "
                f"{result.iterations} iterations (residuals {result.residuals})"
            )
        filtered = result.eigenvalues
        labels = tuple(sector_labels((1,) * len(registers)) for _ in range(count))
        method = "lanczos-sector"
        others = {}

    filtered = np.asarray(filtered[:count])
    errors = np.abs(filtered - target_vals[: len(filtered)])
    max_error = float(errors.max()) if len(errors) else 0.0
    return SpectrumReport(
        eigenvalues=tuple(float(x) for x in filtered),
        target_eigenvalues=tuple(float(x) for x in target_vals[: len(filtered)]),
        errors=tuple(float(x) for x in errors),
        max_error=max_error,
        sector_labels=labels,
        delta_used=tuple(r.delta for r in g.rounds),
        eps_target=eps,
        passed=(max_error <= eps) if eps is not None else None,
        theorem1=theorem1,
        method=method,
        other_sectors=others,
    )


# -- sweeps ----------------------------------------------------------------------


@dataclass
class SweepRow:
    parameter: float
    delta_min: float
    eps_obs: float


def _gadget_error(
    term: PauliSum, delta: float, allowed, count: int | None
) -> float:
    from .gadgets import gadgetize

    # Sweeps study a single gadget round; residual 3-local couplings from
    # 2-local factors stay in place rather than triggering further rounds.
    g = gadgetize(term, [delta], allowed=allowed, require_complete=False)
    if len(g.rounds) != 1:
        raise ValueError("sweep term must gadgetize in exactly one round")
    report = verify_gadget(term, g, count=count)
    return report.max_error


def delta_min_bisect(
    term: PauliSum,
    eps: float,
    allowed=None,
    delta_lo: float = 1.0,
    delta_hi_cap: float = 1e12,
    iters: int = 60,
    count: int | None = None,
) -> tuple[float, float]:
    """Smallest Delta with eps_obs <= eps, by bracketed log-space bisection.

    Returns (delta_min, eps_obs at delta_min).  Raises when no Delta up to the
    cap achieves the tolerance.
    """
    from .shaping import ALL_CLASSES

    allowed = ALL_CLASSES if allowed is None else allowed
    hi = delta_lo
    err_hi = _gadget_error(term, hi, allowed, count)
    scanned = [hi]
    while err_hi > eps:
        hi *= 10.0
        if hi > delta_hi_cap:
            raise ValueError(
                f"bisection bracket failure: eps_obs > {eps} for all Delta in "
                f"{scanned[0]:g}..{scanned[-1]:g}"
            )
        err_hi = _gadget_error(term, hi, allowed, count)
        scanned.append(hi)
    if hi == delta_lo:
        return hi, err_hi
    lo = hi / 10.0
    log_lo, log_hi = np.log10(lo), np.log10(hi)
    for _ in range(iters):
        mid = 0.5 * (log_lo + log_hi)
        err = _gadget_error(term, 10.0**mid, allowed, count)
        if err <= eps:
            log_hi = mid
        else:
            log_lo = mid
    delta_min = 10.0**log_hi
    return float(delta_min), _gadget_error(term, delta_min, allowed, count)


def delta_sweep(
    term: PauliSum,
    alphas: Sequence[float] | None = None,
    eps_values: Sequence[float] | None = None,
    eps: float = 0.01,
    alpha: float = 10.0,
    count: int | None = None,
) -> list[SweepRow]:
    """Minimum gap for a one-round gadget, swept over coupling strength at
    fixed tolerance or over tolerance at fixed strength."""
    if (alphas is None) == (eps_values is None):
        raise ValueError("sweep exactly one of alphas or eps_values")
    rows = []
    if alphas is not None:
        base = term
        for a in alphas:
            if a == 0.0:
                rows.append(SweepRow(0.0, 1.0, 0.0))
                continue
            scaled = base.scale(a)
            dmin, eobs = delta_min_bisect(scaled, eps, count=count)
            rows.append(SweepRow(float(a), dmin, eobs))
    else:
        scaled = term.scale(alpha)
        for e in eps_values:
            dmin, eobs = delta_min_bisect(scaled, float(e), count=count)
            rows.append(SweepRow(float(e), dmin, eobs))
    return rows


def error_scaling(
    term: PauliSum,
    deltas: Sequence[float],
    allowed=None,
    count: int | None = None,
) -> tuple[list[tuple[float, float]], float]:
    """(Delta, eps_obs) pairs over a grid plus the fitted log-log slope."""
    from .shaping import ALL_CLASSES

    allowed = ALL_CLASSES if allowed is None else allowed
    pairs = []
    for d in deltas:
        pairs.append((float(d), _gadget_error(term, float(d), allowed, count)))
    xs = np.log10([p[0] for p in pairs])
    ys = np.log10([max(p[1], 1e-300) for p in pairs])
    slope = float(np.polyfit(xs, ys, 1)[0])
    return pairs, slope
