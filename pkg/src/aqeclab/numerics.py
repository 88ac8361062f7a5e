"""Dense complex linear algebra and quantum-information primitives.

Conventions used throughout the package:

* qubit 0 is the most significant bit of the amplitude index, so
  ``amplitudes.reshape([2] * n)`` puts qubit ``q`` on axis ``q``;
* all entropies and logarithms are base 2;
* every Hermitian decomposition symmetrizes its input as (M + M†)/2 first.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

HERMITICITY_TOL = 1e-9
NEGATIVITY_TOL = 1e-8
ENTROPY_CUTOFF = 1e-12


def hermitize(m: np.ndarray) -> np.ndarray:
    """Return the Hermitian part (M + M†)/2."""
    return (m + m.conj().T) / 2


def _as_matrix(state) -> np.ndarray:
    """Accept a MixedState, a PureState or a plain square ndarray."""
    if isinstance(state, MixedState):
        return state.matrix
    if isinstance(state, PureState):
        return np.outer(state.amplitudes, state.amplitudes.conj())
    m = np.asarray(state)
    if m.ndim == 1:
        return np.outer(m, m.conj())
    return m


def _checked_spectrum(m: np.ndarray, negativity_tol: float = NEGATIVITY_TOL):
    """Eigen-decompose hermitize(m); clamp eigenvalues in [-tol, 0) to 0.

    Raises on negativity beyond the tolerance, which indicates an invalid
    state rather than round-off.
    """
    w, v = np.linalg.eigh(hermitize(m))
    if w.min() < -negativity_tol:
        raise ValueError(f"matrix is not PSD: min eigenvalue {w.min():.3e}")
    return np.clip(w, 0.0, None), v


@dataclass
class PureState:
    """State vector on ``n`` qubits with unit 2-norm."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).ravel()
        if self.amplitudes.size != 2**self.n:
            raise ValueError(f"expected 2^{self.n} amplitudes, got {self.amplitudes.size}")
        norm = np.linalg.norm(self.amplitudes)
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"state norm {norm} deviates from 1 beyond 1e-9")

    def density(self) -> "MixedState":
        return MixedState(self.n, np.outer(self.amplitudes, self.amplitudes.conj()))

    def overlap(self, other: "PureState") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass
class MixedState:
    """Density matrix on ``n`` qubits: Hermitian, unit trace, PSD."""

    n: int
    matrix: np.ndarray
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        dim = 2**self.n
        if self.matrix.shape != (dim, dim):
            raise ValueError(f"expected {dim}x{dim} matrix, got {self.matrix.shape}")
        if self.validate:
            if np.abs(self.matrix - self.matrix.conj().T).max() > HERMITICITY_TOL:
                raise ValueError("matrix is not Hermitian within 1e-9")
            tr = self.matrix.trace()
            if abs(tr - 1.0) > 1e-9:
                raise ValueError(f"trace {tr} deviates from 1 beyond 1e-9")
            wmin = np.linalg.eigvalsh(hermitize(self.matrix)).min()
            if wmin < -NEGATIVITY_TOL:
                raise ValueError(f"min eigenvalue {wmin:.3e} below -1e-8")


def _vector_partial_trace(vec: np.ndarray, n: int, keep: tuple[int, ...]) -> np.ndarray:
    rest = [q for q in range(n) if q not in keep]
    psi = vec.reshape([2] * n).transpose(list(keep) + rest).reshape(2 ** len(keep), -1)
    return psi @ psi.conj().T


def _matrix_partial_trace(mat: np.ndarray, n: int, keep: tuple[int, ...]) -> np.ndarray:
    rest = [q for q in range(n) if q not in keep]
    k, t = len(keep), len(rest)
    perm = list(keep) + rest
    m = mat.reshape([2] * (2 * n))
    m = m.transpose(perm + [n + p for p in perm])
    m = m.reshape(2**k, 2**t, 2**k, 2**t)
    return np.einsum("aibi->ab", m)


def partial_trace(state, keep) -> MixedState:
    """Reduce a state to the qubits in ``keep`` (output ordered by sorted keep)."""
    keep = tuple(sorted(set(int(q) for q in keep)))
    if isinstance(state, PureState):
        n, data, pure = state.n, state.amplitudes, True
    elif isinstance(state, MixedState):
        n, data, pure = state.n, state.matrix, False
    else:
        data = np.asarray(state)
        pure = data.ndim == 1
        n = int(round(np.log2(data.shape[0])))
    if keep and (keep[0] < 0 or keep[-1] >= n):
        raise IndexError(f"keep indices {keep} out of range for {n} qubits")
    if pure:
        red = _vector_partial_trace(data, n, keep)
    else:
        red = _matrix_partial_trace(data, n, keep)
    return MixedState(len(keep), red, validate=False)


def cross_partial_trace(vec_a: np.ndarray, vec_b: np.ndarray, n: int, keep) -> np.ndarray:
    """tr over the complement of keep of |a><b| for state vectors a, b."""
    keep = tuple(sorted(set(int(q) for q in keep)))
    rest = [q for q in range(n) if q not in keep]
    perm = list(keep) + rest
    a = vec_a.reshape([2] * n).transpose(perm).reshape(2 ** len(keep), -1)
    b = vec_b.reshape([2] * n).transpose(perm).reshape(2 ** len(keep), -1)
    return a @ b.conj().T


def trace_norm(m: np.ndarray) -> float:
    """Trace norm of a Hermitian matrix: sum of |eigenvalues|."""
    return float(np.abs(np.linalg.eigvalsh(hermitize(np.asarray(m, dtype=complex)))).sum())


def trace_norm_distance(a, b) -> float:
    """||a - b||_1 for states of equal dimension; lies in [0, 2]."""
    ma, mb = _as_matrix(a), _as_matrix(b)
    if ma.shape != mb.shape:
        raise ValueError(f"dimension mismatch: {ma.shape} vs {mb.shape}")
    return trace_norm(ma - mb)


def fidelity(a, b) -> float:
    """Uhlmann fidelity f = ||sqrt(a) sqrt(b)||_1 = Tr sqrt(sqrt(a) b sqrt(a))."""
    ma, mb = _as_matrix(a), _as_matrix(b)
    if ma.shape != mb.shape:
        raise ValueError(f"dimension mismatch: {ma.shape} vs {mb.shape}")
    wa, va = _checked_spectrum(ma)
    sqrt_a = (va * np.sqrt(wa)) @ va.conj().T
    w, _ = _checked_spectrum(sqrt_a @ mb @ sqrt_a, negativity_tol=1e-7)
    return float(min(np.sqrt(w).sum(), 1.0))


def purified_distance(a, b) -> float:
    """P = sqrt(1 - f^2), with f the Uhlmann fidelity."""
    f = fidelity(a, b)
    return float(np.sqrt(max(0.0, 1.0 - f * f)))


def von_neumann_entropy(state) -> float:
    """Entropy in bits, -sum(lam * log2 lam) over the clamped spectrum."""
    w, _ = _checked_spectrum(_as_matrix(state))
    w = w[w > ENTROPY_CUTOFF]
    return float(-(w * np.log2(w)).sum())


def mutual_information(rho_ab: np.ndarray, dim_a: int, dim_b: int) -> float:
    """I(A:B) = S(A) + S(B) - S(AB) for a bipartite density matrix."""
    m = np.asarray(rho_ab, dtype=complex).reshape(dim_a, dim_b, dim_a, dim_b)
    rho_a = np.einsum("aibi->ab", m)
    rho_b = np.einsum("iaib->ab", m)
    return von_neumann_entropy(rho_a) + von_neumann_entropy(rho_b) - von_neumann_entropy(rho_ab)


# ---------------------------------------------------------------------------
# sparse computational-basis superpositions
# ---------------------------------------------------------------------------


class SectorState:
    """Superposition over few computational-basis terms on a large register.

    Each term is described by the tuple of occupied (``|1>``) sites; every
    other site is ``|0>``. This covers single-excitation-sector states
    (occupation window + all-ones pattern) as well as sparse loop
    superpositions, and scales to n ~ 1e4 where dense vectors do not.
    """

    def __init__(self, n: int, terms: dict[tuple[int, ...], complex], normalize: bool = False):
        self.n = int(n)
        clean: dict[tuple[int, ...], complex] = {}
        for support, coeff in terms.items():
            key = tuple(sorted(int(s) for s in support))
            if len(set(key)) != len(key):
                raise ValueError(f"duplicate sites in support {support}")
            if key and (key[0] < 0 or key[-1] >= self.n):
                raise IndexError(f"support {key} out of range for n={self.n}")
            if key in clean:
                raise ValueError(f"basis terms not pairwise distinct: {key}")
            clean[key] = complex(coeff)
        self.terms = clean
        norm = np.sqrt(sum(abs(c) ** 2 for c in self.terms.values()))
        if normalize:
            if norm == 0:
                raise ValueError("cannot normalize the zero state")
            self.terms = {k: c / norm for k, c in self.terms.items()}
        elif abs(norm - 1.0) > 1e-9:
            raise ValueError(f"state norm {norm} deviates from 1 beyond 1e-9")

    def inner(self, other: "SectorState") -> complex:
        """<self|other> via matching supports."""
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        small, big = (self.terms, other.terms) if len(self.terms) < len(other.terms) else (other.terms, self.terms)
        acc = 0.0 + 0.0j
        if small is self.terms:
            for key, c in small.items():
                if key in big:
                    acc += np.conj(c) * big[key]
        else:
            for key, c in small.items():
                if key in big:
                    acc += np.conj(big[key]) * c
        return complex(acc)

    def translated(self, shift: int = 1) -> "SectorState":
        """Lattice translation moving site s to s - shift (ring geometry)."""
        return SectorState(
            self.n,
            {tuple(sorted((s - shift) % self.n for s in key)): c for key, c in self.terms.items()},
        )

    def to_pure(self) -> PureState:
        """Dense expansion; guarded to n <= 20."""
        if self.n > 20:
            raise ValueError(f"dense expansion refused for n={self.n} > 20")
        vec = np.zeros(2**self.n, dtype=complex)
        for key, c in self.terms.items():
            idx = 0
            for s in key:
                idx |= 1 << (self.n - 1 - s)
            vec[idx] += c
        return PureState(self.n, vec)


def sector_cross_reduced(
    a: SectorState,
    b: SectorState,
    region,
    patterns: list[tuple[int, ...]] | None = None,
):
    """tr over the complement of ``region`` of |a><b| in a compact pattern basis.

    Returns (patterns, matrix) where patterns[i] is the tuple of occupied
    region sites of local basis vector i. Terms contribute coherences only
    when their supports agree outside the region.
    """
    region_set = frozenset(int(q) for q in region)
    if patterns is None:
        pats: dict[tuple[int, ...], int] = {}
        for st in (a, b):
            for key in st.terms:
                inside = tuple(s for s in key if s in region_set)
                pats.setdefault(inside, len(pats))
    else:
        pats = {p: i for i, p in enumerate(patterns)}

    def grouped(state: SectorState):
        groups: dict[tuple[int, ...], list[tuple[int, complex]]] = {}
        for key, c in state.terms.items():
            inside = tuple(s for s in key if s in region_set)
            outside = tuple(s for s in key if s not in region_set)
            if inside not in pats:
                raise ValueError(f"pattern {inside} missing from supplied basis")
            groups.setdefault(outside, []).append((pats[inside], c))
        return groups

    ga, gb = grouped(a), grouped(b)
    dim = len(pats)
    out = np.zeros((dim, dim), dtype=complex)
    for outside, items_a in ga.items():
        items_b = gb.get(outside)
        if not items_b:
            continue
        va = np.zeros(dim, dtype=complex)
        vb = np.zeros(dim, dtype=complex)
        for idx, c in items_a:
            va[idx] += c
        for idx, c in items_b:
            vb[idx] += c
        out += np.outer(va, vb.conj())
    ordered = sorted(pats, key=pats.get)
    return ordered, out


def sector_reduced_dense(state: SectorState, region) -> MixedState:
    """Reduced state embedded in the full 2^|region| computational basis."""
    region = tuple(sorted(set(int(q) for q in region)))
    patterns, mat = sector_cross_reduced(state, state, region)
    r = len(region)
    pos = {q: i for i, q in enumerate(region)}
    dim = 2**r
    out = np.zeros((dim, dim), dtype=complex)
    idxs = []
    for pat in patterns:
        idx = 0
        for s in pat:
            idx |= 1 << (r - 1 - pos[s])
        idxs.append(idx)
    for i, ii in enumerate(idxs):
        for j, jj in enumerate(idxs):
            out[ii, jj] += mat[i, j]
    return MixedState(r, out, validate=False)


# ---------------------------------------------------------------------------
# random objects and small operator helpers
# ---------------------------------------------------------------------------


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix."""
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def random_pure_state(n: int, rng: np.random.Generator) -> PureState:
    vec = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return PureState(n, vec / np.linalg.norm(vec))


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    return m / m.trace()


def embed_operator(op: np.ndarray, sites, n: int) -> np.ndarray:
    """Embed an operator on ``sites`` (in the given order) into n qubits."""
    sites = [int(s) for s in sites]
    k = len(sites)
    rest = [q for q in range(n) if q not in sites]
    full = np.kron(op, np.eye(2 ** (n - k)))
    perm = sites + rest
    inv = np.argsort(perm)
    t = full.reshape([2] * (2 * n))
    t = t.transpose(list(inv) + [n + p for p in inv])
    return t.reshape(2**n, 2**n)


def apply_two_qubit_gate(vec: np.ndarray, gate: np.ndarray, i: int, j: int, n: int) -> np.ndarray:
    """Apply a 4x4 gate to qubits (i, j) of a state vector."""
    perm = [i, j] + [q for q in range(n) if q not in (i, j)]
    inv = np.argsort(perm)
    psi = vec.reshape([2] * n).transpose(perm).reshape(4, -1)
    psi = gate @ psi
    return psi.reshape([2] * n).transpose(inv).ravel()
