"""Common code-space container and generic constructors."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..geometry import AdjacencyGraph, Region
from ..numerics import MixedState, PureState, SectorState, haar_unitary

ORTHONORMALITY_TOL = 1e-9
DENSE_QUBIT_LIMIT = 20


@dataclass
class CodeSpace:
    """Orthonormal basis of a code subspace of an n-qubit register.

    ``basis`` holds PureState or SectorState entries; lazy families (large
    momentum codes) keep ``basis=None`` and provide ``basis_state``. The
    basis size M need not be a power of two (e.g. full momentum codes have
    M = n); ``k = log2(M)`` is reported as a float in that case.
    """

    n: int
    basis: list | None
    family: str
    params: dict = field(default_factory=dict)
    symmetry: str | None = None  # None | 'permutation' | 'translation'
    dim_override: int | None = None
    basis_fn: object = None  # callable i -> state, for lazy families

    def __post_init__(self):
        if self.basis is None and self.dim_override is None:
            raise ValueError("lazy code spaces must declare dim_override")
        if self.basis is not None and self.dim() > 2**self.n:
            raise ValueError("code dimension exceeds the physical space")

    def dim(self) -> int:
        return self.dim_override if self.basis is None else len(self.basis)

    @property
    def k(self) -> float:
        return math.log2(self.dim())

    def basis_state(self, i: int):
        if self.basis is not None:
            return self.basis[i]
        if self.basis_fn is not None:
            return self.basis_fn(i)
        raise NotImplementedError(f"{self.family} does not materialize basis states")

    def is_dense(self) -> bool:
        return self.basis is not None and all(isinstance(b, PureState) for b in self.basis)

    def is_sector(self) -> bool:
        return self.basis is not None and all(isinstance(b, SectorState) for b in self.basis)

    def encoder(self) -> np.ndarray:
        """Isometry V (2^n x M) whose columns are the basis states."""
        if not self.is_dense():
            raise ValueError(f"{self.family} has no dense encoder")
        return np.column_stack([b.amplitudes for b in self.basis])

    def code_state(self, coords: np.ndarray) -> PureState:
        """Physical state for logical coordinates (dense codes)."""
        coords = np.asarray(coords, dtype=complex).ravel()
        if coords.size != self.dim():
            raise ValueError(f"expected {self.dim()} coordinates")
        coords = coords / np.linalg.norm(coords)
        return PureState(self.n, self.encoder() @ coords)

    def id_string(self) -> str:
        pieces = [f"{key}={val}" for key, val in sorted(self.params.items())]
        return f"{self.family}({', '.join(pieces)})" if pieces else self.family

    def validate_orthonormality(self, rng: np.random.Generator | None = None, samples: int = 200) -> float:
        """Max |<i|j> - delta_ij| over all pairs (or a random sample for big M)."""
        m = self.dim()
        if self.basis is None:
            raise NotImplementedError("lazy families validate analytically")
        pairs = (
            [(i, j) for i in range(m) for j in range(i, m)]
            if m * (m + 1) // 2 <= samples or rng is None
            else [tuple(sorted(rng.integers(0, m, size=2))) for _ in range(samples)]
        )
        worst = 0.0
        for i, j in pairs:
            a, b = self.basis[i], self.basis[j]
            ov = a.overlap(b) if isinstance(a, PureState) else a.inner(b)
            worst = max(worst, abs(ov - (1.0 if i == j else 0.0)))
        if worst > ORTHONORMALITY_TOL:
            raise ValueError(f"basis not orthonormal: max deviation {worst:.3e}")
        return worst


def normalize_coords(coords: np.ndarray) -> np.ndarray:
    coords = np.asarray(coords, dtype=complex).ravel()
    norm = np.linalg.norm(coords)
    if norm == 0:
        raise ValueError("zero coordinate vector")
    return coords / norm


def maximally_mixed(code: CodeSpace) -> MixedState:
    """Gamma = (1/M) sum_i |psi_i><psi_i| as a dense density matrix."""
    if code.n > DENSE_QUBIT_LIMIT:
        raise ValueError(f"dense Gamma refused for n={code.n} > {DENSE_QUBIT_LIMIT}")
    if code.basis is None:
        raise NotImplementedError(f"{code.family} is lazy; use reduced_gamma on regions")
    dim = 2**code.n
    out = np.zeros((dim, dim), dtype=complex)
    for b in code.basis:
        vec = b.amplitudes if isinstance(b, PureState) else b.to_pure().amplitudes
        out += np.outer(vec, vec.conj())
    return MixedState(code.n, out / code.dim(), validate=False)


def random_code(n: int, k: int, rng: np.random.Generator) -> CodeSpace:
    """Haar-random isometric ((n, k)) code (property tests and sweeps)."""
    u = haar_unitary(2**n, rng)
    basis = [PureState(n, u[:, i]) for i in range(2**k)]
    return CodeSpace(n, basis, "random", {"n": n, "k": k})


def redundant_code(k: int, n: int) -> CodeSpace:
    """Computational logical block padded with a fixed |1...1> garbage pattern.

    The garbage qubits carry no logical information, so any region avoiding
    the first k qubits has identical marginals across the code space.
    """
    if k >= n:
        raise ValueError(f"redundant encoding needs k < n (got k={k}, n={n})")
    basis = []
    pad = (1 << (n - k)) - 1
    for logical in range(2**k):
        vec = np.zeros(2**n, dtype=complex)
        vec[(logical << (n - k)) | pad] = 1.0
        basis.append(PureState(n, vec))
    return CodeSpace(n, basis, "redundant", {"n": n, "k": k}, symmetry=None)


def rotated_basis(code: CodeSpace, unitary: np.ndarray) -> CodeSpace:
    """Same subspace with basis mixed by a logical unitary (dense codes)."""
    v = code.encoder() @ unitary
    basis = [PureState(code.n, v[:, i]) for i in range(code.dim())]
    return CodeSpace(code.n, basis, code.family, dict(code.params), symmetry=code.symmetry)


def logical_qubits_region(code: CodeSpace) -> Region:
    if code.family != "redundant":
        raise ValueError("logical block layout is only defined for redundant codes")
    return Region(range(int(code.params["k"])))
