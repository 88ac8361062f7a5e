"""Low-energy code of the critical transverse-field Ising chain.

H = -sum_i Z_i Z_{i+1} - sum_i X_i on a periodic ring (critical point).
The lowest 2^k eigenstates form the code basis; eigenpairs come from a
matrix-free Lanczos solve, with deterministic re-orthonormalization inside
degenerate blocks.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse.linalg as spla

from ..numerics import PureState
from .base import CodeSpace


def _diagonal_zz(n: int) -> np.ndarray:
    """Diagonal of -sum_i Z_i Z_{i+1} (periodic) over computational states."""
    idx = np.arange(2**n, dtype=np.uint32)
    diag = np.zeros(2**n)
    for i in range(n):
        j = (i + 1) % n
        bi = (idx >> np.uint32(n - 1 - i)) & 1
        bj = (idx >> np.uint32(n - 1 - j)) & 1
        diag -= np.where(bi == bj, 1.0, -1.0)
    return diag


def tfim_hamiltonian_operator(n: int) -> spla.LinearOperator:
    dim = 2**n
    diag = _diagonal_zz(n)
    flips = [np.arange(dim, dtype=np.uint32) ^ np.uint32(1 << (n - 1 - i)) for i in range(n)]

    def matvec(v: np.ndarray) -> np.ndarray:
        out = diag * v
        for flip in flips:
            out -= v[flip]
        return out

    return spla.LinearOperator((dim, dim), matvec=matvec, dtype=float)


def tfim_spectrum(n: int, levels: int) -> tuple[np.ndarray, np.ndarray]:
    """Lowest eigenpairs of the critical chain, residuals <= 1e-8."""
    if n > 16:
        raise ValueError(f"dense-vector diagonalization refused for n={n} > 16")
    op = tfim_hamiltonian_operator(n)
    extra = min(2**n - 2, levels + 4)
    vals, vecs = spla.eigsh(op, k=extra, which="SA", tol=0, maxiter=100000)
    order = np.argsort(vals)
    vals, vecs = vals[order], vecs[:, order]
    for i in range(levels):
        residual = np.linalg.norm(op.matvec(vecs[:, i]) - vals[i] * vecs[:, i])
        if residual > 1e-8:
            raise RuntimeError(f"eigenpair {i} residual {residual:.2e} exceeds 1e-8")
    return vals[:levels], vecs[:, :levels]


def _deterministic_block_basis(vals: np.ndarray, vecs: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """QR inside degenerate blocks, then a largest-component phase fix."""
    out = vecs.copy()
    start = 0
    while start < len(vals):
        stop = start + 1
        while stop < len(vals) and vals[stop] - vals[start] < tol:
            stop += 1
        if stop - start > 1:
            q, _ = np.linalg.qr(out[:, start:stop])
            out[:, start:stop] = q
        start = stop
    for i in range(out.shape[1]):
        idx = int(np.argmax(np.abs(out[:, i])))
        phase = out[idx, i] / abs(out[idx, i])
        out[:, i] = out[:, i] / phase
    return out


def tfim_low_energy_code(n: int, levels: int = 2) -> CodeSpace:
    """Code spanned by the ``levels`` lowest eigenstates of the critical chain."""
    if levels < 1 or levels > 2**n:
        raise ValueError("levels out of range")
    vals, vecs = tfim_spectrum(n, levels)
    vecs = _deterministic_block_basis(vals, vecs)
    basis = [PureState(n, vecs[:, i].astype(complex)) for i in range(levels)]
    return CodeSpace(
        n,
        basis,
        "tfim",
        {
            "n": n,
            "levels": levels,
            "energies": tuple(float(v) for v in vals),
            "degeneracy_rule": "qr-block+phase-fix",
        },
        symmetry="translation",
    )


def free_fermion_ground_energy(n: int) -> float:
    """Exact ground energy of the critical chain via the fermionic solution.

    With H = -sum ZZ - sum X at the critical point, single-particle energies
    are eps(k) = 2 sqrt(2 + 2 cos k); the ground state lives in the
    even-parity (antiperiodic) sector with k = (2j+1) pi / n.
    """
    ks = (2 * np.arange(n) + 1) * np.pi / n
    return float(-np.sum(np.sqrt(2.0 + 2.0 * np.cos(ks))))
