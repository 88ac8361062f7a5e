"""Ferromagnetic Heisenberg chain ground-space codes.

Ground states |h_m^n> are uniform superpositions of all n-spin basis states
with total magnetization m (Dicke states up to relabeling), for
m = -n, -n+2, ..., n. Their d-qubit reduced states are diagonal in the
{|h_r^d>} basis with exact hypergeometric weights, which is what makes
desk-scale scans at large n possible without any dense algebra.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations

import numpy as np

from ..numerics import MixedState, PureState
from .base import CodeSpace


def _check_parity(m: int, n: int):
    if (m + n) % 2 != 0 or abs(m) > n:
        raise ValueError(f"magnetization m={m} incompatible with n={n} spins")


def dicke_state(n: int, m: int) -> PureState:
    """|h_m^n>: uniform superposition over basis states with magnetization m."""
    _check_parity(m, n)
    ups = (n + m) // 2
    vec = np.zeros(2**n, dtype=complex)
    amp = 1.0 / math.sqrt(math.comb(n, ups))
    for positions in combinations(range(n), ups):
        idx = 0
        for p in positions:
            idx |= 1 << (n - 1 - p)
        vec[idx] = amp
    return PureState(n, vec)


def reduced_weights(m: int, n: int, d: int) -> np.ndarray:
    """Exact weights of |h_r^d><h_r^d| in the d-qubit reduced state of |h_m^n>.

    weight(r) = C(d, (d+r)/2) C(n-d, (n-d+m-r)/2) / C(n, (n+m)/2), indexed by
    r = -d, -d+2, ..., d. Exact integer arithmetic, so large n is safe.
    """
    _check_parity(m, n)
    if not (1 <= d <= n):
        raise ValueError(f"subsystem size d={d} out of range")
    total = math.comb(n, (n + m) // 2)
    out = []
    for r in range(-d, d + 1, 2):
        up_in = (d + r) // 2
        up_out_twice = n - d + m - r
        if up_out_twice % 2 != 0 or not (0 <= up_out_twice // 2 <= n - d):
            out.append(0.0)
            continue
        num = math.comb(d, up_in) * math.comb(n - d, up_out_twice // 2)
        out.append(float(Fraction(num, total)))
    return np.asarray(out)


def heisenberg_reduced(m: int, n: int, d: int) -> MixedState:
    """Exact d-qubit reduced density matrix of |h_m^n| as a dense state."""
    if d > 14:
        raise ValueError("dense reduced state refused for d > 14")
    weights = reduced_weights(m, n, d)
    dim = 2**d
    out = np.zeros((dim, dim), dtype=complex)
    for w, r in zip(weights, range(-d, d + 1, 2)):
        if w == 0.0:
            continue
        block = dicke_state(d, r).amplitudes
        out += w * np.outer(block, block.conj())
    return MixedState(d, out, validate=False)


def heisenberg_code_from(n: int, magnetizations) -> CodeSpace:
    """Code spanned by |h_m^n> for explicit magnetization values."""
    ms = tuple(sorted(int(m) for m in magnetizations))
    if len(set(ms)) != len(ms):
        raise ValueError("duplicate magnetization values")
    for m in ms:
        _check_parity(m, n)
    spacing = min((b - a for a, b in zip(ms, ms[1:])), default=2 * n)
    params = {"n": n, "magnetizations": ms, "spacing": spacing}
    if n <= 16:
        basis = [dicke_state(n, m) for m in ms]
        return CodeSpace(n, basis, "heisenberg", params, symmetry="permutation")
    return CodeSpace(
        n, None, "heisenberg", params, symmetry="permutation",
        dim_override=len(ms), basis_fn=lambda i: dicke_state(n, ms[i]),
    )


def heisenberg_code(n: int, m_max: int, spacing: int) -> CodeSpace:
    """Magnetization ladder m = -m_max, -m_max + spacing, ..., m_max.

    Every rung must satisfy m = n (mod 2), which forces an even spacing (and
    m_max = n mod 2). The off-diagonal-free reduction used by the analytic
    variance formula additionally needs spacing > 2d for the subsystem sizes
    of interest; that is checked at evaluation time, not here.
    """
    ms = tuple(range(-m_max, m_max + 1, spacing))
    if ms[-1] != m_max:
        raise ValueError(f"spacing {spacing} does not reach +m_max from -m_max")
    return heisenberg_code_from(n, ms)


def variance_diagonal(code: CodeSpace, d: int) -> tuple[float, int]:
    """max_m ||rho_d(m, n) - Gamma_d||_1 via the exact diagonal weights.

    Valid whenever the magnetization spacing exceeds 2d, so that d-qubit
    operators cannot connect different magnetization sectors and logical
    off-diagonal blocks reduce to zero. Returns (value, argmax m).
    """
    n = code.params["n"]
    ms = code.params["magnetizations"]
    if len(ms) > 1 and code.params["spacing"] <= 2 * d:
        raise ValueError(
            f"spacing {code.params['spacing']} <= 2d={2 * d}: off-diagonal blocks survive"
        )
    table = np.stack([reduced_weights(m, n, d) for m in ms])
    gamma = table.mean(axis=0)
    dist = np.abs(table - gamma).sum(axis=1)
    best = int(np.argmax(dist))
    return float(dist[best]), ms[best]
