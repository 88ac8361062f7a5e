"""Momentum codes: lattice-translation eigenstates of a single quasiparticle.

Basis states are generalized W-states on a ring of n sites,

    |W_{p,xi}> = n^{-1/2} sum_x e^{ipx} |x~>,   p = 2 pi m / n,

where |x~> carries a block of xi adjacent excitations starting at site x
(all-ones pattern). The full code uses all n momenta; fragments use small
momentum subsets (e.g. nearest-neighbor pairs). Everything here works in a
compact local pattern basis, so n ~ 1e4 is routine.
"""

from __future__ import annotations

import math

import numpy as np

from ..geometry import Region
from ..numerics import SectorState
from .base import CodeSpace

MATERIALIZE_LIMIT = 200_000  # n * M term budget for eager basis storage


def window_sites(n: int, x: int, xi: int) -> tuple[int, ...]:
    return tuple(sorted((x + off) % n for off in range(xi)))


def basis_sector_state(n: int, xi: int, m: int) -> SectorState:
    """|W_{p,xi}> with p = 2 pi m / n as a sparse sector state."""
    p = 2 * math.pi * m / n
    amp = 1.0 / math.sqrt(n)
    terms = {window_sites(n, x, xi): amp * np.exp(1j * p * x) for x in range(n)}
    return SectorState(n, terms)


def momentum_code(n: int, xi: int = 1, momenta=None) -> CodeSpace:
    """Code spanned by |W_{p,xi}> for the given momentum indices (default: all)."""
    if xi < 1:
        raise ValueError("quasiparticle size xi must be >= 1")
    if momenta is None:
        momenta = tuple(range(n))
    momenta = tuple(int(m) % n for m in momenta)
    if len(set(momenta)) != len(momenta):
        raise ValueError(f"duplicate momenta in {momenta}")
    params = {"n": n, "xi": xi, "momenta": momenta}
    full = len(momenta) == n
    if full:
        params["full"] = True

    def make(i: int, _n=n, _xi=xi, _ms=momenta) -> SectorState:
        return basis_sector_state(_n, _xi, _ms[i])

    if n * len(momenta) <= MATERIALIZE_LIMIT:
        basis = [make(i) for i in range(len(momenta))]
        return CodeSpace(n, basis, "momentum", params, symmetry="translation")
    return CodeSpace(
        n, None, "momentum", params, symmetry="translation",
        dim_override=len(momenta), basis_fn=make,
    )


def pair_fragment(n: int, m: int, xi: int = 1) -> CodeSpace:
    """k=1 fragment spanned by the nearest-momentum pair (m, m+1)."""
    return momentum_code(n, xi, (m, (m + 1) % n))


# ---------------------------------------------------------------------------
# analytic local structure
#
# On a region R, a window either lies fully inside R (coherent block), hits
# the boundary (diagonal only: its outside pattern is unique), or misses R
# entirely (contributes to the no-excitation pattern). All reduced objects
# below live in the pattern basis {inside patterns} U {()}.
# ---------------------------------------------------------------------------


def _region_split(n: int, xi: int, region) -> tuple[list[int], list[int], list[tuple[int, ...]], dict]:
    region_set = frozenset(int(q) for q in region)
    inside_windows: list[int] = []
    partial_windows: list[int] = []
    patterns: dict[tuple[int, ...], int] = {(): 0}
    for x in range(n):
        sites = window_sites(n, x, xi)
        ins = tuple(s for s in sites if s in region_set)
        if len(ins) == len(sites):
            inside_windows.append(x)
        elif ins:
            partial_windows.append(x)
        else:
            continue
        if ins not in patterns:
            patterns[ins] = len(patterns)
    return inside_windows, partial_windows, sorted(patterns, key=patterns.get), patterns


def local_family(code: CodeSpace, region) -> tuple[list[tuple[int, ...]], np.ndarray]:
    """Cross reduced matrices R_ij = tr over the complement of |W_i><W_j|.

    Returns (patterns, R) with R of shape (M, M, dim, dim) in the pattern
    basis. Cost is O(M^2 (d + xi)^2 + M^2) independent of n except for a
    closed-form complement sum.
    """
    n, xi = code.params["n"], code.params["xi"]
    momenta = code.params["momenta"]
    m_count = len(momenta)
    region_set = frozenset(int(q) for q in region)
    inside, partial, patterns, index = _region_split(n, xi, region)
    dim = len(patterns)
    out = np.zeros((m_count, m_count, dim, dim), dtype=complex)
    covered = set(inside) | set(partial)
    missing = np.array([x for x in range(n) if x not in covered], dtype=float)
    for i, mi in enumerate(momenta):
        for j, mj in enumerate(momenta):
            acc = np.zeros((dim, dim), dtype=complex)
            # coherent block among fully-inside windows
            for x in inside:
                ax = index[window_sites(n, x, xi)]
                for y in inside:
                    ay = index[window_sites(n, y, xi)]
                    acc[ax, ay] += np.exp(2j * math.pi * (mi * x - mj * y) / n)
            # boundary windows: outside patterns are unique, diagonal only
            for x in partial:
                ins = tuple(s for s in window_sites(n, x, xi) if s in region_set)
                a = index[ins]
                acc[a, a] += np.exp(2j * math.pi * (mi - mj) * x / n)
            # windows missing the region: all weight on the empty pattern
            if missing.size:
                acc[0, 0] += np.exp(2j * math.pi * (mi - mj) * missing / n).sum()
            out[i, j] = acc / n
    return patterns, out


def reduced_gamma_local(code: CodeSpace, region) -> tuple[list[tuple[int, ...]], np.ndarray]:
    """Reduced maximally mixed code state in the pattern basis."""
    n, xi = code.params["n"], code.params["xi"]
    momenta = np.asarray(code.params["momenta"], dtype=float)
    m_count = len(momenta)
    region_set = frozenset(int(q) for q in region)
    inside, partial, patterns, index = _region_split(n, xi, region)
    dim = len(patterns)
    gamma = np.zeros((dim, dim), dtype=complex)

    def phase_sum(delta: int) -> complex:
        return complex(np.exp(2j * math.pi * momenta * delta / n).sum())

    for x in inside:
        ax = index[window_sites(n, x, xi)]
        for y in inside:
            ay = index[window_sites(n, y, xi)]
            gamma[ax, ay] += phase_sum(x - y)
    for x in partial:
        ins = tuple(s for s in window_sites(n, x, xi) if s in region_set)
        a = index[ins]
        gamma[a, a] += m_count
    gamma[0, 0] += m_count * (n - len(inside) - len(partial))
    return patterns, gamma / (m_count * n)


def eigenstate_deviation(code: CodeSpace, m: int, region) -> float:
    """||tr |W_p><W_p| - Gamma_R||_1, exact in the pattern basis."""
    n, xi = code.params["n"], code.params["xi"]
    momenta = code.params["momenta"]
    if m not in momenta:
        raise ValueError(f"momentum index {m} not in the code")
    region_set = frozenset(int(q) for q in region)
    inside, partial, patterns, index = _region_split(n, xi, region)
    _, gamma = reduced_gamma_local(code, region)
    dim = len(patterns)
    rho = np.zeros((dim, dim), dtype=complex)
    for x in inside:
        ax = index[window_sites(n, x, xi)]
        for y in inside:
            ay = index[window_sites(n, y, xi)]
            rho[ax, ay] += np.exp(2j * math.pi * m * (x - y) / n)
    for x in partial:
        ins = tuple(s for s in window_sites(n, x, xi) if s in region_set)
        rho[index[ins], index[ins]] += 1.0
    rho[0, 0] += n - len(inside) - len(partial)
    rho /= n
    diff = rho - gamma
    return float(np.abs(np.linalg.eigvalsh((diff + diff.conj().T) / 2)).sum())


def product_state_deviation(code: CodeSpace, region) -> tuple[float, int]:
    """Deviation of the best single-excitation product state |x~_xi>.

    Product states |x~> are code states of the full momentum code (discrete
    Fourier superpositions of the basis); the returned value is therefore a
    feasible, certified lower bound on the region variance. Returns
    (value, window position).
    """
    n, xi = code.params["n"], code.params["xi"]
    if len(code.params["momenta"]) != n:
        raise ValueError("product states only lie in the full momentum code")
    region_set = frozenset(int(q) for q in region)
    inside, partial, patterns, index = _region_split(n, xi, region)
    _, gamma = reduced_gamma_local(code, region)
    best, best_x = -1.0, 0
    candidates = inside if inside else partial
    for x in candidates:
        ins = window_sites(n, x, xi) if x in inside else tuple(
            s for s in window_sites(n, x, xi) if s in region_set
        )
        rho = np.zeros_like(gamma)
        rho[index[ins], index[ins]] = 1.0
        diff = rho - gamma
        val = float(np.abs(np.linalg.eigvalsh((diff + diff.conj().T) / 2)).sum())
        if val > best:
            best, best_x = val, x
    return best, best_x


def product_state_coords(n: int, x: int) -> np.ndarray:
    """Logical coordinates of |x~> in the full-code momentum basis."""
    m = np.arange(n)
    return np.exp(-2j * math.pi * m * x / n) / math.sqrt(n)


def first_window_region(n: int, d: int) -> Region:
    return Region(range(d))
