"""Subsystem-variance engine.

The central quantity is the maximum trace-norm deviation of a code state's
reduced density matrix from the reduced maximally mixed code state,

    variance(code, R) = max_{pure psi in code} || psi_R - Gamma_R ||_1,

maximized over connected regions for the overall value. Everything runs on
a compact "local family": the cross reduced matrices R_ij = tr_complement
|psi_i><psi_j| expressed in a small pattern basis, so one precomputation per
region makes objective evaluations cheap.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .codes import momentum
from .codes.base import CodeSpace
from .codes.heisenberg import variance_diagonal
from .geometry import AdjacencyGraph, Region, connected_regions
from .numerics import PureState, SectorState, sector_cross_reduced

ZERO_CERTIFICATE_TOL = 1e-10


@dataclass
class LocalFamily:
    """Cross reduced matrices of a code basis on one region.

    ``r`` has shape (M, M, dim, dim) with r[i, j] = tr_complement
    |psi_i><psi_j| in the pattern basis; Gamma_R is the mean of the
    diagonal blocks.
    """

    region: Region
    r: np.ndarray
    patterns: list | None = None

    @property
    def m(self) -> int:
        return self.r.shape[0]

    @property
    def dim(self) -> int:
        return self.r.shape[2]

    def gamma(self) -> np.ndarray:
        return np.einsum("iiab->ab", self.r) / self.m

    def deviations(self) -> np.ndarray:
        """T_ij = R_ij - delta_ij Gamma_R."""
        t = self.r.copy()
        g = self.gamma()
        for i in range(self.m):
            t[i, i] -= g
        return t

    def reduced_state(self, coords: np.ndarray) -> np.ndarray:
        coords = np.asarray(coords, dtype=complex)
        return np.einsum("i,j,ijab->ab", coords, coords.conj(), self.r)


def build_local_family(code: CodeSpace, region) -> LocalFamily:
    region = Region(region).bound_check(code.n)
    if code.family == "momentum":
        if code.dim() > 64:
            raise ValueError(
                f"momentum family with M={code.dim()} basis states is analytic-only "
                "(the M^2 local family would not fit)"
            )
        patterns, r = momentum.local_family(code, region)
        return LocalFamily(region, r, patterns)
    if code.basis is None:
        raise ValueError(f"{code.family} (M={code.dim()}) has no materialized basis")
    if code.is_dense():
        mats = []
        rest = [q for q in range(code.n) if q not in region]
        perm = list(region) + rest
        for b in code.basis:
            mats.append(b.amplitudes.reshape([2] * code.n).transpose(perm).reshape(2 ** len(region), -1))
        stack = np.stack(mats)
        r = np.einsum("iar,jbr->ijab", stack, stack.conj())
        return LocalFamily(region, r)
    if code.is_sector():
        pats: dict[tuple[int, ...], int] = {}
        region_set = frozenset(region)
        for b in code.basis:
            for key in b.terms:
                inside = tuple(s for s in key if s in region_set)
                pats.setdefault(inside, len(pats))
        ordered = sorted(pats, key=pats.get)
        m = code.dim()
        r = np.zeros((m, m, len(ordered), len(ordered)), dtype=complex)
        for i in range(m):
            for j in range(m):
                _, r[i, j] = sector_cross_reduced(code.basis[i], code.basis[j], region, ordered)
        return LocalFamily(region, r, ordered)
    raise ValueError(f"unsupported basis representation for family {code.family}")


# ---------------------------------------------------------------------------
# optimizer
# ---------------------------------------------------------------------------


@dataclass
class OptimizerOptions:
    restarts: int = 32
    steps: int = 500
    tol: float = 1e-9
    patience: int = 25
    initial_step: float = 0.5


@dataclass
class RegionVarianceResult:
    region: Region
    value: float
    coords: np.ndarray | None
    method: str  # 'analytic' | 'optimized'
    upper_bound: float | None = None
    restarts: int = 0
    best_gap: float = 0.0  # best minus second-best restart value
    converged: bool = True
    heuristic: bool = False
    note: str = ""


def _trace_norm_and_sign(m: np.ndarray) -> tuple[float, np.ndarray]:
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    signs = np.where(np.abs(w) > 1e-10, np.sign(w), 0.0)
    return float(np.abs(w).sum()), (v * signs) @ v.conj().T


def _objective(t: np.ndarray, coords: np.ndarray) -> tuple[float, np.ndarray]:
    """Value and Euclidean (Wirtinger) gradient of ||sum c_i c_j* T_ij||_1."""
    mat = np.einsum("i,j,ijab->ab", coords, coords.conj(), t)
    value, sign = _trace_norm_and_sign(mat)
    # d/d conj(c_j): sum_i c_i Tr(sign @ T_ij)
    grad = np.einsum("ba,i,ijab->j", sign, coords, t)
    return value, grad


def certified_upper_bound(t: np.ndarray) -> float:
    """lambda_max of the matrix of nuclear norms ||T_ij||_1: a rigorous bound.

    |sum c_i c_j* T_ij|_1 <= sum |c_i||c_j| ||T_ij||_1 <= lambda_max([||T_ij||_1]);
    the off-diagonal T_ij are not Hermitian, so singular values are required.
    """
    m = t.shape[0]
    norms = np.zeros((m, m))
    for i in range(m):
        for j in range(i, m):
            val = float(np.linalg.svd(t[i, j], compute_uv=False).sum())
            norms[i, j] = norms[j, i] = val
    return float(np.linalg.eigvalsh(norms).max())


def optimize_pure_max(
    t: np.ndarray,
    rng: np.random.Generator,
    options: OptimizerOptions = OptimizerOptions(),
) -> tuple[float, np.ndarray, dict]:
    """Multi-start projected gradient ascent on the unit coordinate sphere.

    The reported value is attained by the returned feasible coordinates, so
    it is a certified lower bound on the true maximum.
    """
    m = t.shape[0]
    if m == 1:
        val, _ = _objective(t, np.ones(1, dtype=complex))
        return val, np.ones(1, dtype=complex), {"restarts": 0, "best_gap": 0.0, "converged": True}

    starts: list[np.ndarray] = []
    for i in range(min(m, max(1, options.restarts // 2))):
        e = np.zeros(m, dtype=complex)
        e[i] = 1.0
        starts.append(e)
    while len(starts) < options.restarts:
        z = rng.normal(size=m) + 1j * rng.normal(size=m)
        starts.append(z / np.linalg.norm(z))

    best_vals: list[float] = []
    best_coords = None
    converged_any = False
    for c0 in starts:
        c = c0.copy()
        val, grad = _objective(t, c)
        step = options.initial_step
        stale = 0
        converged = False
        for _ in range(options.steps):
            # project onto the tangent space of the sphere, then backtrack
            direction = grad - np.vdot(c, grad) * c
            gnorm = np.linalg.norm(direction)
            if gnorm < 1e-14:
                converged = True
                break
            improved = False
            while step > 1e-12:
                cand = c + step * direction
                cand = cand / np.linalg.norm(cand)
                cand_val, cand_grad = _objective(t, cand)
                if cand_val > val + 1e-15:
                    improved = cand_val > val + options.tol
                    c, val, grad = cand, cand_val, cand_grad
                    step = min(step * 2.0, 1e3)
                    break
                step *= 0.5
            stale = 0 if improved else stale + 1
            if stale >= options.patience:
                converged = True
                break
        converged_any = converged_any or converged
        best_vals.append(val)
        if best_coords is None or val > max(best_vals[:-1], default=-np.inf):
            best_coords = c
    best_vals.sort(reverse=True)
    gap = best_vals[0] - best_vals[1] if len(best_vals) > 1 else 0.0
    diag = {"restarts": len(starts), "best_gap": float(gap), "converged": converged_any}
    return float(best_vals[0]), best_coords, diag


# ---------------------------------------------------------------------------
# region and overall variance
# ---------------------------------------------------------------------------


def _analytic_region_variance(code: CodeSpace, region: Region) -> RegionVarianceResult | None:
    if code.family == "heisenberg":
        d = len(region)
        if code.dim() == 1 or code.params["spacing"] > 2 * d:
            value, arg_m = variance_diagonal(code, d)
            ms = code.params["magnetizations"]
            coords = np.zeros(code.dim(), dtype=complex)
            coords[ms.index(arg_m)] = 1.0
            return RegionVarianceResult(
                region, value, coords, "analytic", note=f"diagonal formula, argmax m={arg_m}"
            )
        return None
    if code.family == "momentum" and code.params.get("full"):
        value, x = momentum.product_state_deviation(code, region)
        coords = momentum.product_state_coords(code.params["n"], x)
        return RegionVarianceResult(
            region,
            value,
            coords,
            "analytic",
            note=f"single-excitation product state at x={x} (certified feasible value)",
        )
    return None


def region_variance(
    code: CodeSpace,
    region,
    method: str = "auto",
    rng: np.random.Generator | None = None,
    options: OptimizerOptions = OptimizerOptions(),
) -> RegionVarianceResult:
    """Max deviation of code-state marginals from Gamma on one region."""
    region = Region(region).bound_check(code.n)
    if method not in ("auto", "analytic", "optimize"):
        raise ValueError(f"unknown method {method!r}")
    if method in ("auto", "analytic"):
        res = _analytic_region_variance(code, region)
        if res is not None:
            return res
        if method == "analytic":
            raise ValueError(f"no analytic variance path registered for family {code.family!r}")

    family = build_local_family(code, region)
    t = family.deviations()
    upper = certified_upper_bound(t)
    if upper <= ZERO_CERTIFICATE_TOL and method == "auto":
        coords = np.zeros(family.m, dtype=complex)
        coords[0] = 1.0
        return RegionVarianceResult(
            region, 0.0, coords, "analytic", upper_bound=upper, note="certified zero"
        )
    rng = rng or np.random.default_rng(0)
    value, coords, diag = optimize_pure_max(t, rng, options)
    return RegionVarianceResult(
        region,
        value,
        coords,
        "optimized",
        upper_bound=upper,
        restarts=diag["restarts"],
        best_gap=diag["best_gap"],
        converged=diag["converged"],
        heuristic=family.m > 4,
    )


@dataclass
class VarianceReport:
    code_id: str
    graph: str
    d: int
    per_region: list[RegionVarianceResult]
    value: float
    argmax_region: Region
    argmax_coords: np.ndarray | None
    method: str
    region_count: int
    class_count: int
    seed: int | None = None

    def __post_init__(self):
        if self.per_region:
            assert abs(self.value - max(r.value for r in self.per_region)) < 1e-12
        assert -1e-12 <= self.value <= 2 + 1e-9


def _region_classes(code: CodeSpace, graph: AdjacencyGraph, d: int):
    """Representatives of region equivalence classes under code symmetry."""
    total = 0
    if code.symmetry == "permutation":
        reps: dict[int, Region] = {}
        for region in connected_regions(graph, d):
            total += 1
            reps.setdefault(len(region), region)
        return list(reps.values()), total
    if code.symmetry == "translation" and graph.kind == "lattice" and graph.periodic:
        sides = graph.sides
        if len(sides) == 1:
            # connected regions of a ring are intervals: one class per length
            n = sides[0]
            lengths = range(1, min(d, n) + 1)
            reps = [Region(range(length)) for length in lengths]
            total = sum(n if length < n else 1 for length in lengths)
            return reps, total
        reps = {}
        for region in connected_regions(graph, d):
            total += 1
            key = _translation_canonical(region, sides)
            reps.setdefault(key, region)
        return list(reps.values()), total
    regions = list(connected_regions(graph, d))
    return regions, len(regions)


def _translation_canonical(region: Region, sides) -> tuple:
    """Canonical form of a region under lattice translations (row-major index)."""
    coords = []
    for idx in region:
        c = []
        rem = idx
        for s in reversed(sides):
            c.append(rem % s)
            rem //= s
        coords.append(tuple(reversed(c)))
    best = None
    for anchor in coords:
        shifted = sorted(
            tuple((x - a) % s for x, a, s in zip(pt, anchor, sides)) for pt in coords
        )
        key = tuple(shifted)
        if best is None or key < best:
            best = key
    return best


def overall_variance(
    code: CodeSpace,
    graph: AdjacencyGraph,
    d: int,
    method: str = "auto",
    seed: int = 0,
    options: OptimizerOptions = OptimizerOptions(),
) -> VarianceReport:
    """Maximize region variance over connected regions of size <= d."""
    if d > code.n:
        raise ValueError(f"d={d} exceeds n={code.n}")
    reps, total = _region_classes(code, graph, d)
    results = []
    for i, region in enumerate(sorted(reps)):
        rng = np.random.default_rng(np.random.SeedSequence((seed, i)))
        results.append(region_variance(code, region, method, rng, options))
    best = max(results, key=lambda r: r.value)
    return VarianceReport(
        code_id=code.id_string(),
        graph=graph.describe(),
        d=d,
        per_region=results,
        value=best.value,
        argmax_region=best.region,
        argmax_coords=best.coords,
        method=best.method,
        region_count=total,
        class_count=len(reps),
        seed=seed,
    )
