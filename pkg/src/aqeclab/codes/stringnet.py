"""Infinite-tension string-net states on the toric-code lattice.

At infinite string tension only the shortest loop configurations survive in
each homology class of the L x L torus: the empty configuration, the L
straight horizontal (resp. vertical) non-contractible loops, and the
minimal-length configurations winding both ways. The four classes give an
orthonormal k=2 code basis.

Loop configurations are Z2 cycles; we enumerate the full cycle space
(dimension L^2 + 1 including the two non-contractible generators), which is
exact and cheap for L <= 4.
"""

from __future__ import annotations

import math

import numpy as np

from ..geometry import TorusEdgeLattice
from ..numerics import SectorState
from .base import CodeSpace


def _edge_mask(lattice: TorusEdgeLattice, edges) -> int:
    mask = 0
    for e in edges:
        mask ^= 1 << e
    return mask


def minimal_loop_configurations(L: int) -> dict[tuple[int, int], list[int]]:
    """Minimal-weight Z2 cycle configurations per homology class (as bitmasks)."""
    if L > 4:
        raise ValueError("exact cycle-space enumeration limited to L <= 4")
    lattice = TorusEdgeLattice(L)
    plaquettes = [
        _edge_mask(lattice, lattice.face_edges(r, c))
        for r in range(L)
        for c in range(L)
    ][:-1]  # the product of all plaquettes is the identity
    loop_h = _edge_mask(lattice, (lattice.h(0, c) for c in range(L)))  # winds horizontally
    loop_v = _edge_mask(lattice, (lattice.v(r, 0) for r in range(L)))  # winds vertically
    best: dict[tuple[int, int], tuple[int, list[int]]] = {}
    for combo in range(1 << (len(plaquettes) + 2)):
        cfg = 0
        bits = combo
        for p in plaquettes:
            if bits & 1:
                cfg ^= p
            bits >>= 1
        hom = (bits & 1, (bits >> 1) & 1)
        if bits & 1:
            cfg ^= loop_v
        if bits >> 1 & 1:
            cfg ^= loop_h
        weight = cfg.bit_count()
        cur = best.get(hom)
        if cur is None or weight < cur[0]:
            best[hom] = (weight, [cfg])
        elif weight == cur[0]:
            cur[1].append(cfg)
    return {hom: sorted(cfgs) for hom, (_, cfgs) in best.items()}


def _mask_sites(mask: int) -> tuple[int, ...]:
    sites = []
    e = 0
    while mask:
        if mask & 1:
            sites.append(e)
        mask >>= 1
        e += 1
    return tuple(sites)


def stringnet_tension_code(L: int, mu: float = math.inf) -> CodeSpace:
    """k=2 code of shortest-loop states; only the mu = infinity limit exists here."""
    if not math.isinf(mu):
        raise ValueError("finite string tension is out of scope; only mu = inf is supported")
    classes = minimal_loop_configurations(L)
    n = 2 * L * L
    order = [(0, 0), (0, 1), (1, 0), (1, 1)]
    basis = []
    counts = {}
    for hom in order:
        cfgs = classes[hom]
        amp = 1.0 / math.sqrt(len(cfgs))
        basis.append(SectorState(n, {_mask_sites(cfg): amp for cfg in cfgs}))
        counts[hom] = len(cfgs)
    params = {
        "L": L,
        "n_edges": n,
        "n_sites": L * L,
        "loop_counts": counts,
        "n_both_windings": counts[(1, 1)],
    }
    return CodeSpace(n, basis, "stringnet", params)


def both_winding_counts(L: int, region) -> tuple[int, int]:
    """(n_C, N_C): minimal both-winding loops touching ``region``, and in total."""
    cfgs = minimal_loop_configurations(L)[(1, 1)]
    region_mask = _edge_mask(TorusEdgeLattice(L), region)
    touching = sum(1 for cfg in cfgs if cfg & region_mask)
    return touching, len(cfgs)
