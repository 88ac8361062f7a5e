"""Adjacency graphs, connected-region enumeration, circuit light cones, covers.

Regions are sorted tuples of node indices. Connected-region enumeration is
streamed (the counts explode combinatorially) and duplicate-free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .numerics import apply_two_qubit_gate, haar_unitary


class Region(tuple):
    """Sorted duplicate-free tuple of node indices."""

    def __new__(cls, sites):
        sites = tuple(sorted(int(s) for s in sites))
        if len(set(sites)) != len(sites):
            raise ValueError(f"duplicate indices in region {sites}")
        return super().__new__(cls, sites)

    def bound_check(self, n: int) -> "Region":
        if self and (self[0] < 0 or self[-1] >= n):
            raise IndexError(f"region {tuple(self)} out of range for n={n}")
        return self


@dataclass
class AdjacencyGraph:
    """Simple undirected graph over ``n`` qubits."""

    n: int
    edges: frozenset
    kind: str = "explicit"
    sides: tuple[int, ...] | None = None
    periodic: bool = True

    def __post_init__(self):
        edges = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v or not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"invalid edge ({u}, {v})")
            edges.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(edges))
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "adj", adj)

    def neighbors(self, v: int) -> set[int]:
        return self.adj[v]

    def neighborhood(self, region, radius: int = 1) -> Region:
        """Closed radius-``radius`` neighborhood of a region."""
        cur = set(region)
        for _ in range(radius):
            nxt = set(cur)
            for v in cur:
                nxt |= self.adj[v]
            cur = nxt
        return Region(cur)

    def is_connected_region(self, region) -> bool:
        region = set(region)
        if not region:
            return True
        stack = [next(iter(region))]
        seen = {stack[0]}
        while stack:
            v = stack.pop()
            for w in self.adj[v]:
                if w in region and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen == region

    def describe(self) -> str:
        if self.kind == "lattice" and self.sides:
            wrap = "periodic" if self.periodic else "open"
            return f"lattice{self.sides}-{wrap}"
        return f"{self.kind}(n={self.n})"


def complete_graph(n: int) -> AdjacencyGraph:
    return AdjacencyGraph(n, frozenset((i, j) for i in range(n) for j in range(i + 1, n)), kind="complete")


def ring_graph(n: int) -> AdjacencyGraph:
    return AdjacencyGraph(
        n, frozenset((i, (i + 1) % n) for i in range(n)), kind="lattice", sides=(n,), periodic=True
    )


def lattice_graph(sides, periodic: bool = True) -> AdjacencyGraph:
    """D-dimensional integer lattice, row-major node indexing."""
    sides = tuple(int(s) for s in sides)
    n = math.prod(sides)
    strides = np.cumprod((1,) + sides[::-1][:-1])[::-1]

    def index(coord):
        return int(sum(c * s for c, s in zip(coord, strides)))

    edges = set()
    for flat in range(n):
        coord = []
        rem = flat
        for s in strides:
            coord.append(rem // s)
            rem %= s
        for axis, size in enumerate(sides):
            if coord[axis] + 1 < size:
                nb = list(coord)
                nb[axis] += 1
                edges.add((flat, index(nb)))
            elif periodic and size > 2:
                nb = list(coord)
                nb[axis] = 0
                edges.add((flat, index(nb)))
    return AdjacencyGraph(n, frozenset(edges), kind="lattice", sides=sides, periodic=periodic)


def graph_from_edges(n: int, edges) -> AdjacencyGraph:
    return AdjacencyGraph(n, frozenset(tuple(e) for e in edges), kind="explicit")


def connected_regions(g: AdjacencyGraph, d: int) -> Iterator[Region]:
    """Yield every connected vertex subset of size <= d exactly once.

    Fixed-minimum-vertex expansion: subsets are rooted at their smallest
    vertex and grown through an extension list with a forbidden set, so no
    subset is produced twice. On a complete graph this enumerates every
    subset of size <= d.
    """
    if not (1 <= d <= g.n):
        raise ValueError(f"region size bound d={d} out of range [1, {g.n}]")

    def grow(current: tuple[int, ...], ext: list[int], forbidden: set[int], root: int):
        yield Region(current)
        if len(current) == d:
            return
        ext = list(ext)
        banned = set(forbidden)
        while ext:
            v = ext.pop()
            banned.add(v)
            new_ext = ext + [w for w in g.adj[v] if w > root and w not in banned and w not in current and w not in ext]
            yield from grow(current + (v,), new_ext, banned, root)

    for root in range(g.n):
        yield from grow((root,), [w for w in g.adj[root] if w > root], set(), root)


def covering_number(g: AdjacencyGraph, d_tilde: int):
    """Axis-aligned block cover of a lattice by blocks of at most d_tilde nodes.

    Blocks have side ceil(d_tilde^(1/D)) (truncated at lattice boundaries) and
    d_tilde must be the D-th power of an integer side. Returns (count, blocks).
    """
    if g.kind != "lattice" or not g.sides:
        raise ValueError("covering_number requires a lattice graph")
    dims = len(g.sides)
    side = round(d_tilde ** (1.0 / dims))
    for cand in (side - 1, side, side + 1):
        if cand >= 1 and cand**dims == d_tilde:
            side = cand
            break
    else:
        raise ValueError(f"d_tilde={d_tilde} is not a {dims}-th power of an integer side")
    per_axis = [math.ceil(s / side) for s in g.sides]
    strides = np.cumprod((1,) + g.sides[::-1][:-1])[::-1]
    blocks = []
    for flat in range(math.prod(per_axis)):
        origin = []
        rem = flat
        for p in per_axis[::-1]:
            origin.append(rem % p)
            rem //= p
        origin = [o * side for o in origin[::-1]]
        nodes = [[]]
        for axis, s in enumerate(g.sides):
            lo = origin[axis]
            hi = min(lo + side, s)
            nodes = [node + [c] for node in nodes for c in range(lo, hi)]
        blocks.append(Region(int(sum(c * st for c, st in zip(node, strides))) for node in nodes))
    return len(blocks), blocks


def max_lightcone_growth(g: AdjacencyGraph, t: int) -> int:
    """Upper bound f(t) on the size of any single qubit's depth-t light cone.

    f(t) = min(2^t, |BFS ball of radius t|), maximized over start vertices:
    a cone can at most double per layer and can only reach graph neighbors.
    """
    if t < 0:
        raise ValueError("depth must be >= 0")
    best = 1
    cap = 2**t if t < g.n.bit_length() + 1 else g.n
    for v in range(g.n):
        ball = {v}
        for _ in range(t):
            nxt = set(ball)
            for u in ball:
                nxt |= g.adj[u]
            ball = nxt
            if len(ball) >= g.n:
                break
        best = max(best, min(cap, len(ball)))
        if best >= min(cap, g.n):
            break
    return int(min(best, g.n))


def lightcone_growth_table(g: AdjacencyGraph, t_max: int) -> list[int]:
    return [max_lightcone_growth(g, t) for t in range(t_max + 1)]


# ---------------------------------------------------------------------------
# layered circuits
# ---------------------------------------------------------------------------


@dataclass
class Gate:
    i: int
    j: int
    unitary: np.ndarray


@dataclass
class LayeredCircuit:
    """Layers of disjoint 2-qubit gates restricted to graph edges."""

    graph: AdjacencyGraph
    layers: list[list[Gate]] = field(default_factory=list)

    def __post_init__(self):
        for layer in self.layers:
            used: set[int] = set()
            for gate in layer:
                e = (min(gate.i, gate.j), max(gate.i, gate.j))
                if e not in self.graph.edges:
                    raise ValueError(f"gate edge {e} not in graph")
                if gate.i in used or gate.j in used:
                    raise ValueError(f"overlapping gates within a layer at {e}")
                if gate.unitary.shape != (4, 4):
                    raise ValueError("gates must be 4x4 unitaries")
                used.update(e)

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def n(self) -> int:
        return self.graph.n

    def apply(self, vec: np.ndarray, dagger: bool = False) -> np.ndarray:
        """Apply the circuit (or its inverse) to a state vector."""
        out = np.asarray(vec, dtype=complex).copy()
        layers = reversed(self.layers) if dagger else self.layers
        for layer in layers:
            for gate in layer:
                u = gate.unitary.conj().T if dagger else gate.unitary
                out = apply_two_qubit_gate(out, u, gate.i, gate.j, self.n)
        return out

    def apply_to_density(self, rho: np.ndarray, dagger: bool = False) -> np.ndarray:
        """Conjugate a density matrix by the circuit (or its inverse)."""
        n = self.n

        def left_apply(mat: np.ndarray, u: np.ndarray, i: int, j: int) -> np.ndarray:
            cols = mat.shape[1]
            perm = [i, j] + [q for q in range(n) if q not in (i, j)] + [n]
            inv = np.argsort(perm)
            t = mat.reshape([2] * n + [cols]).transpose(perm).reshape(4, -1)
            t = u @ t
            return t.reshape([2, 2] + [2] * (n - 2) + [cols]).transpose(inv).reshape(2**n, cols)

        out = np.asarray(rho, dtype=complex)
        layers = reversed(self.layers) if dagger else self.layers
        for layer in layers:
            for gate in layer:
                u = gate.unitary.conj().T if dagger else gate.unitary
                out = left_apply(left_apply(out, u, gate.i, gate.j).conj().T, u, gate.i, gate.j)
        return out


def light_cone(circuit: LayeredCircuit, target) -> Region:
    """Backward light cone: qubits whose gates can influence ``target``."""
    cone = set(Region(target).bound_check(circuit.n))
    for layer in reversed(circuit.layers):
        for gate in layer:
            if gate.i in cone or gate.j in cone:
                cone.add(gate.i)
                cone.add(gate.j)
    return Region(cone)


def random_circuit(g: AdjacencyGraph, depth: int, rng: np.random.Generator, fill: float = 1.0) -> LayeredCircuit:
    """Random brickwork-style circuit: greedy random matchings per layer."""
    layers = []
    edges = sorted(g.edges)
    for _ in range(depth):
        order = rng.permutation(len(edges))
        used: set[int] = set()
        layer = []
        for idx in order:
            u, v = edges[idx]
            if u in used or v in used:
                continue
            if rng.random() > fill:
                continue
            layer.append(Gate(u, v, haar_unitary(4, rng)))
            used.update((u, v))
        layers.append(layer)
    return LayeredCircuit(g, layers)


# ---------------------------------------------------------------------------
# torus edge lattice (qubits on edges of an L x L torus)
# ---------------------------------------------------------------------------


class TorusEdgeLattice:
    """Square-lattice torus with one qubit per edge (n = 2 L^2).

    Horizontal edge h(r, c) joins vertices (r, c)-(r, c+1) and has index
    r*L + c; vertical edge v(r, c) joins (r, c)-(r+1, c) and has index
    L^2 + r*L + c. Faces are indexed like their top-left vertex.
    """

    def __init__(self, L: int):
        if L < 2:
            raise ValueError("torus side must be >= 2")
        self.L = L
        self.n = 2 * L * L

    def h(self, r: int, c: int) -> int:
        return (r % self.L) * self.L + (c % self.L)

    def v(self, r: int, c: int) -> int:
        return self.L * self.L + (r % self.L) * self.L + (c % self.L)

    def edge_vertices(self, e: int) -> tuple[tuple[int, int], tuple[int, int]]:
        L = self.L
        if e < L * L:
            r, c = divmod(e, L)
            return (r, c), (r, (c + 1) % L)
        r, c = divmod(e - L * L, L)
        return (r, c), ((r + 1) % L, c)

    def edge_direction(self, e: int) -> tuple[int, int]:
        """Displacement (dr, dc) of the edge in the universal cover."""
        return (0, 1) if e < self.L * self.L else (1, 0)

    def face_edges(self, r: int, c: int) -> tuple[int, int, int, int]:
        return (self.h(r, c), self.h(r + 1, c), self.v(r, c), self.v(r, c + 1))

    def star_edges(self, r: int, c: int) -> tuple[int, int, int, int]:
        return (self.h(r, c), self.h(r, c - 1), self.v(r, c), self.v(r - 1, c))

    def qubit_graph(self) -> AdjacencyGraph:
        """Edge-qubits adjacent iff the edges share a lattice vertex."""
        incident: dict[tuple[int, int], list[int]] = {}
        for e in range(self.n):
            for vert in self.edge_vertices(e):
                incident.setdefault(vert, []).append(e)
        edges = set()
        for group in incident.values():
            for i in range(len(group)):
                for j in range(i + 1, len(group)):
                    edges.add((group[i], group[j]))
        return AdjacencyGraph(self.n, frozenset(edges), kind="explicit")

    def plaquette_block_edges(self, r0: int, c0: int, height: int, width: int) -> Region:
        """All edges of the faces in a height x width block of plaquettes."""
        qubits: set[int] = set()
        for r in range(r0, r0 + height):
            for c in range(c0, c0 + width):
                qubits.update(self.face_edges(r, c))
        return Region(qubits)

    def block_boundary_length(self, height: int, width: int) -> int:
        """Lattice edges crossed by the boundary curve of a plaquette block."""
        return 2 * (height + width)

    # -- combinatorial topology of edge regions ---------------------------

    def _components(self, region) -> list[set[int]]:
        region = set(region)
        vert_map: dict[tuple[int, int], list[int]] = {}
        for e in region:
            for vert in self.edge_vertices(e):
                vert_map.setdefault(vert, []).append(e)
        comps = []
        left = set(region)
        while left:
            seed = left.pop()
            comp = {seed}
            stack = [seed]
            while stack:
                e = stack.pop()
                for vert in self.edge_vertices(e):
                    for other in vert_map[vert]:
                        if other in left:
                            left.discard(other)
                            comp.add(other)
                            stack.append(other)
            comps.append(comp)
        return comps

    def _component_topology(self, comp: set[int]):
        """(chi, winding_rank) of one connected edge set, faces closed in."""
        verts = set()
        for e in comp:
            verts.update(self.edge_vertices(e))
        faces = [
            (r, c)
            for r in range(self.L)
            for c in range(self.L)
            if all(e in comp for e in self.face_edges(r, c))
        ]
        chi = len(verts) - len(comp) + len(faces)

        # winding rank over GF(2): BFS lift to the universal cover; each
        # non-tree edge closes a cycle whose displacement is a multiple of L
        # per axis, giving its homology class mod 2.
        incident: dict[tuple[int, int], list[int]] = {}
        for e in comp:
            for vert in self.edge_vertices(e):
                incident.setdefault(vert, []).append(e)
        start = next(iter(verts))
        coords = {start: (0, 0)}
        seen_edges: set[int] = set()
        classes: set[tuple[int, int]] = set()
        queue = [start]
        while queue:
            a = queue.pop()
            for e in incident[a]:
                va, vb = self.edge_vertices(e)
                d = self.edge_direction(e)
                if a == va:
                    other, step = vb, d
                else:
                    other, step = va, (-d[0], -d[1])
                if e in seen_edges:
                    continue
                seen_edges.add(e)
                lifted = (coords[a][0] + step[0], coords[a][1] + step[1])
                if other not in coords:
                    coords[other] = lifted
                    queue.append(other)
                else:
                    dr = lifted[0] - coords[other][0]
                    dc = lifted[1] - coords[other][1]
                    w = ((dr // self.L) % 2, (dc // self.L) % 2)
                    if w != (0, 0):
                        classes.add(w)
        rank = 0
        if classes:
            rank = 2 if len(classes) > 1 else 1
        return chi, rank

    def region_topology(self, region):
        """(b, contractible, full) for an edge region via Euler characteristic."""
        region = set(region)
        if region == set(range(self.n)):
            return 0, False, True
        b = 0
        contractible = True
        comps = self._components(region)
        for comp in comps:
            chi, rank = self._component_topology(comp)
            genus = 1 if rank == 2 else 0
            b += 2 - 2 * genus - chi
            if chi != 1 or rank != 0:
                contractible = False
        if len(comps) != 1:
            contractible = False
        return b, contractible and len(comps) == 1, False

    def boundary_components(self, region) -> int:
        return self.region_topology(region)[0]

    def is_contractible(self, region) -> bool:
        return self.region_topology(region)[1]
