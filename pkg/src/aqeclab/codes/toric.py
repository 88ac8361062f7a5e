"""Built-in stabilizer codes and the toric code on an L x L torus."""

from __future__ import annotations

import numpy as np

from ..geometry import AdjacencyGraph, TorusEdgeLattice
from ..numerics import PureState, hermitize
from .base import CodeSpace

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli_string_matrix(spec: str) -> np.ndarray:
    out = np.array([[1.0]], dtype=complex)
    for ch in spec:
        out = np.kron(out, _PAULI[ch])
    return out


def pauli_expectation(vec: np.ndarray, spec: str) -> float:
    return float(np.real(np.vdot(vec, pauli_string_matrix(spec) @ vec)))


_BUILTINS = {
    "[[4,2,2]]": {
        "n": 4,
        "stabilizers": ["XXXX", "ZZZZ"],
        "logical_z": ["ZIZI", "ZZII"],
        "logical_x": ["XXII", "XIXI"],
        "distance": 2,
    },
    "[[5,1,3]]": {
        "n": 5,
        "stabilizers": ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"],
        "logical_z": ["ZZZZZ"],
        "logical_x": ["XXXXX"],
        "distance": 3,
    },
    "steane": {
        "n": 7,
        "stabilizers": [
            "IIIXXXX",
            "IXXIIXX",
            "XIXIXIX",
            "IIIZZZZ",
            "IZZIIZZ",
            "ZIZIZIZ",
        ],
        "logical_z": ["ZZZZZZZ"],
        "logical_x": ["XXXXXXX"],
        "distance": 3,
    },
}


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    idx = int(np.argmax(np.abs(vec)))
    phase = vec[idx] / abs(vec[idx])
    return vec / phase


def _codespace_from_group(n: int, stabilizers, logical_z, family: str, params: dict) -> CodeSpace:
    """Joint +1 eigenspace of the stabilizers, basis split by logical Zs."""
    dim = 2**n
    proj = np.eye(dim, dtype=complex)
    for s in stabilizers:
        proj = proj @ (np.eye(dim) + pauli_string_matrix(s)) / 2
    w, v = np.linalg.eigh(hermitize(proj))
    space = v[:, w > 0.5]
    k = len(logical_z)
    if space.shape[1] != 2**k:
        raise ValueError(f"stabilizer group fixes a {space.shape[1]}-dim space, expected 2^{k}")
    # resolve the basis with logical Z eigenvalues, most significant first
    basis_vectors = [space]
    for zspec in logical_z:
        zmat = pauli_string_matrix(zspec)
        split = []
        for block in basis_vectors:
            op = hermitize(block.conj().T @ zmat @ block)
            ew, ev = np.linalg.eigh(op)
            rotated = block @ ev
            split.append(rotated[:, ew > 0])   # +1 branch encodes logical 0
            split.append(rotated[:, ew < 0])
        basis_vectors = split
    basis = [PureState(n, _fix_phase(block[:, 0])) for block in basis_vectors]
    return CodeSpace(n, basis, family, params)


def stabilizer_code(name: str) -> CodeSpace:
    """Built-in codes: '[[4,2,2]]', '[[5,1,3]]', 'steane'."""
    key = name.lower() if name.lower() == "steane" else name
    if key not in _BUILTINS:
        raise ValueError(f"unknown stabilizer code {name!r}; have {sorted(_BUILTINS)}")
    info = _BUILTINS[key]
    return _codespace_from_group(
        info["n"],
        info["stabilizers"],
        info["logical_z"],
        "stabilizer",
        {"name": key, "n": info["n"], "distance": info["distance"]},
    )


def stabilizer_generators(name: str) -> list[str]:
    key = name.lower() if name.lower() == "steane" else name
    return list(_BUILTINS[key]["stabilizers"])


def code_distance(code: CodeSpace) -> int:
    if code.family == "stabilizer":
        return int(code.params["distance"])
    if code.family == "toric":
        return int(code.params["L"])
    raise ValueError(f"no declared distance for family {code.family}")


# ---------------------------------------------------------------------------
# toric code
# ---------------------------------------------------------------------------


def _bit_index(lattice: TorusEdgeLattice, edge: int) -> int:
    return 1 << (lattice.n - 1 - edge)


def toric_code(L: int) -> CodeSpace:
    """Toric code ground space: n = 2 L^2 edge qubits, k = 2, distance L.

    Basis states are uniform superpositions over the star-group orbit of the
    four logical classes (logical X loops run along dual non-contractible
    cycles). Dense construction, so L <= 3 (n <= 18).
    """
    lattice = TorusEdgeLattice(L)
    n = lattice.n
    if n > 20:
        raise ValueError(f"toric code at L={L} needs n={n} > 20 qubits; refuse dense build")

    star_masks = []
    for r in range(L):
        for c in range(L):
            mask = 0
            for e in lattice.star_edges(r, c):
                mask ^= _bit_index(lattice, e)
            star_masks.append(mask)
    # orbit of the star group: closure over generators (last star is the
    # product of the others and comes along automatically)
    orbit = {0}
    frontier = [0]
    while frontier:
        cur = frontier.pop()
        for mask in star_masks:
            nxt = cur ^ mask
            if nxt not in orbit:
                orbit.add(nxt)
                frontier.append(nxt)

    logical_one = 0
    for c in range(L):
        logical_one ^= _bit_index(lattice, lattice.v(0, c))  # horizontal dual cycle
    logical_two = 0
    for r in range(L):
        logical_two ^= _bit_index(lattice, lattice.h(r, 0))  # vertical dual cycle

    basis = []
    amp = 1.0 / np.sqrt(len(orbit))
    for a in (0, 1):
        for b in (0, 1):
            shift = (logical_one if a else 0) ^ (logical_two if b else 0)
            vec = np.zeros(2**n, dtype=complex)
            for cfg in orbit:
                vec[cfg ^ shift] = amp
            basis.append(PureState(n, vec))
    return CodeSpace(n, basis, "toric", {"L": L, "n": n}, symmetry="translation")


def toric_qubit_graph(L: int) -> AdjacencyGraph:
    return TorusEdgeLattice(L).qubit_graph()


def _bit_parity(values: np.ndarray) -> np.ndarray:
    v = values.astype(np.uint32)
    for shift in (16, 8, 4, 2, 1):
        v ^= v >> shift
    return (v & 1).astype(np.int8)


def toric_stabilizer_expectations(code: CodeSpace) -> dict[str, float]:
    """Min expectation of star and plaquette operators over the basis."""
    L = code.params["L"]
    lattice = TorusEdgeLattice(L)
    n = lattice.n
    idx = np.arange(2**n, dtype=np.uint32)
    worst = {"star": 1.0, "plaquette": 1.0}
    for state in code.basis:
        vec = state.amplitudes
        for r in range(L):
            for c in range(L):
                mask = 0
                for e in lattice.star_edges(r, c):
                    mask ^= _bit_index(lattice, e)
                # star: X on 4 edges permutes amplitudes
                worst["star"] = min(worst["star"], float(np.real(np.vdot(vec, vec[idx ^ mask]))))
                pmask = 0
                for e in lattice.face_edges(r, c):
                    pmask ^= _bit_index(lattice, e)
                # plaquette: Z parity of 4 edges
                signs = 1.0 - 2.0 * _bit_parity(idx & np.uint32(pmask))
                worst["plaquette"] = min(
                    worst["plaquette"], float(np.real(np.vdot(vec, signs * vec)))
                )
    return worst
