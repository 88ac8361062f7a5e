"""Constructors for all supported code families."""

from .base import (
    CodeSpace,
    logical_qubits_region,
    maximally_mixed,
    normalize_coords,
    random_code,
    redundant_code,
    rotated_basis,
)
from .heisenberg import (
    dicke_state,
    heisenberg_code,
    heisenberg_code_from,
    heisenberg_reduced,
    reduced_weights,
)
from .momentum import basis_sector_state, momentum_code, pair_fragment
from .stringnet import both_winding_counts, minimal_loop_configurations, stringnet_tension_code
from .tfim import free_fermion_ground_energy, tfim_low_energy_code
from .toric import (
    code_distance,
    stabilizer_code,
    stabilizer_generators,
    toric_code,
    toric_qubit_graph,
    toric_stabilizer_expectations,
)

__all__ = [
    "CodeSpace",
    "basis_sector_state",
    "both_winding_counts",
    "code_distance",
    "dicke_state",
    "free_fermion_ground_energy",
    "heisenberg_code",
    "heisenberg_code_from",
    "heisenberg_reduced",
    "logical_qubits_region",
    "maximally_mixed",
    "minimal_loop_configurations",
    "momentum_code",
    "normalize_coords",
    "pair_fragment",
    "random_code",
    "redundant_code",
    "reduced_weights",
    "rotated_basis",
    "stabilizer_code",
    "stabilizer_generators",
    "stringnet_tension_code",
    "tfim_low_energy_code",
    "toric_code",
    "toric_qubit_graph",
    "toric_stabilizer_expectations",
]
