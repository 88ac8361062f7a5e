"""aqeclab: numerical diagnostics for approximate quantum error correction.

Subsystem variance of code subspaces, recovery-inaccuracy brackets via the
residue-channel route, coherent-information bounds, circuit-complexity
threshold verdicts, and topological entanglement entropy bookkeeping.
"""

__version__ = "0.1.0"
