"""Quantum information bounds, measurement design, and protocol simulation."""

from ._qcrb import (
    conditional_mqe,
    counterexample_trace,
    covariant_cost,
    design_mixed_qubit,
    gill_massar_trace,
    mixed_qubit_helstrom,
    optimal_scaled_mqe,
    run_manifest,
    simulate_protocol,
)

__all__ = [
    "conditional_mqe",
    "counterexample_trace",
    "covariant_cost",
    "design_mixed_qubit",
    "gill_massar_trace",
    "mixed_qubit_helstrom",
    "optimal_scaled_mqe",
    "run_manifest",
    "simulate_protocol",
]
