"""Statevector simulation substrate: circuits, gates, exact states, sampling."""

from .core import (
    Circuit,
    Gate,
    StateVector,
    adjoint,
    apply_gate,
    backend_name,
    probabilities,
    run,
    sample,
    zero_state,
)

__all__ = [
    "Circuit",
    "Gate",
    "StateVector",
    "adjoint",
    "apply_gate",
    "backend_name",
    "probabilities",
    "run",
    "sample",
    "zero_state",
]
