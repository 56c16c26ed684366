"""Builders for the data-encoding and variational circuits.

Two encoders are provided, both diagonal-phase constructions between
Hadamard layers over ``reps`` repetitions:

* first-order ("z"): H on every qubit, then P(2 x_i) on qubit i;
* second-order ("zz"): additionally, for each linearly entangled pair
  (i, i+1), a CX / P(2 (pi - x_i)(pi - x_{i+1})) / CX sandwich on qubit i+1.

The variational ansatz alternates RY rotation layers with a linear CX chain:
one leading RY layer plus one (chain + RY layer) block per repetition, for
n_qubits * (reps + 1) trainable angles, named "theta[k]" in layer-major,
qubit-ascending order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError
from .qsim import Circuit, Gate

__all__ = [
    "FeatureMapSpec",
    "AnsatzSpec",
    "build_feature_map",
    "build_ansatz",
    "bind_ansatz",
    "compose",
]


@dataclass(frozen=True)
class FeatureMapSpec:
    """Encoder shape: kind 'z' or 'zz', qubit count = feature count, depth."""

    kind: str
    n_qubits: int
    reps: int = 2
    entanglement: str = "linear"

    def __post_init__(self):
        if self.kind not in ("z", "zz"):
            raise ValidationError(f"feature map kind must be 'z' or 'zz', got {self.kind!r}")
        if self.n_qubits < 1:
            raise ValidationError("feature map needs at least one qubit")
        if self.reps < 1:
            raise ValidationError("reps must be >= 1")
        if self.entanglement != "linear":
            raise ValidationError("only linear entanglement is supported")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n_qubits": self.n_qubits,
            "reps": self.reps,
            "entanglement": self.entanglement,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FeatureMapSpec":
        return cls(d["kind"], d["n_qubits"], d["reps"], d.get("entanglement", "linear"))


@dataclass(frozen=True)
class AnsatzSpec:
    """RY-rotation ansatz with a linear CX entangling chain."""

    n_qubits: int
    reps: int = 1

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValidationError("ansatz needs at least one qubit")
        if self.reps < 1:
            raise ValidationError("reps must be >= 1")

    @property
    def n_parameters(self) -> int:
        return self.n_qubits * (self.reps + 1)

    def to_dict(self) -> dict:
        return {"n_qubits": self.n_qubits, "reps": self.reps}

    @classmethod
    def from_dict(cls, d: dict) -> "AnsatzSpec":
        return cls(d["n_qubits"], d["reps"])


def build_feature_map(spec: FeatureMapSpec, x) -> Circuit:
    """Encode the feature vector x as a bound circuit per ``spec``.

    Gates are emitted in qubit-index order within each repetition, entangled
    pairs in ascending i.
    """
    x = [float(v) for v in x]
    if len(x) != spec.n_qubits:
        raise ValidationError(
            f"feature map expects {spec.n_qubits} features, got {len(x)}"
        )
    gates: list[Gate] = []
    for _ in range(spec.reps):
        for q in range(spec.n_qubits):
            gates.append(Gate("h", (q,)))
        for q in range(spec.n_qubits):
            gates.append(Gate("p", (q,), 2.0 * x[q]))
        if spec.kind == "zz":
            for i in range(spec.n_qubits - 1):
                pair_angle = 2.0 * (math.pi - x[i]) * (math.pi - x[i + 1])
                gates.append(Gate("cx", (i, i + 1)))
                gates.append(Gate("p", (i + 1,), pair_angle))
                gates.append(Gate("cx", (i, i + 1)))
    return Circuit(spec.n_qubits, tuple(gates))


def build_ansatz(spec: AnsatzSpec) -> Circuit:
    """Parameterized ansatz circuit with free symbols theta[0..k-1]."""
    gates: list[Gate] = []
    k = 0
    for q in range(spec.n_qubits):
        gates.append(Gate("ry", (q,), f"theta[{k}]"))
        k += 1
    for _ in range(spec.reps):
        for q in range(spec.n_qubits - 1):
            gates.append(Gate("cx", (q, q + 1)))
        for q in range(spec.n_qubits):
            gates.append(Gate("ry", (q,), f"theta[{k}]"))
            k += 1
    return Circuit(spec.n_qubits, tuple(gates))


def bind_ansatz(circuit: Circuit, theta) -> Circuit:
    """Bind ansatz angles in parameter order; validates the vector length."""
    expected = len(circuit.parameters)
    theta = list(theta)
    if len(theta) != expected:
        raise ValidationError(
            f"ansatz expects {expected} parameter values, got {len(theta)}"
        )
    return circuit.bind(theta)


def compose(first: Circuit, second: Circuit) -> Circuit:
    """Concatenate two circuits on the same qubit count, ``first`` applied first."""
    if first.n_qubits != second.n_qubits:
        raise ValidationError(
            f"cannot compose circuits on {first.n_qubits} and {second.n_qubits} qubits"
        )
    return Circuit(first.n_qubits, first.gates + second.gates)
