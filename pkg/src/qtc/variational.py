"""Variational classifiers: encoder + trainable ansatz + measurement decoding.

A sample x runs through compose(feature_map(x), ansatz(theta)); the outcome
distribution over the 2**n basis indices is folded onto classes by the
modulo rule (outcome index mod n_classes), which is total and surjective
whenever 2**n >= n_classes.  Two loss functions distinguish the two model
flavors: mean cross-entropy of the true-class probability, and mean squared
distance to the one-hot target.

Exact mode uses statevector probabilities and is fully deterministic;
sampled mode draws ``shots`` measurement outcomes with a seed derived from
(master seed, sample bytes, parameter bytes) so repeated runs reproduce.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass

import numpy as np

from .circuits import AnsatzSpec, FeatureMapSpec, bind_ansatz, build_ansatz, build_feature_map, compose
from .errors import ValidationError
from .optimizer import OptimizerConfig, OptimizationTrace, minimize
from .qsim import Circuit, probabilities, run, sample

__all__ = [
    "VariationalModel",
    "TrainingResult",
    "interpret",
    "class_probabilities",
    "cross_entropy",
    "squared_error",
    "loss",
    "predict",
    "train",
]

LOSS_KINDS = ("cross_entropy", "squared_error")
_EPS = 1e-10


@dataclass
class VariationalModel:
    feature_map: FeatureMapSpec
    ansatz: AnsatzSpec
    theta: np.ndarray
    n_classes: int
    loss_kind: str
    shots: int = 0  # 0 = exact probabilities
    seed: int = 0  # master seed for sampled mode

    def __post_init__(self):
        self.theta = np.asarray(self.theta, dtype=float).ravel()
        if self.feature_map.n_qubits != self.ansatz.n_qubits:
            raise ValidationError("feature map and ansatz qubit counts differ")
        if self.theta.size != self.ansatz.n_parameters:
            raise ValidationError(
                f"theta has {self.theta.size} entries, ansatz needs {self.ansatz.n_parameters}"
            )
        if self.n_classes < 2:
            raise ValidationError("need at least 2 classes")
        if self.loss_kind not in LOSS_KINDS:
            raise ValidationError(f"loss_kind must be one of {LOSS_KINDS}")
        if self.shots < 0:
            raise ValidationError("shots must be >= 0 (0 selects exact mode)")

    @property
    def n_qubits(self) -> int:
        return self.feature_map.n_qubits

    def with_theta(self, theta) -> "VariationalModel":
        return VariationalModel(
            self.feature_map, self.ansatz, np.asarray(theta, dtype=float),
            self.n_classes, self.loss_kind, self.shots, self.seed,
        )


@dataclass
class TrainingResult:
    model: VariationalModel
    trace: OptimizationTrace
    converged: bool


def interpret(model: VariationalModel, outcome: int) -> int:
    """Decode a basis index to a class label."""
    if not 0 <= outcome < (1 << model.n_qubits):
        raise ValidationError(f"outcome {outcome} out of range")
    return outcome % model.n_classes


def _bound_ansatz(model: VariationalModel) -> Circuit:
    return bind_ansatz(build_ansatz(model.ansatz), model.theta)


def _outcome_distribution(model: VariationalModel, x, ansatz_circuit: Circuit) -> np.ndarray:
    state = run(compose(build_feature_map(model.feature_map, x), ansatz_circuit))
    if model.shots == 0:
        return probabilities(state)
    digest = zlib.crc32(
        np.asarray(x, dtype="<f8").tobytes() + model.theta.astype("<f8").tobytes()
    )
    counts = sample(state, model.shots, (model.seed, digest))
    freq = np.zeros(1 << model.n_qubits)
    for idx, c in counts.items():
        freq[idx] = c / model.shots
    return freq


def class_probabilities(model: VariationalModel, x) -> np.ndarray:
    """Probability per class: outcome mass folded by index mod n_classes."""
    x = np.asarray(x, dtype=float).ravel()
    if x.size != model.n_qubits:
        raise ValidationError(f"expected {model.n_qubits} features, got {x.size}")
    dist = _outcome_distribution(model, x, _bound_ansatz(model))
    out = np.zeros(model.n_classes)
    for idx, p in enumerate(dist):
        out[idx % model.n_classes] += p
    return out


def _probability_matrix(model: VariationalModel, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    ansatz_circuit = _bound_ansatz(model)
    folds = np.arange(1 << model.n_qubits) % model.n_classes
    rows = np.empty((X.shape[0], model.n_classes))
    for r, x in enumerate(X):
        dist = _outcome_distribution(model, x, ansatz_circuit)
        rows[r] = np.bincount(folds, weights=dist, minlength=model.n_classes)
    return rows


def cross_entropy(probs: np.ndarray, y) -> float:
    """Mean -ln p_true, with p floored at 1e-10."""
    y = np.asarray(y, dtype=np.int64)
    p_true = np.asarray(probs, dtype=float)[np.arange(len(y)), y]
    return float(np.mean(-np.log(np.maximum(p_true, _EPS))))


def squared_error(probs: np.ndarray, y) -> float:
    """Mean squared distance between the probability vector and one-hot target."""
    probs = np.asarray(probs, dtype=float)
    y = np.asarray(y, dtype=np.int64)
    onehot = np.zeros_like(probs)
    onehot[np.arange(len(y)), y] = 1.0
    return float(np.mean(np.sum((probs - onehot) ** 2, axis=1)))


def loss(model: VariationalModel, X, y) -> float:
    """Training loss of the model on (X, y) under its configured loss kind."""
    y = np.asarray(y, dtype=np.int64)
    if y.size and (y.min() < 0 or y.max() >= model.n_classes):
        raise ValidationError("labels out of range")
    probs = _probability_matrix(model, X)
    if model.loss_kind == "cross_entropy":
        return cross_entropy(probs, y)
    return squared_error(probs, y)


def predict(model: VariationalModel, X) -> np.ndarray:
    """Argmax class per row; ties resolve to the lowest class index."""
    probs = _probability_matrix(model, X)
    return np.argmax(probs, axis=1).astype(np.int64)


def train(
    X,
    y,
    template: VariationalModel,
    config: OptimizerConfig,
    init_seed: int = 42,
) -> TrainingResult:
    """Fit ansatz angles by derivative-free loss minimization.

    theta0 is drawn uniformly from [-pi, pi]^k with ``init_seed``; the
    template's theta is ignored.
    """
    X = np.asarray(X, dtype=float)
    if X.shape[0] == 0:
        raise ValidationError("training set is empty")
    rng = np.random.default_rng(init_seed)
    theta0 = rng.uniform(-np.pi, np.pi, template.ansatz.n_parameters)

    def objective(theta):
        return loss(template.with_theta(theta), X, y)

    theta_best, _, trace = minimize(objective, theta0, config)
    return TrainingResult(
        model=template.with_theta(theta_best),
        trace=trace,
        converged=len(trace) < config.max_evaluations,
    )
