import numpy as np
import pytest

from qtc.errors import ValidationError
from qtc.svm import (
    MulticlassSvm,
    PolyKernelSpec,
    SvmBinaryModel,
    decision,
    default_gamma,
    dual_objective,
    poly_gram,
    poly_kernel,
    predict_binary,
    predict_multiclass,
    train_binary,
    train_multiclass,
)

TWO_POINT_G = np.array([[1.0, -1.0], [-1.0, 1.0]])  # linear kernel on x = -1, +1
TWO_POINT_Y = np.array([-1.0, 1.0])


def kkt_ok(G, y, model, tol):
    """The audit: margins classified by where alpha sits in [0, C]."""
    f = G @ (model.alpha * y) + model.bias
    margins = y * f
    eps = 1e-9
    for i in range(len(y)):
        if model.alpha[i] <= eps:
            if margins[i] < 1 - tol - 1e-9:
                return False
        elif model.alpha[i] >= model.C - eps:
            if margins[i] > 1 + tol + 1e-9:
                return False
        else:
            if abs(margins[i] - 1) > tol + 1e-9:
                return False
    return True


def random_instance(rng, m, separable):
    X = rng.normal(size=(m, 2))
    w = rng.normal(size=2)
    y = np.where(X @ w + 0.1 * rng.normal(size=m) > 0, 1.0, -1.0)
    if not separable:
        flip = rng.choice(m, size=max(1, m // 6), replace=False)
        y[flip] *= -1
    if np.all(y > 0) or np.all(y < 0):
        y[0] *= -1
    return X @ X.T, y


def random_feasible(rng, y, C):
    alpha = rng.uniform(0, C, size=len(y))
    pos = alpha[y > 0].sum()
    neg = alpha[y < 0].sum()
    if pos > neg:
        alpha[y > 0] *= neg / pos if pos > 0 else 0.0
    elif neg > 0:
        alpha[y < 0] *= pos / neg
    return alpha


class TestTrainBinary:
    def test_two_point_analytic(self):
        model = train_binary(TWO_POINT_G, TWO_POINT_Y, C=10.0)
        assert np.allclose(model.alpha, [0.5, 0.5], atol=1e-6)
        assert model.bias == pytest.approx(0.0, abs=1e-6)
        # decision function is f(x) = x: kernel row against x is (-x, x)
        for x in (-1.0, 1.0, 0.25):
            assert decision(model, [-x, x]) == pytest.approx(x, abs=1e-6)

    def test_support_vector_margins(self):
        model = train_binary(TWO_POINT_G, TWO_POINT_Y, C=10.0)
        assert decision(model, [-1.0, 1.0]) == pytest.approx(1.0, abs=1e-6)
        assert decision(model, [1.0, -1.0]) == pytest.approx(-1.0, abs=1e-6)

    def test_duplicated_dataset_same_decision(self):
        # dual equivalence holds when no alpha is at the box bound: each copy
        # then takes half the original weight and w, b are unchanged
        rng = np.random.default_rng(0)
        X = np.concatenate([rng.normal(size=(6, 2)) + [3, 0], rng.normal(size=(6, 2)) - [3, 0]])
        y = np.array([1.0] * 6 + [-1.0] * 6)
        G = X @ X.T
        model = train_binary(G, y, C=100.0)
        assert model.alpha.max() < 100.0 - 1e-6  # interior optimum
        dup = np.tile(np.arange(12), 2)
        model2 = train_binary(G[np.ix_(dup, dup)], np.concatenate([y, y]), C=100.0)
        for t in range(12):
            f1 = decision(model, G[t])
            f2 = decision(model2, G[np.ix_(dup, dup)][t])
            assert f1 == pytest.approx(f2, abs=1e-6)

    def test_constraints_hold(self):
        rng = np.random.default_rng(5)
        for trial in range(5):
            G, y = random_instance(rng, 20, separable=True)
            model = train_binary(G, y, C=1.0)
            assert np.all(model.alpha >= -1e-12)
            assert np.all(model.alpha <= 1.0 + 1e-12)
            assert float(model.alpha @ y) == pytest.approx(0.0, abs=1e-8)

    def test_kkt_audit_random_instances(self):
        rng = np.random.default_rng(7)
        for trial in range(20):
            m = int(rng.integers(6, 41))
            G, y = random_instance(rng, m, separable=bool(trial % 2))
            model = train_binary(G, y, C=1.0, tol=1e-3)
            assert model.converged
            assert kkt_ok(G, y, model, tol=1e-3)

    def test_dual_objective_beats_random_feasible(self):
        rng = np.random.default_rng(8)
        for _ in range(5):
            m = int(rng.integers(6, 21))
            G, y = random_instance(rng, m, separable=False)
            model = train_binary(G, y, C=1.0)
            best = dual_objective(G, y, model.alpha)
            for _ in range(1000):
                alpha = random_feasible(rng, y, 1.0)
                assert best >= dual_objective(G, y, alpha) - 1e-9

    def test_deterministic(self):
        rng = np.random.default_rng(9)
        G, y = random_instance(rng, 25, separable=False)
        m1 = train_binary(G, y)
        m2 = train_binary(G, y)
        assert np.array_equal(m1.alpha, m2.alpha)
        assert m1.bias == m2.bias

    def test_single_class_rejected(self):
        with pytest.raises(ValidationError):
            train_binary(np.eye(3), np.ones(3))


class TestDecision:
    def _model(self):
        return train_binary(TWO_POINT_G, TWO_POINT_Y, C=10.0)

    def test_length_mismatch(self):
        with pytest.raises(ValidationError):
            decision(self._model(), [1.0, 2.0, 3.0])

    def test_empty_support_returns_bias(self):
        model = SvmBinaryModel(
            alpha=np.zeros(3), y=np.array([1.0, -1.0, 1.0]), bias=0.7,
            C=1.0, tol=1e-3, converged=True,
        )
        assert decision(model, [5.0, 6.0, 7.0]) == 0.7

    def test_linearity_in_kernel_row(self):
        model = self._model()
        k = np.array([0.3, -0.8])
        f1 = decision(model, k) - model.bias
        f2 = decision(model, 2 * k) - model.bias
        assert f2 == pytest.approx(2 * f1, abs=1e-12)

    def test_sign_tie_goes_positive(self):
        model = SvmBinaryModel(
            alpha=np.zeros(2), y=np.array([1.0, -1.0]), bias=0.0,
            C=1.0, tol=1e-3, converged=True,
        )
        assert predict_binary(model, [0.0, 0.0]) == 1


class TestMulticlass:
    def test_two_class_reduces_to_binary(self):
        rng = np.random.default_rng(10)
        G, y_pm = random_instance(rng, 16, separable=True)
        labels = (y_pm > 0).astype(int)
        clf = train_multiclass(G, labels)
        binary = clf.models[1]
        for t in range(16):
            pred = predict_multiclass(clf, G[t])
            assert pred == (1 if predict_binary(binary, G[t]) > 0 else 0)

    def test_all_ties_pick_class_zero(self):
        flat = SvmBinaryModel(
            alpha=np.zeros(2), y=np.array([1.0, -1.0]), bias=0.5,
            C=1.0, tol=1e-3, converged=True,
        )
        clf = MulticlassSvm(models=[flat, flat, flat], n_classes=3)
        assert predict_multiclass(clf, [0.0, 0.0]) == 0

    def test_argmax_shift_invariance(self):
        rng = np.random.default_rng(12)
        G, y_pm = random_instance(rng, 15, separable=True)
        labels = (y_pm > 0).astype(int)
        clf = train_multiclass(G, labels)
        shifted = MulticlassSvm(
            models=[
                SvmBinaryModel(
                    alpha=m.alpha, y=m.y, bias=m.bias + 2.5, C=m.C, tol=m.tol,
                    converged=m.converged,
                )
                for m in clf.models
            ],
            n_classes=2,
        )
        for t in range(15):
            assert predict_multiclass(clf, G[t]) == predict_multiclass(shifted, G[t])

    def test_needs_two_classes(self):
        with pytest.raises(ValidationError):
            train_multiclass(np.eye(3), np.zeros(3, dtype=int))


class TestPolyKernel:
    def test_unit_vector(self):
        spec = PolyKernelSpec(degree=3, gamma=1.0, coef0=0.0)
        assert poly_kernel([1, 0], [1, 0], spec) == 1.0

    def test_orthogonal(self):
        spec = PolyKernelSpec(degree=3, gamma=1.0, coef0=0.0)
        assert poly_kernel([1, 0], [0, 1], spec) == 0.0

    def test_hand_value(self):
        spec = PolyKernelSpec(degree=3, gamma=0.5, coef0=1.0)
        assert poly_kernel([1, 2], [3, 4], spec) == pytest.approx(274.625, abs=1e-12)

    def test_gram_matches_pointwise(self):
        rng = np.random.default_rng(14)
        X = rng.normal(size=(6, 3))
        spec = PolyKernelSpec(degree=3, gamma=0.7, coef0=0.2)
        G = poly_gram(X, spec=spec)
        for i in range(6):
            for j in range(6):
                assert G[i, j] == pytest.approx(poly_kernel(X[i], X[j], spec), abs=1e-9)

    def test_default_gamma(self):
        rng = np.random.default_rng(15)
        X = rng.normal(size=(50, 4))
        expected = 1.0 / (4 * X.var(axis=0).mean())
        assert default_gamma(X) == pytest.approx(expected, rel=1e-12)
