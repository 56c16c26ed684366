"""Confusion matrix and classification report (per-class P/R/F1 plus averages)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

__all__ = ["ClassificationReport", "confusion", "report", "render_report"]


@dataclass
class ClassificationReport:
    class_names: list[str]
    precision: np.ndarray
    recall: np.ndarray
    f1: np.ndarray
    support: np.ndarray
    accuracy: float
    macro_avg: tuple[float, float, float]
    weighted_avg: tuple[float, float, float]

    def to_dict(self) -> dict:
        return {
            "classes": {
                name: {
                    "precision": float(self.precision[i]),
                    "recall": float(self.recall[i]),
                    "f1": float(self.f1[i]),
                    "support": int(self.support[i]),
                }
                for i, name in enumerate(self.class_names)
            },
            "accuracy": self.accuracy,
            "macro_avg": {
                "precision": self.macro_avg[0],
                "recall": self.macro_avg[1],
                "f1": self.macro_avg[2],
            },
            "weighted_avg": {
                "precision": self.weighted_avg[0],
                "recall": self.weighted_avg[1],
                "f1": self.weighted_avg[2],
            },
            "total_support": int(self.support.sum()),
        }


def confusion(y_true, y_pred, n_classes: int) -> np.ndarray:
    """Count matrix M[t][p] with rows = true class, columns = predicted."""
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.shape != y_pred.shape:
        raise ValidationError("y_true and y_pred must have equal length")
    matrix = np.zeros((n_classes, n_classes), dtype=np.int64)
    for t, p in zip(y_true, y_pred):
        if not (0 <= t < n_classes and 0 <= p < n_classes):
            raise ValidationError(f"label out of range: true={t}, pred={p}")
        matrix[t, p] += 1
    return matrix


def _safe_div(num, den):
    return num / den if den > 0 else 0.0


def report(matrix, class_names) -> ClassificationReport:
    """Precision/recall/F1 per class plus accuracy and macro/weighted averages.

    Undefined ratios (empty row or column) are reported as 0.
    """
    matrix = np.asarray(matrix, dtype=np.int64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValidationError("confusion matrix must be square")
    k = matrix.shape[0]
    if len(class_names) != k:
        raise ValidationError("class name count does not match matrix size")
    total = int(matrix.sum())
    if total == 0:
        raise ValidationError("confusion matrix is all zeros")

    precision = np.array([_safe_div(matrix[c, c], matrix[:, c].sum()) for c in range(k)])
    recall = np.array([_safe_div(matrix[c, c], matrix[c, :].sum()) for c in range(k)])
    f1 = np.array(
        [
            _safe_div(2 * precision[c] * recall[c], precision[c] + recall[c])
            for c in range(k)
        ]
    )
    support = matrix.sum(axis=1)
    accuracy = float(np.trace(matrix) / total)
    weights = support / total
    return ClassificationReport(
        class_names=list(class_names),
        precision=precision,
        recall=recall,
        f1=f1,
        support=support,
        accuracy=accuracy,
        macro_avg=(float(precision.mean()), float(recall.mean()), float(f1.mean())),
        weighted_avg=(
            float(weights @ precision),
            float(weights @ recall),
            float(weights @ f1),
        ),
    )


def render_report(rep: ClassificationReport) -> str:
    """Fixed-width table with 3-decimal cells, one row per class plus
    accuracy / macro avg / weighted avg."""
    label_width = max(12, max(len(n) for n in rep.class_names) + 2)
    header = f"{'':<{label_width}}{'precision':>10}{'recall':>10}{'f1-score':>10}{'support':>10}"
    lines = [header]
    for i, name in enumerate(rep.class_names):
        lines.append(
            f"{name:<{label_width}}{rep.precision[i]:>10.3f}{rep.recall[i]:>10.3f}"
            f"{rep.f1[i]:>10.3f}{float(rep.support[i]):>10.3f}"
        )
    acc = rep.accuracy
    lines.append(f"{'accuracy':<{label_width}}{acc:>10.3f}{acc:>10.3f}{acc:>10.3f}{acc:>10.3f}")
    total = float(rep.support.sum())
    mp, mr, mf = rep.macro_avg
    lines.append(f"{'macro avg':<{label_width}}{mp:>10.3f}{mr:>10.3f}{mf:>10.3f}{total:>10.3f}")
    wp, wr, wf = rep.weighted_avg
    lines.append(f"{'weighted avg':<{label_width}}{wp:>10.3f}{wr:>10.3f}{wf:>10.3f}{total:>10.3f}")
    return "\n".join(lines) + "\n"
