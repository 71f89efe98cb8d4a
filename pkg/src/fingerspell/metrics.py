"""Confusion matrix and classification-report computation.

The confusion matrix is a (26, 26) integer array: rows are the actual class,
columns the predicted class. Per-class precision/recall/F1 follow the usual
0/0 -> 0 conventions so reports never contain NaN. The rendered report is a
fixed-width table (two-decimal, half-up rounding) that is byte-stable across
runs.
"""

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

import numpy as np

from .dataset import LABELS, NUM_CLASSES, label_index
from .errors import DomainError, EmptyInput, LengthMismatch


@dataclass
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass
class EvalReport:
    per_class: list  # 26 ClassMetrics in label order
    accuracy: float
    macro_avg: ClassMetrics
    weighted_avg: ClassMetrics
    total_support: int


def _label_indices(seq) -> np.ndarray:
    out = np.empty(len(seq), dtype=np.int64)
    for i, v in enumerate(seq):
        if isinstance(v, str):
            out[i] = label_index(v)
        else:
            idx = int(v)
            if not 0 <= idx < NUM_CLASSES:
                raise ValueError(f"label index out of range: {idx}")
            out[i] = idx
    return out


def confusion(actual, predicted) -> np.ndarray:
    """Count matrix: counts[a][p] = how often actual a was predicted p.
    Labels may be letters or indices."""
    if len(actual) != len(predicted):
        raise LengthMismatch(
            f"{len(actual)} actual labels vs {len(predicted)} predicted"
        )
    if len(actual) == 0:
        raise EmptyInput("no samples to tally")
    a = _label_indices(actual)
    p = _label_indices(predicted)
    cm = np.zeros((NUM_CLASSES, NUM_CLASSES), dtype=np.int64)
    np.add.at(cm, (a, p), 1)
    return cm


def f1_score(precision: float, recall: float) -> float:
    """Harmonic mean 2PR/(P+R); defined as 0 when P + R = 0."""
    if not (0.0 <= precision <= 1.0 and 0.0 <= recall <= 1.0):
        raise DomainError(
            f"precision/recall must be in [0, 1], got {precision}, {recall}"
        )
    denom = precision + recall
    if denom == 0.0:
        return 0.0
    return 2.0 * precision * recall / denom


def metrics_from_confusion(cm) -> EvalReport:
    """Per-class precision/recall/F1/support plus accuracy and macro/weighted
    averages. Empty predicted columns and empty actual rows yield 0 metrics."""
    cm = np.asarray(cm, dtype=np.int64)
    if cm.shape != (NUM_CLASSES, NUM_CLASSES):
        raise ValueError(f"expected ({NUM_CLASSES}, {NUM_CLASSES}) matrix")
    if (cm < 0).any():
        raise ValueError("confusion counts must be non-negative")
    total = int(cm.sum())
    if total == 0:
        raise EmptyInput("empty confusion matrix")

    diag = cm.diagonal().astype(np.float64)
    col_sums = cm.sum(axis=0).astype(np.float64)
    row_sums = cm.sum(axis=1).astype(np.float64)

    per_class = []
    for c in range(NUM_CLASSES):
        precision = float(diag[c] / col_sums[c]) if col_sums[c] > 0 else 0.0
        recall = float(diag[c] / row_sums[c]) if row_sums[c] > 0 else 0.0
        per_class.append(
            ClassMetrics(precision, recall, f1_score(precision, recall), int(row_sums[c]))
        )

    accuracy = float(diag.sum() / total)
    macro_avg = ClassMetrics(
        float(np.mean([m.precision for m in per_class])),
        float(np.mean([m.recall for m in per_class])),
        float(np.mean([m.f1 for m in per_class])),
        total,
    )
    weighted_avg = ClassMetrics(
        float(sum(m.precision * m.support for m in per_class) / total),
        float(sum(m.recall * m.support for m in per_class) / total),
        float(sum(m.f1 * m.support for m in per_class) / total),
        total,
    )
    return EvalReport(per_class, accuracy, macro_avg, weighted_avg, total)


def _fmt2(value: float) -> str:
    """Two-decimal, half-up (0.125 -> '0.13', 0.994975 -> '0.99')."""
    return str(Decimal(repr(float(value))).quantize(Decimal("0.01"), ROUND_HALF_UP))


_NAME_W = 12
_COL_W = 10


def render_report(report: EvalReport) -> str:
    """Fixed-width classification report: one row per class, then accuracy
    (f1 position + support only), macro avg, and weighted avg rows."""
    header = " " * _NAME_W + "".join(
        f"{h:>{_COL_W}}" for h in ("precision", "recall", "f1-score", "support")
    )

    def metric_row(name, m):
        return (
            f"{name:>{_NAME_W}}"
            f"{_fmt2(m.precision):>{_COL_W}}"
            f"{_fmt2(m.recall):>{_COL_W}}"
            f"{_fmt2(m.f1):>{_COL_W}}"
            f"{m.support:>{_COL_W}}"
        )

    lines = [header, ""]
    for letter, m in zip(LABELS, report.per_class):
        lines.append(metric_row(letter, m))
    lines.append("")
    lines.append(
        f"{'accuracy':>{_NAME_W}}"
        + " " * (2 * _COL_W)
        + f"{_fmt2(report.accuracy):>{_COL_W}}"
        + f"{report.total_support:>{_COL_W}}"
    )
    lines.append(metric_row("macro avg", report.macro_avg))
    lines.append(metric_row("weighted avg", report.weighted_avg))
    return "\n".join(lines) + "\n"


def render_confusion_csv(cm) -> str:
    """27-line CSV: header `actual,A,...,Z`, then one row per actual class."""
    cm = np.asarray(cm, dtype=np.int64)
    lines = ["actual," + ",".join(LABELS)]
    for letter, row in zip(LABELS, cm):
        lines.append(letter + "," + ",".join(str(int(v)) for v in row))
    return "\n".join(lines) + "\n"
