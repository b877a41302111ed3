"""Macro-F1 evaluation: confusion matrix, per-class scores, report serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numpy as np
import torch

from ..corpus import BinaryLabel, Label, LabeledExample, to_two_class, truncate
from ..models.config import ModelConfig, ModelError
from ..models.torchops import batch_logits, to_torch_params

CLASS_ORDER_THREE: tuple[Label, ...] = (
    Label.ARGUMENT_FOR,
    Label.ARGUMENT_AGAINST,
    Label.NO_ARGUMENT,
)
CLASS_ORDER_TWO: tuple[BinaryLabel, ...] = (BinaryLabel.ARGUMENT, BinaryLabel.NO_ARGUMENT)


class MetricsError(ValueError):
    pass


def confusion_matrix(
    golds: Sequence[Hashable], predictions: Sequence[Hashable], class_set: Sequence[Hashable]
) -> np.ndarray:
    """Counts indexed [gold, predicted] in class_set order."""
    index = {c: i for i, c in enumerate(class_set)}
    matrix = np.zeros((len(class_set), len(class_set)), dtype=np.int64)
    for g, p in zip(golds, predictions):
        matrix[index[g], index[p]] += 1
    return matrix


def _per_class_scores(matrix: np.ndarray) -> list[tuple[float, float, float]]:
    scores = []
    for c in range(matrix.shape[0]):
        tp = matrix[c, c]
        predicted = matrix[:, c].sum()
        gold = matrix[c, :].sum()
        precision = tp / predicted if predicted > 0 else 0.0
        recall = tp / gold if gold > 0 else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
        scores.append((float(precision), float(recall), float(f1)))
    return scores


def macro_f1(
    predictions: Sequence[Hashable],
    golds: Sequence[Hashable],
    class_set: Sequence[Hashable],
) -> float:
    """Unweighted mean of per-class F1 over class_set.

    Classes absent from both gold and prediction contribute F1 = 0, which
    penalizes degenerate predictors.
    """
    if len(predictions) != len(golds):
        raise MetricsError(f"length mismatch: {len(predictions)} predictions vs {len(golds)} golds")
    if not golds:
        raise MetricsError("cannot score an empty prediction set")
    for label in list(predictions) + list(golds):
        if label not in class_set:
            raise MetricsError(f"label {label!r} not in class set {list(class_set)}")
    matrix = confusion_matrix(golds, predictions, class_set)
    scores = _per_class_scores(matrix)
    return float(np.mean([f1 for _, _, f1 in scores]))


@dataclass
class EvaluationReport:
    per_class: dict
    macro_f1: float
    confusion: list
    class_set: list
    task: str
    split: dict = field(default_factory=dict)
    config_digest: str | None = None
    seed: int | None = None

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(
            {
                "per_class": self.per_class,
                "macro_f1": self.macro_f1,
                "confusion": self.confusion,
                "class_set": self.class_set,
                "task": self.task,
                "split": self.split,
                "config_digest": self.config_digest,
                "seed": self.seed,
            },
            indent=indent,
        )


def label_index(label: Label, num_classes: int) -> int:
    """Gold class index under the model's class-order convention."""
    if num_classes == 3:
        return CLASS_ORDER_THREE.index(label)
    return CLASS_ORDER_TWO.index(to_two_class(label))


def predict_classes(
    params: dict[str, np.ndarray],
    config: ModelConfig,
    inputs: list,
    task: str,
    batch_size: int = 64,
) -> list[int]:
    """Argmax predictions as indices into the task's class order.

    A three-class model evaluated on the two-class task collapses
    p(for) + p(against) vs p(no-argument); ties go to the lower class index.
    """
    if task not in ("two_class", "three_class"):
        raise MetricsError(f"unknown task {task!r}")
    if task == "three_class" and config.num_classes == 2:
        raise MetricsError("a two-class model cannot be evaluated on the three-class task")
    tp = to_torch_params(params)
    predictions: list[int] = []
    for start in range(0, len(inputs), batch_size):
        chunk = inputs[start : start + batch_size]
        try:
            with torch.no_grad():
                logits = batch_logits(tp, config, chunk)
        except ModelError as exc:
            raise ModelError(f"forward pass failed at example {start}: {exc}") from exc
        probs = torch.softmax(logits.double(), dim=-1).numpy()
        if task == "two_class" and config.num_classes == 3:
            probs = np.stack([probs[:, 0] + probs[:, 1], probs[:, 2]], axis=1)
        predictions.extend(int(i) for i in np.argmax(probs, axis=1))
    return predictions


def evaluate(
    params: dict[str, np.ndarray],
    config: ModelConfig,
    examples: Sequence[LabeledExample],
    task: str,
    featurizer,
    max_words: int = 60,
    split_metadata: dict | None = None,
    config_digest: str | None = None,
    seed: int | None = None,
) -> EvaluationReport:
    """Forward every example, assemble confusion matrix and per-class scores."""
    if not examples:
        raise MetricsError("cannot evaluate on an empty example set")
    class_set = CLASS_ORDER_TWO if task == "two_class" else CLASS_ORDER_THREE
    inputs = [featurizer.featurize(truncate_example(ex, max_words)) for ex in examples]
    predicted_idx = predict_classes(params, config, inputs, task)
    predictions = [class_set[i] for i in predicted_idx]
    if task == "two_class":
        golds = [to_two_class(ex.label) for ex in examples]
    else:
        golds = [ex.label for ex in examples]
    matrix = confusion_matrix(golds, predictions, class_set)
    scores = _per_class_scores(matrix)
    per_class = {
        cls.value: {
            "precision": p,
            "recall": r,
            "f1": f1,
            "support": int(matrix[i, :].sum()),
        }
        for i, (cls, (p, r, f1)) in enumerate(zip(class_set, scores))
    }
    return EvaluationReport(
        per_class=per_class,
        macro_f1=float(np.mean([f1 for _, _, f1 in scores])),
        confusion=matrix.tolist(),
        class_set=[c.value for c in class_set],
        task=task,
        split=split_metadata or {},
        config_digest=config_digest,
        seed=seed,
    )


def truncate_example(ex: LabeledExample, max_words: int) -> LabeledExample:
    truncated = truncate(ex.sentence, max_words)
    if truncated is ex.sentence:
        return ex
    return LabeledExample(
        topic=ex.topic,
        sentence=truncated,
        label=ex.label,
        set_tag=ex.set_tag,
        row_index=ex.row_index,
    )
