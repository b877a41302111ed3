"""Training driver: featurization, mini-batch descent, restarts with
validation-based model selection."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import torch

from ..corpus import LabeledExample, Split
from ..embeddings import EmbeddingTable, embed_tokens
from ..kg import EntityEmbeddingTable, KnowledgeGraph, map_topic, topic_context_vectors
from ..models.attention import Vocabulary, build_attention_input
from ..models.config import ModelConfig, ModelError, init_parameters
from ..models.losses import batch_loss, class_weights
from ..models.torchops import to_torch_params
from .metrics import (
    CLASS_ORDER_THREE,
    CLASS_ORDER_TWO,
    label_index,
    macro_f1,
    predict_classes,
    truncate_example,
)


class TrainingError(RuntimeError):
    pass


class DivergenceError(TrainingError):
    """Loss became non-finite; carries the epoch at which it happened."""

    def __init__(self, epoch: int):
        super().__init__(f"training loss became non-finite at epoch {epoch}")
        self.epoch = epoch


@dataclass
class Hyperparameters:
    epochs: int = 50
    batch_size: int = 16
    learning_rate: float = 0.1
    optimizer: str = "sgd"  # "sgd" (baseline contract) or "adam"
    max_words: int = 60

    def to_dict(self) -> dict:
        return {
            "epochs": self.epochs,
            "batch_size": self.batch_size,
            "learning_rate": self.learning_rate,
            "optimizer": self.optimizer,
            "max_words": self.max_words,
        }


@dataclass
class TrainRun:
    config: ModelConfig
    seed: int
    params: dict[str, np.ndarray]
    history: list[tuple[float, float]]  # (train loss, validation macro-F1) per epoch

    @property
    def val_macro_f1(self) -> float:
        return self.history[-1][1]


class WordVectorFeaturizer:
    """Dense-vector inputs for the recurrent family.

    topic_source selects the context for the topic encoder: "words" uses the
    word-embedding table, "kg" maps the topic to entities and looks up their
    trained vectors, "none" feeds no topic (topic-blind ablation).
    """

    def __init__(
        self,
        word_table: EmbeddingTable,
        topic_source: str = "words",
        kg: KnowledgeGraph | None = None,
        entity_table: EntityEmbeddingTable | None = None,
        max_neighbor_candidates: int = 10,
    ):
        if topic_source not in ("words", "kg", "none"):
            raise ValueError(f"unknown topic source {topic_source!r}")
        if topic_source == "kg" and (kg is None or entity_table is None):
            raise ValueError("topic_source 'kg' requires a knowledge graph and entity table")
        self.word_table = word_table
        self.topic_source = topic_source
        self.kg = kg
        self.entity_table = entity_table
        self.max_neighbor_candidates = max_neighbor_candidates
        self._topic_cache: dict[str, np.ndarray] = {}

    @property
    def input_dimension(self) -> int:
        return self.word_table.dimension

    @property
    def topic_input_dimension(self) -> int:
        if self.topic_source == "kg":
            return self.entity_table.dimension
        return self.word_table.dimension

    def _topic_vectors(self, ex: LabeledExample) -> np.ndarray | None:
        if self.topic_source == "none":
            return None
        key = ex.topic.raw
        if key not in self._topic_cache:
            if self.topic_source == "words":
                vectors = embed_tokens(self.word_table, ex.topic.tokens, "zero")
            else:
                entities = map_topic(
                    ex.topic, self.kg, self.word_table, self.max_neighbor_candidates
                )
                vectors = topic_context_vectors(entities, self.entity_table)
            self._topic_cache[key] = np.stack(vectors)
        return self._topic_cache[key]

    def featurize(self, ex: LabeledExample):
        sentence = np.stack(embed_tokens(self.word_table, ex.sentence.tokens, "zero"))
        return sentence, self._topic_vectors(ex)


class TokenIdFeaturizer:
    """Framed token-id inputs for the attention family."""

    def __init__(self, vocab: Vocabulary, config: ModelConfig):
        self.vocab = vocab
        self.config = config

    @classmethod
    def from_examples(
        cls, examples: Sequence[LabeledExample], config: ModelConfig
    ) -> "TokenIdFeaturizer":
        sequences = [ex.sentence.tokens for ex in examples]
        sequences += [ex.topic.tokens for ex in examples]
        return cls(Vocabulary.build(sequences), config)

    def featurize(self, ex: LabeledExample):
        sentence_ids = self.vocab.encode(ex.sentence.tokens)
        topic_ids = self.vocab.encode(ex.topic.tokens) if self.config.use_topic else None
        return build_attention_input(sentence_ids, topic_ids, self.config)


def _train_class_weights(
    examples: Sequence[LabeledExample], num_classes: int
) -> np.ndarray:
    counts = [0] * num_classes
    for ex in examples:
        counts[label_index(ex.label, num_classes)] += 1
    if any(c == 0 for c in counts):
        order = CLASS_ORDER_TWO if num_classes == 2 else CLASS_ORDER_THREE
        missing = [order[i].value for i, c in enumerate(counts) if c == 0]
        raise TrainingError(f"training set has no examples for classes {missing}")
    return class_weights(counts)


def train(
    config: ModelConfig,
    split: Split,
    hyper: Hyperparameters,
    featurizer,
    seed: int = 0,
) -> TrainRun:
    """Mini-batch descent on mean weighted cross-entropy. Deterministic per seed.

    History records one (mean train loss, validation macro-F1) entry per epoch,
    plus an epoch-0 entry for the initialization.
    """
    if not split.train:
        raise TrainingError("training set is empty")
    task = "two_class" if config.num_classes == 2 else "three_class"
    class_set = CLASS_ORDER_TWO if config.num_classes == 2 else CLASS_ORDER_THREE
    weights = _train_class_weights(split.train, config.num_classes)

    train_data = [
        (featurizer.featurize(truncate_example(ex, hyper.max_words)),
         label_index(ex.label, config.num_classes))
        for ex in split.train
    ]
    val_inputs = [
        featurizer.featurize(truncate_example(ex, hyper.max_words)) for ex in split.val
    ]
    val_golds = [class_set[label_index(ex.label, config.num_classes)] for ex in split.val]

    torch.manual_seed(seed)
    params = init_parameters(config, seed)
    tp = to_torch_params(params, requires_grad=True)
    weights_t = torch.as_tensor(weights, dtype=tp["head/W_final"].dtype)

    if hyper.optimizer == "sgd":
        optimizer = torch.optim.SGD(list(tp.values()), lr=hyper.learning_rate)
    elif hyper.optimizer == "adam":
        optimizer = torch.optim.Adam(list(tp.values()), lr=hyper.learning_rate)
    else:
        raise TrainingError(f"unknown optimizer {hyper.optimizer!r}")

    def current_params() -> dict[str, np.ndarray]:
        return {name: t.detach().numpy().copy() for name, t in tp.items()}

    def val_f1() -> float:
        if not split.val:
            return 0.0
        idx = predict_classes(current_params(), config, val_inputs, task)
        return macro_f1([class_set[i] for i in idx], val_golds, class_set)

    def mean_loss() -> float:
        with torch.no_grad():
            total = 0.0
            for start in range(0, len(train_data), hyper.batch_size):
                chunk = train_data[start : start + hyper.batch_size]
                total += float(batch_loss(tp, config, chunk, weights_t)) * len(chunk)
        return total / len(train_data)

    history: list[tuple[float, float]] = [(mean_loss(), val_f1())]
    rng = random.Random(seed)
    order = list(range(len(train_data)))
    for epoch in range(1, hyper.epochs + 1):
        rng.shuffle(order)
        epoch_loss = 0.0
        for start in range(0, len(order), hyper.batch_size):
            chunk = [train_data[i] for i in order[start : start + hyper.batch_size]]
            optimizer.zero_grad()
            loss = batch_loss(tp, config, chunk, weights_t)
            if not torch.isfinite(loss):
                raise DivergenceError(epoch)
            loss.backward()
            optimizer.step()
            epoch_loss += float(loss.detach()) * len(chunk)
        history.append((epoch_loss / len(train_data), val_f1()))
    return TrainRun(config=config, seed=seed, params=current_params(), history=history)


def restart_select(
    config: ModelConfig,
    split: Split,
    hyper: Hyperparameters,
    featurizer,
    n_restarts: int = 10,
    base_seed: int = 0,
    train_fn: Callable[..., TrainRun] | None = None,
) -> tuple[TrainRun, list[TrainRun]]:
    """Train with seeds base_seed..base_seed+n-1 and keep the run with the
    highest validation macro-F1; exact ties go to the lowest seed."""
    if n_restarts < 1:
        raise TrainingError(f"n_restarts must be >= 1, got {n_restarts}")
    runner = train_fn or train
    runs: list[TrainRun] = []
    for seed in range(base_seed, base_seed + n_restarts):
        try:
            runs.append(runner(config, split, hyper, featurizer, seed=seed))
        except TrainingError as exc:
            raise TrainingError(f"restart with seed {seed} failed: {exc}") from exc
    best = max(runs, key=lambda run: (run.val_macro_f1, -run.seed))
    return best, runs
