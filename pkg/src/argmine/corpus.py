"""Data model, ingestion, and split protocols for sentential argument corpora."""

from __future__ import annotations

import csv
import random
import string
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Sequence


class CorpusError(ValueError):
    """Raised on malformed corpus files or invalid split configurations."""


_PUNCT = string.punctuation


def tokenize(text: str) -> tuple[str, ...]:
    """Lowercase, whitespace-split, strip punctuation glued to word edges."""
    tokens = []
    for word in text.lower().split():
        word = word.strip(_PUNCT)
        if word:
            tokens.append(word)
    return tuple(tokens)


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[str, ...]
    raw: str

    @classmethod
    def from_text(cls, text: str) -> "Sentence":
        tokens = tokenize(text)
        if not tokens:
            raise CorpusError(f"sentence has no tokens after tokenization: {text!r}")
        return cls(tokens=tokens, raw=text)


@dataclass(frozen=True)
class Topic:
    tokens: tuple[str, ...]
    raw: str

    @classmethod
    def from_text(cls, text: str) -> "Topic":
        tokens = tokenize(text)
        if not tokens:
            raise CorpusError(f"topic has no tokens after tokenization: {text!r}")
        return cls(tokens=tokens, raw=text)


class Label(Enum):
    ARGUMENT_FOR = "Argument_for"
    ARGUMENT_AGAINST = "Argument_against"
    NO_ARGUMENT = "NoArgument"


class BinaryLabel(Enum):
    ARGUMENT = "Argument"
    NO_ARGUMENT = "NoArgument"


_SET_TAGS = ("train", "val", "test")


@dataclass(frozen=True)
class LabeledExample:
    topic: Topic
    sentence: Sentence
    label: Label
    set_tag: str | None = None
    row_index: int | None = None

    def __post_init__(self) -> None:
        if self.set_tag is not None and self.set_tag not in _SET_TAGS:
            raise CorpusError(f"invalid set tag {self.set_tag!r}, expected one of {_SET_TAGS}")


@dataclass(frozen=True)
class Split:
    train: tuple[LabeledExample, ...]
    val: tuple[LabeledExample, ...]
    test: tuple[LabeledExample, ...]
    metadata: dict = field(default_factory=dict, compare=False)

    def topics(self, part: str) -> set[str]:
        return {ex.topic.raw for ex in getattr(self, part)}


def to_two_class(label: Label) -> BinaryLabel:
    if label is Label.NO_ARGUMENT:
        return BinaryLabel.NO_ARGUMENT
    return BinaryLabel.ARGUMENT


def truncate(sentence: Sentence, max_words: int) -> Sentence:
    """Keep the first max_words tokens; raw text is left intact for provenance."""
    if max_words < 1:
        raise ValueError(f"max_words must be >= 1, got {max_words}")
    if len(sentence.tokens) <= max_words:
        return sentence
    return Sentence(tokens=sentence.tokens[:max_words], raw=sentence.raw)


def load_corpus(path: str | Path, format: str = "tsv") -> list[LabeledExample]:
    """Load a labeled argument corpus from a TSV file.

    Expected header columns: topic, sentence, annotation and optionally set.
    Annotation values must be Argument_for, Argument_against or NoArgument.
    """
    if format != "tsv":
        raise ValueError(f"unsupported corpus format {format!r}")
    path = Path(path)
    label_by_name = {label.value: label for label in Label}
    examples: list[LabeledExample] = []
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE)
        try:
            header = next(reader)
        except StopIteration:
            raise CorpusError(f"{path}: empty file, expected a header row") from None
        columns = {name.strip(): i for i, name in enumerate(header)}
        for required in ("topic", "sentence", "annotation"):
            if required not in columns:
                raise CorpusError(f"{path}: missing required column {required!r}")
        set_col = columns.get("set")
        for row_number, row in enumerate(reader, start=2):
            if not any(cell.strip() for cell in row):
                continue
            if len(row) < len(columns):
                raise CorpusError(f"{path}: row {row_number} has {len(row)} fields, expected {len(columns)}")
            annotation = row[columns["annotation"]].strip()
            if annotation not in label_by_name:
                raise CorpusError(
                    f"{path}: row {row_number}: unknown annotation {annotation!r}, "
                    f"expected one of {sorted(label_by_name)}"
                )
            try:
                topic = Topic.from_text(row[columns["topic"]])
                sentence = Sentence.from_text(row[columns["sentence"]])
            except CorpusError as exc:
                raise CorpusError(f"{path}: row {row_number}: {exc}") from None
            set_tag = None
            if set_col is not None:
                raw_tag = row[set_col].strip()
                if raw_tag:
                    if raw_tag not in _SET_TAGS:
                        raise CorpusError(
                            f"{path}: row {row_number}: invalid set value {raw_tag!r}"
                        )
                    set_tag = raw_tag
            examples.append(
                LabeledExample(
                    topic=topic,
                    sentence=sentence,
                    label=label_by_name[annotation],
                    set_tag=set_tag,
                    row_index=row_number,
                )
            )
    return examples


def write_corpus(examples: Sequence[LabeledExample], fh) -> None:
    """Emit examples in the ingestion TSV format (round-trips load_corpus)."""
    fh.write("topic\tsentence\tannotation\tset\n")
    for ex in examples:
        tag = ex.set_tag or ""
        topic = ex.topic.raw.replace("\t", " ").replace("\n", " ")
        sentence = ex.sentence.raw.replace("\t", " ").replace("\n", " ")
        fh.write(f"{topic}\t{sentence}\t{ex.label.value}\t{tag}\n")


def _round_half_up(x: float) -> int:
    import math

    return int(math.floor(x + 0.5))


def _group_by_topic(examples: Sequence[LabeledExample]) -> dict[str, list[LabeledExample]]:
    groups: dict[str, list[LabeledExample]] = {}
    for ex in examples:
        groups.setdefault(ex.topic.raw, []).append(ex)
    return groups


def in_topic_split(
    examples: Sequence[LabeledExample],
    ratios: tuple[float, float, float] = (0.7, 0.1, 0.2),
    seed: int = 0,
) -> Split:
    """Stratified per-topic split: every topic contributes to train, val and test."""
    r_train, r_val, r_test = ratios
    if min(ratios) <= 0:
        raise CorpusError(f"split ratios must be positive, got {ratios}")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise CorpusError(f"split ratios must sum to 1, got {ratios} (sum {sum(ratios)})")
    groups = _group_by_topic(examples)
    for topic, group in groups.items():
        if len(group) < 3:
            raise CorpusError(
                f"topic {topic!r} has only {len(group)} examples; "
                "at least 3 are needed for a three-way split"
            )
    rng = random.Random(seed)
    train: list[LabeledExample] = []
    val: list[LabeledExample] = []
    test: list[LabeledExample] = []
    for topic in sorted(groups):
        group = list(groups[topic])
        rng.shuffle(group)
        n = len(group)
        n_val = max(1, _round_half_up(r_val * n))
        n_test = max(1, _round_half_up(r_test * n))
        n_train = n - n_val - n_test
        if n_train < 1:
            raise CorpusError(
                f"topic {topic!r}: ratios {ratios} leave no training examples out of {n}"
            )
        train.extend(group[:n_train])
        val.extend(group[n_train : n_train + n_val])
        test.extend(group[n_train + n_val :])
    return Split(
        train=tuple(train),
        val=tuple(val),
        test=tuple(test),
        metadata={"kind": "in_topic", "seed": seed, "ratios": list(ratios)},
    )


def cross_topic_split(
    examples: Sequence[LabeledExample],
    held_out_topic: str,
    val_fraction: float = 0.1,
    seed: int = 0,
) -> Split:
    """Hold one topic out entirely for test; no topic appears on both sides."""
    if not 0 < val_fraction < 1:
        raise CorpusError(f"val_fraction must be in (0, 1), got {val_fraction}")
    groups = _group_by_topic(examples)
    if held_out_topic not in groups:
        raise CorpusError(
            f"unknown topic {held_out_topic!r}; available topics: {sorted(groups)}"
        )
    if len(groups) < 2:
        raise CorpusError("corpus has a single topic; nothing left to train on")
    test = list(groups[held_out_topic])
    pool: list[LabeledExample] = []
    for topic in sorted(groups):
        if topic != held_out_topic:
            pool.extend(groups[topic])
    rng = random.Random(seed)
    rng.shuffle(pool)
    n_val = max(1, _round_half_up(val_fraction * len(pool)))
    if n_val >= len(pool):
        raise CorpusError("validation fraction leaves no training examples")
    return Split(
        train=tuple(pool[n_val:]),
        val=tuple(pool[:n_val]),
        test=tuple(test),
        metadata={
            "kind": "cross_topic",
            "seed": seed,
            "held_out_topic": held_out_topic,
            "val_fraction": val_fraction,
        },
    )
