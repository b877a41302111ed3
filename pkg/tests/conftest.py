from __future__ import annotations

import random

import pytest

from argmine.corpus import Label, LabeledExample, Sentence, Topic
from argmine.embeddings import EmbeddingTable
from argmine.kg import KnowledgeGraph, Triple

import numpy as np


CORPUS_HEADER = "topic\tsentence\tannotation\tset\n"


@pytest.fixture
def tiny_corpus_path(tmp_path):
    """Three rows, one per label."""
    path = tmp_path / "tiny.tsv"
    path.write_text(
        CORPUS_HEADER
        + "gun control\tBackground checks save lives.\tArgument_for\ttrain\n"
        + "gun control\tGun laws violate basic rights.\tArgument_against\tval\n"
        + "gun control\tThe law passed in 1994.\tNoArgument\ttest\n",
        encoding="utf-8",
    )
    return path


def make_example(topic: str, sentence: str, label: Label, row_index: int | None = None) -> LabeledExample:
    return LabeledExample(
        topic=Topic.from_text(topic),
        sentence=Sentence.from_text(sentence),
        label=label,
        row_index=row_index,
    )


def synthetic_corpus(
    n_topics: int = 8, per_topic: int = 100, seed: int = 7
) -> list[LabeledExample]:
    """Multi-topic corpus with all three labels present per topic."""
    rng = random.Random(seed)
    labels = list(Label)
    fillers = ["people", "often", "say", "that", "this", "matters", "today", "because"]
    examples = []
    row = 2
    for t in range(n_topics):
        topic = f"topic{t}"
        for i in range(per_topic):
            label = labels[i % 3]
            words = rng.sample(fillers, 4) + [f"word{t}_{i}"]
            examples.append(make_example(topic, " ".join(words), label, row_index=row))
            row += 1
    return examples


SEPARABLE_MARKERS = {
    "excellent": Label.ARGUMENT_FOR,
    "terrible": Label.ARGUMENT_AGAINST,
    "reported": Label.NO_ARGUMENT,
}
SEPARABLE_FILLERS = ["the", "policy", "was", "widely", "seen", "as", "yesterday"]


def separable_word_table() -> EmbeddingTable:
    """Markers on distinct axes so the labels are linearly recoverable."""
    vectors = {
        "excellent": np.array([1.0, 0.0, 0.0, 0.0]),
        "terrible": np.array([0.0, 1.0, 0.0, 0.0]),
        "reported": np.array([0.0, 0.0, 1.0, 0.0]),
        "guns": np.array([0.5, 0.5, 0.0, 0.0]),
    }
    rng = np.random.default_rng(0)
    for word in SEPARABLE_FILLERS:
        vectors[word] = np.concatenate([np.zeros(3), [1.0]]) + 0.05 * rng.normal(size=4)
    return EmbeddingTable(vectors)


def separable_corpus(n: int = 200, seed: int = 0) -> list[LabeledExample]:
    """Label is determined by a single marker word in the sentence."""
    rng = random.Random(seed)
    markers = list(SEPARABLE_MARKERS)
    examples = []
    for i in range(n):
        marker = markers[i % 3]
        words = rng.sample(SEPARABLE_FILLERS, 4)
        words.insert(rng.randrange(len(words) + 1), marker)
        examples.append(make_example("guns", " ".join(words), SEPARABLE_MARKERS[marker]))
    return examples


def write_embeddings(table: EmbeddingTable, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for token in table.tokens():
            values = " ".join(repr(float(v)) for v in table.vector(token))
            fh.write(f"{token} {values}\n")


@pytest.fixture
def word_table() -> EmbeddingTable:
    """Fixture embeddings: 'firearms' is closest (cosine) to 'gun'."""
    vectors = {
        "gun": np.array([1.0, 0.0, 0.0]),
        "firearms": np.array([0.95, 0.05, 0.0]),
        "control": np.array([0.0, 1.0, 0.0]),
        "law": np.array([0.0, 0.0, 1.0]),
        "death": np.array([0.5, 0.5, 0.0]),
        "penalty": np.array([0.0, 0.5, 0.5]),
    }
    return EmbeddingTable(vectors)


@pytest.fixture
def fixture_kg() -> KnowledgeGraph:
    """Entities for whole-topic, per-word, and neighbor-fallback resolution."""
    triples = [
        Triple("Death_penalty", "related_to", "prison"),
        Triple("gun", "used_in", "crime"),
        Triple("control", "part_of", "regulation"),
        Triple("prison", "located_in", "state"),
        Triple("crime", "leads_to", "prison"),
    ]
    return KnowledgeGraph.from_triples(triples)


@pytest.fixture
def toy_kg() -> KnowledgeGraph:
    """Six entities, two relations, eight triples for embedding training."""
    triples = [
        Triple("a", "r1", "b"),
        Triple("b", "r1", "c"),
        Triple("c", "r1", "d"),
        Triple("d", "r1", "e"),
        Triple("e", "r1", "f"),
        Triple("a", "r2", "c"),
        Triple("b", "r2", "d"),
        Triple("c", "r2", "e"),
    ]
    return KnowledgeGraph.from_triples(triples)


@pytest.fixture
def embeddings_file(tmp_path):
    path = tmp_path / "vectors.txt"
    path.write_text(
        "gun 1.0 0.0 0.0\n"
        "firearms 0.95 0.05 0.0\n"
        "control 0.0 1.0 0.0\n"
        "law 0.0 0.0 1.0\n"
        "crime 0.2 0.2 0.6\n",
        encoding="utf-8",
    )
    return path


@pytest.fixture
def triples_file(tmp_path, fixture_kg):
    path = tmp_path / "triples.tsv"
    lines = [f"{t.head}\t{t.relation}\t{t.tail}" for t in fixture_kg.triples]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
