"""Knowledge-graph topic context: translation embeddings plus staged topic
resolution.

The script trains translation embeddings on a small triple set, shows that true
triples score below corrupted ones, then walks the three resolution stages that
map free-text topics onto graph entities: whole-topic match, per-word match,
and nearest-neighbor fallback through word embeddings.

Run with: python3 demos/kg_topic_context.py
"""

from __future__ import annotations

import numpy as np

from argmine.corpus import Topic
from argmine.embeddings import EmbeddingTable
from argmine.kg import (
    KnowledgeGraph,
    Triple,
    resolve_topic,
    topic_context_vectors,
    train_transe,
    transe_score,
)


def build_graph() -> KnowledgeGraph:
    triples = [
        Triple("Death_penalty", "related_to", "prison"),
        Triple("Death_penalty", "debated_in", "politics"),
        Triple("gun", "used_in", "crime"),
        Triple("gun", "regulated_by", "control"),
        Triple("control", "part_of", "regulation"),
        Triple("crime", "leads_to", "prison"),
        Triple("prison", "located_in", "state"),
        Triple("regulation", "debated_in", "politics"),
    ]
    return KnowledgeGraph.from_triples(triples)


def build_word_table() -> EmbeddingTable:
    return EmbeddingTable(
        {
            "gun": np.array([1.0, 0.0, 0.0]),
            "firearms": np.array([0.95, 0.05, 0.0]),
            "control": np.array([0.0, 1.0, 0.0]),
            "law": np.array([0.0, 0.0, 1.0]),
            "death": np.array([0.5, 0.5, 0.0]),
            "penalty": np.array([0.0, 0.5, 0.5]),
        }
    )


def main() -> None:
    kg = build_graph()
    print(f"graph: {len(kg.entities)} entities, {len(kg.triples)} triples")

    table = train_transe(kg, dimension=16, epochs=200, seed=0)
    true_scores = [transe_score(table, t.head, t.relation, t.tail) for t in kg.triples]
    entities = sorted(kg.entities)
    rng = np.random.default_rng(1)
    corrupt_scores = [
        transe_score(table, t.head, t.relation, entities[rng.integers(len(entities))])
        for t in kg.triples
        for _ in range(5)
    ]
    print(f"mean true-triple score:      {np.mean(true_scores):.3f}")
    print(f"mean corrupted-triple score: {np.mean(corrupt_scores):.3f}")
    print()

    words = build_word_table()
    for topic_text in ("death penalty", "gun control", "firearms"):
        resolutions = resolve_topic(Topic.from_text(topic_text), kg, words)
        print(f"topic {topic_text!r}:")
        for r in resolutions:
            origin = f" (for word {r.word!r})" if r.word else ""
            print(f"  stage {r.stage}: entity {r.entity!r}{origin}")
        vectors = topic_context_vectors([r.entity for r in resolutions], table)
        print(f"  context: {len(vectors)} vector(s) of dimension {vectors[0].shape[0]}")
    print()
    print("stage 1 matches the whole topic, stage 2 matches individual words,")
    print("stage 3 falls back to the nearest word-embedding neighbor in the graph.")


if __name__ == "__main__":
    main()
