"""Knowledge-graph triple store, translation-based embedding training, and the
staged topic-to-entity mapping used to build topic context sequences."""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .corpus import Topic
from .embeddings import EmbeddingTable, nearest_neighbors


class KGError(ValueError):
    """Raised on malformed graphs or invalid embedding queries."""


class UnresolvableTopicError(KGError):
    """No stage of the topic mapping produced an entity for any topic word."""


@dataclass(frozen=True)
class Triple:
    head: str
    relation: str
    tail: str


@dataclass(frozen=True)
class KnowledgeGraph:
    entities: frozenset[str]
    relations: frozenset[str]
    triples: tuple[Triple, ...]

    @classmethod
    def from_triples(cls, triples: Sequence[Triple]) -> "KnowledgeGraph":
        seen: set[Triple] = set()
        unique: list[Triple] = []
        for t in triples:
            if t not in seen:
                seen.add(t)
                unique.append(t)
        entities = frozenset(t.head for t in unique) | frozenset(t.tail for t in unique)
        relations = frozenset(t.relation for t in unique)
        return cls(entities=entities, relations=relations, triples=tuple(unique))

    def __len__(self) -> int:
        return len(self.triples)


def load_triples(path: str | Path) -> KnowledgeGraph:
    """Read a triple TSV: one `head TAB relation TAB tail` per line."""
    path = Path(path)
    triples: list[Triple] = []
    with path.open("r", encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise KGError(f"{path}: line {line_number}: expected 3 tab-separated fields, got {len(fields)}")
            triples.append(Triple(head=fields[0], relation=fields[1], tail=fields[2]))
    if not triples:
        raise KGError(f"{path}: no triples")
    return KnowledgeGraph.from_triples(triples)


@dataclass
class EntityEmbeddingTable:
    dimension: int
    entity_vectors: dict[str, np.ndarray]
    relation_vectors: dict[str, np.ndarray]

    def entity(self, name: str) -> np.ndarray:
        if name not in self.entity_vectors:
            raise KGError(f"unknown entity {name!r}")
        return self.entity_vectors[name]

    def relation(self, name: str) -> np.ndarray:
        if name not in self.relation_vectors:
            raise KGError(f"unknown relation {name!r}")
        return self.relation_vectors[name]


def transe_score(table: EntityEmbeddingTable, head: str, relation: str, tail: str) -> float:
    """Translation distance ||h + r - t||_2; lower means more plausible."""
    h = table.entity(head)
    r = table.relation(relation)
    t = table.entity(tail)
    return float(np.linalg.norm(h + r - t))


def train_transe(
    kg: KnowledgeGraph,
    dimension: int = 32,
    margin: float = 1.0,
    learning_rate: float = 0.01,
    epochs: int = 200,
    negatives_per_positive: int = 1,
    seed: int = 0,
) -> EntityEmbeddingTable:
    """Train translation embeddings with margin ranking loss over corrupted triples.

    Corruption replaces head or tail (uniform choice) with a random entity.
    Entity vectors are projected to the unit sphere at the start of each epoch.
    Deterministic given the seed.
    """
    if len(kg.triples) < 1:
        raise KGError("cannot train on an empty graph")
    if dimension < 1 or margin <= 0 or learning_rate <= 0 or epochs < 0 or negatives_per_positive < 1:
        raise KGError("non-positive hyperparameter")
    rng = np.random.default_rng(seed)
    entities = sorted(kg.entities)
    relations = sorted(kg.relations)
    ent_index = {e: i for i, e in enumerate(entities)}
    rel_index = {r: i for i, r in enumerate(relations)}
    bound = 6.0 / np.sqrt(dimension)
    ent = rng.uniform(-bound, bound, size=(len(entities), dimension))
    rel = rng.uniform(-bound, bound, size=(len(relations), dimension))
    rel /= np.maximum(np.linalg.norm(rel, axis=1, keepdims=True), 1e-12)

    triples = [(ent_index[t.head], rel_index[t.relation], ent_index[t.tail]) for t in kg.triples]
    for _ in range(epochs):
        ent /= np.maximum(np.linalg.norm(ent, axis=1, keepdims=True), 1e-12)
        order = rng.permutation(len(triples))
        for idx in order:
            h, r, t = triples[idx]
            for _neg in range(negatives_per_positive):
                h_c, t_c = h, t
                if rng.random() < 0.5:
                    h_c = int(rng.integers(len(entities)))
                else:
                    t_c = int(rng.integers(len(entities)))
                pos_diff = ent[h] + rel[r] - ent[t]
                neg_diff = ent[h_c] + rel[r] - ent[t_c]
                pos_d = np.linalg.norm(pos_diff)
                neg_d = np.linalg.norm(neg_diff)
                if margin + pos_d - neg_d <= 0:
                    continue
                g_pos = pos_diff / max(pos_d, 1e-12)
                g_neg = neg_diff / max(neg_d, 1e-12)
                # d loss/d(pos params) = +g_pos, d loss/d(neg params) = -g_neg
                ent[h] -= learning_rate * g_pos
                ent[t] += learning_rate * g_pos
                rel[r] -= learning_rate * (g_pos - g_neg)
                ent[h_c] += learning_rate * g_neg
                ent[t_c] -= learning_rate * g_neg
    if epochs > 0:
        ent /= np.maximum(np.linalg.norm(ent, axis=1, keepdims=True), 1e-12)
    return EntityEmbeddingTable(
        dimension=dimension,
        entity_vectors={e: ent[i].copy() for e, i in ent_index.items()},
        relation_vectors={r: rel[i].copy() for r, i in rel_index.items()},
    )


def normalize_entity_name(name: str) -> str:
    """Canonical form bridging topic text and graph-style names.

    Lowercase, surrounding punctuation stripped, internal whitespace mapped to
    single underscores. Idempotent.
    """
    cleaned = name.strip().strip(string.punctuation).lower()
    return "_".join(cleaned.split())


@dataclass(frozen=True)
class TopicResolution:
    """One resolved entity plus the stage (1..3) and source word that produced it."""

    entity: str
    stage: int
    word: str | None


def resolve_topic(
    topic: Topic,
    kg: KnowledgeGraph,
    word_table: EmbeddingTable,
    max_neighbor_candidates: int = 10,
) -> list[TopicResolution]:
    """Staged topic-to-entity resolution.

    Stage 1: the whole normalized topic text names an entity -> that one entity.
    Stage 2: per topic word, a normalized entity-name match.
    Stage 3: per remaining word, scan its nearest embedding neighbors (cosine,
    up to max_neighbor_candidates) for one whose normalized form names an
    entity. Words exhausting all candidates are dropped.
    """
    if not kg.triples:
        raise KGError("knowledge graph is empty")
    index = {normalize_entity_name(e): e for e in sorted(kg.entities)}
    whole = normalize_entity_name(topic.raw)
    if whole in index:
        return [TopicResolution(entity=index[whole], stage=1, word=None)]
    resolutions: list[TopicResolution] = []
    failures: list[str] = []
    for word in topic.tokens:
        key = normalize_entity_name(word)
        if key in index:
            resolutions.append(TopicResolution(entity=index[key], stage=2, word=word))
            continue
        if word in word_table:
            found = False
            for neighbor, _score in nearest_neighbors(
                word_table, word_table.vector(word), max_neighbor_candidates, "cosine"
            ):
                if neighbor == word:
                    continue
                n_key = normalize_entity_name(neighbor)
                if n_key in index:
                    resolutions.append(TopicResolution(entity=index[n_key], stage=3, word=word))
                    found = True
                    break
            if found:
                continue
            failures.append(f"{word!r}: no entity among {max_neighbor_candidates} nearest neighbors")
        else:
            failures.append(f"{word!r}: not an entity name and not in the embedding vocabulary")
    if not resolutions:
        raise UnresolvableTopicError(
            f"topic {topic.raw!r} resolved to no entities: " + "; ".join(failures)
        )
    return resolutions


def map_topic(
    topic: Topic,
    kg: KnowledgeGraph,
    word_table: EmbeddingTable,
    max_neighbor_candidates: int = 10,
) -> list[str]:
    """Entity-id sequence for a topic, in topic word order."""
    return [r.entity for r in resolve_topic(topic, kg, word_table, max_neighbor_candidates)]


def topic_context_vectors(
    entity_seq: Sequence[str], table: EntityEmbeddingTable
) -> list[np.ndarray]:
    """One embedding vector per entity, order preserved."""
    if not entity_seq:
        raise KGError("entity sequence must be nonempty")
    return [table.entity(e).copy() for e in entity_seq]
