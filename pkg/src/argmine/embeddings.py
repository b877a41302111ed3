"""Word-embedding table: loading, lookup with OOV policy, nearest-neighbor search."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


class EmbeddingError(ValueError):
    """Raised on malformed embedding files or invalid queries."""


class EmbeddingTable:
    """Token -> dense vector map with exact linear-scan neighbor search.

    Immutable after construction; all queries are safe under concurrent readers.
    """

    def __init__(self, vectors: dict[str, np.ndarray]):
        if not vectors:
            raise EmbeddingError("embedding table must contain at least one token")
        dims = {v.shape for v in vectors.values()}
        if len(dims) != 1 or len(next(iter(dims))) != 1:
            raise EmbeddingError(f"inconsistent vector shapes: {sorted(dims)}")
        self.dimension = int(next(iter(dims))[0])
        self._vectors = {tok: np.asarray(v, dtype=np.float64) for tok, v in vectors.items()}
        self._tokens = sorted(self._vectors)
        self._matrix = np.stack([self._vectors[t] for t in self._tokens])

    def __len__(self) -> int:
        return len(self._vectors)

    def __contains__(self, token: str) -> bool:
        return token in self._vectors

    def tokens(self) -> list[str]:
        return list(self._tokens)

    def vector(self, token: str) -> np.ndarray:
        if token not in self._vectors:
            raise EmbeddingError(f"token {token!r} not in embedding table")
        return self._vectors[token].copy()


def load_embeddings(path: str | Path) -> EmbeddingTable:
    """Load a text-format embedding file: `token v1 v2 ... vd` per line.

    An optional first line `count dim` (two integer fields) is validated
    and skipped.
    """
    path = Path(path)
    vectors: dict[str, np.ndarray] = {}
    dimension: int | None = None
    with path.open("r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    start = 0
    declared_count = None
    if lines:
        head = lines[0].split()
        if len(head) == 2 and all(_is_int(f) for f in head):
            declared_count, declared_dim = int(head[0]), int(head[1])
            if declared_count < 0 or declared_dim < 1:
                raise EmbeddingError(f"{path}: invalid header line {lines[0]!r}")
            dimension = declared_dim
            start = 1
    for line_number, line in enumerate(lines[start:], start=start + 1):
        if not line.strip():
            continue
        fields = line.split()
        token = fields[0]
        try:
            values = np.array([float(f) for f in fields[1:]], dtype=np.float64)
        except ValueError:
            raise EmbeddingError(f"{path}: line {line_number}: non-numeric vector component") from None
        if values.size == 0:
            raise EmbeddingError(f"{path}: line {line_number}: token {token!r} has no vector")
        if dimension is None:
            dimension = values.size
        elif values.size != dimension:
            raise EmbeddingError(
                f"{path}: line {line_number}: dimension {values.size} != expected {dimension}"
            )
        if token in vectors:
            raise EmbeddingError(f"{path}: line {line_number}: duplicate token {token!r}")
        vectors[token] = values
    if not vectors:
        raise EmbeddingError(f"{path}: no embedding rows (dimension undefined)")
    if declared_count is not None and declared_count != len(vectors):
        raise EmbeddingError(
            f"{path}: header declares {declared_count} rows but file has {len(vectors)}"
        )
    return EmbeddingTable(vectors)


def embed_tokens(
    table: EmbeddingTable,
    tokens: Sequence[str],
    oov_policy: str = "zero",
) -> list[np.ndarray]:
    """Look up one vector per token; out-of-vocabulary handling per policy.

    zero: OOV tokens map to the zero vector (lengths stay position-aligned).
    skip: OOV tokens are dropped.
    error: any OOV token raises.
    """
    if not tokens:
        raise EmbeddingError("token sequence must be nonempty")
    if oov_policy not in ("zero", "skip", "error"):
        raise ValueError(f"unknown OOV policy {oov_policy!r}")
    out: list[np.ndarray] = []
    for token in tokens:
        if token in table:
            out.append(table.vector(token))
        elif oov_policy == "zero":
            out.append(np.zeros(table.dimension))
        elif oov_policy == "error":
            raise EmbeddingError(f"out-of-vocabulary token {token!r}")
    if not out:
        raise EmbeddingError("all tokens out of vocabulary under skip policy")
    return out


def nearest_neighbors(
    table: EmbeddingTable,
    query: np.ndarray,
    k: int,
    metric: str = "cosine",
) -> list[tuple[str, float]]:
    """Rank the k closest tokens to the query; ties break lexicographically."""
    query = np.asarray(query, dtype=np.float64)
    if query.shape != (table.dimension,):
        raise EmbeddingError(
            f"query dimension {query.shape} does not match table dimension {table.dimension}"
        )
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    matrix = table._matrix
    tokens = table._tokens
    if metric == "cosine":
        qn = np.linalg.norm(query)
        norms = np.linalg.norm(matrix, axis=1)
        denom = norms * qn
        with np.errstate(invalid="ignore", divide="ignore"):
            scores = np.where(denom > 0, matrix @ query / denom, 0.0)
        order = sorted(range(len(tokens)), key=lambda i: (-scores[i], tokens[i]))
    elif metric == "euclidean":
        scores = np.linalg.norm(matrix - query, axis=1)
        order = sorted(range(len(tokens)), key=lambda i: (scores[i], tokens[i]))
    else:
        raise ValueError(f"unknown metric {metric!r}")
    return [(tokens[i], float(scores[i])) for i in order[: min(k, len(tokens))]]


def _is_int(field: str) -> bool:
    try:
        int(field)
    except ValueError:
        return False
    return True
