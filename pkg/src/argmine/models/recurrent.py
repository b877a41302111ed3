"""Dual bidirectional-LSTM classifier: encode sentence and topic, aggregate, classify."""

from __future__ import annotations

from typing import Sequence

import numpy as np
import torch

from .config import ModelConfig, ModelError
from .losses import ClassDistribution, softmax
from .torchops import aggregate_t, birnn_encode, recurrent_logits, to_torch_params


def encode_sequence_birnn(
    vectors: Sequence[np.ndarray] | np.ndarray,
    params: dict[str, np.ndarray],
    which: str = "argument",
) -> np.ndarray:
    """Concatenated final forward/backward hidden states (length 2 * hidden)."""
    if which not in ("argument", "topic"):
        raise ModelError(f"which must be 'argument' or 'topic', got {which!r}")
    prefix = "birnn_a" if which == "argument" else "birnn_t"
    x = np.asarray(vectors, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] == 0:
        raise ModelError("vectors must form a nonempty [T, d] sequence")
    tp = to_torch_params(params)
    with torch.no_grad():
        h = birnn_encode(torch.as_tensor(x, dtype=tp[f"{prefix}/forward/W"].dtype), tp, prefix)
    return h.numpy()


def aggregate(h_s: np.ndarray, h_t: np.ndarray | None, mode: str) -> np.ndarray:
    """Combine argument and topic representations (add, hadamard, concat, none)."""
    hs = torch.as_tensor(np.asarray(h_s, dtype=np.float64))
    ht = None if h_t is None else torch.as_tensor(np.asarray(h_t, dtype=np.float64))
    return aggregate_t(hs, ht, mode).numpy()


def classify_recurrent(
    sentence_vectors: Sequence[np.ndarray] | np.ndarray,
    topic_vectors: Sequence[np.ndarray] | np.ndarray | None,
    params: dict[str, np.ndarray],
    config: ModelConfig,
) -> ClassDistribution:
    """Class distribution for one (sentence, topic) pair."""
    if config.family != "recurrent":
        raise ModelError(f"config family is {config.family!r}, expected 'recurrent'")
    tp = to_torch_params(params)
    dtype = tp["head/W_final"].dtype
    s = torch.as_tensor(np.asarray(sentence_vectors), dtype=dtype)
    t = None
    if topic_vectors is not None:
        t = torch.as_tensor(np.asarray(topic_vectors), dtype=dtype)
    if config.aggregation == "none":
        t = None  # topic-blind: the topic input must not influence the output
    with torch.no_grad():
        logits = recurrent_logits(tp, config, s, t)
    return ClassDistribution(softmax(logits.numpy().astype(np.float64)))
