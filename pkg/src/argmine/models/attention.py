"""Two-segment transformer encoder classifier over word-level token ids.

Input layout: [CLS] topic [SEP] sentence [SEP] with segment ids 0 for the
classification token, topic and first separator, 1 for the rest. Topic-blind
configurations omit the topic segment entirely.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
import torch

from .config import CLS_ID, ModelConfig, ModelError, NUM_RESERVED_TOKENS, PAD_ID, SEP_ID, UNK_ID
from .losses import ClassDistribution, softmax
from .torchops import attention_logits, to_torch_params

RESERVED_TOKENS = ("[PAD]", "[UNK]", "[CLS]", "[SEP]")


class Vocabulary:
    """Word-level vocabulary with [PAD], [UNK], [CLS], [SEP] reserved ids."""

    def __init__(self, words: Sequence[str]):
        self.id_to_token = list(RESERVED_TOKENS) + list(words)
        if len(set(self.id_to_token)) != len(self.id_to_token):
            raise ModelError("vocabulary contains duplicate tokens")
        self.token_to_id = {tok: i for i, tok in enumerate(self.id_to_token)}

    def __len__(self) -> int:
        return len(self.id_to_token)

    @classmethod
    def build(cls, token_sequences: Iterable[Sequence[str]]) -> "Vocabulary":
        seen: dict[str, None] = {}
        for tokens in token_sequences:
            for tok in tokens:
                if tok not in seen and tok not in RESERVED_TOKENS:
                    seen[tok] = None
        return cls(sorted(seen))

    def encode(self, tokens: Sequence[str]) -> list[int]:
        return [self.token_to_id.get(tok, UNK_ID) for tok in tokens]


def build_attention_input(
    sentence_ids: Sequence[int],
    topic_ids: Sequence[int] | None,
    config: ModelConfig,
) -> tuple[list[int], list[int]]:
    """Token ids and segment ids for the framed two-segment input."""
    if config.use_topic and topic_ids:
        ids = [CLS_ID] + list(topic_ids) + [SEP_ID] + list(sentence_ids) + [SEP_ID]
        segments = [0] * (len(topic_ids) + 2) + [1] * (len(sentence_ids) + 1)
    else:
        ids = [CLS_ID] + list(sentence_ids) + [SEP_ID]
        segments = [0] * len(ids)
    if len(ids) > config.max_sequence_length:
        topic_len = len(topic_ids) if (config.use_topic and topic_ids) else 0
        raise ModelError(
            f"input too long: topic segment {topic_len} + sentence segment "
            f"{len(sentence_ids)} tokens exceed max_sequence_length "
            f"{config.max_sequence_length} after framing"
        )
    return ids, segments


def classify_attention(
    sentence_tokens: Sequence[int],
    topic_tokens: Sequence[int] | None,
    params: dict[str, np.ndarray],
    config: ModelConfig,
) -> ClassDistribution:
    """Class distribution from the classification position's final representation."""
    if config.family != "attention":
        raise ModelError(f"config family is {config.family!r}, expected 'attention'")
    topic = topic_tokens if config.use_topic else None
    ids, segments = build_attention_input(sentence_tokens, topic, config)
    tp = to_torch_params(params)
    ids_t = torch.tensor([ids], dtype=torch.long)
    segments_t = torch.tensor([segments], dtype=torch.long)
    mask = torch.ones_like(ids_t, dtype=torch.bool)
    with torch.no_grad():
        logits = attention_logits(tp, config, ids_t, segments_t, mask)
    return ClassDistribution(softmax(logits[0].numpy().astype(np.float64)))
