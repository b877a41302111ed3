"""Model configuration and named-parameter initialization for both families."""

from __future__ import annotations

from dataclasses import dataclass, field, asdict

import numpy as np


class ModelError(ValueError):
    """Raised on invalid model configurations or inputs."""


AGGREGATIONS = ("add", "hadamard", "concat", "none")

# Reserved token ids for the attention family's word-level vocabulary.
PAD_ID = 0
UNK_ID = 1
CLS_ID = 2
SEP_ID = 3
NUM_RESERVED_TOKENS = 4


@dataclass
class ModelConfig:
    family: str  # "recurrent" or "attention"
    num_classes: int = 3
    use_topic: bool = True
    # recurrent family
    hidden_dimension: int = 32
    input_dimension: int = 0
    topic_input_dimension: int = 0  # 0 means same as input_dimension
    aggregation: str = "concat"
    # attention family
    vocab_size: int = 0
    num_layers: int = 2
    num_heads: int = 4
    model_dimension: int = 128
    max_sequence_length: int = 128

    def __post_init__(self) -> None:
        if self.family not in ("recurrent", "attention"):
            raise ModelError(f"unknown model family {self.family!r}")
        if self.num_classes not in (2, 3):
            raise ModelError(f"num_classes must be 2 or 3, got {self.num_classes}")
        if self.family == "recurrent":
            if self.aggregation not in AGGREGATIONS:
                raise ModelError(f"unknown aggregation {self.aggregation!r}")
            if (self.aggregation == "none") != (not self.use_topic):
                raise ModelError("aggregation 'none' and use_topic=False imply each other")
            if self.input_dimension < 1:
                raise ModelError("recurrent family needs a positive input_dimension")
            if self.topic_input_dimension == 0:
                self.topic_input_dimension = self.input_dimension
        else:
            if self.vocab_size < NUM_RESERVED_TOKENS:
                raise ModelError("attention family needs vocab_size covering reserved tokens")
            if self.model_dimension % self.num_heads != 0:
                raise ModelError("model_dimension must be divisible by num_heads")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ModelConfig":
        return cls(**data)

    @property
    def aggregated_dimension(self) -> int:
        d = 2 * self.hidden_dimension
        return 2 * d if self.aggregation == "concat" else d


def init_parameters(
    config: ModelConfig, seed: int, dtype=np.float32
) -> dict[str, np.ndarray]:
    """Seeded random initialization; array names are the public contract."""
    rng = np.random.default_rng(seed)

    def normal(*shape):
        return rng.normal(0.0, 0.02, size=shape).astype(dtype)

    params: dict[str, np.ndarray] = {}
    if config.family == "recurrent":
        def lstm(prefix: str, d_in: int, h: int):
            for direction in ("forward", "backward"):
                params[f"{prefix}/{direction}/W"] = normal(d_in, 4 * h)
                params[f"{prefix}/{direction}/U"] = normal(h, 4 * h)
                params[f"{prefix}/{direction}/b"] = np.zeros(4 * h, dtype=dtype)

        lstm("birnn_a", config.input_dimension, config.hidden_dimension)
        if config.use_topic:
            lstm("birnn_t", config.topic_input_dimension, config.hidden_dimension)
        params["head/W_final"] = normal(config.aggregated_dimension, config.num_classes)
        params["head/b_final"] = np.zeros(config.num_classes, dtype=dtype)
    else:
        d = config.model_dimension
        params["attn/token_embeddings"] = normal(config.vocab_size, d)
        params["attn/segment_embeddings"] = normal(2, d)
        params["attn/position_embeddings"] = normal(config.max_sequence_length, d)
        for i in range(config.num_layers):
            p = f"attn/layer{i}"
            params[f"{p}/qkv"] = normal(d, 3 * d)
            params[f"{p}/qkv_bias"] = np.zeros(3 * d, dtype=dtype)
            params[f"{p}/proj"] = normal(d, d)
            params[f"{p}/proj_bias"] = np.zeros(d, dtype=dtype)
            params[f"{p}/ln1/gamma"] = np.ones(d, dtype=dtype)
            params[f"{p}/ln1/beta"] = np.zeros(d, dtype=dtype)
            params[f"{p}/ff/W1"] = normal(d, 4 * d)
            params[f"{p}/ff/b1"] = np.zeros(4 * d, dtype=dtype)
            params[f"{p}/ff/W2"] = normal(4 * d, d)
            params[f"{p}/ff/b2"] = np.zeros(d, dtype=dtype)
            params[f"{p}/ln2/gamma"] = np.ones(d, dtype=dtype)
            params[f"{p}/ln2/beta"] = np.zeros(d, dtype=dtype)
        params["head/W_final"] = normal(d, config.num_classes)
        params["head/b_final"] = np.zeros(config.num_classes, dtype=dtype)
    return params


def check_parameters(params: dict[str, np.ndarray]) -> None:
    for name, array in params.items():
        if not np.all(np.isfinite(array)):
            raise ModelError(f"parameter array {name!r} contains non-finite values")
