from .config import ModelConfig, ModelError, init_parameters, check_parameters
from .config import PAD_ID, UNK_ID, CLS_ID, SEP_ID
from .losses import (
    ClassDistribution,
    softmax,
    class_weights,
    weighted_cross_entropy,
    loss_gradient,
    batch_loss_value,
)
from .recurrent import encode_sequence_birnn, aggregate, classify_recurrent
from .attention import Vocabulary, build_attention_input, classify_attention

__all__ = [
    "ModelConfig",
    "ModelError",
    "init_parameters",
    "check_parameters",
    "PAD_ID",
    "UNK_ID",
    "CLS_ID",
    "SEP_ID",
    "ClassDistribution",
    "softmax",
    "class_weights",
    "weighted_cross_entropy",
    "loss_gradient",
    "batch_loss_value",
    "encode_sequence_birnn",
    "aggregate",
    "classify_recurrent",
    "Vocabulary",
    "build_attention_input",
    "classify_attention",
]
