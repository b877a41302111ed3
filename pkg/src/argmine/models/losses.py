"""Softmax output type, weighted cross-entropy, class weighting, and batch gradients."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import torch

from .config import ModelConfig, ModelError
from .torchops import batch_logits, to_torch_params

_LOG_CLAMP = 1e-12


def softmax(logits: np.ndarray) -> np.ndarray:
    """Numerically stable softmax (max-logit subtraction)."""
    z = np.asarray(logits, dtype=np.float64)
    z = z - z.max()
    e = np.exp(z)
    return e / e.sum()


@dataclass(frozen=True)
class ClassDistribution:
    probabilities: np.ndarray

    def __post_init__(self) -> None:
        p = np.asarray(self.probabilities, dtype=np.float64)
        if p.ndim != 1 or np.any(p < -1e-9) or np.any(p > 1 + 1e-9):
            raise ModelError("probabilities must be a vector with entries in [0, 1]")
        if abs(float(p.sum()) - 1.0) > 1e-6:
            raise ModelError(f"probabilities sum to {p.sum()}, expected 1 within 1e-6")
        object.__setattr__(self, "probabilities", p)

    def argmax(self) -> int:
        return int(np.argmax(self.probabilities))


def class_weights(label_counts: Sequence[int]) -> np.ndarray:
    """Inverse-frequency weights: N / (K * n_c). Satisfies sum(n_c * w_c) = N."""
    counts = np.asarray(label_counts, dtype=np.float64)
    if counts.size == 0 or np.any(counts < 1):
        raise ModelError(f"every class count must be >= 1, got {list(label_counts)}")
    return counts.sum() / (counts.size * counts)


def weighted_cross_entropy(
    distribution: ClassDistribution,
    true_class: int,
    weights: Sequence[float],
) -> float:
    w = np.asarray(weights, dtype=np.float64)
    if np.any(w <= 0):
        raise ModelError(f"class weights must be positive, got {list(weights)}")
    p = max(float(distribution.probabilities[true_class]), _LOG_CLAMP)
    return float(-w[true_class] * np.log(p))


def batch_loss(
    tp: dict[str, torch.Tensor],
    config: ModelConfig,
    batch: list,
    weights: torch.Tensor,
) -> torch.Tensor:
    """Mean weighted cross-entropy over (inputs, true_class) pairs (torch graph)."""
    inputs = [item[0] for item in batch]
    targets = torch.tensor([item[1] for item in batch], dtype=torch.long)
    logits = batch_logits(tp, config, inputs)
    logp = torch.log_softmax(logits, dim=-1)
    logp = torch.clamp(logp, min=float(np.log(_LOG_CLAMP)))
    per_example = -weights[targets] * logp[torch.arange(len(batch)), targets]
    return per_example.mean()


def loss_gradient(
    params: dict[str, np.ndarray],
    batch: list,
    config: ModelConfig,
    weights: Sequence[float],
) -> dict[str, np.ndarray]:
    """Gradient of the mean weighted cross-entropy, same named arrays as params.

    batch items are (inputs, true_class); inputs follow the family convention
    of torchops.batch_logits.
    """
    if not batch:
        raise ModelError("batch must be nonempty")
    w = np.asarray(weights, dtype=np.float64)
    if np.any(w <= 0):
        raise ModelError(f"class weights must be positive, got {list(weights)}")
    tp = to_torch_params(params, requires_grad=True)
    dtype = tp["head/W_final"].dtype
    loss = batch_loss(tp, config, batch, torch.as_tensor(w, dtype=dtype))
    loss.backward()
    grads = {}
    for name, tensor in tp.items():
        if tensor.grad is None:
            grads[name] = np.zeros_like(params[name])
        else:
            grads[name] = tensor.grad.detach().numpy().astype(params[name].dtype, copy=True)
    return grads


def batch_loss_value(
    params: dict[str, np.ndarray],
    batch: list,
    config: ModelConfig,
    weights: Sequence[float],
) -> float:
    """Loss evaluation without gradients (finite-difference oracle entry point)."""
    tp = to_torch_params(params)
    dtype = tp["head/W_final"].dtype
    with torch.no_grad():
        return float(batch_loss(tp, config, batch, torch.as_tensor(np.asarray(weights), dtype=dtype)))
