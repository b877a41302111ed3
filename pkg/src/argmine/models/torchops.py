"""Torch forward passes shared by the public model API and the training loop.

Forward computation is written against named parameter dicts so that the
array-name contract (birnn_a/forward/W, attn/layer0/qkv, head/W_final, ...)
stays the single source of truth. Gradients come from autograd and are
checked against finite differences in the test suite.
"""

from __future__ import annotations

import numpy as np
import torch

from .config import ModelConfig, ModelError, PAD_ID

_ATTENTION_MASK_FILL = -1e9
_LAYER_NORM_EPS = 1e-5


def to_torch_params(
    params: dict[str, np.ndarray], requires_grad: bool = False
) -> dict[str, torch.Tensor]:
    out = {}
    for name, array in params.items():
        t = torch.from_numpy(np.asarray(array)).clone()
        t.requires_grad_(requires_grad)
        out[name] = t
    return out


def _lstm_final(x: torch.Tensor, W: torch.Tensor, U: torch.Tensor, b: torch.Tensor) -> torch.Tensor:
    """Final hidden state of a unidirectional LSTM over x [T, d_in]."""
    hidden = W.shape[1] // 4
    h = torch.zeros(hidden, dtype=x.dtype)
    c = torch.zeros(hidden, dtype=x.dtype)
    for t in range(x.shape[0]):
        gates = x[t] @ W + h @ U + b
        i, f, g, o = torch.split(gates, hidden)
        i = torch.sigmoid(i)
        f = torch.sigmoid(f)
        g = torch.tanh(g)
        o = torch.sigmoid(o)
        c = f * c + i * g
        h = o * torch.tanh(c)
    return h


def birnn_encode(x: torch.Tensor, tp: dict[str, torch.Tensor], prefix: str) -> torch.Tensor:
    """Concatenated final forward and backward LSTM states; output dim 2h."""
    if x.ndim != 2 or x.shape[0] == 0:
        raise ModelError("encoder input must be a nonempty [T, d] sequence")
    W = tp[f"{prefix}/forward/W"]
    if x.shape[1] != W.shape[0]:
        raise ModelError(
            f"input dimension {x.shape[1]} does not match {prefix} weight dimension {W.shape[0]}"
        )
    fwd = _lstm_final(x, W, tp[f"{prefix}/forward/U"], tp[f"{prefix}/forward/b"])
    bwd = _lstm_final(
        torch.flip(x, dims=[0]),
        tp[f"{prefix}/backward/W"],
        tp[f"{prefix}/backward/U"],
        tp[f"{prefix}/backward/b"],
    )
    return torch.cat([fwd, bwd])


def aggregate_t(h_s: torch.Tensor, h_t: torch.Tensor | None, mode: str) -> torch.Tensor:
    if mode == "none":
        return h_s
    if h_t is None:
        raise ModelError(f"aggregation {mode!r} requires a topic representation")
    if mode in ("add", "hadamard") and h_s.shape != h_t.shape:
        raise ModelError(
            f"aggregation {mode!r} needs equal dimensions, got {tuple(h_s.shape)} and {tuple(h_t.shape)}"
        )
    if mode == "add":
        return h_s + h_t
    if mode == "hadamard":
        return h_s * h_t
    if mode == "concat":
        return torch.cat([h_s, h_t])
    raise ModelError(f"unknown aggregation {mode!r}")


def recurrent_logits(
    tp: dict[str, torch.Tensor],
    config: ModelConfig,
    sentence: torch.Tensor,
    topic: torch.Tensor | None,
) -> torch.Tensor:
    h_s = birnn_encode(sentence, tp, "birnn_a")
    h_t = None
    if config.aggregation != "none":
        if topic is None:
            raise ModelError("topic vectors are required unless aggregation is 'none'")
        h_t = birnn_encode(topic, tp, "birnn_t")
    h_l = aggregate_t(h_s, h_t, config.aggregation)
    return h_l @ tp["head/W_final"] + tp["head/b_final"]


def _layer_norm(x: torch.Tensor, gamma: torch.Tensor, beta: torch.Tensor) -> torch.Tensor:
    mean = x.mean(dim=-1, keepdim=True)
    var = x.var(dim=-1, unbiased=False, keepdim=True)
    return (x - mean) / torch.sqrt(var + _LAYER_NORM_EPS) * gamma + beta


def attention_logits(
    tp: dict[str, torch.Tensor],
    config: ModelConfig,
    ids: torch.Tensor,
    segments: torch.Tensor,
    mask: torch.Tensor,
) -> torch.Tensor:
    """Classifier logits for a padded batch.

    ids, segments: [B, L] long tensors; mask: [B, L] bool, True on real tokens.
    Padded key positions are excluded from every attention distribution, so
    outputs at the classification position are invariant to padding length.
    """
    if ids.shape[1] > config.max_sequence_length:
        raise ModelError(
            f"sequence length {ids.shape[1]} exceeds max_sequence_length {config.max_sequence_length}"
        )
    B, L = ids.shape
    d = config.model_dimension
    heads = config.num_heads
    dh = d // heads
    x = (
        tp["attn/token_embeddings"][ids]
        + tp["attn/segment_embeddings"][segments]
        + tp["attn/position_embeddings"][:L].unsqueeze(0)
    )
    key_mask = mask.unsqueeze(1).unsqueeze(2)  # [B, 1, 1, L]
    for i in range(config.num_layers):
        p = f"attn/layer{i}"
        qkv = x @ tp[f"{p}/qkv"] + tp[f"{p}/qkv_bias"]
        q, k, v = torch.split(qkv, d, dim=-1)

        def heads_view(t):
            return t.view(B, L, heads, dh).transpose(1, 2)  # [B, H, L, dh]

        q, k, v = heads_view(q), heads_view(k), heads_view(v)
        scores = q @ k.transpose(-1, -2) / (dh ** 0.5)  # [B, H, L, L]
        scores = scores.masked_fill(~key_mask, _ATTENTION_MASK_FILL)
        attn = torch.softmax(scores, dim=-1)
        context = (attn @ v).transpose(1, 2).reshape(B, L, d)
        x = _layer_norm(
            x + context @ tp[f"{p}/proj"] + tp[f"{p}/proj_bias"],
            tp[f"{p}/ln1/gamma"],
            tp[f"{p}/ln1/beta"],
        )
        ff = torch.nn.functional.gelu(x @ tp[f"{p}/ff/W1"] + tp[f"{p}/ff/b1"])
        x = _layer_norm(
            x + ff @ tp[f"{p}/ff/W2"] + tp[f"{p}/ff/b2"],
            tp[f"{p}/ln2/gamma"],
            tp[f"{p}/ln2/beta"],
        )
    cls = x[:, 0, :]
    return cls @ tp["head/W_final"] + tp["head/b_final"]


def pad_batch(
    sequences: list[tuple[list[int], list[int]]], dtype=torch.long
) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor]:
    """Pad (ids, segments) pairs to a common length; returns ids, segments, mask."""
    L = max(len(ids) for ids, _ in sequences)
    B = len(sequences)
    ids = torch.full((B, L), PAD_ID, dtype=dtype)
    segments = torch.zeros((B, L), dtype=dtype)
    mask = torch.zeros((B, L), dtype=torch.bool)
    for b, (seq, segs) in enumerate(sequences):
        ids[b, : len(seq)] = torch.tensor(seq, dtype=dtype)
        segments[b, : len(segs)] = torch.tensor(segs, dtype=dtype)
        mask[b, : len(seq)] = True
    return ids, segments, mask


def batch_logits(
    tp: dict[str, torch.Tensor],
    config: ModelConfig,
    inputs: list,
) -> torch.Tensor:
    """Logits [B, C] for a batch of featurized inputs of either family.

    Recurrent inputs: (sentence_vectors, topic_vectors | None) numpy arrays.
    Attention inputs: ((ids, segments)) token id / segment id lists.
    """
    dtype = tp["head/W_final"].dtype
    if config.family == "recurrent":
        rows = []
        for sentence, topic in inputs:
            s = torch.as_tensor(np.asarray(sentence), dtype=dtype)
            t = None if topic is None else torch.as_tensor(np.asarray(topic), dtype=dtype)
            rows.append(recurrent_logits(tp, config, s, t))
        return torch.stack(rows)
    ids, segments, mask = pad_batch(list(inputs))
    return attention_logits(tp, config, ids, segments, mask)
