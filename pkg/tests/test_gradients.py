"""Analytic gradients checked against a central finite-difference oracle."""

from __future__ import annotations

import numpy as np
import pytest

from argmine.models import ModelConfig, batch_loss_value, init_parameters, loss_gradient
from argmine.models.attention import build_attention_input

FD_STEP = 1e-5


def finite_difference_gradient(params, batch, config, weights, step=FD_STEP):
    """Central differences on every entry of every parameter array."""
    grads = {}
    for name, array in params.items():
        grad = np.zeros_like(array, dtype=np.float64)
        flat = array.reshape(-1)
        gflat = grad.reshape(-1)
        for i in range(flat.size):
            original = flat[i]
            flat[i] = original + step
            up = batch_loss_value(params, batch, config, weights)
            flat[i] = original - step
            down = batch_loss_value(params, batch, config, weights)
            flat[i] = original
            gflat[i] = (up - down) / (2 * step)
        grads[name] = grad
    return grads


def max_relative_error(analytic, numeric):
    worst = 0.0
    for name in analytic:
        a, g = analytic[name], numeric[name]
        scale = max(np.abs(g).max(), np.abs(a).max(), 1e-8)
        worst = max(worst, float(np.abs(a - g).max() / scale))
    return worst


def recurrent_setup(num_classes=3, aggregation="concat", seed=0):
    config = ModelConfig(
        family="recurrent",
        num_classes=num_classes,
        hidden_dimension=8,
        input_dimension=6,
        aggregation=aggregation,
        use_topic=aggregation != "none",
    )
    params = init_parameters(config, seed=seed, dtype=np.float64)
    rng = np.random.default_rng(seed + 1)
    batch = []
    for b in range(2):
        sentence = rng.normal(size=(3 + b, 6))
        topic = None if aggregation == "none" else rng.normal(size=(2, 6))
        batch.append(((sentence, topic), b % num_classes))
    return config, params, batch


def attention_setup(seed=0):
    config = ModelConfig(
        family="attention",
        num_classes=3,
        vocab_size=12,
        num_layers=1,
        num_heads=2,
        model_dimension=16,
        max_sequence_length=16,
    )
    params = init_parameters(config, seed=seed, dtype=np.float64)
    batch = [
        (build_attention_input([4, 5, 6], [7], config), 0),
        (build_attention_input([8, 9], [10, 11], config), 2),
    ]
    return config, params, batch


class TestRecurrentGradients:
    @pytest.mark.parametrize("aggregation", ["concat", "add", "hadamard", "none"])
    def test_matches_finite_differences(self, aggregation):
        config, params, batch = recurrent_setup(aggregation=aggregation)
        weights = [1.0, 0.7, 1.3][: config.num_classes]
        analytic = loss_gradient(params, batch, config, weights)
        numeric = finite_difference_gradient(params, batch, config, weights)
        assert max_relative_error(analytic, numeric) <= 1e-4


class TestAttentionGradients:
    def test_matches_finite_differences(self):
        config, params, batch = attention_setup()
        weights = [1.0, 0.7, 1.3]
        analytic = loss_gradient(params, batch, config, weights)
        numeric = finite_difference_gradient(params, batch, config, weights)
        assert max_relative_error(analytic, numeric) <= 1e-4


class TestGradientProperties:
    def test_near_zero_weight_class_contributes_near_zero_gradient(self):
        config, params, batch = recurrent_setup()
        only_class_one = [(inputs, 1) for inputs, _ in batch]
        baseline = loss_gradient(params, only_class_one, config, [1.0, 1.0, 1.0])
        tiny = loss_gradient(params, only_class_one, config, [1.0, 1e-8, 1.0])
        baseline_norm = np.sqrt(sum(float((g ** 2).sum()) for g in baseline.values()))
        tiny_norm = np.sqrt(sum(float((g ** 2).sum()) for g in tiny.values()))
        assert tiny_norm <= 1e-6 * baseline_norm

    def test_gradient_structure_matches_params(self):
        config, params, batch = attention_setup()
        grads = loss_gradient(params, batch, config, [1.0, 1.0, 1.0])
        assert set(grads) == set(params)
        for name in params:
            assert grads[name].shape == params[name].shape
