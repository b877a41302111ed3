from __future__ import annotations

import numpy as np
import pytest

from argmine.corpus import Split, in_topic_split
from argmine.experiments import (
    CLASS_ORDER_THREE,
    DivergenceError,
    Hyperparameters,
    TokenIdFeaturizer,
    TrainRun,
    TrainingError,
    WordVectorFeaturizer,
    macro_f1,
    predict_classes,
    restart_select,
    train,
)
from argmine.models import ModelConfig, init_parameters
from conftest import separable_corpus, separable_word_table


def recurrent_setup(n=60):
    examples = separable_corpus(n)
    split = in_topic_split(examples, (0.7, 0.1, 0.2), seed=0)
    table = separable_word_table()
    featurizer = WordVectorFeaturizer(table, "words")
    config = ModelConfig(
        family="recurrent",
        num_classes=3,
        hidden_dimension=8,
        input_dimension=table.dimension,
        aggregation="concat",
    )
    return config, split, featurizer


class TestTrain:
    def test_loss_decreases_on_learnable_task(self):
        config, split, featurizer = recurrent_setup()
        hyper = Hyperparameters(epochs=25, batch_size=8, learning_rate=1.0)
        run = train(config, split, hyper, featurizer, seed=0)
        assert run.history[-1][0] < run.history[0][0]

    def test_seed_determinism(self):
        config, split, featurizer = recurrent_setup(30)
        hyper = Hyperparameters(epochs=3, batch_size=8, learning_rate=0.2)
        a = train(config, split, hyper, featurizer, seed=4)
        b = train(config, split, hyper, featurizer, seed=4)
        assert a.history == b.history
        for name in a.params:
            np.testing.assert_array_equal(a.params[name], b.params[name])

    def test_zero_epochs_returns_initialization(self):
        config, split, featurizer = recurrent_setup(30)
        hyper = Hyperparameters(epochs=0)
        run = train(config, split, hyper, featurizer, seed=7)
        assert len(run.history) == 1
        init = init_parameters(config, seed=7)
        for name in init:
            np.testing.assert_array_equal(run.params[name], init[name])

    def test_empty_training_set_rejected(self):
        config, split, featurizer = recurrent_setup(30)
        empty = Split(train=(), val=split.val, test=split.test)
        with pytest.raises(TrainingError, match="empty"):
            train(config, empty, Hyperparameters(epochs=1), featurizer)

    def test_divergence_reports_epoch(self, monkeypatch):
        import torch

        import argmine.experiments.training as training_mod

        real = training_mod.batch_loss
        calls = {"n": 0}

        def nan_after_first_update(tp, config, chunk, weights):
            calls["n"] += 1
            loss = real(tp, config, chunk, weights)
            # first call is the epoch-0 evaluation pass; poison the next one
            return loss * torch.nan if calls["n"] >= 3 else loss

        monkeypatch.setattr(training_mod, "batch_loss", nan_after_first_update)
        config, split, featurizer = recurrent_setup(30)
        hyper = Hyperparameters(epochs=3, batch_size=8, learning_rate=0.1)
        with pytest.raises(DivergenceError) as excinfo:
            train(config, split, hyper, featurizer, seed=0)
        assert excinfo.value.epoch >= 1

    def test_history_records_every_epoch(self):
        config, split, featurizer = recurrent_setup(30)
        run = train(config, split, Hyperparameters(epochs=5, learning_rate=0.1), featurizer, seed=1)
        assert len(run.history) == 6  # epoch 0 + 5 training epochs

    def test_reaches_high_train_f1(self):
        config, split, featurizer = recurrent_setup(90)
        hyper = Hyperparameters(epochs=40, batch_size=8, learning_rate=1.0)
        run = train(config, split, hyper, featurizer, seed=0)
        inputs = [featurizer.featurize(ex) for ex in split.train]
        idx = predict_classes(run.params, config, inputs, "three_class")
        predictions = [CLASS_ORDER_THREE[i] for i in idx]
        golds = [ex.label for ex in split.train]
        assert macro_f1(predictions, golds, CLASS_ORDER_THREE) >= 0.9


class TestAttentionTrain:
    def test_loss_decreases(self):
        examples = separable_corpus(60)
        split = in_topic_split(examples, (0.7, 0.1, 0.2), seed=0)
        config = ModelConfig(
            family="attention",
            num_classes=3,
            vocab_size=4,
            num_layers=1,
            num_heads=2,
            model_dimension=16,
            max_sequence_length=32,
        )
        featurizer = TokenIdFeaturizer.from_examples(split.train, config)
        config.vocab_size = len(featurizer.vocab)
        hyper = Hyperparameters(epochs=8, batch_size=16, learning_rate=2e-3, optimizer="adam")
        run = train(config, split, hyper, featurizer, seed=0)
        assert run.history[-1][0] < run.history[0][0]


def _stub_trainer(scores):
    def fake_train(config, split, hyper, featurizer, seed=0):
        return TrainRun(config=config, seed=seed, params={}, history=[(1.0, scores[seed])])

    return fake_train


class TestRestartSelect:
    def test_single_restart(self):
        config, split, featurizer = recurrent_setup(30)
        best, runs = restart_select(
            config, split, Hyperparameters(epochs=1), featurizer, n_restarts=1, base_seed=3
        )
        assert len(runs) == 1 and best is runs[0] and best.seed == 3

    def test_best_validation_run_selected(self):
        scores = {0: 0.2, 1: 0.9, 2: 0.5}
        best, runs = restart_select(
            None, None, None, None, n_restarts=3, base_seed=0, train_fn=_stub_trainer(scores)
        )
        assert best.seed == 1
        assert all(best.val_macro_f1 >= r.val_macro_f1 for r in runs)

    def test_tie_breaks_to_lowest_seed(self):
        scores = {4: 0.7, 5: 0.3, 6: 0.5, 7: 0.7}
        best, _ = restart_select(
            None, None, None, None, n_restarts=4, base_seed=4, train_fn=_stub_trainer(scores)
        )
        assert best.seed == 4

    def test_failure_annotated_with_seed(self):
        def failing(config, split, hyper, featurizer, seed=0):
            if seed == 2:
                raise TrainingError("boom")
            return TrainRun(config=config, seed=seed, params={}, history=[(1.0, 0.5)])

        with pytest.raises(TrainingError, match="seed 2"):
            restart_select(None, None, None, None, n_restarts=3, base_seed=0, train_fn=failing)

    def test_invalid_restart_count(self):
        with pytest.raises(TrainingError):
            restart_select(None, None, None, None, n_restarts=0)
