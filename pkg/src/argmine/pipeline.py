"""End-to-end wiring between run configs, featurizers, training, checkpoints,
and the two-step retrieval + classification demo."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence

import numpy as np

from .checkpoint import Checkpoint, CheckpointError, load_checkpoint, save_checkpoint
from .corpus import (
    LabeledExample,
    Label,
    Sentence,
    Topic,
    cross_topic_split,
    in_topic_split,
    load_corpus,
    tokenize,
)
from .embeddings import load_embeddings
from .kg import load_triples, train_transe
from .models.attention import Vocabulary
from .models.config import ModelConfig, NUM_RESERVED_TOKENS
from .experiments.metrics import EvaluationReport, evaluate, truncate_example, predict_classes
from .experiments.training import (
    Hyperparameters,
    TokenIdFeaturizer,
    TrainRun,
    WordVectorFeaturizer,
    restart_select,
)
from .runconfig import RunConfig

# Fixed retrieval-stub stopword list (English function words).
STOPWORDS = frozenset(
    """a an the and or but if then else when while of to in on at by for with
    about against between into through during before after above below from up
    down out off over under again further once here there all any both each few
    more most other some such no nor not only own same so than too very can
    will just should now is are was were be been being do does did have has
    had""".split()
)


def split_examples(config: RunConfig, examples: Sequence[LabeledExample]):
    split_cfg = config.split
    if split_cfg["kind"] == "in_topic":
        return in_topic_split(examples, tuple(split_cfg["ratios"]), split_cfg["seed"])
    return cross_topic_split(
        examples, split_cfg["held_out_topic"], split_cfg["val_fraction"], split_cfg["seed"]
    )


def build_featurizer(config: RunConfig, train_examples: Sequence[LabeledExample]):
    """Model config + featurizer + checkpoint extras for a run config."""
    model = config.model
    num_classes = 2 if config.task == "two_class" else 3
    if model["family"] == "recurrent":
        word_table = load_embeddings(config.context["embeddings"])
        source = {"word_embeddings": "words", "kg": "kg", "none": "none"}[config.context["source"]]
        kg = None
        entity_table = None
        if source == "kg":
            kg = load_triples(config.context["triples"])
            entity_table = train_transe(kg, **config.context["transe"])
        featurizer = WordVectorFeaturizer(word_table, source, kg=kg, entity_table=entity_table)
        model_config = ModelConfig(
            family="recurrent",
            num_classes=num_classes,
            use_topic=model["use_topic"],
            hidden_dimension=model["hidden_dimension"],
            input_dimension=featurizer.input_dimension,
            topic_input_dimension=featurizer.topic_input_dimension,
            aggregation=model["aggregation"],
        )
        extra: dict = {}
    else:
        model_config = ModelConfig(
            family="attention",
            num_classes=num_classes,
            use_topic=model["use_topic"],
            vocab_size=NUM_RESERVED_TOKENS,  # placeholder until the vocab is built
            num_layers=model["num_layers"],
            num_heads=model["num_heads"],
            model_dimension=model["model_dimension"],
            max_sequence_length=model["max_sequence_length"],
        )
        featurizer = TokenIdFeaturizer.from_examples(train_examples, model_config)
        model_config.vocab_size = len(featurizer.vocab)
        extra = {"vocab": featurizer.vocab.id_to_token[NUM_RESERVED_TOKENS:]}
    return model_config, featurizer, extra


def checkpoint_config(config: RunConfig, model_config: ModelConfig) -> dict:
    return {
        "model_config": model_config.to_dict(),
        "task": config.task,
        "split": config.split,
        "hyperparameters": config.hyperparameters,
        "context": config.context,
        "seeds": config.seeds,
    }


def run_training(config: RunConfig, output_dir: str | Path | None = None) -> dict:
    """Execute restart selection and write checkpoint, run summary, report and
    the test-split TSV. Returns the written paths and the test report."""
    out = Path(output_dir or config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    examples = load_corpus(config.corpus)
    split = split_examples(config, examples)
    model_config, featurizer, extra = build_featurizer(config, split.train)
    hyper = Hyperparameters(**config.hyperparameters)
    best, runs = restart_select(
        model_config,
        split,
        hyper,
        featurizer,
        n_restarts=config.seeds["n_restarts"],
        base_seed=config.seeds["base_seed"],
    )
    ckpt_config = checkpoint_config(config, model_config)
    ckpt_path = out / "checkpoint"
    save_checkpoint(ckpt_path, best.params, config=ckpt_config, extra=extra)

    runs_summary = {
        "selected_seed": best.seed,
        "runs": [
            {
                "seed": run.seed,
                "final_train_loss": run.history[-1][0],
                "val_macro_f1": run.val_macro_f1,
                "epochs": len(run.history) - 1,
            }
            for run in runs
        ],
    }
    runs_path = out / "runs.json"
    runs_path.write_text(json.dumps(runs_summary, indent=2), encoding="utf-8")

    report = evaluate(
        best.params,
        model_config,
        split.test,
        config.task,
        featurizer,
        max_words=hyper.max_words,
        split_metadata=split.metadata,
        config_digest=load_checkpoint(ckpt_path).digest,
        seed=best.seed,
    )
    report_path = out / "report.json"
    report_path.write_text(report.to_json(), encoding="utf-8")

    test_path = out / "test.tsv"
    from .corpus import write_corpus

    with test_path.open("w", encoding="utf-8") as fh:
        write_corpus(split.test, fh)
    return {
        "checkpoint": str(ckpt_path),
        "runs": str(runs_path),
        "report": str(report_path),
        "test_corpus": str(test_path),
        "report_obj": report,
        "best_run": best,
    }


def restore(ckpt: Checkpoint):
    """Model config + featurizer reconstructed from a checkpoint's manifest."""
    if ckpt.config is None:
        raise CheckpointError("checkpoint has no embedded config")
    model_config = ModelConfig.from_dict(ckpt.config["model_config"])
    context = ckpt.config["context"]
    if model_config.family == "attention":
        vocab = Vocabulary(ckpt.manifest.get("extra", {}).get("vocab", []))
        if len(vocab) != model_config.vocab_size:
            raise CheckpointError(
                f"stored vocabulary has {len(vocab)} entries, config says {model_config.vocab_size}"
            )
        featurizer = TokenIdFeaturizer(vocab, model_config)
    else:
        word_table = load_embeddings(context["embeddings"])
        source = {"word_embeddings": "words", "kg": "kg", "none": "none"}[context["source"]]
        kg = None
        entity_table = None
        if source == "kg":
            kg = load_triples(context["triples"])
            entity_table = train_transe(kg, **context["transe"])
        featurizer = WordVectorFeaturizer(word_table, source, kg=kg, entity_table=entity_table)
    _check_shapes(ckpt, model_config)
    return model_config, featurizer


def _check_shapes(ckpt: Checkpoint, model_config: ModelConfig) -> None:
    from .models.config import init_parameters

    expected = init_parameters(model_config, seed=0)
    bad = [
        name
        for name in sorted(set(expected) | set(ckpt.arrays))
        if name not in ckpt.arrays
        or name not in expected
        or ckpt.arrays[name].shape != expected[name].shape
    ]
    if bad:
        raise CheckpointError(f"checkpoint arrays do not match the embedded config: {bad}")


def retrieve(
    examples: Sequence[LabeledExample], topic_text: str
) -> list[int]:
    """Keyword-filter retrieval stub: indices of sentences sharing at least one
    non-stopword token with the topic (case-insensitive)."""
    query = {tok for tok in tokenize(topic_text) if tok not in STOPWORDS}
    hits = []
    for i, ex in enumerate(examples):
        if query & set(ex.sentence.tokens):
            hits.append(i)
    return hits


def search(
    ckpt: Checkpoint,
    examples: Sequence[LabeledExample],
    topic_text: str,
    top_k: int = 5,
    max_words: int = 60,
) -> dict[str, list[tuple[str, float]]]:
    """Two-step pipeline: keyword retrieval, then topic-aware classification.

    Returns pro and contra groups, each sorted by predicted class probability
    and capped at top_k entries.
    """
    model_config, featurizer = restore(ckpt)
    hits = retrieve(examples, topic_text)
    groups: dict[str, list[tuple[str, float]]] = {"pro": [], "contra": []}
    if not hits:
        return groups
    topic = Topic.from_text(topic_text)
    queried = [
        truncate_example(
            LabeledExample(topic=topic, sentence=examples[i].sentence, label=Label.NO_ARGUMENT),
            max_words,
        )
        for i in hits
    ]
    inputs = [featurizer.featurize(ex) for ex in queried]
    import torch

    from .models.torchops import batch_logits, to_torch_params

    tp = to_torch_params(ckpt.arrays)
    with torch.no_grad():
        logits = batch_logits(tp, model_config, inputs)
    probs = torch.softmax(logits.double(), dim=-1).numpy()
    for row, ex in zip(probs, queried):
        cls = int(np.argmax(row))
        if model_config.num_classes == 3:
            if cls == 0:
                groups["pro"].append((ex.sentence.raw, float(row[cls])))
            elif cls == 1:
                groups["contra"].append((ex.sentence.raw, float(row[cls])))
        else:
            if cls == 0:  # two-class models have no stance; arguments go to "pro"
                groups["pro"].append((ex.sentence.raw, float(row[cls])))
    for key in groups:
        groups[key].sort(key=lambda item: -item[1])
        groups[key] = groups[key][:top_k]
    return groups
