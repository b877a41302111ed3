"""Run configuration: JSON schema with explicit defaults and strict key checking."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending field."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"config field '{field_name}': {message}")
        self.field_name = field_name


_SPLIT_DEFAULTS = {
    "in_topic": {"kind": "in_topic", "ratios": [0.7, 0.1, 0.2], "seed": 0},
    "cross_topic": {"kind": "cross_topic", "held_out_topic": None, "val_fraction": 0.1, "seed": 0},
}

_MODEL_DEFAULTS = {
    "family": "recurrent",
    "num_classes": 3,
    "use_topic": True,
    "hidden_dimension": 32,
    "aggregation": "concat",
    "num_layers": 2,
    "num_heads": 4,
    "model_dimension": 128,
    "max_sequence_length": 128,
}

_HYPER_DEFAULTS = {
    "epochs": 50,
    "batch_size": 16,
    "learning_rate": 0.1,
    "optimizer": "sgd",
    "max_words": 60,
}

_CONTEXT_DEFAULTS = {
    "source": "none",
    "embeddings": None,
    "triples": None,
    "transe": {
        "dimension": 32,
        "margin": 1.0,
        "learning_rate": 0.01,
        "epochs": 200,
        "negatives_per_positive": 1,
        "seed": 0,
    },
}

_SEED_DEFAULTS = {"base_seed": 0, "n_restarts": 10}


def _merge(field_name: str, defaults: dict, given: dict) -> dict:
    for key in given:
        if key not in defaults:
            raise ConfigError(f"{field_name}.{key}", "unknown key")
    merged = {}
    for key, default in defaults.items():
        value = given.get(key, default)
        if isinstance(default, dict) and isinstance(value, dict) and value is not default:
            value = _merge(f"{field_name}.{key}", default, value)
        merged[key] = value
    return merged


@dataclass
class RunConfig:
    corpus: str
    task: str = "three_class"
    output_dir: str = "out"
    split: dict = field(default_factory=lambda: dict(_SPLIT_DEFAULTS["in_topic"]))
    model: dict = field(default_factory=lambda: dict(_MODEL_DEFAULTS))
    hyperparameters: dict = field(default_factory=lambda: dict(_HYPER_DEFAULTS))
    context: dict = field(default_factory=lambda: dict(_CONTEXT_DEFAULTS))
    seeds: dict = field(default_factory=lambda: dict(_SEED_DEFAULTS))

    def to_dict(self) -> dict:
        return {
            "corpus": self.corpus,
            "task": self.task,
            "output_dir": self.output_dir,
            "split": self.split,
            "model": self.model,
            "hyperparameters": self.hyperparameters,
            "context": self.context,
            "seeds": self.seeds,
        }


_TOP_LEVEL_KEYS = ("corpus", "task", "output_dir", "split", "model", "hyperparameters", "context", "seeds")


def parse_run_config(data: dict, base_dir: Path | None = None) -> RunConfig:
    """Validate a config dict: unknown keys are errors, paths must exist, and
    the context source must be consistent with the model family."""
    for key in data:
        if key not in _TOP_LEVEL_KEYS:
            raise ConfigError(key, "unknown key")
    if "corpus" not in data:
        raise ConfigError("corpus", "required")

    def resolve(p: str) -> str:
        path = Path(p)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        return str(path)

    corpus = resolve(data["corpus"])
    if not Path(corpus).exists():
        raise ConfigError("corpus", f"file does not exist: {corpus}")

    task = data.get("task", "three_class")
    if task not in ("two_class", "three_class"):
        raise ConfigError("task", f"must be 'two_class' or 'three_class', got {task!r}")

    split_given = data.get("split", {})
    kind = split_given.get("kind", "in_topic")
    if kind not in _SPLIT_DEFAULTS:
        raise ConfigError("split.kind", f"must be 'in_topic' or 'cross_topic', got {kind!r}")
    split = _merge("split", _SPLIT_DEFAULTS[kind], split_given)
    if kind == "cross_topic" and not split["held_out_topic"]:
        raise ConfigError("split.held_out_topic", "required for cross_topic splits")

    model = _merge("model", _MODEL_DEFAULTS, data.get("model", {}))
    if model["family"] not in ("recurrent", "attention"):
        raise ConfigError("model.family", f"must be 'recurrent' or 'attention', got {model['family']!r}")

    hyper = _merge("hyperparameters", _HYPER_DEFAULTS, data.get("hyperparameters", {}))
    context = _merge("context", _CONTEXT_DEFAULTS, data.get("context", {}))
    seeds = _merge("seeds", _SEED_DEFAULTS, data.get("seeds", {}))

    source = context["source"]
    if source not in ("word_embeddings", "kg", "none"):
        raise ConfigError("context.source", f"must be 'word_embeddings', 'kg' or 'none', got {source!r}")
    if model["family"] == "recurrent":
        if context["embeddings"] is None:
            raise ConfigError("context.embeddings", "recurrent models need a word-embedding file")
        context["embeddings"] = resolve(context["embeddings"])
        if not Path(context["embeddings"]).exists():
            raise ConfigError("context.embeddings", f"file does not exist: {context['embeddings']}")
        if source == "kg":
            if context["triples"] is None:
                raise ConfigError("context.triples", "kg topic context needs a triples file")
            context["triples"] = resolve(context["triples"])
            if not Path(context["triples"]).exists():
                raise ConfigError("context.triples", f"file does not exist: {context['triples']}")
        if source == "none" and model["use_topic"]:
            raise ConfigError("context.source", "'none' requires a topic-blind model (use_topic false)")
        if model["use_topic"] and model["aggregation"] == "none":
            raise ConfigError("model.aggregation", "'none' requires use_topic false")
        if not model["use_topic"] and model["aggregation"] != "none":
            raise ConfigError("model.aggregation", "topic-blind recurrent models must use aggregation 'none'")
    else:
        # the attention family tokenizes text directly; kg context does not apply
        if source == "kg":
            raise ConfigError("context.source", "the attention family does not take kg context")

    return RunConfig(
        corpus=corpus,
        task=task,
        output_dir=data.get("output_dir", "out"),
        split=split,
        model=model,
        hyperparameters=hyper,
        context=context,
        seeds=seeds,
    )


def load_run_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise ConfigError("config", f"file does not exist: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON in {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config", "top level must be a JSON object")
    return parse_run_config(data, base_dir=path.parent)
