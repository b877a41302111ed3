"""Command-line surface: train, evaluate, augment, search, map-topic, train-kg."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import pipeline
from .checkpoint import CheckpointError, load_checkpoint, save_checkpoint
from .corpus import CorpusError, Topic, load_corpus, write_corpus
from .experiments.augmentation import (
    AugmentationError,
    RelatedTermsRegistry,
    augment_test,
    augment_train,
    related_terms_registry,
)
from .experiments.metrics import MetricsError, evaluate
from .experiments.training import Hyperparameters, TrainingError
from .kg import KGError, UnresolvableTopicError, load_triples, resolve_topic, train_transe
from .embeddings import EmbeddingError, load_embeddings
from .models.config import ModelError
from .runconfig import ConfigError, load_run_config

log = logging.getLogger("argmine")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="argmine",
        description="Topic-aware sentential argument classification toolkit",
    )
    parser.add_argument("--config", metavar="PATH", help="run configuration JSON")
    parser.add_argument("--seed", type=int, help="override the configured base seed")
    parser.add_argument("--output", metavar="DIR", help="override the configured output directory")
    parser.add_argument("--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("train", help="train with restarts, write checkpoint and report")

    p_eval = sub.add_parser("evaluate", help="evaluate a checkpoint on a corpus")
    p_eval.add_argument("checkpoint")
    p_eval.add_argument("corpus")
    p_eval.add_argument("--task", choices=["two_class", "three_class"], default=None)

    p_aug = sub.add_parser("augment", help="emit an augmented corpus TSV on stdout")
    p_aug.add_argument("corpus")
    p_aug.add_argument("--mode", choices=["train", "test"], required=True)
    p_aug.add_argument("--fraction", type=float, default=0.5)
    p_aug.add_argument("--registry", help="JSON file mapping topic -> 5 related terms")

    p_search = sub.add_parser("search", help="retrieve and classify arguments for a topic")
    p_search.add_argument("checkpoint")
    p_search.add_argument("corpus")
    p_search.add_argument("topic")
    p_search.add_argument("--top-k", type=int, default=5)

    p_map = sub.add_parser("map-topic", help="resolve a topic to knowledge-graph entities")
    p_map.add_argument("topic")
    p_map.add_argument("triples")
    p_map.add_argument("embeddings")
    p_map.add_argument("--max-candidates", type=int, default=10)

    p_kg = sub.add_parser("train-kg", help="train entity/relation embeddings on a triple file")
    p_kg.add_argument("triples")
    p_kg.add_argument("output_path")
    p_kg.add_argument("--dimension", type=int, default=32)
    p_kg.add_argument("--margin", type=float, default=1.0)
    p_kg.add_argument("--learning-rate", type=float, default=0.01)
    p_kg.add_argument("--epochs", type=int, default=200)
    p_kg.add_argument("--negatives", type=int, default=1)
    return parser


def cmd_train(args) -> int:
    if not args.config:
        print("config field 'config': --config PATH is required for train", file=sys.stderr)
        return 2
    config = load_run_config(args.config)
    if args.seed is not None:
        config.seeds["base_seed"] = args.seed
    result = pipeline.run_training(config, output_dir=args.output)
    report = result["report_obj"]
    print(f"checkpoint: {result['checkpoint']}")
    print(f"report: {result['report']} (test macro-F1 {report.macro_f1:.4f})")
    return 0


def cmd_evaluate(args) -> int:
    ckpt = load_checkpoint(args.checkpoint)
    model_config, featurizer = pipeline.restore(ckpt)
    task = args.task or ckpt.config["task"]
    examples = load_corpus(args.corpus)
    hyper = ckpt.config.get("hyperparameters", {})
    report = evaluate(
        ckpt.arrays,
        model_config,
        examples,
        task,
        featurizer,
        max_words=hyper.get("max_words", 60),
        split_metadata=ckpt.config.get("split", {}),
        config_digest=ckpt.digest,
    )
    print(report.to_json())
    return 0


def _load_registry(path: str | None) -> RelatedTermsRegistry:
    if path is None:
        return related_terms_registry()
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return RelatedTermsRegistry({topic: tuple(terms) for topic, terms in data.items()})


def cmd_augment(args) -> int:
    examples = load_corpus(args.corpus)
    registry = _load_registry(args.registry)
    seed = args.seed if args.seed is not None else 0
    fn = augment_train if args.mode == "train" else augment_test
    augmented = fn(examples, registry, fraction=args.fraction, seed=seed)
    write_corpus(augmented, sys.stdout)
    return 0


def cmd_search(args) -> int:
    ckpt = load_checkpoint(args.checkpoint)
    examples = load_corpus(args.corpus)
    groups = pipeline.search(ckpt, examples, args.topic, top_k=args.top_k)
    if not groups["pro"] and not groups["contra"]:
        print(f"no sentences retrieved for topic {args.topic!r}")
        return 0
    for name in ("pro", "contra"):
        print(f"{name} ({len(groups[name])}):")
        for sentence, prob in groups[name]:
            print(f"  [{prob:.3f}] {sentence}")
    return 0


def cmd_map_topic(args) -> int:
    kg = load_triples(args.triples)
    table = load_embeddings(args.embeddings)
    topic = Topic.from_text(args.topic)
    try:
        resolutions = resolve_topic(topic, kg, table, args.max_candidates)
    except UnresolvableTopicError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    for r in resolutions:
        print(f"{r.entity}\tstage {r.stage}")
    return 0


def cmd_train_kg(args) -> int:
    kg = load_triples(args.triples)
    seed = args.seed if args.seed is not None else 0
    table = train_transe(
        kg,
        dimension=args.dimension,
        margin=args.margin,
        learning_rate=args.learning_rate,
        epochs=args.epochs,
        negatives_per_positive=args.negatives,
        seed=seed,
    )
    arrays = {f"entity/{name}": vec for name, vec in table.entity_vectors.items()}
    arrays.update({f"relation/{name}": vec for name, vec in table.relation_vectors.items()})
    config = {
        "kind": "entity_embeddings",
        "dimension": args.dimension,
        "margin": args.margin,
        "learning_rate": args.learning_rate,
        "epochs": args.epochs,
        "negatives_per_positive": args.negatives,
        "seed": seed,
    }
    save_checkpoint(args.output_path, arrays, config=config)

    from .kg import transe_score

    rng = np.random.default_rng(seed + 1)
    entities = sorted(kg.entities)
    true_scores = [transe_score(table, t.head, t.relation, t.tail) for t in kg.triples]
    corrupt_scores = []
    for t in kg.triples:
        if rng.random() < 0.5:
            corrupt_scores.append(
                transe_score(table, entities[rng.integers(len(entities))], t.relation, t.tail)
            )
        else:
            corrupt_scores.append(
                transe_score(table, t.head, t.relation, entities[rng.integers(len(entities))])
            )
    print(f"checkpoint: {args.output_path}")
    print(f"mean true score: {np.mean(true_scores):.4f}")
    print(f"mean corrupted score: {np.mean(corrupt_scores):.4f}")
    return 0


_COMMANDS = {
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "augment": cmd_augment,
    "search": cmd_search,
    "map-topic": cmd_map_topic,
    "train-kg": cmd_train_kg,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except (
        CorpusError,
        EmbeddingError,
        KGError,
        ModelError,
        MetricsError,
        AugmentationError,
        TrainingError,
        CheckpointError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
