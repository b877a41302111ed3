"""End-to-end walkthrough: corpus on disk, a run config, restart-selected
training, and the written evaluation artifacts.

The script builds a tiny three-class corpus whose labels are recoverable from a
single marker word, writes a matching word-embedding file, trains the recurrent
topic-aware classifier with two restart seeds, and prints the test report.

Run with: python3 demos/train_and_evaluate.py
"""

from __future__ import annotations

import json
import random
import tempfile
from pathlib import Path

from argmine.corpus import Label, LabeledExample, Sentence, Topic, write_corpus
from argmine.pipeline import run_training
from argmine.runconfig import load_run_config

MARKERS = {
    "excellent": Label.ARGUMENT_FOR,
    "terrible": Label.ARGUMENT_AGAINST,
    "reported": Label.NO_ARGUMENT,
}
FILLERS = ["the", "policy", "was", "widely", "seen", "as", "yesterday"]


def build_corpus(n: int, seed: int = 0) -> list[LabeledExample]:
    rng = random.Random(seed)
    examples = []
    for i in range(n):
        marker = sorted(MARKERS)[i % 3]
        words = rng.sample(FILLERS, 4)
        words.insert(rng.randrange(len(words) + 1), marker)
        examples.append(
            LabeledExample(
                topic=Topic.from_text("guns"),
                sentence=Sentence.from_text(" ".join(words)),
                label=MARKERS[marker],
            )
        )
    return examples


def write_embedding_file(path: Path) -> None:
    lines = [
        "excellent 1.0 0.0 0.0 0.0",
        "terrible 0.0 1.0 0.0 0.0",
        "reported 0.0 0.0 1.0 0.0",
        "guns 0.5 0.5 0.0 0.0",
    ]
    for i, word in enumerate(FILLERS):
        lines.append(f"{word} 0.0 0.0 0.0 {1.0 + 0.01 * i}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def main() -> None:
    workdir = Path(tempfile.mkdtemp(prefix="argmine_demo_"))
    print(f"working in {workdir}")

    corpus_path = workdir / "corpus.tsv"
    with corpus_path.open("w", encoding="utf-8") as fh:
        write_corpus(build_corpus(120), fh)
    write_embedding_file(workdir / "vectors.txt")

    config = {
        "corpus": "corpus.tsv",
        "task": "three_class",
        "output_dir": str(workdir / "out"),
        "split": {"kind": "in_topic", "ratios": [0.7, 0.15, 0.15], "seed": 0},
        "model": {"family": "recurrent", "hidden_dimension": 8, "aggregation": "concat"},
        "hyperparameters": {"epochs": 20, "batch_size": 8, "learning_rate": 1.0},
        "context": {"source": "word_embeddings", "embeddings": "vectors.txt"},
        "seeds": {"base_seed": 0, "n_restarts": 2},
    }
    config_path = workdir / "run.json"
    config_path.write_text(json.dumps(config, indent=2), encoding="utf-8")

    result = run_training(load_run_config(config_path))
    print(f"checkpoint: {result['checkpoint']}")

    runs = json.loads(Path(result["runs"]).read_text())
    for run in runs["runs"]:
        marker = " (selected)" if run["seed"] == runs["selected_seed"] else ""
        print(
            f"  seed {run['seed']}: final train loss {run['final_train_loss']:.4f}, "
            f"val macro-F1 {run['val_macro_f1']:.3f}{marker}"
        )

    report = json.loads(Path(result["report"]).read_text())
    print(f"test macro-F1: {report['macro_f1']:.3f}")
    for name, scores in report["per_class"].items():
        print(
            f"  {name}: precision {scores['precision']:.3f}, "
            f"recall {scores['recall']:.3f}, f1 {scores['f1']:.3f}"
        )


if __name__ == "__main__":
    main()
