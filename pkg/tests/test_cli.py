from __future__ import annotations

import json

import pytest

from argmine.checkpoint import load_checkpoint
from argmine.cli import main
from argmine.corpus import load_corpus, write_corpus
from conftest import separable_corpus, separable_word_table, write_embeddings


@pytest.fixture
def workspace(tmp_path):
    """Corpus, embeddings, and a small recurrent run config."""
    corpus_path = tmp_path / "corpus.tsv"
    with corpus_path.open("w", encoding="utf-8") as fh:
        write_corpus(separable_corpus(45), fh)
    embeddings_path = tmp_path / "vectors.txt"
    write_embeddings(separable_word_table(), embeddings_path)
    config = {
        "corpus": "corpus.tsv",
        "task": "three_class",
        "output_dir": str(tmp_path / "out"),
        "split": {"kind": "in_topic", "ratios": [0.7, 0.15, 0.15], "seed": 0},
        "model": {"family": "recurrent", "hidden_dimension": 4, "aggregation": "concat"},
        "hyperparameters": {"epochs": 3, "batch_size": 8, "learning_rate": 0.5},
        "context": {"source": "word_embeddings", "embeddings": "vectors.txt"},
        "seeds": {"base_seed": 0, "n_restarts": 2},
    }
    config_path = tmp_path / "run.json"
    config_path.write_text(json.dumps(config), encoding="utf-8")
    return tmp_path, config_path, config


def checkpoint_bytes(path):
    return {
        str(p.relative_to(path)): p.read_bytes() for p in sorted(path.rglob("*")) if p.is_file()
    }


class TestTrainCommand:
    def test_writes_checkpoint_and_report(self, workspace, capsys):
        tmp_path, config_path, _ = workspace
        assert main(["--config", str(config_path), "train"]) == 0
        out = tmp_path / "out"
        assert (out / "checkpoint" / "manifest.json").exists()
        report = json.loads((out / "report.json").read_text())
        assert 0.0 <= report["macro_f1"] <= 1.0
        runs = json.loads((out / "runs.json").read_text())
        assert len(runs["runs"]) == 2

    def test_missing_corpus_is_config_error(self, workspace, capsys):
        tmp_path, config_path, config = workspace
        config["corpus"] = "missing.tsv"
        config_path.write_text(json.dumps(config), encoding="utf-8")
        assert main(["--config", str(config_path), "train"]) == 2
        assert "corpus" in capsys.readouterr().err

    def test_unknown_key_is_config_error(self, workspace, capsys):
        tmp_path, config_path, config = workspace
        config["optimiser"] = "sgd"
        config_path.write_text(json.dumps(config), encoding="utf-8")
        assert main(["--config", str(config_path), "train"]) == 2
        assert "optimiser" in capsys.readouterr().err

    def test_rerun_is_byte_identical(self, workspace, capsys):
        tmp_path, config_path, _ = workspace
        assert main(["--config", str(config_path), "train"]) == 0
        first = checkpoint_bytes(tmp_path / "out" / "checkpoint")
        assert main(["--config", str(config_path), "train"]) == 0
        second = checkpoint_bytes(tmp_path / "out" / "checkpoint")
        assert first == second


class TestEvaluateCommand:
    def test_round_trip_matches_training_report(self, workspace, capsys):
        tmp_path, config_path, _ = workspace
        main(["--config", str(config_path), "train"])
        trained = json.loads((tmp_path / "out" / "report.json").read_text())
        capsys.readouterr()
        assert (
            main(
                [
                    "evaluate",
                    str(tmp_path / "out" / "checkpoint"),
                    str(tmp_path / "out" / "test.tsv"),
                ]
            )
            == 0
        )
        evaluated = json.loads(capsys.readouterr().out)
        assert evaluated["macro_f1"] == trained["macro_f1"]
        assert evaluated["confusion"] == trained["confusion"]

    def test_two_class_view_of_three_class_checkpoint(self, workspace, capsys):
        tmp_path, config_path, _ = workspace
        main(["--config", str(config_path), "train"])
        capsys.readouterr()
        assert (
            main(
                [
                    "evaluate",
                    str(tmp_path / "out" / "checkpoint"),
                    str(tmp_path / "out" / "test.tsv"),
                    "--task",
                    "two_class",
                ]
            )
            == 0
        )
        report = json.loads(capsys.readouterr().out)
        assert report["class_set"] == ["Argument", "NoArgument"]

    def test_corrupted_blob_rejected(self, workspace, capsys):
        tmp_path, config_path, _ = workspace
        main(["--config", str(config_path), "train"])
        ckpt = tmp_path / "out" / "checkpoint"
        manifest = json.loads((ckpt / "manifest.json").read_text())
        blob = ckpt / next(iter(manifest["arrays"].values()))["file"]
        blob.write_bytes(blob.read_bytes()[:-8])
        assert (
            main(["evaluate", str(ckpt), str(tmp_path / "out" / "test.tsv")]) == 1
        )


class TestAugmentCommand:
    def _write_corpus(self, tmp_path, n_arg=6, n_none=4):
        from argmine.corpus import Label
        from conftest import make_example

        examples = []
        for i in range(n_arg):
            examples.append(
                make_example("cloning", f"supporting point number {i}", Label.ARGUMENT_FOR)
            )
        for i in range(n_none):
            examples.append(make_example("cloning", f"neutral fact number {i}", Label.NO_ARGUMENT))
        path = tmp_path / "aug_corpus.tsv"
        with path.open("w", encoding="utf-8") as fh:
            write_corpus(examples, fh)
        return path

    def test_test_mode_preserves_row_count(self, tmp_path, capsys):
        path = self._write_corpus(tmp_path)
        assert main(["--seed", "1", "augment", str(path), "--mode", "test"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 1 + 10

    def test_train_mode_grows_by_relabeled_count(self, tmp_path, capsys):
        path = self._write_corpus(tmp_path)
        assert main(["--seed", "1", "augment", str(path), "--mode", "train"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 1 + 10 + 3  # round(0.5 * 6) appended copies

    def test_output_round_trips(self, tmp_path, capsys):
        path = self._write_corpus(tmp_path)
        main(["--seed", "2", "augment", str(path), "--mode", "test"])
        out_path = tmp_path / "augmented.tsv"
        out_path.write_text(capsys.readouterr().out, encoding="utf-8")
        assert len(load_corpus(out_path)) == 10

    def test_unregistered_topic_fails(self, tmp_path, capsys):
        from argmine.corpus import Label
        from conftest import make_example

        path = tmp_path / "bad.tsv"
        with path.open("w", encoding="utf-8") as fh:
            write_corpus([make_example("weird topic", "a sentence", Label.ARGUMENT_FOR)], fh)
        assert main(["augment", str(path), "--mode", "test"]) == 1
        assert "weird topic" in capsys.readouterr().err

    def test_custom_registry_file(self, tmp_path, capsys):
        from argmine.corpus import Label
        from conftest import make_example

        path = tmp_path / "custom.tsv"
        with path.open("w", encoding="utf-8") as fh:
            write_corpus([make_example("vaccines", "a clear benefit", Label.ARGUMENT_FOR)], fh)
        registry = tmp_path / "registry.json"
        registry.write_text(
            json.dumps({"vaccines": ["health", "autism", "mandates", "science", "policy"]})
        )
        assert (
            main(["augment", str(path), "--mode", "test", "--registry", str(registry)]) == 0
        )


class TestSearchCommand:
    def test_no_overlap_empty_result(self, workspace, capsys):
        tmp_path, config_path, _ = workspace
        main(["--config", str(config_path), "train"])
        capsys.readouterr()
        assert (
            main(
                [
                    "search",
                    str(tmp_path / "out" / "checkpoint"),
                    str(tmp_path / "corpus.tsv"),
                    "zebras",
                ]
            )
            == 0
        )
        assert "no sentences retrieved" in capsys.readouterr().out

    def test_overlapping_sentences_grouped(self, workspace, capsys):
        tmp_path, config_path, _ = workspace
        main(["--config", str(config_path), "train"])
        capsys.readouterr()
        assert (
            main(
                [
                    "search",
                    str(tmp_path / "out" / "checkpoint"),
                    str(tmp_path / "corpus.tsv"),
                    "excellent policy",
                    "--top-k",
                    "1",
                ]
            )
            == 0
        )
        out = capsys.readouterr().out
        assert "pro (" in out and "contra (" in out
        # top-k 1 caps each group at one sentence line
        assert sum(1 for line in out.splitlines() if line.startswith("  [")) <= 2


class TestMapTopicCommand:
    def test_whole_match_stage_one(self, tmp_path, triples_file, embeddings_file, capsys):
        assert (
            main(["map-topic", "death penalty", str(triples_file), str(embeddings_file)]) == 0
        )
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines == ["Death_penalty\tstage 1"]

    def test_per_word_stage_two(self, triples_file, embeddings_file, capsys):
        assert main(["map-topic", "gun control", str(triples_file), str(embeddings_file)]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines == ["gun\tstage 2", "control\tstage 2"]

    def test_gibberish_topic_nonzero_exit(self, triples_file, embeddings_file, capsys):
        assert main(["map-topic", "xyzzy wibble", str(triples_file), str(embeddings_file)]) == 1
        err = capsys.readouterr().err
        assert "xyzzy" in err and "wibble" in err


class TestTrainKgCommand:
    def test_checkpoint_and_score_report(self, tmp_path, capsys):
        triples = tmp_path / "toy.tsv"
        triples.write_text(
            "a\tr1\tb\nb\tr1\tc\nc\tr1\td\nd\tr1\te\ne\tr1\tf\na\tr2\tc\nb\tr2\td\nc\tr2\te\n",
            encoding="utf-8",
        )
        out = tmp_path / "kg_ckpt"
        assert (
            main(["train-kg", str(triples), str(out), "--dimension", "8", "--epochs", "100"]) == 0
        )
        loaded = load_checkpoint(out)
        assert len([n for n in loaded.arrays if n.startswith("entity/")]) == 6
        assert len([n for n in loaded.arrays if n.startswith("relation/")]) == 2
        stdout = capsys.readouterr().out
        true_score = float(stdout.split("mean true score: ")[1].split()[0])
        corrupt_score = float(stdout.split("mean corrupted score: ")[1].split()[0])
        assert true_score < corrupt_score

    def test_deterministic(self, tmp_path, capsys):
        triples = tmp_path / "toy.tsv"
        triples.write_text("a\tr\tb\nb\tr\tc\n", encoding="utf-8")
        main(["--seed", "5", "train-kg", str(triples), str(tmp_path / "k1"), "--epochs", "10"])
        main(["--seed", "5", "train-kg", str(triples), str(tmp_path / "k2"), "--epochs", "10"])
        a = load_checkpoint(tmp_path / "k1")
        b = load_checkpoint(tmp_path / "k2")
        for name in a.arrays:
            assert (a.arrays[name] == b.arrays[name]).all()
