"""Topic-swap augmentation: probing and improving topic dependence.

Argumentative sentences are paired with a related-but-different topic and
relabeled as non-arguments. Applied to a test set this measures whether a model
actually reads the topic; applied to a training set it teaches the model to do
so. The script shows both modes on a small corpus and prints the rows that
changed.

Run with: python3 demos/topic_swap_augmentation.py
"""

from __future__ import annotations

from argmine.corpus import Label, LabeledExample, Sentence, Topic
from argmine.experiments import augment_test, augment_train, related_terms_registry


def example(topic: str, sentence: str, label: Label) -> LabeledExample:
    return LabeledExample(
        topic=Topic.from_text(topic),
        sentence=Sentence.from_text(sentence),
        label=label,
    )


def show(title: str, examples) -> None:
    print(title)
    for ex in examples:
        print(f"  [{ex.label.value:>16}] topic={ex.topic.raw!r}: {ex.sentence.raw}")


def main() -> None:
    registry = related_terms_registry()
    print("registered topics:", ", ".join(sorted(registry.terms)))
    print("distractors for 'cloning':", ", ".join(registry.lookup("cloning")))
    print()

    corpus = [
        example("cloning", "Cloning could end organ shortages.", Label.ARGUMENT_FOR),
        example("cloning", "Cloning erodes human dignity.", Label.ARGUMENT_AGAINST),
        example("cloning", "Dolly the sheep was cloned in 1996.", Label.NO_ARGUMENT),
        example("gun control", "Background checks reduce gun deaths.", Label.ARGUMENT_FOR),
        example("gun control", "Gun bans punish lawful owners.", Label.ARGUMENT_AGAINST),
        example("gun control", "The bill was debated last week.", Label.NO_ARGUMENT),
    ]
    show("original corpus:", corpus)
    print()

    swapped_test = augment_test(corpus, registry, fraction=0.5, seed=0)
    show("test mode (same row count, swapped rows relabeled in place):", swapped_test)
    changed = sum(1 for a, b in zip(corpus, swapped_test) if a != b)
    print(f"  -> {changed} of {len(corpus)} rows swapped")
    print()

    grown_train = augment_train(corpus, registry, fraction=0.5, seed=0)
    show("train mode (originals kept, swapped copies appended):", grown_train)
    print(f"  -> corpus grew from {len(corpus)} to {len(grown_train)} rows")


if __name__ == "__main__":
    main()
