"""Topic-dependent augmentation: swap argumentative sentences onto related
distractor topics and relabel them as non-arguments."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from ..corpus import Label, LabeledExample, Topic


class AugmentationError(ValueError):
    pass


@dataclass(frozen=True)
class RelatedTermsRegistry:
    """Map from topic text to exactly five related distractor terms."""

    terms: dict[str, tuple[str, ...]]

    def __post_init__(self) -> None:
        for topic, terms in self.terms.items():
            if len(terms) != 5:
                raise AugmentationError(
                    f"topic {topic!r} has {len(terms)} related terms, expected exactly 5"
                )
            if any(t.lower() == topic.lower() for t in terms):
                raise AugmentationError(f"topic {topic!r} appears among its own related terms")

    def lookup(self, topic: str) -> tuple[str, ...]:
        key = topic.lower()
        for registered, terms in self.terms.items():
            if registered.lower() == key:
                return terms
        raise AugmentationError(f"topic {topic!r} is not registered")

    def topics(self) -> list[str]:
        return sorted(self.terms)

    def extended(self, topic: str, terms: Sequence[str]) -> "RelatedTermsRegistry":
        merged = dict(self.terms)
        merged[topic] = tuple(terms)
        return RelatedTermsRegistry(merged)


_BUILTIN_TERMS = {
    "abortion": ("euthanasia", "teenage pregnancy", "family", "medical procedure", "rape"),
    "cloning": ("biology", "species", "religion", "organ donation", "modified food"),
    "death penalty": ("politics", "ethic", "prison", "homicide", "sentence"),
    "gun control": ("safety", "school shooting", "robbery", "regulation", "police state"),
    "marijuana legalization": ("drugs", "medicine", "relaxation", "freedom", "liberty"),
    "minimum wage": ("social justice", "slavery", "automation", "economic crisis", "stagnation"),
    "nuclear energy": ("environment", "employment", "industry", "pollution", "climate change"),
    "school uniforms": ("equality", "social justice", "individualism", "clothing", "mobbing"),
}


def related_terms_registry() -> RelatedTermsRegistry:
    """Registry preloaded with the eight standard topics and their distractors."""
    return RelatedTermsRegistry(dict(_BUILTIN_TERMS))


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def _select_argumentative(
    examples: Sequence[LabeledExample],
    registry: RelatedTermsRegistry,
    fraction: float,
    seed: int,
) -> tuple[list[int], dict[int, str]]:
    """Pick indices to relabel and the replacement term for each (deterministic)."""
    if not 0 <= fraction <= 1:
        raise AugmentationError(f"fraction must be in [0, 1], got {fraction}")
    for ex in examples:
        registry.lookup(ex.topic.raw)  # raises on unregistered topics
    arg_indices = [i for i, ex in enumerate(examples) if ex.label is not Label.NO_ARGUMENT]
    count = _round_half_up(fraction * len(arg_indices))
    rng = random.Random(seed)
    chosen = sorted(rng.sample(arg_indices, count))
    replacements = {}
    for i in chosen:
        terms = registry.lookup(examples[i].topic.raw)
        replacements[i] = rng.choice(terms)
    return chosen, replacements


def _relabel(ex: LabeledExample, term: str) -> LabeledExample:
    return LabeledExample(
        topic=Topic.from_text(term),
        sentence=ex.sentence,
        label=Label.NO_ARGUMENT,
        set_tag=ex.set_tag,
        row_index=ex.row_index,
    )


def augment_test(
    examples: Sequence[LabeledExample],
    registry: RelatedTermsRegistry,
    fraction: float = 0.5,
    seed: int = 0,
) -> list[LabeledExample]:
    """Replace the topic of a fraction of argumentative examples in place.

    Selected examples get a related term of their original topic and the
    non-argument label; total example count is unchanged.
    """
    chosen, replacements = _select_argumentative(examples, registry, fraction, seed)
    chosen_set = set(chosen)
    return [
        _relabel(ex, replacements[i]) if i in chosen_set else ex
        for i, ex in enumerate(examples)
    ]


def augment_train(
    examples: Sequence[LabeledExample],
    registry: RelatedTermsRegistry,
    fraction: float = 0.5,
    seed: int = 0,
) -> list[LabeledExample]:
    """Keep all originals and append relabeled copies of selected argumentative
    examples under related-term topics."""
    chosen, replacements = _select_argumentative(examples, registry, fraction, seed)
    out = list(examples)
    out.extend(_relabel(examples[i], replacements[i]) for i in chosen)
    return out
