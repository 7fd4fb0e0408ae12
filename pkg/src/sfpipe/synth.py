"""Deterministic synthetic corpus generator with planted topic-word structure.

Documents carry a source-language stream ("asr") drawn from a mixture of a
uniform background distribution and per-type word distributions; the ground
truth labels every document (an empty type set marks a non-relevant one).
A synthetic translation table maps the disjoint source vocabulary onto an
English vocabulary so the cross-lingual path can be exercised end to end.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import Corpus, Document, LabelRecord, LabelStore, SfTypeInventory
from .translate import TranslationTable, make_table

NATIVE_STREAM = "asr"

# Fixed candidate probabilities for the synthetic table: the first target is
# the true counterpart, the rest are distractors.
_TABLE_PROBS = (0.55, 0.25, 0.15, 0.05)


def source_token(word: int) -> str:
    return f"x{word:05d}"


def target_token(word: int) -> str:
    return f"w{word:05d}"


@dataclass(frozen=True)
class SynthConfig:
    num_types: int = 11
    vocab_size: int = 500
    docs: int = 1000
    tokens_per_doc: tuple[int, int] = (20, 60)
    type_prevalence: tuple[float, ...] = ()
    topic_word_concentration: float = 0.1
    background_mix: float = 0.2
    seed: int = 0

    def __post_init__(self):
        if not self.type_prevalence:
            object.__setattr__(self, "type_prevalence", tuple([0.1] * self.num_types))
        if len(self.type_prevalence) != self.num_types:
            raise ValueError("type_prevalence length must equal num_types")
        if any(not 0.0 <= p <= 1.0 for p in self.type_prevalence):
            raise ValueError("prevalence values must lie in [0, 1]")
        if self.topic_word_concentration <= 0:
            raise ValueError("topic_word_concentration must be > 0")
        if not 0.0 <= self.background_mix <= 1.0:
            raise ValueError("background_mix must lie in [0, 1]")
        lo, hi = self.tokens_per_doc
        if lo < 1 or hi < lo:
            raise ValueError("tokens_per_doc must be a non-empty ascending range")
        if self.vocab_size < 1 or self.docs < 1 or self.num_types < 1:
            raise ValueError("vocab_size, docs and num_types must be >= 1")


def inventory_for(num_types: int) -> SfTypeInventory:
    return SfTypeInventory(tuple(f"type{i:02d}" for i in range(1, num_types + 1)))


def type_word_distributions(
    rng: np.random.Generator, num_types: int, vocab_size: int, concentration: float
) -> np.ndarray:
    """One word distribution per type, sampled from a symmetric Dirichlet.

    Small concentration gives peaked, nearly one-hot distributions.
    """
    dists = np.empty((num_types, vocab_size))
    for t in range(num_types):
        g = rng.gamma(concentration, size=vocab_size)
        total = g.sum()
        if total <= 0 or not np.isfinite(total):  # extreme concentrations underflow
            g = np.zeros(vocab_size)
            g[rng.integers(vocab_size)] = 1.0
            total = 1.0
        dists[t] = g / total
    return dists


def sample_doc_types(rng: np.random.Generator, prevalence: tuple[float, ...]) -> list[int]:
    """Independent per-type coin flips; the result may be empty."""
    return [t for t, p in enumerate(prevalence) if rng.random() < p]


def sample_tokens(
    rng: np.random.Generator,
    doc_types: list[int],
    type_dists: np.ndarray,
    background_mix: float,
    num_tokens: int,
) -> np.ndarray:
    """Word indices for one document from the background/type mixture."""
    vocab_size = type_dists.shape[1]
    words = np.empty(num_tokens, dtype=np.int64)
    background = rng.random(num_tokens) < background_mix if doc_types else np.ones(num_tokens, bool)
    n_bg = int(background.sum())
    words[background] = rng.integers(0, vocab_size, size=n_bg)
    n_signal = num_tokens - n_bg
    if n_signal:
        chosen = rng.integers(0, len(doc_types), size=n_signal)
        signal_words = np.empty(n_signal, dtype=np.int64)
        for slot, t in enumerate(doc_types):
            mask = chosen == slot
            if mask.any():
                signal_words[mask] = rng.choice(
                    vocab_size, size=int(mask.sum()), p=type_dists[t]
                )
        words[~background] = signal_words
    return words


def make_synthetic_table(rng: np.random.Generator, vocab_size: int) -> TranslationTable:
    """Source vocab -> English vocab with the true counterpart ranked first."""
    pairs = []
    n_cands = min(len(_TABLE_PROBS), vocab_size)
    for j in range(vocab_size):
        targets = [j]
        while len(targets) < n_cands:
            d = int(rng.integers(vocab_size))
            if d not in targets:
                targets.append(d)
        for target, prob in zip(targets, _TABLE_PROBS):
            pairs.append((source_token(j), target_token(target), prob))
    return make_table(pairs)


def generate(config: SynthConfig) -> tuple[Corpus, LabelStore, TranslationTable]:
    """Deterministic corpus + oracle truth + translation table for a config."""
    rng_dists = np.random.default_rng([config.seed, 1])
    rng_docs = np.random.default_rng([config.seed, 2])
    rng_table = np.random.default_rng([config.seed, 3])

    inventory = inventory_for(config.num_types)
    type_names = list(inventory)
    dists = type_word_distributions(
        rng_dists, config.num_types, config.vocab_size, config.topic_word_concentration
    )

    docs = []
    labels = LabelStore(inventory)
    lo, hi = config.tokens_per_doc
    for i in range(config.docs):
        doc_id = f"d{i:05d}"
        doc_types = sample_doc_types(rng_docs, config.type_prevalence)
        num_tokens = int(rng_docs.integers(lo, hi + 1))
        words = sample_tokens(rng_docs, doc_types, dists, config.background_mix, num_tokens)
        tokens = [source_token(w) for w in words]
        docs.append(Document(doc_id=doc_id, streams={NATIVE_STREAM: tokens}))
        labels.apply(
            LabelRecord(
                doc_id=doc_id,
                types=frozenset(type_names[t] for t in doc_types),
                source="oracle",
            )
        )
    table = make_synthetic_table(rng_table, config.vocab_size)
    return Corpus(docs), labels, table
