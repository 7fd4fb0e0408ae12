"""Expand source-language token streams into English tokens via a translation table.

The table stores, per source token, candidate target tokens with
probabilities.  Translating a stream replaces each in-table token with its
top-k candidates, which is how the cross-lingual ("English classifier") path
gets its bag-of-words input without an actual MT decoder.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

DEFAULT_TOP_K = 4


@dataclass(frozen=True)
class TranslationTable:
    """Map source token -> candidates sorted by probability desc, then target asc."""

    entries: dict[str, tuple[tuple[str, float], ...]]

    def __post_init__(self):
        for source, cands in self.entries.items():
            if not cands:
                raise ValueError(f"source token {source!r} has no candidates")
            for target, prob in cands:
                if not 0.0 <= prob <= 1.0:
                    raise ValueError(
                        f"probability {prob} for {source!r}->{target!r} outside [0,1]"
                    )
            if list(cands) != sorted(cands, key=lambda c: (-c[1], c[0])):
                raise ValueError(f"candidates for {source!r} not sorted")

    def candidates(self, source: str) -> tuple[tuple[str, float], ...]:
        return self.entries.get(source, ())

    def __contains__(self, source: str) -> bool:
        return source in self.entries

    def __len__(self) -> int:
        return len(self.entries)


def make_table(pairs: list[tuple[str, str, float]]) -> TranslationTable:
    """Group (source, target, prob) triples into a sorted table."""
    grouped: dict[str, list[tuple[str, float]]] = {}
    for source, target, prob in pairs:
        grouped.setdefault(source, []).append((target, prob))
    entries = {
        source: tuple(sorted(cands, key=lambda c: (-c[1], c[0])))
        for source, cands in grouped.items()
    }
    return TranslationTable(entries)


def load_table(path: str | Path) -> TranslationTable:
    """Load a TSV table with lines ``source<TAB>target<TAB>prob``."""
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ValueError(f"{path}: line {lineno}: expected 3 tab-separated fields")
            source, target, prob_str = parts
            try:
                prob = float(prob_str)
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: bad probability {prob_str!r}") from None
            if not 0.0 <= prob <= 1.0:
                raise ValueError(f"{path}: line {lineno}: probability {prob} outside [0,1]")
            pairs.append((source, target, prob))
    return make_table(pairs)


def save_table(table: TranslationTable, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for source in sorted(table.entries):
            for target, prob in table.entries[source]:
                fh.write(f"{source}\t{target}\t{prob!r}\n")


def translate_tokens(
    tokens: list[str],
    table: TranslationTable,
    k: int = DEFAULT_TOP_K,
    oov: str = "drop",
) -> list[str]:
    """Replace each token with its top-min(k, available) translations in table order.

    Out-of-vocabulary tokens are dropped or passed through verbatim per
    ``oov``.  Output order follows input order; repeated targets are not
    deduplicated.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if oov not in ("drop", "passthrough"):
        raise ValueError(f"unknown oov mode {oov!r}")
    out: list[str] = []
    for token in tokens:
        cands = table.candidates(token)
        if cands:
            out.extend(target for target, _ in cands[:k])
        elif oov == "passthrough":
            out.append(token)
    return out


def translate_corpus_stream(corpus, table: TranslationTable, source_stream: str,
                            target_stream: str, k: int = DEFAULT_TOP_K,
                            oov: str = "drop") -> None:
    """Attach a translated stream to every document in place."""
    for doc in corpus:
        doc.streams[target_stream] = translate_tokens(doc.tokens(source_stream), table, k, oov)
