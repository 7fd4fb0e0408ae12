"""IDF-scaled, L2-normalized sparse bag-of-n-grams features.

Term weighting is raw count times smoothed inverse document frequency,
idf(t) = ln((1 + N) / (1 + df(t))) + 1, followed by L2 normalization.  The
smoothing keeps idf strictly positive and defined for every retained term.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import Corpus

Term = tuple[str, ...]


def ngrams(tokens: list[str], n: int) -> list[Term]:
    if n < 1:
        raise ValueError("n must be >= 1")
    return [tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1)]


@dataclass(frozen=True)
class Vocabulary:
    n: int
    min_df: int
    num_docs: int
    term_index: dict[Term, int]
    doc_freq: dict[Term, int]

    def __post_init__(self):
        if self.num_docs < 1:
            raise ValueError("num_docs must be >= 1")
        if sorted(self.term_index.values()) != list(range(len(self.term_index))):
            raise ValueError("term indices must be dense 0..V-1")

    def __len__(self) -> int:
        return len(self.term_index)

    def idf(self, term: Term) -> float:
        return math.log((1 + self.num_docs) / (1 + self.doc_freq[term])) + 1.0

    def save(self, path: str | Path) -> None:
        terms = [
            {"term": list(term), "index": idx, "df": self.doc_freq[term]}
            for term, idx in sorted(self.term_index.items(), key=lambda kv: kv[1])
        ]
        payload = {"n": self.n, "min_df": self.min_df, "num_docs": self.num_docs, "terms": terms}
        Path(path).write_text(json.dumps(payload, sort_keys=True) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "Vocabulary":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        term_index = {tuple(t["term"]): t["index"] for t in data["terms"]}
        doc_freq = {tuple(t["term"]): t["df"] for t in data["terms"]}
        return cls(
            n=data["n"],
            min_df=data["min_df"],
            num_docs=data["num_docs"],
            term_index=term_index,
            doc_freq=doc_freq,
        )


@dataclass(frozen=True)
class SparseVector:
    """Sorted sparse vector: strictly increasing indices with float values."""

    indices: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if len(self.indices) != len(self.values):
            raise ValueError("indices and values must have equal length")
        if len(self.indices) > 1 and not np.all(np.diff(self.indices) > 0):
            raise ValueError("indices must be strictly increasing")

    @classmethod
    def empty(cls) -> "SparseVector":
        return cls(np.empty(0, dtype=np.int64), np.empty(0, dtype=np.float64))

    @classmethod
    def from_pairs(cls, pairs: list[tuple[int, float]]) -> "SparseVector":
        pairs = sorted(pairs)
        idx = np.array([p[0] for p in pairs], dtype=np.int64)
        val = np.array([p[1] for p in pairs], dtype=np.float64)
        return cls(idx, val)

    @property
    def nnz(self) -> int:
        return len(self.indices)

    def norm(self) -> float:
        return float(np.sqrt(np.dot(self.values, self.values)))

    def dot(self, dense: np.ndarray) -> float:
        return float(dense[self.indices] @ self.values)


def build_vocab(corpus: Corpus, stream_id: str, n: int = 1, min_df: int = 1) -> Vocabulary:
    """Collect n-grams with document frequency >= min_df, indexed lexicographically."""
    if len(corpus) == 0:
        raise ValueError("cannot build a vocabulary from an empty corpus")
    if min_df < 1:
        raise ValueError("min_df must be >= 1")
    df: Counter[Term] = Counter()
    for doc in corpus:
        df.update(set(ngrams(doc.tokens(stream_id), n)))
    kept = sorted(t for t, c in df.items() if c >= min_df)
    term_index = {t: i for i, t in enumerate(kept)}
    doc_freq = {t: df[t] for t in kept}
    return Vocabulary(n=n, min_df=min_df, num_docs=len(corpus), term_index=term_index, doc_freq=doc_freq)


def featurize(tokens: list[str], vocab: Vocabulary) -> SparseVector:
    """TF-IDF vector for one document; unknown n-grams are ignored.

    A document with no in-vocabulary n-grams yields the zero vector;
    otherwise the result has unit L2 norm.
    """
    counts: Counter[Term] = Counter(ngrams(tokens, vocab.n))
    pairs = [
        (vocab.term_index[t], c * vocab.idf(t))
        for t, c in counts.items()
        if t in vocab.term_index
    ]
    if not pairs:
        return SparseVector.empty()
    vec = SparseVector.from_pairs(pairs)
    norm = vec.norm()
    return SparseVector(vec.indices, vec.values / norm)


def featurize_corpus(corpus: Corpus, stream_id: str, vocab: Vocabulary) -> list[SparseVector]:
    return [featurize(doc.tokens(stream_id), vocab) for doc in corpus]
