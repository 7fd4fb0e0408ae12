"""Combine score matrices from multiple tokenization streams.

Raw SVM margins from different streams live on incomparable scales, so each
matrix is standardized per type column before taking a weighted linear
combination.  Weights are tuned by exhaustive search over a simplex grid
(the space is tiny and AP is not differentiable), which always includes the
corner points, so tuned fusion can never score below the best single stream
on the tuning labels.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .corpus import LabelStore
from .evaluate import mean_type_ap
from .svm import ScoreMatrix


@dataclass(frozen=True)
class FusionWeights:
    weights: dict[str, float]

    def __post_init__(self):
        if not self.weights:
            raise ValueError("weights must not be empty")
        if any(w < 0 for w in self.weights.values()):
            raise ValueError("weights must be non-negative")
        if not any(w > 0 for w in self.weights.values()):
            raise ValueError("at least one weight must be positive")

    def normalized(self) -> "FusionWeights":
        total = sum(self.weights.values())
        return FusionWeights({tag: w / total for tag, w in self.weights.items()})

    def save(self, path: str | Path) -> None:
        normed = self.normalized()
        Path(path).write_text(
            json.dumps({"weights": normed.weights}, sort_keys=True) + "\n", encoding="utf-8"
        )

    @classmethod
    def load(cls, path: str | Path) -> "FusionWeights":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(dict(data["weights"]))


def standardize(matrix: ScoreMatrix) -> ScoreMatrix:
    """Zero-mean, unit-variance transform of each type column over documents.

    Constant columns map to all zeros.
    """
    if len(matrix.doc_ids) < 2:
        raise ValueError("standardize needs at least 2 documents")
    scores = matrix.scores
    mean = scores.mean(axis=0)
    std = scores.std(axis=0)
    out = np.where(std > 0, (scores - mean) / np.where(std > 0, std, 1.0), 0.0)
    return ScoreMatrix(
        doc_ids=list(matrix.doc_ids),
        type_ids=list(matrix.type_ids),
        scores=out,
        source_tag=matrix.source_tag,
    )


def fuse(matrices: Sequence[ScoreMatrix], weights: FusionWeights) -> ScoreMatrix:
    """Entry-wise weighted sum of score matrices sharing doc and type order."""
    if not matrices:
        raise ValueError("nothing to fuse")
    first = matrices[0]
    for m in matrices[1:]:
        if m.doc_ids != first.doc_ids or m.type_ids != first.type_ids:
            raise ValueError(
                f"matrix {m.source_tag!r} has mismatched doc or type ordering"
            )
    total = np.zeros_like(first.scores)
    for m in matrices:
        if m.source_tag not in weights.weights:
            raise ValueError(f"no fusion weight for source {m.source_tag!r}")
        total = total + weights.weights[m.source_tag] * m.scores
    return ScoreMatrix(
        doc_ids=list(first.doc_ids),
        type_ids=list(first.type_ids),
        scores=total,
        source_tag="fused",
    )


def _simplex_grid(parts: int, total: int) -> Iterator[tuple[int, ...]]:
    """Integer compositions of ``total`` into ``parts``, descending lexicographic."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for tail in _simplex_grid(parts - 1, total - head):
            yield (head,) + tail


def tune_weights(
    matrices: Sequence[ScoreMatrix],
    dev_labels: LabelStore,
    grid_step: float = 0.1,
) -> FusionWeights:
    """Pick simplex-grid weights maximizing macro-mean type AP on dev labels.

    Ties prefer weight vectors that load earlier sources (the grid is walked
    in descending lexicographic order and only strict improvements move the
    argmax).
    """
    if not matrices:
        raise ValueError("nothing to tune")
    if len(dev_labels) == 0:
        raise ValueError("dev labels must be non-empty")
    if not 0 < grid_step <= 1:
        raise ValueError("grid_step must be in (0, 1]")
    tags = [m.source_tag for m in matrices]
    if len(set(tags)) != len(tags):
        raise ValueError("source tags must be distinct")
    steps = round(1.0 / grid_step)
    best_ap = -np.inf
    best: tuple[int, ...] | None = None
    for combo in _simplex_grid(len(matrices), steps):
        candidate = FusionWeights({tag: c / steps for tag, c in zip(tags, combo)})
        fused = fuse(matrices, candidate)
        ap = mean_type_ap(fused, dev_labels)
        if ap is None:
            raise ValueError("dev labels contain no positive for any scored type")
        if ap > best_ap:
            best_ap = ap
            best = combo
    assert best is not None
    return FusionWeights({tag: c / steps for tag, c in zip(tags, best)})
