"""Average-precision evaluation on the Type and Relevance layers.

All rankings sort by score descending with ties broken by doc_id ascending;
``evaluate`` arranges rows in doc_id order so a stable sort gives that tie
rule for free.  Types with no positive in the truth are excluded from the
macro mean rather than scored zero.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .corpus import LabelStore
from .svm import ScoreMatrix


def average_precision(scores: Sequence[float], relevant: Sequence[bool]) -> float | None:
    """Mean of precision at each relevant rank; None when nothing is relevant.

    Ties keep input order (stable descending sort), so callers control the
    tie rule through how they order the inputs.
    """
    if len(scores) != len(relevant):
        raise ValueError("scores and relevant must have equal length")
    rel = np.asarray(relevant, dtype=bool)
    total = int(rel.sum())
    if total == 0:
        return None
    order = np.argsort(-np.asarray(scores, dtype=np.float64), kind="stable")
    hits = 0
    ap = 0.0
    for rank, i in enumerate(order, start=1):
        if rel[i]:
            hits += 1
            ap += hits / rank
    return ap / total


@dataclass
class EvalReport:
    per_type_ap: dict[str, float]
    mean_type_ap: float | None
    relevance_ap: float | None
    num_docs: int
    num_relevant: int

    def save(self, path: str | Path) -> None:
        payload = {
            "per_type_ap": self.per_type_ap,
            "mean_type_ap": self.mean_type_ap,
            "relevance_ap": self.relevance_ap,
            "num_docs": self.num_docs,
            "num_relevant": self.num_relevant,
        }
        Path(path).write_text(json.dumps(payload, sort_keys=True) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "EvalReport":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(**data)


def mean_type_ap(scores: ScoreMatrix, truth: LabelStore) -> float | None:
    """Macro mean AP over types with at least one positive."""
    return evaluate(scores, truth).mean_type_ap


def evaluate(
    scores: ScoreMatrix, truth: LabelStore, relevance_rule: str = "max_score"
) -> EvalReport:
    """Two-layer report: per-type AP plus any-type relevance AP.

    The relevance layer scores each document by its maximum type score and
    treats documents with a non-empty type set as relevant.
    """
    if relevance_rule != "max_score":
        raise ValueError(f"unknown relevance rule {relevance_rule!r}")
    for doc_id in scores.doc_ids:
        if truth.get(doc_id) is None:
            raise ValueError(f"scored document {doc_id} has no truth record")
    order = np.argsort(np.asarray(scores.doc_ids, dtype=object), kind="stable")
    doc_ids = [scores.doc_ids[i] for i in order]
    matrix = scores.scores[order]

    truth_sets = [truth.types_of(d) for d in doc_ids]
    per_type: dict[str, float] = {}
    for ti, sf_type in enumerate(scores.type_ids):
        rel = [sf_type in ts for ts in truth_sets]
        ap = average_precision(matrix[:, ti], rel)
        if ap is not None:
            per_type[sf_type] = ap
    mean_ap = sum(per_type.values()) / len(per_type) if per_type else None

    rel_docs = [len(ts) > 0 for ts in truth_sets]
    if matrix.shape[0] and matrix.shape[1]:
        doc_scores = matrix.max(axis=1)
    else:
        doc_scores = np.zeros(len(doc_ids))
    relevance_ap = average_precision(doc_scores, rel_docs)

    return EvalReport(
        per_type_ap=per_type,
        mean_type_ap=mean_ap,
        relevance_ap=relevance_ap,
        num_docs=len(doc_ids),
        num_relevant=int(sum(rel_docs)),
    )


@dataclass(frozen=True)
class CurvePoint:
    num_labels: int
    mean_type_ap: float
    relevance_ap: float
    stderr: float


@dataclass
class LearningCurve:
    points: list[CurvePoint]
    folds: int
    seeds: list[int]

    def __post_init__(self):
        counts = [p.num_labels for p in self.points]
        if counts != sorted(set(counts)):
            raise ValueError("curve points must have strictly increasing num_labels")

    def save(self, path: str | Path) -> None:
        payload = {
            "folds": self.folds,
            "seeds": self.seeds,
            "points": [
                {
                    "num_labels": p.num_labels,
                    "mean_type_ap": p.mean_type_ap,
                    "relevance_ap": p.relevance_ap,
                    "stderr": p.stderr,
                }
                for p in self.points
            ],
        }
        Path(path).write_text(json.dumps(payload, sort_keys=True) + "\n", encoding="utf-8")

    def save_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["num_labels", "mean_type_ap", "relevance_ap", "stderr"])
            for p in self.points:
                writer.writerow([p.num_labels, p.mean_type_ap, p.relevance_ap, p.stderr])

    @classmethod
    def load(cls, path: str | Path) -> "LearningCurve":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        points = [CurvePoint(**p) for p in data["points"]]
        return cls(points=points, folds=data["folds"], seeds=list(data["seeds"]))
