"""Choose unlabeled documents to present to the annotator.

The default strategy takes, for each SF type in turn, the highest-scoring
documents not yet labeled, interleaving types round-robin so every type gets
coverage even under a small budget.  A seeded random strategy serves as the
baseline.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .svm import ScoreMatrix

STRATEGIES = ("per_type_top", "random")


@dataclass
class SelectionBatch:
    doc_ids: list[str]
    rationale: dict[str, tuple[str, float]] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.doc_ids)


def rank_for_annotation(
    scores: ScoreMatrix,
    labeled: set[str],
    budget: int,
    strategy: str = "per_type_top",
    seed: int = 0,
) -> SelectionBatch:
    """Pick up to ``budget`` unlabeled documents for annotation.

    per_type_top: per type, rank unlabeled docs by score descending (ties by
    doc_id ascending) and take round-robin across types in matrix type order,
    skipping docs already taken.  random: seeded uniform sample without
    replacement.  Deterministic given inputs.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    unlabeled = [d for d in scores.doc_ids if d not in labeled]
    if not unlabeled:
        return SelectionBatch(doc_ids=[])

    if strategy == "random":
        rng = random.Random(seed)
        picked = rng.sample(sorted(unlabeled), k=min(budget, len(unlabeled)))
        return SelectionBatch(doc_ids=picked)

    pos = {d: i for i, d in enumerate(scores.doc_ids)}
    per_type_order = []
    for ti, sf_type in enumerate(scores.type_ids):
        ranked = sorted(unlabeled, key=lambda d: (-scores.scores[pos[d], ti], d))
        per_type_order.append((sf_type, ti, iter(ranked)))

    taken: set[str] = set()
    batch: list[str] = []
    rationale: dict[str, tuple[str, float]] = {}
    progress = True
    while len(batch) < budget and progress:
        progress = False
        for sf_type, ti, ranked_iter in per_type_order:
            if len(batch) >= budget:
                break
            for doc_id in ranked_iter:
                if doc_id in taken:
                    continue
                taken.add(doc_id)
                batch.append(doc_id)
                rationale[doc_id] = (sf_type, float(scores.scores[pos[doc_id], ti]))
                progress = True
                break
    return SelectionBatch(doc_ids=batch, rationale=rationale)
