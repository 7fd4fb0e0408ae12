"""End-to-end glue: per-stream training, fused scoring, and the learning curve.

A stream spec names one tokenization and its n-gram settings.  Vocabularies
are always built over all documents the trainer can see (labeled or not),
since untranscribed text is plentiful; only the label subset is supervised.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corpus import Corpus, Document, LabelStore, SfTypeInventory
from .evaluate import CurvePoint, LearningCurve, evaluate
from .features import Vocabulary, build_vocab, featurize
from .fusion import FusionWeights, fuse, standardize
from .svm import LinearModel, ScoreMatrix, TrainConfig, score_documents, train_one_vs_rest


@dataclass(frozen=True)
class StreamSpec:
    stream_id: str
    n: int = 1
    min_df: int = 1


@dataclass
class StreamModels:
    """Trained state for one tokenization stream."""

    spec: StreamSpec
    vocab: Vocabulary
    models: list[LinearModel]

    def score(self, docs: Sequence[Document]) -> ScoreMatrix:
        feats = [featurize(d.tokens(self.spec.stream_id), self.vocab) for d in docs]
        return score_documents(
            self.models, feats, [d.doc_id for d in docs], source_tag=self.spec.stream_id
        )


def train_stream(
    corpus: Corpus,
    labels: LabelStore,
    inventory: SfTypeInventory,
    spec: StreamSpec,
    config: TrainConfig,
) -> StreamModels:
    """Build the stream vocabulary over the corpus and train its classifiers."""
    vocab = build_vocab(corpus, spec.stream_id, spec.n, spec.min_df)
    feats = {
        doc_id: featurize(corpus.get(doc_id).tokens(spec.stream_id), vocab)
        for doc_id in labels.labeled_ids()
    }
    models = train_one_vs_rest(feats, labels, inventory, config, len(vocab))
    return StreamModels(spec=spec, vocab=vocab, models=models)


def train_streams(
    corpus: Corpus,
    labels: LabelStore,
    inventory: SfTypeInventory,
    specs: Sequence[StreamSpec],
    config: TrainConfig,
) -> list[StreamModels]:
    return [train_stream(corpus, labels, inventory, spec, config) for spec in specs]


def fused_scores(
    stream_models: Sequence[StreamModels],
    docs: Sequence[Document],
    weights: FusionWeights | None = None,
) -> ScoreMatrix:
    """Standardize per-stream scores and combine them (equal weights by default)."""
    matrices = [standardize(sm.score(docs)) for sm in stream_models]
    if weights is None:
        weights = FusionWeights({m.source_tag: 1.0 / len(matrices) for m in matrices})
    return fuse(matrices, weights)


def restrict_labels(truth: LabelStore, doc_ids: Sequence[str]) -> LabelStore:
    """New store holding only the given documents' truth records."""
    subset = LabelStore(truth.inventory)
    for doc_id in doc_ids:
        record = truth.get(doc_id)
        if record is None:
            raise ValueError(f"document {doc_id} has no truth record")
        subset.apply(record)
    return subset


def learning_curve(
    corpus: Corpus,
    truth: LabelStore,
    specs: Sequence[StreamSpec],
    config: TrainConfig,
    label_grid: Sequence[int],
    folds: int = 10,
    seeds: Sequence[int] = (0,),
    fold_mode: str = "document",
) -> LearningCurve:
    """Cross-validated performance as a function of the number of labels.

    For every seed the corpus is split into ``folds`` folds; each fold is held
    out in turn while training labels are drawn (nested: a fixed shuffled pool
    prefix) from the remaining documents.  Points report the mean over
    fold x seed runs with the standard error of the mean type AP.
    """
    from .corpus import split_folds

    if folds < 2:
        raise ValueError("folds must be >= 2")
    grid = sorted(set(int(g) for g in label_grid))
    if not grid or grid[0] < 1:
        raise ValueError("label_grid must contain positive counts")
    if list(label_grid) != grid:
        raise ValueError("label_grid must be strictly increasing")

    type_samples: dict[int, list[float]] = {g: [] for g in grid}
    rel_samples: dict[int, list[float]] = {g: [] for g in grid}
    for seed in seeds:
        assignment = split_folds(corpus, folds, seed=seed, mode=fold_mode)
        for fold in range(folds):
            held_ids = assignment.members(fold)
            held_docs = [corpus.get(d) for d in held_ids]
            pool = sorted(set(corpus.doc_ids()) - set(held_ids))
            if grid[-1] > len(pool):
                raise ValueError(
                    f"grid point {grid[-1]} exceeds available labels {len(pool)}"
                )
            train_corpus = Corpus([corpus.get(d) for d in corpus.doc_ids() if d not in set(held_ids)])
            rng = np.random.default_rng([seed, fold])
            order = rng.permutation(len(pool))
            for num_labels in grid:
                chosen = [pool[i] for i in order[:num_labels]]
                labels = restrict_labels(truth, chosen)
                stream_models = train_streams(
                    train_corpus, labels, truth.inventory, specs, config
                )
                scores = fused_scores(stream_models, held_docs)
                report = evaluate(scores, restrict_labels(truth, held_ids))
                if report.mean_type_ap is None or report.relevance_ap is None:
                    continue  # held-out fold had no positives to rank
                type_samples[num_labels].append(report.mean_type_ap)
                rel_samples[num_labels].append(report.relevance_ap)

    points = []
    for num_labels in grid:
        samples = np.asarray(type_samples[num_labels])
        if samples.size == 0:
            raise ValueError(f"no evaluable folds for grid point {num_labels}")
        stderr = float(samples.std(ddof=1) / np.sqrt(samples.size)) if samples.size > 1 else 0.0
        points.append(
            CurvePoint(
                num_labels=num_labels,
                mean_type_ap=float(samples.mean()),
                relevance_ap=float(np.mean(rel_samples[num_labels])),
                stderr=stderr,
            )
        )
    return LearningCurve(points=points, folds=folds, seeds=list(seeds))
