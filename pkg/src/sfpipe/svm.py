"""One-vs-rest linear SVMs trained with Pegasos-style SGD.

Each SF type gets an independent binary hinge-loss SVM with L2 regularization.
Updates follow the classic schedule: at step tau the learning rate is
1/(lambda*tau); a margin violation adds eta*y*x after the weight decay
(1 - eta*lambda), and an optional projection keeps ||w|| <= 1/sqrt(lambda).
The bias is a constant-1 feature appended to every example (and regularized
like any other coordinate).

All per-type trainings share the same example order, so the trainer runs them
as one weight matrix.  Each row is maintained as scale * row with the squared
norm tracked incrementally, which makes a step O(nnz) per type instead of
O(dim); the recurrence is algebraically the plain update.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
from scipy import sparse as sp

from .corpus import LabelStore, SfTypeInventory
from .features import SparseVector

_SCALE_FLOOR = 1e-120


@dataclass(frozen=True)
class TrainConfig:
    lambda_: float = 1e-4
    epochs: int = 20
    seed: int = 0
    shuffle: bool = True
    project: bool = True
    balance_classes: bool = False

    def __post_init__(self):
        if self.lambda_ <= 0:
            raise ValueError("lambda_ must be > 0")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")


@dataclass
class LinearModel:
    """Weights for one SF type; the last coordinate is the bias feature."""

    sf_type: str
    weights: np.ndarray
    config: TrainConfig
    degenerate: bool = False

    @property
    def dim(self) -> int:
        return len(self.weights)

    @property
    def bias(self) -> float:
        return float(self.weights[-1])


@dataclass
class ScoreMatrix:
    doc_ids: list[str]
    type_ids: list[str]
    scores: np.ndarray
    source_tag: str = ""

    def __post_init__(self):
        if self.scores.shape != (len(self.doc_ids), len(self.type_ids)):
            raise ValueError(
                f"score matrix shape {self.scores.shape} does not match "
                f"{len(self.doc_ids)} docs x {len(self.type_ids)} types"
            )
        if not np.all(np.isfinite(self.scores)):
            raise ValueError("score matrix contains non-finite entries")

    def column(self, sf_type: str) -> np.ndarray:
        return self.scores[:, self.type_ids.index(sf_type)]

    def score_of(self, doc_id: str, sf_type: str) -> float:
        return float(self.scores[self.doc_ids.index(doc_id), self.type_ids.index(sf_type)])

    def save(self, path: str | Path) -> None:
        payload = {
            "doc_ids": self.doc_ids,
            "type_ids": self.type_ids,
            "source_tag": self.source_tag,
            "scores": [[float(v) for v in row] for row in self.scores],
        }
        Path(path).write_text(json.dumps(payload, sort_keys=True) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "ScoreMatrix":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(
            doc_ids=list(data["doc_ids"]),
            type_ids=list(data["type_ids"]),
            scores=np.asarray(data["scores"], dtype=np.float64).reshape(
                len(data["doc_ids"]), len(data["type_ids"])
            ),
            source_tag=data.get("source_tag", ""),
        )


def _with_bias(vec: SparseVector, dim: int) -> tuple[np.ndarray, np.ndarray, float]:
    """Append the constant-1 bias feature at index ``dim``."""
    if vec.nnz and int(vec.indices[-1]) >= dim:
        raise ValueError(
            f"feature index {int(vec.indices[-1])} out of range for dimension {dim}"
        )
    idx = np.concatenate([vec.indices, [dim]]).astype(np.int64)
    val = np.concatenate([vec.values, [1.0]])
    return idx, val, float(val @ val)


def _pegasos(
    examples: list[tuple[np.ndarray, np.ndarray, float]],
    y: np.ndarray,
    config: TrainConfig,
    dim_with_bias: int,
    update_weight: np.ndarray | None = None,
) -> np.ndarray:
    """Run Pegasos over shuffled examples for all types at once.

    ``y`` is a (num_types, num_examples) matrix of +-1 labels;
    ``update_weight`` optionally scales each example's step per type
    (used for class balancing).  Returns the (num_types, dim) weight matrix.
    """
    num_types, m = y.shape
    lam = config.lambda_
    inv_sqrt_lam = 1.0 / math.sqrt(lam)
    v = np.zeros((num_types, dim_with_bias))
    scale = np.ones(num_types)
    normsq = np.zeros(num_types)
    rng = np.random.default_rng(config.seed)
    tau = 0
    for _ in range(config.epochs):
        order = rng.permutation(m) if config.shuffle else np.arange(m)
        for i in order:
            tau += 1
            eta = 1.0 / (lam * tau)
            idx, val, xsq = examples[i]
            margins = scale * (v[:, idx] @ val)
            decay = 1.0 - eta * lam
            if decay == 0.0:  # first step: w is zero, the decay is a no-op
                scale[:] = 1.0
                v[:] = 0.0
                normsq[:] = 0.0
                margins_post = np.zeros(num_types)
            else:
                scale *= decay
                normsq *= decay * decay
                margins_post = margins * decay
            viol = (y[:, i] * margins) < 1.0
            if viol.any():
                coef = eta * y[viol, i]
                if update_weight is not None:
                    coef = coef * update_weight[viol, i]
                v[np.ix_(viol, idx)] += (coef / scale[viol])[:, None] * val
                normsq[viol] += 2.0 * coef * margins_post[viol] + coef * coef * xsq
            if config.project:
                norms = np.sqrt(np.maximum(normsq, 0.0))
                factor = np.where(norms > inv_sqrt_lam, inv_sqrt_lam / np.maximum(norms, 1e-300), 1.0)
                scale *= factor
                normsq *= factor * factor
            small = scale < _SCALE_FLOOR
            if small.any():
                v[small] *= scale[small, None]
                scale[small] = 1.0
    return scale[:, None] * v


def train_one_vs_rest(
    features: Mapping[str, SparseVector],
    labels: LabelStore,
    inventory: SfTypeInventory,
    config: TrainConfig,
    dim: int,
) -> list[LinearModel]:
    """Train one binary SVM per inventory type on the labeled documents.

    ``features`` maps doc_id to its feature vector over ``dim`` columns;
    entries for unlabeled documents are ignored.  A type with no positive
    (or no negative) examples is still trained but flagged degenerate.
    Deterministic given the config seed.
    """
    doc_ids = sorted(labels.labeled_ids())
    if not doc_ids:
        raise ValueError("no labeled documents to train on")
    missing = [d for d in doc_ids if d not in features]
    if missing:
        raise ValueError(f"labeled document {missing[0]} has no feature vector")
    examples = [_with_bias(features[d], dim) for d in doc_ids]
    types = list(inventory)
    type_row = {t: ti for ti, t in enumerate(types)}
    m = len(doc_ids)
    y = np.full((len(types), m), -1.0)
    for j, doc_id in enumerate(doc_ids):
        for t in labels.types_of(doc_id):
            y[type_row[t], j] = 1.0
    pos = (y > 0).sum(axis=1)
    neg = m - pos
    update_weight = None
    if config.balance_classes:
        update_weight = np.ones_like(y)
        for ti in range(len(types)):
            if pos[ti] > 0 and neg[ti] > 0:
                update_weight[ti, y[ti] > 0] = neg[ti] / pos[ti]
    w = _pegasos(examples, y, config, dim + 1, update_weight)
    return [
        LinearModel(
            sf_type=t,
            weights=w[ti].copy(),
            config=config,
            degenerate=bool(pos[ti] == 0 or neg[ti] == 0),
        )
        for ti, t in enumerate(types)
    ]


def objective(
    model: LinearModel, features: Sequence[SparseVector], ys: Sequence[float]
) -> float:
    """Regularized mean hinge loss: lambda/2 * ||w_nobias||^2 + mean hinge.

    The bias coordinate enters the margins but not the norm penalty.
    """
    if len(features) != len(ys):
        raise ValueError("features and labels must have equal length")
    if not features:
        raise ValueError("objective needs at least one example")
    lam = model.config.lambda_
    w = model.weights
    dim = model.dim - 1
    hinge = 0.0
    for vec, yi in zip(features, ys):
        idx, val, _ = _with_bias(vec, dim)
        margin = yi * float(w[idx] @ val)
        hinge += max(0.0, 1.0 - margin)
    reg = 0.5 * lam * float(w[:-1] @ w[:-1])
    return reg + hinge / len(features)


def _features_to_csr(features: Sequence[SparseVector], dim: int) -> sp.csr_matrix:
    """Stack feature vectors into CSR with the bias column appended."""
    indptr = [0]
    indices: list[np.ndarray] = []
    data: list[np.ndarray] = []
    for vec in features:
        if vec.nnz and int(vec.indices[-1]) >= dim:
            raise ValueError(
                f"feature index {int(vec.indices[-1])} out of range for dimension {dim}"
            )
        indices.append(np.concatenate([vec.indices, [dim]]))
        data.append(np.concatenate([vec.values, [1.0]]))
        indptr.append(indptr[-1] + vec.nnz + 1)
    if not features:
        return sp.csr_matrix((0, dim + 1))
    return sp.csr_matrix(
        (np.concatenate(data), np.concatenate(indices).astype(np.int64), np.array(indptr)),
        shape=(len(features), dim + 1),
    )


def score_documents(
    models: Sequence[LinearModel],
    features: Sequence[SparseVector],
    doc_ids: Sequence[str],
    source_tag: str = "",
) -> ScoreMatrix:
    """Raw margins <w_t, x_i> for every document and type."""
    if len(features) != len(doc_ids):
        raise ValueError("features and doc_ids must have equal length")
    if not models:
        raise ValueError("no models to score with")
    dims = {m.dim for m in models}
    if len(dims) != 1:
        raise ValueError(f"models disagree on dimension: {sorted(dims)}")
    dim = dims.pop() - 1
    w = np.stack([m.weights for m in models])
    x = _features_to_csr(features, dim)
    scores = np.asarray(x @ w.T)
    return ScoreMatrix(
        doc_ids=list(doc_ids),
        type_ids=[m.sf_type for m in models],
        scores=scores,
        source_tag=source_tag,
    )


def save_model(model: LinearModel, path: str | Path) -> None:
    nz = np.flatnonzero(model.weights)
    payload = {
        "sf_type": model.sf_type,
        "lambda": model.config.lambda_,
        "epochs": model.config.epochs,
        "seed": model.config.seed,
        "shuffle": model.config.shuffle,
        "project": model.config.project,
        "balance_classes": model.config.balance_classes,
        "dim": model.dim,
        "weights": [[int(i), float(model.weights[i])] for i in nz],
        "degenerate": model.degenerate,
    }
    Path(path).write_text(json.dumps(payload, sort_keys=True) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> LinearModel:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    weights = np.zeros(data["dim"])
    for i, v in data["weights"]:
        weights[i] = v
    config = TrainConfig(
        lambda_=data["lambda"],
        epochs=data["epochs"],
        seed=data["seed"],
        shuffle=data.get("shuffle", True),
        project=data.get("project", True),
        balance_classes=data.get("balance_classes", False),
    )
    return LinearModel(
        sf_type=data["sf_type"],
        weights=weights,
        config=config,
        degenerate=data["degenerate"],
    )
