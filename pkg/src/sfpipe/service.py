"""HTTP annotation service running the human-in-the-loop labeling cycle.

The append-only JSONL label log is the single source of truth: every accepted
submission is flushed and fsynced before the request is acknowledged, and a
restart replays the log to reconstruct the session.  Retraining is an
explicit endpoint (annotators label in bursts); the score matrix swap is
atomic from readers' perspective, and labels accepted mid-retrain simply
count toward the next one.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import RedirectResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .corpus import (
    Corpus,
    LabelRecord,
    LabelStore,
    SfTypeInventory,
    append_labels,
    load_labels,
)
from .fusion import FusionWeights, tune_weights, standardize
from .pipeline import StreamSpec, fused_scores, restrict_labels, train_streams
from .select import rank_for_annotation
from .svm import ScoreMatrix, TrainConfig, save_model
from .translate import load_table, translate_corpus_stream


class NoTrainingData(Exception):
    """Raised when retrain is requested before any positive label exists."""


@dataclass
class ServiceConfig:
    streams: list[StreamSpec]
    train: TrainConfig
    selection_strategy: str = "per_type_top"
    selection_seed: int = 0
    fusion_mode: str = "equal"  # equal | fixed | tuned
    fusion_step: float = 0.1
    fusion_weights: dict[str, float] | None = None
    inventory_path: str | None = None
    translate: dict | None = None

    @classmethod
    def load(cls, path: str | Path) -> "ServiceConfig":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        streams = [
            StreamSpec(
                stream_id=s["stream"], n=s.get("n", 1), min_df=s.get("min_df", 1)
            )
            for s in data["streams"]
        ]
        train = TrainConfig(
            lambda_=data.get("lambda", 1e-4),
            epochs=data.get("epochs", 20),
            seed=data.get("seed", 0),
        )
        fusion = data.get("fusion", {})
        selection = data.get("selection", {})
        return cls(
            streams=streams,
            train=train,
            selection_strategy=selection.get("strategy", "per_type_top"),
            selection_seed=selection.get("seed", 0),
            fusion_mode=fusion.get("mode", "equal"),
            fusion_step=fusion.get("step", 0.1),
            fusion_weights=fusion.get("weights"),
            inventory_path=data.get("inventory"),
            translate=data.get("translate"),
        )


class AnnotationSession:
    """Session state: corpus, label log, current models and fused scores."""

    def __init__(
        self,
        corpus: Corpus,
        inventory: SfTypeInventory,
        label_log: str | Path,
        config: ServiceConfig,
        oracle_labels: LabelStore | None = None,
        model_dir: str | Path | None = None,
    ):
        self.corpus = corpus
        self.inventory = inventory
        self.config = config
        self.label_log = Path(label_log)
        self.oracle_labels = oracle_labels
        self.model_dir = Path(model_dir) if model_dir else None
        if config.translate:
            table = load_table(config.translate["table"])
            translate_corpus_stream(
                corpus,
                table,
                source_stream=config.translate.get("source", "asr"),
                target_stream=config.translate.get("target", "eng"),
                k=config.translate.get("k", 4),
                oov=config.translate.get("oov", "drop"),
            )
        if self.label_log.exists():
            self.labels = load_labels(self.label_log, inventory)
        else:
            self.label_log.touch()
            self.labels = LabelStore(inventory)
        self._write_lock = threading.Lock()
        self._retrain_lock = threading.Lock()
        self.scores: ScoreMatrix | None = None
        self.stream_models: list | None = None
        self.retrain_count = 0
        if self._has_training_signal():
            self.retrain()

    def _has_training_signal(self) -> bool:
        return any(len(r.types) > 0 for r in self.labels.records())

    def _current_scores(self) -> ScoreMatrix:
        if self.scores is not None:
            return self.scores
        return ScoreMatrix(
            doc_ids=self.corpus.doc_ids(),
            type_ids=list(self.inventory),
            scores=np.zeros((len(self.corpus), self.inventory.size)),
            source_tag="uninitialized",
        )

    def submit(self, entries: list[tuple[str, list[str]]], source: str = "human") -> int:
        """Validate then durably append label records; returns the label count."""
        records = []
        for doc_id, types in entries:
            if doc_id not in self.corpus:
                raise ValueError(f"unknown doc_id {doc_id}")
            for t in types:
                if t not in self.inventory:
                    raise ValueError(f"unknown SF type {t!r}")
            records.append(LabelRecord(doc_id=doc_id, types=frozenset(types), source=source))
        with self._write_lock:
            append_labels(self.label_log, records)
            for record in records:
                self.labels.apply(record)
            return len(self.labels)

    def oracle_answer(self, doc_ids: list[str]) -> int:
        """Label documents from the synthetic ground truth (oracle mode)."""
        if self.oracle_labels is None:
            raise ValueError("session is not running in oracle mode")
        entries = []
        for doc_id in doc_ids:
            truth = self.oracle_labels.types_of(doc_id)
            if truth is None:
                raise ValueError(f"oracle has no record for doc_id {doc_id}")
            entries.append((doc_id, sorted(truth)))
        return self.submit(entries, source="oracle")

    def retrain(self) -> dict:
        """Retrain per-stream classifiers on all logged labels and re-fuse."""
        with self._retrain_lock:
            with self._write_lock:
                snapshot = restrict_labels(self.labels, sorted(self.labels.labeled_ids()))
            if not any(len(r.types) > 0 for r in snapshot.records()):
                raise NoTrainingData("no training data: no label with a positive type")
            stream_models = train_streams(
                self.corpus, snapshot, self.inventory, self.config.streams, self.config.train
            )
            weights = self._resolve_weights(stream_models, snapshot)
            scores = fused_scores(stream_models, list(self.corpus), weights)
            self.stream_models = stream_models
            self.scores = scores
            self.retrain_count += 1
            if self.model_dir is not None:
                self._persist(stream_models, scores)
            degenerate = sorted(
                {m.sf_type for sm in stream_models for m in sm.models if m.degenerate}
            )
            return {
                "retrains": self.retrain_count,
                "labels_used": len(snapshot),
                "per_type_positives": {t: snapshot.positives(t) for t in self.inventory},
                "degenerate_types": degenerate,
            }

    def _resolve_weights(self, stream_models, snapshot: LabelStore) -> FusionWeights | None:
        mode = self.config.fusion_mode
        if mode == "fixed":
            if not self.config.fusion_weights:
                raise ValueError("fusion mode 'fixed' requires weights in the config")
            return FusionWeights(dict(self.config.fusion_weights))
        if mode == "tuned" and len(stream_models) > 1:
            labeled = sorted(snapshot.labeled_ids())
            docs = [self.corpus.get(d) for d in labeled]
            matrices = [standardize(sm.score(docs)) for sm in stream_models]
            return tune_weights(matrices, snapshot, grid_step=self.config.fusion_step)
        return None  # equal weights

    def _persist(self, stream_models, scores: ScoreMatrix) -> None:
        self.model_dir.mkdir(parents=True, exist_ok=True)
        for sm in stream_models:
            for model in sm.models:
                save_model(model, self.model_dir / f"{sm.spec.stream_id}_{model.sf_type}.json")
        scores.save(self.model_dir / "scores.json")

    def next_batch(self, size: int) -> dict:
        scores = self._current_scores()
        batch = rank_for_annotation(
            scores,
            labeled=self.labels.labeled_ids(),
            budget=size,
            strategy=self.config.selection_strategy,
            seed=self.config.selection_seed,
        )
        row_of = {d: i for i, d in enumerate(scores.doc_ids)}
        items = []
        for doc_id in batch.doc_ids:
            doc = self.corpus.get(doc_id)
            row = {
                t: float(scores.scores[row_of[doc_id], ti])
                for ti, t in enumerate(scores.type_ids)
            }
            reason = batch.rationale.get(doc_id)
            items.append(
                {
                    "doc_id": doc_id,
                    "streams": doc.streams,
                    "scores": row,
                    "rationale": {"sf_type": reason[0], "score": reason[1]} if reason else None,
                }
            )
        remaining = len(self.corpus) - len(self.labels)
        return {"items": items, "remaining_unlabeled": remaining}

    def status(self) -> dict:
        return {
            "num_docs": len(self.corpus),
            "labels": len(self.labels),
            "unlabeled": len(self.corpus) - len(self.labels),
            "per_type_counts": {t: self.labels.positives(t) for t in self.inventory},
            "types": list(self.inventory),
            "streams": [s.stream_id for s in self.config.streams],
            "retrains": self.retrain_count,
            "oracle_mode": self.oracle_labels is not None,
            "scores_ready": self.scores is not None,
        }

    def document(self, doc_id: str) -> dict:
        doc = self.corpus.get(doc_id)  # KeyError for unknown
        scores = self.scores
        row = None
        if scores is not None:
            row = {t: float(scores.score_of(doc_id, t)) for t in scores.type_ids}
        types = self.labels.types_of(doc_id)
        return {
            "doc_id": doc.doc_id,
            "story_id": doc.story_id,
            "streams": doc.streams,
            "scores": row,
            "labeled": types is not None,
            "types": sorted(types) if types is not None else None,
        }


class LabelIn(BaseModel):
    doc_id: str
    types: list[str]


class LabelsIn(BaseModel):
    records: list[LabelIn]


class OracleIn(BaseModel):
    doc_ids: list[str]


def create_app(session: AnnotationSession, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="sfpipe annotation service")

    @app.get("/api/status")
    def status():
        return session.status()

    @app.get("/api/batch")
    def batch(size: int = Query(default=10, ge=1)):
        return session.next_batch(size)

    @app.post("/api/labels")
    def labels(payload: LabelsIn):
        try:
            total = session.submit([(r.doc_id, r.types) for r in payload.records])
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"ok": True, "labels": total}

    @app.post("/api/retrain")
    def retrain():
        try:
            return session.retrain()
        except NoTrainingData as exc:
            raise HTTPException(status_code=409, detail=str(exc))

    @app.get("/api/doc/{doc_id}")
    def document(doc_id: str):
        try:
            return session.document(doc_id)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown doc_id {doc_id}")

    @app.post("/api/oracle/labels")
    def oracle(payload: OracleIn):
        try:
            total = session.oracle_answer(payload.doc_ids)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"ok": True, "labels": total}

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(static_dir), html=True), name="ui")

        @app.get("/")
        def root():
            return RedirectResponse(url="/ui/")

    return app
