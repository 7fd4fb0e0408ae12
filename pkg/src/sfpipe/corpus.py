"""Data model and I/O for documents, tokenization streams, labels, and fold splits.

A document is a speech clip that has already been tokenized one or more ways
(e.g. "asr", "aud", "utd", "eng"); each stream is just a list of string
tokens.  Labels map a document to a set of situation-frame (SF) types; an
explicitly empty set records a human "not relevant" judgment, which is
different from the document never having been labeled at all.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

LABEL_SOURCES = ("human", "oracle", "imported")

DEFAULT_NUM_TYPES = 11


@dataclass(frozen=True)
class SfTypeInventory:
    """Ordered inventory of SF type identifiers."""

    types: tuple[str, ...]

    def __post_init__(self):
        if not self.types:
            raise ValueError("inventory must contain at least one type")
        if any(not t for t in self.types):
            raise ValueError("type identifiers must be non-empty")
        if len(set(self.types)) != len(self.types):
            raise ValueError("type identifiers must be unique")

    @classmethod
    def default(cls) -> "SfTypeInventory":
        # The 11 type slots are configuration; identifiers here are placeholders.
        return cls(tuple(f"type{i:02d}" for i in range(1, DEFAULT_NUM_TYPES + 1)))

    @property
    def size(self) -> int:
        return len(self.types)

    def __iter__(self):
        return iter(self.types)

    def __contains__(self, sf_type: str) -> bool:
        return sf_type in self.types

    @classmethod
    def load(cls, path: str | Path) -> "SfTypeInventory":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(tuple(data["types"]))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps({"types": list(self.types)}, sort_keys=True) + "\n",
            encoding="utf-8",
        )


@dataclass
class Document:
    doc_id: str
    streams: dict[str, list[str]]
    story_id: str | None = None

    def __post_init__(self):
        if not self.doc_id:
            raise ValueError("doc_id must be non-empty")
        for stream_id, tokens in self.streams.items():
            if any(not tok for tok in tokens):
                raise ValueError(
                    f"document {self.doc_id} stream {stream_id} contains an empty token"
                )

    def tokens(self, stream_id: str) -> list[str]:
        """Token sequence for a stream; a missing stream reads as empty."""
        return self.streams.get(stream_id, [])


class Corpus:
    """Immutable ordered collection of documents with unique IDs."""

    def __init__(self, docs: list[Document]):
        self._docs = list(docs)
        self._by_id: dict[str, Document] = {}
        for doc in self._docs:
            if doc.doc_id in self._by_id:
                raise ValueError(f"duplicate doc_id {doc.doc_id}")
            self._by_id[doc.doc_id] = doc

    def __len__(self) -> int:
        return len(self._docs)

    def __iter__(self):
        return iter(self._docs)

    def __getitem__(self, i: int) -> Document:
        return self._docs[i]

    def doc_ids(self) -> list[str]:
        return [d.doc_id for d in self._docs]

    def get(self, doc_id: str) -> Document:
        try:
            return self._by_id[doc_id]
        except KeyError:
            raise KeyError(f"unknown doc_id {doc_id}") from None

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._by_id

    def story_ids(self) -> list[str]:
        """Distinct story keys; documents without a story count as their own."""
        seen = []
        found = set()
        for d in self._docs:
            key = d.story_id if d.story_id is not None else f"__solo__{d.doc_id}"
            if key not in found:
                found.add(key)
                seen.append(key)
        return seen


@dataclass(frozen=True)
class LabelRecord:
    doc_id: str
    types: frozenset[str]
    source: str = "human"

    def __post_init__(self):
        if self.source not in LABEL_SOURCES:
            raise ValueError(f"unknown label source {self.source!r}")

    def to_json(self) -> str:
        return json.dumps(
            {"doc_id": self.doc_id, "types": sorted(self.types), "source": self.source},
            sort_keys=True,
        )


class LabelStore:
    """Current label state: one record per doc_id, later writes superseding.

    An empty ``types`` set means an explicit "not relevant" judgment; absence
    of a record means unlabeled.
    """

    def __init__(self, inventory: SfTypeInventory):
        self.inventory = inventory
        self._records: dict[str, LabelRecord] = {}

    def apply(self, record: LabelRecord) -> None:
        for t in record.types:
            if t not in self.inventory:
                raise ValueError(f"unknown SF type {t!r}")
        self._records[record.doc_id] = record

    def get(self, doc_id: str) -> LabelRecord | None:
        return self._records.get(doc_id)

    def types_of(self, doc_id: str) -> frozenset[str] | None:
        rec = self._records.get(doc_id)
        return rec.types if rec is not None else None

    def labeled_ids(self) -> set[str]:
        return set(self._records)

    def records(self) -> list[LabelRecord]:
        return [self._records[d] for d in sorted(self._records)]

    def positives(self, sf_type: str) -> int:
        return sum(1 for r in self._records.values() if sf_type in r.types)

    def __len__(self) -> int:
        return len(self._records)

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._records


@dataclass(frozen=True)
class FoldAssignment:
    k: int
    seed: int
    mode: str
    assignment: dict[str, int] = field(hash=False)

    def fold_of(self, doc_id: str) -> int:
        return self.assignment[doc_id]

    def members(self, fold: int) -> list[str]:
        return sorted(d for d, f in self.assignment.items() if f == fold)

    def save(self, path: str | Path) -> None:
        payload = {
            "k": self.k,
            "seed": self.seed,
            "mode": self.mode,
            "assignment": self.assignment,
        }
        Path(path).write_text(json.dumps(payload, sort_keys=True) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "FoldAssignment":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(
            k=data["k"], seed=data["seed"], mode=data["mode"], assignment=data["assignment"]
        )


def load_documents(path: str | Path) -> Corpus:
    """Read a JSONL documents file, preserving input order.

    Each line is an object with ``doc_id``, optional ``story_id``, and
    ``streams`` (stream id -> token list).
    """
    docs = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                doc = Document(
                    doc_id=obj["doc_id"],
                    streams={s: list(toks) for s, toks in obj.get("streams", {}).items()},
                    story_id=obj.get("story_id"),
                )
            except ValueError as exc:  # includes json.JSONDecodeError and KeyError is not ValueError
                raise ValueError(f"{path}: line {lineno}: {exc}") from None
            except KeyError as exc:
                raise ValueError(f"{path}: line {lineno}: missing field {exc}") from None
            if doc.doc_id in seen:
                raise ValueError(f"duplicate doc_id {doc.doc_id}")
            seen.add(doc.doc_id)
            docs.append(doc)
    return Corpus(docs)


def save_documents(corpus: Corpus, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in corpus:
            obj: dict = {"doc_id": doc.doc_id, "streams": doc.streams}
            if doc.story_id is not None:
                obj["story_id"] = doc.story_id
            fh.write(json.dumps(obj, sort_keys=True) + "\n")


def load_labels(path: str | Path, inventory: SfTypeInventory) -> LabelStore:
    """Replay a JSONL label log; the last record per doc_id wins."""
    store = LabelStore(inventory)
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                record = LabelRecord(
                    doc_id=obj["doc_id"],
                    types=frozenset(obj["types"]),
                    source=obj.get("source", "human"),
                )
                store.apply(record)
            except ValueError as exc:
                raise ValueError(f"{path}: line {lineno}: {exc}") from None
            except KeyError as exc:
                raise ValueError(f"{path}: line {lineno}: missing field {exc}") from None
    return store


def save_labels(store: LabelStore, path: str | Path) -> None:
    """Write the current label state, one record per doc in doc_id order."""
    with open(path, "w", encoding="utf-8") as fh:
        for record in store.records():
            fh.write(record.to_json() + "\n")


def append_labels(path: str | Path, records: list[LabelRecord]) -> None:
    """Durably append label records to the log (flushed and fsynced)."""
    import os

    with open(path, "a", encoding="utf-8") as fh:
        for record in records:
            fh.write(record.to_json() + "\n")
        fh.flush()
        os.fsync(fh.fileno())


def split_folds(
    corpus: Corpus, k: int, seed: int, mode: str = "document"
) -> FoldAssignment:
    """Deterministic k-fold split.

    Document mode balances fold sizes to within one document.  Story mode
    keeps all documents sharing a story_id in the same fold, assigning
    shuffled stories greedily to the smallest fold.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if mode not in ("document", "story"):
        raise ValueError(f"unknown fold mode {mode!r}")
    rng = random.Random(seed)
    assignment: dict[str, int] = {}
    if mode == "document":
        ids = sorted(corpus.doc_ids())
        if k > len(ids):
            raise ValueError(f"k={k} exceeds corpus size {len(ids)}")
        rng.shuffle(ids)
        for i, doc_id in enumerate(ids):
            assignment[doc_id] = i % k
    else:
        groups: dict[str, list[str]] = {}
        for doc in corpus:
            key = doc.story_id if doc.story_id is not None else f"__solo__{doc.doc_id}"
            groups.setdefault(key, []).append(doc.doc_id)
        keys = sorted(groups)
        if k > len(keys):
            raise ValueError(f"k={k} exceeds story count {len(keys)}")
        rng.shuffle(keys)
        sizes = [0] * k
        for key in keys:
            fold = min(range(k), key=lambda f: (sizes[f], f))
            for doc_id in groups[key]:
                assignment[doc_id] = fold
            sizes[fold] += len(groups[key])
    return FoldAssignment(k=k, seed=seed, mode=mode, assignment=assignment)
