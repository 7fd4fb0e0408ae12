import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sfpipe.corpus import (
    Corpus,
    Document,
    FoldAssignment,
    LabelRecord,
    LabelStore,
    SfTypeInventory,
    append_labels,
    load_documents,
    load_labels,
    save_documents,
    save_labels,
    split_folds,
)

from .oracles import balanced_sizes


def write_lines(path, lines):
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


class TestInventory:
    def test_default_has_eleven_types(self):
        inv = SfTypeInventory.default()
        assert inv.size == 11
        assert len(set(inv.types)) == 11

    def test_rejects_duplicates(self):
        with pytest.raises(ValueError):
            SfTypeInventory(("a", "a"))

    def test_rejects_empty_identifier(self):
        with pytest.raises(ValueError):
            SfTypeInventory(("a", ""))

    def test_roundtrip(self, tmp_path):
        inv = SfTypeInventory(("x", "y"))
        inv.save(tmp_path / "inv.json")
        assert SfTypeInventory.load(tmp_path / "inv.json") == inv


class TestLoadDocuments:
    def test_two_lines(self, tmp_path):
        path = tmp_path / "docs.jsonl"
        write_lines(
            path,
            [
                json.dumps({"doc_id": "d1", "streams": {"asr": ["a", "b"]}}),
                json.dumps({"doc_id": "d2", "streams": {"asr": ["c"]}}),
            ],
        )
        corpus = load_documents(path)
        assert len(corpus) == 2
        assert corpus.doc_ids() == ["d1", "d2"]

    def test_duplicate_doc_id(self, tmp_path):
        path = tmp_path / "docs.jsonl"
        line = json.dumps({"doc_id": "d1", "streams": {}})
        write_lines(path, [line, line])
        with pytest.raises(ValueError, match="duplicate doc_id d1"):
            load_documents(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "docs.jsonl"
        path.write_text("", encoding="utf-8")
        assert len(load_documents(path)) == 0

    def test_malformed_line_reports_number(self, tmp_path):
        path = tmp_path / "docs.jsonl"
        write_lines(path, [json.dumps({"doc_id": "d1", "streams": {}}), "{not json"])
        with pytest.raises(ValueError, match="line 2"):
            load_documents(path)

    def test_roundtrip_identity(self, tmp_path):
        docs = [
            Document("d1", {"asr": ["a"], "eng": ["x", "y"]}, story_id="s1"),
            Document("d2", {"asr": []}),
        ]
        path = tmp_path / "docs.jsonl"
        save_documents(Corpus(docs), path)
        reloaded = load_documents(path)
        assert [d.doc_id for d in reloaded] == ["d1", "d2"]
        assert reloaded.get("d1").streams == docs[0].streams
        assert reloaded.get("d1").story_id == "s1"
        assert reloaded.get("d2").streams == {"asr": []}
        assert reloaded.get("d2").story_id is None

    def test_empty_token_rejected(self):
        with pytest.raises(ValueError):
            Document("d1", {"asr": ["a", ""]})


class TestLabels:
    def test_last_wins(self, tmp_path, inventory):
        path = tmp_path / "labels.jsonl"
        write_lines(
            path,
            [
                json.dumps({"doc_id": "d1", "types": ["alpha"], "source": "human"}),
                json.dumps({"doc_id": "d1", "types": ["alpha", "beta"], "source": "human"}),
            ],
        )
        store = load_labels(path, inventory)
        assert store.types_of("d1") == frozenset({"alpha", "beta"})
        assert len(store) == 1

    def test_unknown_type_names_line(self, tmp_path, inventory):
        path = tmp_path / "labels.jsonl"
        write_lines(path, [json.dumps({"doc_id": "d1", "types": ["bogus"], "source": "human"})])
        with pytest.raises(ValueError, match="line 1.*bogus"):
            load_labels(path, inventory)

    def test_empty_types_is_explicit_non_relevant(self, tmp_path, inventory):
        path = tmp_path / "labels.jsonl"
        write_lines(path, [json.dumps({"doc_id": "d1", "types": [], "source": "human"})])
        store = load_labels(path, inventory)
        assert "d1" in store
        assert store.types_of("d1") == frozenset()
        assert store.types_of("d2") is None  # unlabeled is different

    def test_unknown_source_rejected(self):
        with pytest.raises(ValueError):
            LabelRecord("d1", frozenset(), source="robot")

    def test_append_then_replay(self, tmp_path, inventory):
        path = tmp_path / "labels.jsonl"
        append_labels(path, [LabelRecord("d1", frozenset({"alpha"}))])
        append_labels(path, [LabelRecord("d2", frozenset(), source="oracle")])
        store = load_labels(path, inventory)
        assert store.labeled_ids() == {"d1", "d2"}
        assert store.positives("alpha") == 1

    def test_save_labels_roundtrip(self, tmp_path, inventory):
        store = LabelStore(inventory)
        store.apply(LabelRecord("d2", frozenset({"beta"})))
        store.apply(LabelRecord("d1", frozenset()))
        path = tmp_path / "labels.jsonl"
        save_labels(store, path)
        again = load_labels(path, inventory)
        assert again.types_of("d1") == frozenset()
        assert again.types_of("d2") == frozenset({"beta"})


def corpus_of(n):
    return Corpus([Document(f"d{i:03d}", {"asr": ["tok"]}) for i in range(n)])


class TestFolds:
    def test_ten_docs_ten_folds(self):
        folds = split_folds(corpus_of(10), k=10, seed=0)
        sizes = [len(folds.members(f)) for f in range(10)]
        assert sizes == [1] * 10

    def test_determinism(self):
        a = split_folds(corpus_of(30), k=4, seed=9)
        b = split_folds(corpus_of(30), k=4, seed=9)
        assert a.assignment == b.assignment

    def test_23_docs_10_folds_balanced(self):
        folds = split_folds(corpus_of(23), k=10, seed=3)
        sizes = sorted((len(folds.members(f)) for f in range(10)), reverse=True)
        assert sizes == balanced_sizes(23, 10)

    def test_k_too_large(self):
        with pytest.raises(ValueError):
            split_folds(corpus_of(3), k=4, seed=0)

    @given(n=st.integers(1, 60), k=st.integers(1, 12), seed=st.integers(0, 5))
    def test_partition_property(self, n, k, seed):
        if k > n:
            return
        corpus = corpus_of(n)
        folds = split_folds(corpus, k=k, seed=seed)
        assert sorted(folds.assignment) == corpus.doc_ids()
        sizes = [len(folds.members(f)) for f in range(k)]
        assert sum(sizes) == n
        assert max(sizes) - min(sizes) <= 1

    def test_story_mode_keeps_stories_together(self):
        docs = [
            Document(f"d{i}", {"asr": ["x"]}, story_id=f"s{i // 3}") for i in range(12)
        ]
        folds = split_folds(Corpus(docs), k=2, seed=1, mode="story")
        for i in range(0, 12, 3):
            story_folds = {folds.fold_of(f"d{j}") for j in range(i, i + 3)}
            assert len(story_folds) == 1

    def test_fold_roundtrip(self, tmp_path):
        folds = split_folds(corpus_of(7), k=3, seed=2)
        folds.save(tmp_path / "folds.json")
        again = FoldAssignment.load(tmp_path / "folds.json")
        assert again == folds
