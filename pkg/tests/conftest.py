import hypothesis
import numpy as np
import pytest

from sfpipe.corpus import Corpus, Document, LabelRecord, LabelStore, SfTypeInventory

hypothesis.settings.register_profile(
    "default", deadline=None, max_examples=50, derandomize=True
)
hypothesis.settings.load_profile("default")


@pytest.fixture
def inventory():
    return SfTypeInventory(("alpha", "beta", "gamma"))


@pytest.fixture
def tiny_corpus():
    return Corpus(
        [
            Document("d1", {"asr": ["a", "b", "a"]}),
            Document("d2", {"asr": ["b", "c"]}),
            Document("d3", {"asr": ["a", "c", "c"]}),
            Document("d4", {"asr": ["c"]}),
        ]
    )


def make_labels(inventory, mapping, source="human"):
    store = LabelStore(inventory)
    for doc_id, types in mapping.items():
        store.apply(LabelRecord(doc_id=doc_id, types=frozenset(types), source=source))
    return store


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
