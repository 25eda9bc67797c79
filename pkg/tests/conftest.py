"""Shared fixtures: a tiny hand-checkable corpus and a session-wide synthetic one."""
import pytest

from rmlsh.index import build_index
from rmlsh.lm import CollectionModel
from rmlsh.synth import SynthConfig, generate

# Three documents small enough to verify every probability by hand.
FRUIT_DOCS = [
    ("D1", "apple banana apple"),
    ("D2", "banana cherry"),
    ("D3", "cherry cherry"),
]


@pytest.fixture(scope="session")
def fruit_index():
    return build_index(iter(FRUIT_DOCS))


@pytest.fixture(scope="session")
def fruit_collection(fruit_index):
    return CollectionModel.from_index(fruit_index)


@pytest.fixture(scope="session")
def synth_data():
    """Clustered corpus used by the pipeline-level tests: (docs, topics, qrels)."""
    return generate(SynthConfig())


@pytest.fixture(scope="session")
def synth_index(synth_data):
    docs, _, _ = synth_data
    return build_index(iter(docs))
