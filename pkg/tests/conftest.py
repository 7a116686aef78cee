import pathlib

import pytest

REPO_ROOT = pathlib.Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"


@pytest.fixture(scope="session")
def fixture_paths():
    return {
        "corpus": str(FIXTURES / "corpus.jsonl"),
        "index": str(FIXTURES / "sense_index.tsv"),
        "inventory": str(FIXTURES / "inventory.tsv"),
        "embeddings": str(FIXTURES / "embeddings.jsonl"),
    }
