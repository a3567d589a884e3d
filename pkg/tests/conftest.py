import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import corpus  # noqa: E402


@pytest.fixture(scope="session")
def binary_corpus():
    return corpus.binary_fixtures()


@pytest.fixture(scope="session")
def tau_corpus():
    return corpus.tau_fixtures()


@pytest.fixture(scope="session")
def ternary_corpus():
    return corpus.ternary_fixtures()


@pytest.fixture(scope="session")
def rb_corpus():
    return corpus.rb_fixtures()
