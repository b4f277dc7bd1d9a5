import numpy as np
import pytest

from holosens.corpus import generate_corpus, synthetic_image


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory):
    """Ten deterministic 512x512 synthetic images, shared across the session."""
    directory = tmp_path_factory.mktemp("corpus")
    generate_corpus(directory, count=10, size=512, seed=11)
    return directory


@pytest.fixture(scope="session")
def small_corpus_dir(tmp_path_factory):
    """Three small images for fast orchestration tests."""
    directory = tmp_path_factory.mktemp("corpus_small")
    generate_corpus(directory, count=3, size=64, seed=5)
    return directory


@pytest.fixture()
def sample_image():
    return synthetic_image(64, 3)
