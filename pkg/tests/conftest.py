import numpy as np
import pytest

from vidsum import synthetic
from vidsum.features import AnnotationSet, FrameFeatures


@pytest.fixture
def planted() -> FrameFeatures:
    return synthetic.planted_features()


@pytest.fixture
def planted_ann(planted) -> AnnotationSet:
    return synthetic.planted_annotations(planted)


@pytest.fixture
def tiny_features() -> FrameFeatures:
    probs = np.array([
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [1 / 3, 1 / 3, 1 / 3],
    ])
    return FrameFeatures("tiny", fps=30.0, stride=5, n_frames=4, n_labels=3, probs=probs)


def random_distributions(rng, n, m):
    """Dirichlet-ish random rows that sum to 1."""
    raw = rng.gamma(shape=1.0, scale=1.0, size=(n, m)) + 1e-12
    return raw / raw.sum(axis=1, keepdims=True)
