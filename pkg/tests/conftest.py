"""Shared fixtures: seeded rasters, toy feature sets and a small synthetic corpus."""

import numpy as np
import pytest

from kakamatch.config import PipelineConfig
from kakamatch.features.extractor import FeatureSet
from kakamatch.features.keypoints import Keypoint
from kakamatch.imaging.filters import blur_array
from kakamatch.imaging.image import GrayImage


def textured_array(seed: int, size: int = 96, blur: float = 1.5) -> np.ndarray:
    """Blurred uniform noise rescaled to [0.1, 0.9]."""
    rng = np.random.default_rng(seed)
    data = blur_array(rng.random((size, size)), blur)
    data = (data - data.min()) / (data.max() - data.min())
    return 0.1 + 0.8 * data


def make_features(points, descriptors, image_id: str = "img", sigma: float = 2.0) -> FeatureSet:
    """FeatureSet with one keypoint per (x, y) in ``points`` and the given descriptors."""
    descriptors = np.asarray(descriptors, dtype=np.float64)
    keypoints = [
        Keypoint(x=float(x), y=float(y), octave=0, interval=1.0, sigma=sigma)
        for x, y in points
    ]
    return FeatureSet(keypoints=keypoints, descriptors=descriptors, image_id=image_id)


def random_descriptors(rng: np.random.Generator, n: int) -> np.ndarray:
    raw = rng.random((n, 128))
    return raw / np.linalg.norm(raw, axis=1, keepdims=True)


def spread_points(rng: np.random.Generator, n: int, size: float = 200.0) -> np.ndarray:
    """n points on a jittered grid, so no three are near-collinear by accident."""
    side = int(np.ceil(np.sqrt(n)))
    grid = np.array([(i % side, i // side) for i in range(n)], dtype=np.float64)
    return 10.0 + grid * (size / side) + rng.uniform(-3.0, 3.0, grid.shape)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def cfg():
    return PipelineConfig()


@pytest.fixture
def textured_image():
    return GrayImage(textured_array(7))


@pytest.fixture
def self_features(rng):
    """Twelve well-spread features; matching the set with itself is exact."""
    points = spread_points(rng, 12)
    return make_features(points, random_descriptors(rng, 12), image_id="clipA_0000")


@pytest.fixture(scope="session")
def synthetic_corpus(tmp_path_factory):
    """3 individuals x 3 views at 128 px, written once per session."""
    from kakamatch.evaluation.synthetic import generate_synthetic_benchmark

    out_dir = tmp_path_factory.mktemp("synth")
    index = generate_synthetic_benchmark(3, 3, seed=5, out_dir=out_dir, size=128)
    return out_dir, index
