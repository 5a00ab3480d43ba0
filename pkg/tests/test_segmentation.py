"""Tests for k-means segmentation, mask algebra, localisation and frame selection."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy import ndimage

from kakamatch.config import PipelineConfig
from kakamatch.evaluation.synthetic import Individual, ViewPose, nozzle_layer, render_background, render_view
from kakamatch.imaging.image import GrayImage, RgbImage
from kakamatch.segmentation.frames import probe_point, select_frame
from kakamatch.segmentation.kmeans import LabelMap, kmeans_segment
from kakamatch.segmentation.localisation import build_localisation_mask, min_blob_area
from kakamatch.segmentation.masks import (
    BinaryMask,
    background_mask,
    normalize_mask,
    remove_small_blobs,
    superimpose,
)
from kakamatch.utils.exceptions import ArgumentError


class TestKMeans:
    def test_two_value_groups(self):
        result = kmeans_segment(GrayImage(np.array([[0.0, 0.0, 1.0, 1.0]])), k=2, seed=3)
        assert sorted(result.centroids[:, 0].tolist()) == [0.0, 1.0]
        labels = result.labels[0]
        assert labels[0] == labels[1] and labels[2] == labels[3] and labels[0] != labels[2]

    def test_constant_image(self):
        result = kmeans_segment(GrayImage(np.full((5, 5), 0.4)), k=2, seed=0)
        assert len(np.unique(result.labels)) == 1
        assert result.sse_history[-1] == 0.0

    def test_deterministic_for_fixed_seed(self, textured_image):
        a = kmeans_segment(textured_image, k=3, seed=11)
        b = kmeans_segment(textured_image, k=3, seed=11)
        assert a.labels.tobytes() == b.labels.tobytes()
        assert a.centroids.tobytes() == b.centroids.tobytes()

    def test_rgb_input(self):
        data = np.zeros((4, 4, 3), dtype=np.uint8)
        data[:, 2:] = (200, 40, 40)
        result = kmeans_segment(RgbImage(data), k=2, seed=1)
        assert result.centroids.shape == (2, 3)
        assert len(np.unique(result.labels[:, :2])) == 1

    @pytest.mark.parametrize("k", [0, 17])
    def test_k_out_of_range(self, k):
        with pytest.raises(ArgumentError):
            kmeans_segment(GrayImage(np.zeros((4, 4))), k=k)

    @pytest.mark.parametrize("seed", range(20))
    def test_sse_never_increases(self, seed):
        rng = np.random.default_rng(seed)
        image = GrayImage(rng.random((12, 15)))
        history = kmeans_segment(image, k=2 + seed % 3, seed=seed).sse_history
        assert all(later <= earlier + 1e-9 for earlier, later in zip(history, history[1:]))


class TestMaskNormalization:
    def test_brighter_cluster_is_background(self):
        labels = LabelMap(np.array([[0, 1], [1, 0]]), np.array([[0.1], [0.9]]))
        np.testing.assert_array_equal(normalize_mask(labels).data, [[1, 0], [0, 1]])

    def test_border_majority_picks_dark_blob(self):
        data = np.ones((20, 20))
        data[6:14, 6:14] = 0.0
        labels = kmeans_segment(GrayImage(data), k=2, seed=4)
        mask = normalize_mask(labels, policy="border-majority")
        np.testing.assert_array_equal(mask.data, (data == 0.0).astype(np.uint8))

    def test_cluster_numbering_does_not_matter(self, textured_image):
        labels = kmeans_segment(textured_image, k=2, seed=2)
        for policy in ("brighter-is-background", "border-majority"):
            np.testing.assert_array_equal(
                normalize_mask(labels, policy).data,
                normalize_mask(labels.permuted([1, 0]), policy).data,
            )

    def test_background_mask_is_inverse(self):
        labels = LabelMap(np.array([[0, 1]]), np.array([[0.2], [0.8]]))
        np.testing.assert_array_equal(background_mask(labels).data, [[0, 1]])

    def test_needs_two_clusters(self):
        labels = LabelMap(np.zeros((2, 2), dtype=int), np.array([[0.5]]))
        with pytest.raises(ArgumentError):
            normalize_mask(labels)


class TestBlobRemoval:
    def test_small_component_removed(self):
        data = np.zeros((6, 6), dtype=np.uint8)
        data[1, 1:4] = 1
        assert remove_small_blobs(BinaryMask(data), 4).area == 0

    def test_component_at_threshold_kept(self):
        data = np.zeros((6, 6), dtype=np.uint8)
        data[1:3, 1:3] = 1
        np.testing.assert_array_equal(remove_small_blobs(BinaryMask(data), 4).data, data)

    def test_diagonal_pixels_are_connected(self):
        data = np.eye(5, dtype=np.uint8)
        assert remove_small_blobs(BinaryMask(data), 5).area == 5

    def test_only_large_component_survives(self):
        data = np.zeros((40, 40), dtype=np.uint8)
        data[0:2, 0:5] = 1
        data[15:35, 10:35] = 1
        out = remove_small_blobs(BinaryMask(data), 100)
        assert out.area == 500
        assert out.data[0:2, 0:5].sum() == 0

    @given(arrays(np.uint8, st.tuples(st.integers(1, 16), st.integers(1, 16)), elements=st.integers(0, 1)),
           st.integers(1, 12))
    @settings(max_examples=100, deadline=None)
    def test_idempotent_and_matches_component_oracle(self, data, min_area):
        once = remove_small_blobs(BinaryMask(data), min_area)
        twice = remove_small_blobs(once, min_area)
        np.testing.assert_array_equal(once.data, twice.data)

        components, count = ndimage.label(data, structure=np.ones((3, 3)))
        expected = np.zeros_like(data)
        for label in range(1, count + 1):
            blob = components == label
            if blob.sum() >= min_area:
                expected[blob] = 1
        np.testing.assert_array_equal(once.data, expected)


class TestSuperimpose:
    def test_truth_table(self):
        fg = BinaryMask(np.array([[1, 1, 0, 0]]))
        bg = BinaryMask(np.array([[1, 0, 1, 0]]))
        np.testing.assert_array_equal(superimpose(fg, bg).data, [[1.0, 0.0, 0.0, 0.0]])

    def test_identity_background(self):
        fg = BinaryMask(np.array([[1, 0], [0, 1]]))
        np.testing.assert_array_equal(superimpose(fg, BinaryMask(np.ones((2, 2)))).data, fg.data)

    def test_shape_mismatch(self):
        with pytest.raises(ArgumentError):
            superimpose(BinaryMask(np.ones((2, 2))), BinaryMask(np.ones((2, 3))))


@pytest.fixture(scope="module")
def nozzle_scene():
    """Canonical-pose subject under the nozzle plus the matching background frame."""
    size = 128
    individual = Individual(np.random.default_rng(9), size)
    nozzle = nozzle_layer(size, seed=9)
    frame = render_view(individual, ViewPose(0.0, 1.0, (0.0, 0.0)), nozzle, np.random.default_rng(1), size)
    background = render_background(nozzle, np.random.default_rng(2), size)
    ys, xs = np.mgrid[0:size, 0:size].astype(np.float64)
    subject = individual.coverage(xs, ys) > 0.5
    return frame, background, subject, nozzle[0] > 0


class TestLocalisation:
    def test_min_blob_area_rounds_up(self):
        assert min_blob_area(10, 10, 0.025) == 3

    def test_nozzle_suppressed_and_subject_kept(self, nozzle_scene):
        frame, background, subject, nozzle = nozzle_scene
        mask = build_localisation_mask(frame, background, PipelineConfig(), image_id="scene")
        assert np.mean(mask.data[nozzle] == 0.0) >= 0.99
        assert np.mean(mask.data[subject] > 0.0) >= 0.9

    def test_isolated_highlights_on_nozzle_are_dropped(self):
        frame = np.ones((64, 64))
        frame[4:24, 8:56] = 0.1
        frame[40:60, 20:44] = 0.1
        background = np.ones((64, 64))
        background[40:60, 20:44] = 0.1
        highlights = [(45, 25), (50, 32), (55, 40)]
        for y, x in highlights:
            background[y, x] = 1.0

        mask = build_localisation_mask(GrayImage(frame), GrayImage(background), PipelineConfig(), image_id="specks")
        assert mask.data[40:60, 20:44].max() == 0.0
        assert np.all(mask.data[8:20, 12:52] > 0.999)

    def test_subject_free_frame(self, nozzle_scene):
        _, background, _, _ = nozzle_scene
        mask = build_localisation_mask(background, background, PipelineConfig())
        assert np.mean(mask.data > 0.0) < 0.01

    def test_all_white_gives_empty_mask(self):
        white = GrayImage(np.ones((32, 32)))
        assert build_localisation_mask(white, white, PipelineConfig()).data.max() == 0.0

    def test_size_mismatch(self):
        with pytest.raises(ArgumentError):
            build_localisation_mask(GrayImage(np.ones((8, 8))), GrayImage(np.ones((8, 9))), PipelineConfig())


class TestFrameSelection:
    def _probe_image(self, sample: int) -> GrayImage:
        data = np.zeros((10, 10), dtype=np.uint8)
        x, y = probe_point(10, 10)
        data[y, x] = sample
        return GrayImage.from_uint8(data)

    def test_probe_location(self):
        assert probe_point(10, 10) == (5, 8)

    def test_above_threshold(self):
        assert select_frame(self._probe_image(51))

    def test_threshold_is_strict(self):
        assert not select_frame(self._probe_image(50))

    def test_black_frame(self):
        assert not select_frame(GrayImage(np.zeros((6, 6))))
