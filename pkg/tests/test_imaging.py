"""Tests for raster containers, the PNM codec, filters and overlays."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from kakamatch.imaging.draw import PALETTE, render_matches, side_by_side
from kakamatch.imaging.filters import downsample_half, gaussian_blur, gaussian_kernel, mean_blur
from kakamatch.imaging.image import GrayImage, RgbImage, SoftMask, crop, to_gray
from kakamatch.imaging.pnm import decode_pnm, encode_pnm, read_pnm, write_pnm
from kakamatch.utils.exceptions import ArgumentError, ImageDecodeError


class TestPnmCodec:
    def test_decodes_zero_gray_sample(self):
        image = decode_pnm(b"P5\n1 1\n255\n\x00")
        assert isinstance(image, GrayImage)
        assert image.shape == (1, 1)
        assert image.data[0, 0] == 0.0

    def test_decodes_red_pixel(self):
        image = decode_pnm(b"P6\n1 1\n255\n\xff\x00\x00")
        assert isinstance(image, RgbImage)
        assert tuple(image.data[0, 0]) == (255, 0, 0)

    def test_truncated_body_is_rejected(self):
        with pytest.raises(ImageDecodeError):
            decode_pnm(b"P5\n2 2\n255\n\x00\x01\x02")

    def test_header_comments_are_skipped(self):
        image = decode_pnm(b"P5\n# made by hand\n2 1\n255\n\x00\xff")
        assert image.shape == (1, 2)
        assert image.data[0, 1] == 1.0

    @pytest.mark.parametrize("data", [b"P2\n1 1\n255\n0", b"P5\n1 1\n65535\n\x00\x00", b"P5\n1\n"])
    def test_malformed_headers_are_rejected(self, data):
        with pytest.raises(ImageDecodeError):
            decode_pnm(data)

    def test_decode_error_carries_offset(self):
        with pytest.raises(ImageDecodeError) as info:
            decode_pnm(b"P5\n2 2\n255\n\x00")
        assert info.value.offset > 0

    @pytest.mark.parametrize("value, sample", [(1.0, 255), (0.5, 128), (0.0, 0)])
    def test_soft_mask_quantization(self, value, sample):
        encoded = encode_pnm(SoftMask(np.full((1, 1), value)))
        assert encoded[-1] == sample

    @given(arrays(np.uint8, st.tuples(st.integers(1, 12), st.integers(1, 12))))
    @settings(max_examples=50, deadline=None)
    def test_gray_samples_survive_encoding(self, samples):
        image = decode_pnm(encode_pnm(GrayImage.from_uint8(samples)))
        np.testing.assert_array_equal(image.to_uint8(), samples)

    def test_file_round_trip(self, tmp_path):
        rgb = RgbImage(np.arange(2 * 3 * 3, dtype=np.uint8).reshape(2, 3, 3))
        path = write_pnm(tmp_path / "nested" / "rgb.ppm", rgb)
        np.testing.assert_array_equal(read_pnm(path).data, rgb.data)


class TestRasters:
    @pytest.mark.parametrize("rgb, expected", [((255, 255, 255), 1.0), ((255, 0, 0), 0.299), ((0, 0, 0), 0.0)])
    def test_luma(self, rgb, expected):
        image = RgbImage(np.array([[rgb]], dtype=np.uint8))
        assert to_gray(image).data[0, 0] == pytest.approx(expected)

    def test_gray_range_is_validated(self):
        with pytest.raises(ArgumentError):
            GrayImage(np.full((2, 2), 1.5))

    def test_soft_mask_has_no_tolerance(self):
        with pytest.raises(ArgumentError):
            SoftMask(np.full((2, 2), 1.0 + 1e-6))

    def test_rasters_are_read_only(self):
        image = GrayImage(np.zeros((2, 2)))
        with pytest.raises(ValueError):
            image.data[0, 0] = 1.0

    def test_crop_window(self):
        image = GrayImage(np.arange(20, dtype=np.float64).reshape(4, 5) / 20.0)
        cut = crop(image, (1, 2, 3, 2))
        np.testing.assert_array_equal(cut.data, image.data[2:4, 1:4])

    def test_crop_outside_image(self):
        with pytest.raises(ArgumentError):
            crop(GrayImage(np.zeros((4, 4))), (2, 2, 3, 1))


class TestFilters:
    @given(st.floats(0.0, 1.0), st.floats(0.3, 4.0))
    @settings(max_examples=30, deadline=None)
    def test_constant_image_is_fixed(self, value, sigma):
        out = gaussian_blur(GrayImage(np.full((9, 7), value)), sigma)
        np.testing.assert_allclose(out.data, value, atol=1e-12)

    def test_impulse_matches_direct_2d_kernel(self):
        impulse = np.zeros((11, 11))
        impulse[5, 5] = 1.0
        out = gaussian_blur(GrayImage(impulse), 1.0)
        kernel = gaussian_kernel(1.0)
        direct = np.outer(kernel, kernel)
        radius = len(kernel) // 2
        np.testing.assert_allclose(out.data[5 - radius:6 + radius, 5 - radius:6 + radius], direct, atol=1e-12)
        assert out.data[5, 5] == pytest.approx(kernel[radius] ** 2)
        assert out.data.sum() == pytest.approx(1.0, abs=1e-6)

    @given(st.floats(1.2, 3.0), st.floats(1.2, 3.0))
    @settings(max_examples=25, deadline=None)
    def test_successive_blurs_compose(self, sigma_1, sigma_2):
        # pyramid increments stay above 1.2; sampled kernels drift apart well below sigma 1
        noise = GrayImage(np.random.default_rng(8).random((96, 96)))
        twice = gaussian_blur(gaussian_blur(noise, sigma_1), sigma_2)
        once = gaussian_blur(noise, float(np.hypot(sigma_1, sigma_2)))
        np.testing.assert_allclose(twice.data[24:-24, 24:-24], once.data[24:-24, 24:-24], atol=1e-3)

    def test_non_positive_sigma(self):
        with pytest.raises(ArgumentError):
            gaussian_kernel(0.0)

    def test_downsample_takes_even_pixels(self):
        data = np.arange(16, dtype=np.float64).reshape(4, 4) / 16.0
        out = downsample_half(GrayImage(data))
        np.testing.assert_array_equal(out.data, data[[0, 0, 2, 2], [0, 2, 0, 2]].reshape(2, 2))

    def test_downsample_floors_odd_sizes(self):
        data = np.arange(9, dtype=np.float64).reshape(3, 3) / 9.0
        out = downsample_half(GrayImage(data))
        assert out.shape == (1, 1)
        assert out.data[0, 0] == data[0, 0]

    def test_mean_blur_identity_and_ones(self):
        mask = SoftMask(np.random.default_rng(0).random((6, 6)))
        assert mean_blur(mask, 1) is mask
        np.testing.assert_allclose(mean_blur(SoftMask(np.ones((6, 6))), 5).data, 1.0)

    def test_mean_blur_single_spike(self):
        spike = np.zeros((9, 9))
        spike[4, 4] = 1.0
        out = mean_blur(SoftMask(spike), 9)
        assert out.data[4, 4] == pytest.approx(1.0 / 81.0)

    def test_mean_blur_rejects_even_window(self):
        with pytest.raises(ArgumentError):
            mean_blur(SoftMask(np.ones((3, 3))), 4)


class TestOverlay:
    def test_canvas_layout(self):
        a = GrayImage(np.zeros((10, 6)))
        b = RgbImage(np.full((14, 4, 3), 200, dtype=np.uint8))
        canvas = side_by_side(a, b)
        assert canvas.shape == (14, 10, 3)
        assert canvas[12, 2].tolist() == [0, 0, 0]
        assert canvas[12, 7].tolist() == [200, 200, 200]

    def test_no_matches_draws_nothing(self):
        a = GrayImage(np.full((8, 8), 0.5))
        overlay = render_matches(a, a, [])
        np.testing.assert_array_equal(overlay.data, side_by_side(a, a))

    def test_self_match_lines_are_horizontal(self):
        a = GrayImage(np.zeros((40, 40)))
        overlay = render_matches(a, a, [((10.0, 20.0, 1.0), (10.0, 20.0, 1.0))])
        row = overlay.data[20]
        # the line covers every column between the two keypoints on row 20
        assert np.all(row[10:51].any(axis=1))
        assert not overlay.data[30].any()

    def test_circle_radius_follows_sigma(self):
        a = GrayImage(np.zeros((40, 40)))
        overlay = render_matches(a, a, [((20.0, 10.0, 6.0), (20.0, 30.0, 3.0))])
        assert overlay.data[10, 26].tolist() == list(PALETTE[0])
        assert overlay.data[30, 63].tolist() == list(PALETTE[0])
        assert not overlay.data[10, 17].any()

    def test_colours_cycle_through_palette(self):
        a = GrayImage(np.zeros((30, 30)))
        matches = [((5.0, 5.0 + 2 * i, 1.0), (5.0, 5.0 + 2 * i, 1.0)) for i in range(len(PALETTE) + 1)]
        overlay = render_matches(a, a, matches)
        assert overlay.data[5 + 2 * len(PALETTE), 20].tolist() == list(PALETTE[0])
