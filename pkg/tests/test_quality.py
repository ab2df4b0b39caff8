from __future__ import annotations

import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gfstill.quality import (
    PSNR_CAP_DB,
    RdCurve,
    RdPoint,
    bd_rate,
    load_rd_csv,
    psnr,
    sequence_quality,
    ssim,
)

from conftest import psnr_oracle, random_plane, ssim_oracle


class TestPsnr:
    def test_identical_frames_hit_the_cap(self, rng):
        plane = random_plane(rng, 32, 24)
        assert psnr(plane, plane) == PSNR_CAP_DB

    def test_uniform_offset_closed_form(self):
        a = np.full((64, 64), 100, dtype=np.uint8)
        b = np.full((64, 64), 101, dtype=np.uint8)
        # MSE is exactly 1, so PSNR is 20*log10(255)
        assert psnr(a, b) == pytest.approx(20.0 * math.log10(255.0), abs=1e-12)

    def test_matches_pixelwise_oracle(self, rng):
        for _ in range(5):
            a = random_plane(rng, 48, 32)
            b = random_plane(rng, 48, 32)
            assert psnr(a, b) == pytest.approx(
                psnr_oracle(a.samples, b.samples), abs=1e-9
            )

    def test_symmetry(self, rng):
        a = random_plane(rng, 32, 32)
        b = random_plane(rng, 32, 32)
        assert psnr(a, b) == psnr(b, a)

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            psnr(np.zeros((16, 16), np.uint8), np.zeros((16, 17), np.uint8))

    def test_worst_case_is_finite(self):
        a = np.zeros((16, 16), np.uint8)
        b = np.full((16, 16), 255, np.uint8)
        assert psnr(a, b) == pytest.approx(0.0, abs=1e-12)


class TestSsim:
    def test_identical_frames_score_exactly_one(self, rng):
        plane = random_plane(rng, 40, 36)
        assert ssim(plane, plane) == 1.0

    def test_constant_pair_closed_form(self):
        a = np.full((32, 32), 100, dtype=np.uint8)
        b = np.full((32, 32), 110, dtype=np.uint8)
        c1 = (0.01 * 255.0) ** 2
        expected = (2.0 * 100.0 * 110.0 + c1) / (100.0**2 + 110.0**2 + c1)
        assert ssim(a, b) == pytest.approx(expected, abs=1e-6)

    def test_matches_windowed_oracle(self, rng):
        for _ in range(3):
            a = random_plane(rng, 24, 20)
            b = random_plane(rng, 24, 20)
            assert ssim(a, b) == pytest.approx(
                ssim_oracle(a.samples, b.samples), abs=1e-9
            )

    def test_symmetry_is_exact(self, rng):
        a = random_plane(rng, 24, 24)
        b = random_plane(rng, 24, 24)
        assert ssim(a, b) == ssim(b, a)

    def test_noise_scores_below_clean(self, rng):
        base = random_plane(rng, 48, 48).samples
        noisy = base.astype(np.int16) + rng.integers(-20, 21, base.shape)
        noisy = np.clip(noisy, 0, 255).astype(np.uint8)
        assert ssim(base, noisy) < 0.99

    def test_too_small_frames_rejected(self):
        with pytest.raises(ValueError):
            ssim(np.zeros((10, 16), np.uint8), np.zeros((10, 16), np.uint8))


class TestRdCurve:
    def test_from_pairs(self):
        curve = RdCurve.from_pairs([(100, 30), (200, 33), (400, 36), (800, 39)])
        assert len(curve.points) == 4
        assert curve.qualities.tolist() == [30, 33, 36, 39]

    def test_needs_four_points(self):
        with pytest.raises(ValueError):
            RdCurve.from_pairs([(100, 30), (200, 33), (400, 36)])

    def test_bitrates_strictly_increasing(self):
        with pytest.raises(ValueError):
            RdCurve.from_pairs([(100, 30), (100, 33), (400, 36), (800, 39)])

    def test_quality_non_decreasing(self):
        with pytest.raises(ValueError):
            RdCurve.from_pairs([(100, 30), (200, 29), (400, 36), (800, 39)])

    def test_positive_bitrate(self):
        with pytest.raises(ValueError):
            RdPoint(0.0, 30.0)


class TestBdRate:
    PAIRS = [(100.0, 30.0), (200.0, 33.0), (400.0, 36.0), (800.0, 39.0)]

    def test_identical_curves_are_zero(self):
        base = RdCurve.from_pairs(self.PAIRS)
        test = RdCurve.from_pairs(self.PAIRS)
        assert bd_rate(base, test) == pytest.approx(0.0, abs=1e-9)

    def test_uniform_rate_scaling(self):
        base = RdCurve.from_pairs(self.PAIRS)
        up = RdCurve.from_pairs([(r * 1.10, q) for r, q in self.PAIRS])
        down = RdCurve.from_pairs([(r * 0.95, q) for r, q in self.PAIRS])
        assert bd_rate(base, up) == pytest.approx(10.0, abs=1e-6)
        assert bd_rate(base, down) == pytest.approx(-5.0, abs=1e-6)

    def test_antisymmetry_of_log_means(self):
        base = RdCurve.from_pairs(self.PAIRS)
        test = RdCurve.from_pairs([(r * 1.25, q + 0.5) for r, q in self.PAIRS])
        forward = bd_rate(base, test)
        backward = bd_rate(test, base)
        assert (1 + forward / 100.0) * (1 + backward / 100.0) == pytest.approx(
            1.0, abs=1e-9
        )

    @given(scale=st.floats(0.5, 2.0))
    @settings(max_examples=50, deadline=None)
    def test_scaling_property(self, scale):
        base = RdCurve.from_pairs(self.PAIRS)
        scaled = RdCurve.from_pairs([(r * scale, q) for r, q in self.PAIRS])
        assert bd_rate(base, scaled) == pytest.approx(
            (scale - 1.0) * 100.0, abs=1e-6
        )

    def test_disjoint_quality_ranges_rejected(self):
        base = RdCurve.from_pairs(self.PAIRS)
        test = RdCurve.from_pairs([(r, q + 100.0) for r, q in self.PAIRS])
        with pytest.raises(ValueError):
            bd_rate(base, test)

    def test_repeated_quality_rejected(self):
        flat = RdCurve.from_pairs([(100, 30), (200, 30), (400, 36), (800, 39)])
        base = RdCurve.from_pairs(self.PAIRS)
        with pytest.raises(ValueError):
            bd_rate(base, flat)


class TestSequenceQuality:
    def test_report_shape_and_means(self, rng):
        ref = [random_plane(rng, 32, 24).samples for _ in range(3)]
        dist = [
            np.clip(f.astype(np.int16) + 2, 0, 255).astype(np.uint8) for f in ref
        ]
        report = sequence_quality(ref, dist)
        assert len(report.psnr_db) == len(report.ssim) == 3
        assert report.avg_psnr_db == pytest.approx(
            math.fsum(report.psnr_db) / 3, rel=0, abs=0
        )
        assert report.avg_ssim == pytest.approx(
            math.fsum(report.ssim) / 3, rel=0, abs=0
        )

    def test_length_mismatch_rejected(self, rng):
        frames = [random_plane(rng, 32, 24)]
        with pytest.raises(ValueError):
            sequence_quality(frames, frames * 2)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            sequence_quality([], [])


class TestRdCsv:
    def test_header_is_skipped(self):
        text = "bitrate_kbps,quality\n100,30\n200,33\n400,36\n800,39\n"
        curve = load_rd_csv(io.StringIO(text))
        assert [p.bitrate for p in curve.points] == [100, 200, 400, 800]

    def test_headerless_file_accepted(self):
        text = "100,30\n200,33\n400,36\n800,39\n"
        assert len(load_rd_csv(io.StringIO(text)).points) == 4

    def test_blank_lines_ignored(self):
        text = "100,30\n\n200,33\n400,36\n800,39\n"
        assert len(load_rd_csv(io.StringIO(text)).points) == 4

    def test_malformed_interior_row_raises(self):
        text = "100,30\nnot-a-number,33\n400,36\n800,39\n"
        with pytest.raises(ValueError):
            load_rd_csv(io.StringIO(text))

    def test_path_round_trip(self, tmp_path):
        p = tmp_path / "curve.csv"
        p.write_text("bitrate_kbps,quality\n100,30\n200,33\n400,36\n800,39\n")
        assert len(load_rd_csv(p).points) == 4
