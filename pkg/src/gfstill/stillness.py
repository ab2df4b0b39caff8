"""Group-level stillness metrics and the still / non-still decision.

A group is still only when all three hold under the configured thresholds:
its worst frame is almost entirely zero-motion, the mean per-pixel
prediction error is small, and the zero-vector error is spatially uniform.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

import numpy as np

from .first_pass import FrameFirstPassStats

STILL = "still"
NON_STILL = "non-still"

METRIC_NAMES = ("zero_motion_accumulator", "avg_pixel_error", "avg_error_stdev")

DEFAULT_HISTOGRAM_BINS = 20


@dataclass(frozen=True)
class StillnessThresholds:
    zero_motion_min: float = 0.9
    pixel_error_max: float = 40.0
    error_stdev_max: float = 2000.0

    def __post_init__(self):
        if min(self.zero_motion_min, self.pixel_error_max, self.error_stdev_max) <= 0:
            raise ValueError("thresholds must be positive")


@dataclass(frozen=True)
class GfGroupMetrics:
    interval: int
    zero_motion_accumulator: float
    avg_pixel_error: float
    avg_error_stdev: float

    def __post_init__(self):
        if self.interval < 1:
            raise ValueError("interval must be >= 1")
        if not 0.0 <= self.zero_motion_accumulator <= 1.0:
            raise ValueError("zero_motion_accumulator must lie in [0, 1]")
        if self.avg_pixel_error < 0 or self.avg_error_stdev < 0:
            raise ValueError("error metrics must be non-negative")


@dataclass
class GroupRecord:
    """One row of the calibration dump: a group, its metrics, its verdict."""

    group_id: int
    first_display_index: int
    metrics: GfGroupMetrics
    verdict: str


def compute_group_metrics(
    stats: Sequence[FrameFirstPassStats], pixels_per_frame: int
) -> GfGroupMetrics:
    """Fold per-frame first-pass stats into the three group metrics.

    The zero-motion accumulator is the minimum over the group's frames, so a
    single busy frame disqualifies the whole group.  Means use exactly
    rounded summation, making the result independent of frame order.
    """
    if not stats:
        raise ValueError("cannot summarise an empty stats list")
    if pixels_per_frame <= 0:
        raise ValueError("pixels_per_frame must be positive")
    zm = min(s.pcnt_zero_motion for s in stats)
    ape = math.fsum(s.frame_sse / pixels_per_frame for s in stats) / len(stats)
    aes = math.fsum(s.zero_mv_sse_stdev for s in stats) / len(stats)
    return GfGroupMetrics(
        interval=len(stats),
        zero_motion_accumulator=zm,
        avg_pixel_error=ape,
        avg_error_stdev=aes,
    )


def classify_stillness(
    metrics: GfGroupMetrics, thresholds: StillnessThresholds | None = None
) -> str:
    """Return "still" or "non-still".  All three comparisons are strict."""
    t = thresholds or StillnessThresholds()
    still = (
        metrics.zero_motion_accumulator > t.zero_motion_min
        and metrics.avg_pixel_error < t.pixel_error_max
        and metrics.avg_error_stdev < t.error_stdev_max
    )
    return STILL if still else NON_STILL


def dump_group_metrics(records: Iterable[GroupRecord], sink: IO[str]) -> int:
    """Write the per-group calibration CSV; returns the data row count."""
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(
        (
            "group_id",
            "first_display_index",
            "interval",
            "zero_motion_accumulator",
            "avg_pixel_error",
            "avg_error_stdev",
            "verdict",
        )
    )
    count = 0
    for rec in records:
        m = rec.metrics
        writer.writerow(
            (
                rec.group_id,
                rec.first_display_index,
                m.interval,
                f"{m.zero_motion_accumulator:.6f}",
                f"{m.avg_pixel_error:.6f}",
                f"{m.avg_error_stdev:.6f}",
                rec.verdict,
            )
        )
        count += 1
    return count


def metric_histograms(
    metrics: Sequence[GfGroupMetrics], bins: int = DEFAULT_HISTOGRAM_BINS
) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """Fixed-bin histograms of each metric, bounds taken from the data."""
    if bins < 1:
        raise ValueError("bins must be >= 1")
    if not metrics:
        raise ValueError("no metrics to histogram")
    out = {}
    for name in METRIC_NAMES:
        values = np.array([getattr(m, name) for m in metrics], dtype=np.float64)
        counts, edges = np.histogram(values, bins=bins)
        out[name] = (edges, counts)
    return out


def dump_metric_histograms(
    metrics: Sequence[GfGroupMetrics],
    sink: IO[str],
    bins: int = DEFAULT_HISTOGRAM_BINS,
) -> int:
    """Write per-metric histogram rows as CSV; returns the data row count."""
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(("metric", "bin_index", "bin_low", "bin_high", "count"))
    count = 0
    for name, (edges, counts) in metric_histograms(metrics, bins).items():
        for i, c in enumerate(counts):
            writer.writerow(
                (name, i, f"{edges[i]:.6f}", f"{edges[i + 1]:.6f}", int(c))
            )
            count += 1
    return count
