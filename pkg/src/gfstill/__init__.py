"""Adaptive golden-frame group planning from first-pass stillness statistics.

The pipeline: decode luma (video_io), run a block-matching first pass
(first_pass), fold per-frame statistics into group stillness metrics and a
verdict (stillness), emit and validate a coding-structure plan per group
(gop_planner).  quality and synth supply the evaluation tooling: PSNR,
SSIM, BD-rate, and deterministic test clips.
"""

from .first_pass import (
    BlockStats,
    FrameFirstPassStats,
    MotionVector,
    SearchConfig,
    analyze_frame,
    block_search,
    collect_block_stats,
    pad_to_block_grid,
)
from .gop_planner import (
    FrameRole,
    GfGroupPlan,
    GroupPlanResult,
    GroupSegmentation,
    PlanEntry,
    ValidationReport,
    plan_group,
    plan_sequence,
    plans_to_json,
    segment_groups,
    validate_plan,
)
from .quality import (
    QualityReport,
    RdCurve,
    RdPoint,
    bd_rate,
    load_rd_csv,
    psnr,
    sequence_quality,
    ssim,
)
from .stillness import (
    GfGroupMetrics,
    GroupRecord,
    StillnessThresholds,
    classify_stillness,
    compute_group_metrics,
    dump_group_metrics,
    dump_metric_histograms,
    metric_histograms,
)
from .synth import SynthSpec, generate
from .video_io import (
    FramePlane,
    VideoSequence,
    Y4mError,
    load_y4m,
    load_yuv,
    serialize_y4m,
    write_y4m,
)

__version__ = "0.1.0"

__all__ = [
    "BlockStats",
    "FrameFirstPassStats",
    "FramePlane",
    "FrameRole",
    "GfGroupMetrics",
    "GfGroupPlan",
    "GroupPlanResult",
    "GroupRecord",
    "GroupSegmentation",
    "MotionVector",
    "PlanEntry",
    "QualityReport",
    "RdCurve",
    "RdPoint",
    "SearchConfig",
    "StillnessThresholds",
    "SynthSpec",
    "ValidationReport",
    "VideoSequence",
    "Y4mError",
    "analyze_frame",
    "bd_rate",
    "block_search",
    "classify_stillness",
    "collect_block_stats",
    "compute_group_metrics",
    "dump_group_metrics",
    "dump_metric_histograms",
    "generate",
    "load_rd_csv",
    "load_y4m",
    "load_yuv",
    "metric_histograms",
    "pad_to_block_grid",
    "plan_group",
    "plan_sequence",
    "plans_to_json",
    "psnr",
    "segment_groups",
    "sequence_quality",
    "serialize_y4m",
    "ssim",
    "validate_plan",
    "write_y4m",
]
