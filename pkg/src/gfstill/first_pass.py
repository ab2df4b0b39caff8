"""First analysis pass: integer-pel block motion search against the previous
frame, plus the per-frame aggregates the stillness metrics are built from.

Motion vector convention: the prediction for the block at pixel origin
(x0, y0) is the reference window at (x0 + dx, y0 + dy).  Positive dx samples
the reference further to the right, so content that moved right between
frames yields a negative dx.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .video_io import FramePlane

BLOCK_SIZES = (8, 16, 32)
SEARCH_KINDS = ("exhaustive", "diamond")

# Large/small diamond steps, centre excluded.
_LDSP = ((0, -2), (1, -1), (2, 0), (1, 1), (0, 2), (-1, 1), (-2, 0), (-1, -1))
_SDSP = ((0, -1), (1, 0), (0, 1), (-1, 0))


class MotionVector(NamedTuple):
    dx: int
    dy: int


@dataclass(frozen=True)
class SearchConfig:
    block_size: int = 16
    search_range: int = 8
    search_kind: str = "exhaustive"

    def __post_init__(self):
        if self.block_size not in BLOCK_SIZES:
            raise ValueError(f"block_size must be one of {BLOCK_SIZES}")
        if self.search_range < 1:
            raise ValueError("search_range must be >= 1")
        if self.search_kind not in SEARCH_KINDS:
            raise ValueError(f"search_kind must be one of {SEARCH_KINDS}")


@dataclass
class BlockStats:
    block_col: int
    block_row: int
    best_mv: MotionVector
    best_sse: int
    zero_mv_sse: int
    intra_proxy_sse: float
    is_inter: bool


@dataclass
class FrameFirstPassStats:
    frame_index: int
    pcnt_zero_motion: float
    frame_sse: int
    zero_mv_sse_stdev: float
    block_count: int
    inter_count: int


Plane = Union[FramePlane, np.ndarray]


def _as_samples(plane: Plane) -> np.ndarray:
    if isinstance(plane, FramePlane):
        return plane.samples
    return np.asarray(plane, dtype=np.uint8)


def pad_to_block_grid(samples: np.ndarray, block_size: int) -> np.ndarray:
    """Edge-replicate the bottom/right border up to a block multiple.

    I/O keeps true frame dimensions; padding exists only while analysing.
    """
    h, w = samples.shape
    ph = (-h) % block_size
    pw = (-w) % block_size
    if ph == 0 and pw == 0:
        return samples
    return np.pad(samples, ((0, ph), (0, pw)), mode="edge")


def _sse(cur_block: np.ndarray, ref_window: np.ndarray) -> int:
    diff = cur_block - ref_window.astype(np.int32)
    return int(np.einsum("ij,ij->", diff, diff))


def block_search(
    cur: Plane,
    ref: Plane,
    block_row: int,
    block_col: int,
    cfg: SearchConfig | None = None,
) -> tuple[MotionVector, int, int]:
    """Search the reference for the best integer-pel match of one block.

    Candidates whose window would leave the (padded) frame are skipped; the
    zero vector is always a candidate, so best_sse <= zero_mv_sse.  Ties are
    broken by lower SSE, then smaller |dx|+|dy|, then smaller dy, then
    smaller dx, which makes the result order-independent.

    Returns (best_mv, best_sse, zero_mv_sse).
    """
    cfg = cfg or SearchConfig()
    bs = cfg.block_size
    cur_s = pad_to_block_grid(_as_samples(cur), bs)
    ref_s = pad_to_block_grid(_as_samples(ref), bs)
    if cur_s.shape != ref_s.shape:
        raise ValueError("current and reference frames differ in size")

    y0, x0 = block_row * bs, block_col * bs
    h, w = cur_s.shape
    if not (0 <= y0 <= h - bs and 0 <= x0 <= w - bs):
        raise ValueError(f"block origin ({block_row}, {block_col}) outside frame")
    cur_block = cur_s[y0 : y0 + bs, x0 : x0 + bs].astype(np.int32)

    if cfg.search_kind == "diamond":
        return _diamond_search(cur_block, ref_s, y0, x0, cfg)
    return _exhaustive_search(cur_block, ref_s, y0, x0, cfg)


def _exhaustive_search(
    cur_block: np.ndarray, ref_s: np.ndarray, y0: int, x0: int, cfg: SearchConfig
) -> tuple[MotionVector, int, int]:
    bs, r = cfg.block_size, cfg.search_range
    h, w = ref_s.shape
    lo_dy, hi_dy = max(-r, -y0), min(r, h - bs - y0)
    lo_dx, hi_dx = max(-r, -x0), min(r, w - bs - x0)

    region = ref_s[y0 + lo_dy : y0 + hi_dy + bs, x0 + lo_dx : x0 + hi_dx + bs]
    windows = sliding_window_view(region, (bs, bs)).astype(np.int32)
    diff = windows - cur_block
    # per-candidate SSE; 32x32 blocks peak below 2**31 so int32 is safe
    sse = np.einsum("ijkl,ijkl->ij", diff, diff)

    dys, dxs = np.meshgrid(
        np.arange(lo_dy, hi_dy + 1), np.arange(lo_dx, hi_dx + 1), indexing="ij"
    )
    manhattan = np.abs(dxs) + np.abs(dys)
    order = np.lexsort((dxs.ravel(), dys.ravel(), manhattan.ravel(), sse.ravel()))
    best = order[0]
    best_mv = MotionVector(int(dxs.ravel()[best]), int(dys.ravel()[best]))
    zero_mv_sse = int(sse[-lo_dy, -lo_dx])
    return best_mv, int(sse.ravel()[best]), zero_mv_sse


def _diamond_search(
    cur_block: np.ndarray, ref_s: np.ndarray, y0: int, x0: int, cfg: SearchConfig
) -> tuple[MotionVector, int, int]:
    bs, r = cfg.block_size, cfg.search_range
    h, w = ref_s.shape
    cache: dict[tuple[int, int], int] = {}

    def eval_at(dx: int, dy: int) -> int | None:
        if abs(dx) > r or abs(dy) > r:
            return None
        yy, xx = y0 + dy, x0 + dx
        if not (0 <= yy <= h - bs and 0 <= xx <= w - bs):
            return None
        key = (dx, dy)
        if key not in cache:
            cache[key] = _sse(cur_block, ref_s[yy : yy + bs, xx : xx + bs])
        return cache[key]

    def pick(candidates: list[tuple[int, int]]) -> tuple[int, int]:
        scored = []
        for dx, dy in candidates:
            s = eval_at(dx, dy)
            if s is not None:
                scored.append((s, abs(dx) + abs(dy), dy, dx))
        best = min(scored)
        return best[3], best[2]

    zero_mv_sse = eval_at(0, 0)
    assert zero_mv_sse is not None  # the block itself is inside the frame

    cx = cy = 0
    # each move strictly decreases the (sse, |dx|+|dy|, dy, dx) key, so the
    # walk terminates; the range bound is just a belt-and-braces cap
    for _ in range(4 * r + 4):
        nx, ny = pick([(cx, cy)] + [(cx + ox, cy + oy) for ox, oy in _LDSP])
        if (nx, ny) == (cx, cy):
            break
        cx, cy = nx, ny
    cx, cy = pick([(cx, cy)] + [(cx + ox, cy + oy) for ox, oy in _SDSP])
    return MotionVector(cx, cy), cache[(cx, cy)], zero_mv_sse


def collect_block_stats(
    cur: Plane, prev: Plane, cfg: SearchConfig | None = None
) -> list[BlockStats]:
    """Run the motion search over the whole block grid of one frame pair."""
    cfg = cfg or SearchConfig()
    bs = cfg.block_size
    cur_s = pad_to_block_grid(_as_samples(cur), bs)
    prev_s = pad_to_block_grid(_as_samples(prev), bs)
    if cur_s.shape != prev_s.shape:
        raise ValueError("current and previous frames differ in size")

    rows, cols = cur_s.shape[0] // bs, cur_s.shape[1] // bs
    out: list[BlockStats] = []
    for by in range(rows):
        for bx in range(cols):
            mv, best_sse, zero_sse = block_search(cur_s, prev_s, by, bx, cfg)
            block = cur_s[by * bs : (by + 1) * bs, bx * bs : (bx + 1) * bs]
            block = block.astype(np.float64)
            intra_proxy = float(((block - block.mean()) ** 2).sum())
            # ties count as inter, mirroring a cheap intra-vs-inter decision
            is_inter = best_sse <= intra_proxy
            out.append(
                BlockStats(
                    block_col=bx,
                    block_row=by,
                    best_mv=mv,
                    best_sse=best_sse,
                    zero_mv_sse=zero_sse,
                    intra_proxy_sse=intra_proxy,
                    is_inter=is_inter,
                )
            )
    return out


def analyze_frame(
    cur: Plane,
    prev: Plane,
    cfg: SearchConfig | None = None,
    frame_index: int = 1,
) -> FrameFirstPassStats:
    """Aggregate block statistics for one frame against its predecessor.

    pcnt_zero_motion is the share of inter blocks whose best vector is
    exactly (0, 0); a frame with no inter blocks reports 0.0.  The error
    spread is the population standard deviation of the zero-vector SSE
    over all blocks, padded blocks included.
    """
    blocks = collect_block_stats(cur, prev, cfg)
    inter = [b for b in blocks if b.is_inter]
    zero_inter = sum(1 for b in inter if b.best_mv == MotionVector(0, 0))
    pcnt = zero_inter / len(inter) if inter else 0.0
    frame_sse = sum(b.best_sse for b in blocks)
    stdev = float(np.std(np.array([b.zero_mv_sse for b in blocks], dtype=np.float64)))
    return FrameFirstPassStats(
        frame_index=frame_index,
        pcnt_zero_motion=pcnt,
        frame_sse=frame_sse,
        zero_mv_sse_stdev=stdev,
        block_count=len(blocks),
        inter_count=len(inter),
    )
