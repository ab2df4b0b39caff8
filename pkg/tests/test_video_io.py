from __future__ import annotations

import io

import numpy as np
import pytest

from gfstill.video_io import (
    FramePlane,
    VideoSequence,
    Y4mError,
    load_y4m,
    load_yuv,
    serialize_y4m,
    write_y4m,
)


def _y4m_bytes(width, height, frames, colorspace=b"C420", extra=b" Ip A1:1"):
    header = b"YUV4MPEG2 W%d H%d F25:1%s %s\n" % (width, height, extra, colorspace)
    if colorspace == b"C444":
        cw, ch = width, height
    else:
        cw, ch = (width + 1) // 2, (height + 1) // 2
    body = b""
    for frame in frames:
        body += b"FRAME\n" + frame.tobytes() + bytes(cw * ch) + bytes(cw * ch)
    return header + body


def _frames(n, width=64, height=48, seed=1):
    rng = np.random.default_rng(seed)
    return [rng.integers(0, 256, (height, width), dtype=np.uint8) for _ in range(n)]


class TestLoad:
    def test_basic_header_and_frames(self):
        frames = _frames(3)
        seq = load_y4m(_y4m_bytes(64, 48, frames))
        assert (seq.width, seq.height) == (64, 48)
        assert len(seq.frames) == 3
        assert seq.frame_rate == (25, 1)
        assert seq.fps == 25.0
        for got, want in zip(seq.frames, frames):
            assert np.array_equal(got.samples, want)

    def test_c444_luma(self):
        frames = _frames(2)
        seq = load_y4m(_y4m_bytes(64, 48, frames, colorspace=b"C444"))
        assert len(seq.frames) == 2
        assert np.array_equal(seq.frames[1].samples, frames[1])

    def test_colorspace_defaults_to_420(self):
        frames = _frames(1)
        header = b"YUV4MPEG2 W64 H48 F30:1\n"
        body = b"FRAME\n" + frames[0].tobytes() + bytes(32 * 24) * 2
        seq = load_y4m(header + body)
        assert np.array_equal(seq.frames[0].samples, frames[0])

    def test_accepts_420_variants(self):
        for tag in (b"C420jpeg", b"C420mpeg2", b"C420paldv"):
            seq = load_y4m(_y4m_bytes(64, 48, _frames(1), colorspace=tag))
            assert len(seq.frames) == 1

    def test_rejects_bad_signature(self):
        with pytest.raises(Y4mError) as exc:
            load_y4m(b"YUV4MPEG9 W64 H48\n")
        assert exc.value.offset == 0

    @pytest.mark.parametrize("tag", [b"C422", b"Cmono", b"C420p10", b"C444p12"])
    def test_rejects_unsupported_colorspace(self, tag):
        data = _y4m_bytes(64, 48, _frames(1), colorspace=tag)
        with pytest.raises(Y4mError) as exc:
            load_y4m(data)
        assert b"YUV4MPEG2 " in data[: exc.value.offset + 1]
        assert exc.value.offset > 0

    def test_missing_dimensions(self):
        with pytest.raises(Y4mError):
            load_y4m(b"YUV4MPEG2 F25:1 C420\nFRAME\n")

    def test_malformed_width_token(self):
        with pytest.raises(Y4mError):
            load_y4m(b"YUV4MPEG2 Wxx H48 F25:1\n")

    def test_truncated_payload_reports_offset(self):
        data = _y4m_bytes(64, 48, _frames(1))
        clipped = data[:-100]
        with pytest.raises(Y4mError) as exc:
            load_y4m(clipped)
        assert "truncated" in str(exc.value)
        # the offset points at the start of the bad payload
        assert clipped[exc.value.offset - 6 : exc.value.offset] == b"FRAME\n"

    def test_frame_marker_required(self):
        data = _y4m_bytes(64, 48, _frames(1))
        broken = data.replace(b"FRAME\n", b"FRAMX\n", 1)
        with pytest.raises(Y4mError) as exc:
            load_y4m(broken)
        assert "FRAME" in str(exc.value)

    def test_header_only_means_no_frames(self):
        with pytest.raises(Y4mError) as exc:
            load_y4m(b"YUV4MPEG2 W64 H48 F25:1 C420\n")
        assert "no frames" in str(exc.value)

    def test_payload_spelling_frame_is_not_resynced(self):
        # a luma plane that contains the FRAME marker bytes must not
        # confuse the parser: frame boundaries come from arithmetic only
        frame = np.zeros((48, 64), np.uint8)
        marker = np.frombuffer(b"FRAME\n", np.uint8)
        frame.reshape(-1)[100 : 100 + marker.size] = marker
        seq = load_y4m(_y4m_bytes(64, 48, [frame, frame]))
        assert len(seq.frames) == 2

    def test_too_small_dimensions_rejected(self):
        with pytest.raises(ValueError):
            load_y4m(_y4m_bytes(8, 8, [np.zeros((8, 8), np.uint8)]))

    def test_reads_from_stream_and_path(self, tmp_path):
        data = _y4m_bytes(64, 48, _frames(2))
        path = tmp_path / "clip.y4m"
        path.write_bytes(data)
        from_path = load_y4m(path)
        from_stream = load_y4m(io.BytesIO(data))
        assert len(from_path.frames) == len(from_stream.frames) == 2


class TestWrite:
    def test_round_trip_preserves_luma(self):
        frames = [FramePlane(64, 48, f) for f in _frames(3, seed=7)]
        seq = VideoSequence(frames, frame_rate=(24, 1))
        back = load_y4m(serialize_y4m(seq))
        assert back.frame_rate == (24, 1)
        assert len(back.frames) == 3
        for got, want in zip(back.frames, seq.frames):
            assert np.array_equal(got.samples, want.samples)

    def test_byte_count_matches_layout(self):
        plane = FramePlane(16, 16, np.full((16, 16), 128, np.uint8))
        seq = VideoSequence([plane])
        buf = io.BytesIO()
        written = write_y4m(seq, buf)
        header = b"YUV4MPEG2 W16 H16 F30:1 Ip A0:0 C420\n"
        assert written == len(header) + 6 + 16 * 16 + 2 * (8 * 8)
        assert written == len(buf.getvalue())
        assert buf.getvalue().startswith(header)

    def test_writes_neutral_chroma(self):
        plane = FramePlane(16, 16, np.zeros((16, 16), np.uint8))
        data = serialize_y4m(VideoSequence([plane]))
        chroma = data[-128:]
        assert chroma == bytes([128]) * 128

    def test_write_to_path(self, tmp_path):
        seq = VideoSequence([FramePlane(64, 48, f) for f in _frames(1)])
        path = tmp_path / "out.y4m"
        count = write_y4m(seq, path)
        assert path.stat().st_size == count


class TestRawYuv:
    def test_basic_420(self):
        frames = _frames(2)
        blob = b"".join(f.tobytes() + bytes(32 * 24) * 2 for f in frames)
        seq = load_yuv(blob, 64, 48)
        assert len(seq.frames) == 2
        assert np.array_equal(seq.frames[0].samples, frames[0])

    def test_basic_444(self):
        frames = _frames(1)
        blob = frames[0].tobytes() + bytes(64 * 48) * 2
        seq = load_yuv(blob, 64, 48, chroma="444")
        assert np.array_equal(seq.frames[0].samples, frames[0])

    def test_truncated(self):
        blob = _frames(1)[0].tobytes()  # luma only, chroma missing
        with pytest.raises(Y4mError):
            load_yuv(blob, 64, 48)

    def test_empty(self):
        with pytest.raises(Y4mError):
            load_yuv(b"", 64, 48)

    def test_unknown_chroma(self):
        with pytest.raises(ValueError):
            load_yuv(b"\x00" * 100, 64, 48, chroma="422")


class TestTypes:
    def test_frame_plane_rejects_small(self):
        with pytest.raises(ValueError):
            FramePlane(8, 8, np.zeros((8, 8), np.uint8))

    def test_frame_plane_rejects_shape_mismatch(self):
        with pytest.raises(ValueError):
            FramePlane(64, 48, np.zeros((48, 32), np.uint8))

    def test_frame_plane_accepts_flat_buffer(self):
        flat = np.arange(64 * 48, dtype=np.uint8)
        plane = FramePlane(64, 48, flat)
        assert plane.samples.shape == (48, 64)
        assert plane.pixels == 64 * 48

    def test_frame_plane_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            FramePlane(16, 16, np.full((16, 16), 300, np.int32))

    def test_sequence_rejects_empty(self):
        with pytest.raises(ValueError):
            VideoSequence([])

    def test_sequence_rejects_mixed_sizes(self):
        a = FramePlane(64, 48, np.zeros((48, 64), np.uint8))
        b = FramePlane(32, 48, np.zeros((48, 32), np.uint8))
        with pytest.raises(ValueError):
            VideoSequence([a, b])

    def test_sequence_rejects_bad_rate(self):
        a = FramePlane(64, 48, np.zeros((48, 64), np.uint8))
        with pytest.raises(ValueError):
            VideoSequence([a], frame_rate=(0, 1))
