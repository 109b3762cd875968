import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from snowforge.errors import (
    CropOutOfBounds,
    DecodeError,
    EmptySequence,
    GeometryMismatch,
    MaskRangeError,
    MissingFrame,
    SchemaError,
)
from snowforge.frame_io import (
    FRAME_PATTERN,
    FrameSequence,
    MaskSequence,
    buffer_sha256,
    crop,
    crop_sequence,
    decode_mask,
    encode_mask,
    frame_indices,
    load_frame,
    load_mask_sequence,
    load_sequence,
    save_frame,
    save_mask_sequence,
    save_sequence,
    to_luma,
)
from oracles import luma_oracle


def small_frames(n=2, h=5, w=4, c=3, seed=0):
    rng = np.random.default_rng(seed)
    return rng.integers(0, 256, size=(n, h, w, c), dtype=np.uint8)


# ---------------------------------------------------------------- types

def test_empty_sequence_rejected():
    with pytest.raises(EmptySequence):
        FrameSequence(frames=np.zeros((0, 4, 4, 3), dtype=np.uint8))


def test_wrong_dtype_rejected():
    with pytest.raises(GeometryMismatch):
        FrameSequence(frames=np.zeros((1, 4, 4, 3), dtype=np.float32))


def test_two_channel_rejected():
    with pytest.raises(GeometryMismatch):
        FrameSequence(frames=np.zeros((1, 4, 4, 2), dtype=np.uint8))


def test_from_frames_geometry_mismatch():
    a = np.zeros((4, 4, 3), dtype=np.uint8)
    b = np.zeros((4, 5, 3), dtype=np.uint8)
    with pytest.raises(GeometryMismatch):
        FrameSequence.from_frames([a, b])


def test_geometry_property():
    seq = FrameSequence(frames=small_frames(n=3, h=7, w=9, c=1))
    assert seq.geometry == (7, 9, 1)
    assert len(seq) == 3


def test_mask_range_validated():
    bad = np.full((1, 2, 2, 3), 300, dtype=np.int16)
    with pytest.raises(MaskRangeError):
        MaskSequence(masks=bad)


# ------------------------------------------------------------ frame png

def test_save_load_frame_roundtrip(tmp_path):
    frame = small_frames(n=1)[0]
    save_frame(frame, tmp_path / "f.png")
    back = load_frame(tmp_path / "f.png")
    assert np.array_equal(frame, back)


def test_gray_frame_roundtrip(tmp_path):
    frame = small_frames(n=1, c=1)[0]
    save_frame(frame, tmp_path / "g.png")
    back = load_frame(tmp_path / "g.png")
    assert back.shape == frame.shape
    assert np.array_equal(frame, back)


def test_load_frame_rejects_garbage(tmp_path):
    p = tmp_path / "bad.png"
    p.write_bytes(b"not a png at all")
    with pytest.raises(DecodeError):
        load_frame(p)


@settings(max_examples=25, deadline=None)
@given(hnp.arrays(np.uint8, st.tuples(st.integers(2, 5), st.integers(1, 6),
                                      st.integers(1, 6), st.just(3))))
def test_sequence_roundtrip_bit_exact(tmp_path_factory, frames):
    tmp = tmp_path_factory.mktemp("seq")
    seq = FrameSequence(frames=frames)
    save_sequence(seq, tmp)
    back = load_sequence(tmp)
    assert np.array_equal(seq.frames, back.frames)


def test_frame_indices_contiguous(tmp_path):
    for i in range(4):
        save_frame(small_frames(n=1, seed=i)[0], tmp_path / (FRAME_PATTERN % i))
    assert frame_indices(tmp_path) == [0, 1, 2, 3]


def test_frame_indices_gap_raises(tmp_path):
    for i in (0, 1, 3):
        save_frame(small_frames(n=1)[0], tmp_path / (FRAME_PATTERN % i))
    with pytest.raises(MissingFrame) as exc:
        frame_indices(tmp_path)
    assert exc.value.index == 2


def test_load_sequence_empty_dir(tmp_path):
    with pytest.raises(MissingFrame):
        load_sequence(tmp_path)


def test_load_sequence_mixed_geometry(tmp_path):
    save_frame(small_frames(n=1, h=4, w=4)[0], tmp_path / (FRAME_PATTERN % 0))
    save_frame(small_frames(n=1, h=4, w=5)[0], tmp_path / (FRAME_PATTERN % 1))
    with pytest.raises(GeometryMismatch):
        load_sequence(tmp_path)


# ----------------------------------------------------------------- crop

def test_crop_identity():
    f = small_frames(n=1, h=6, w=8)[0]
    assert np.array_equal(crop(f, 0, 0, 8, 6), f)


def test_crop_out_of_bounds():
    f = small_frames(n=1, h=6, w=8)[0]
    with pytest.raises(CropOutOfBounds):
        crop(f, 5, 0, 4, 6)
    with pytest.raises(CropOutOfBounds):
        crop(f, -1, 0, 4, 4)


def test_crop_is_a_copy():
    f = small_frames(n=1, h=6, w=8)[0]
    c = crop(f, 1, 1, 3, 3)
    c[0, 0, 0] ^= 0xFF
    assert not np.array_equal(c[0, 0], f[1, 1])


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_crop_composition(data):
    f = small_frames(n=1, h=10, w=12, seed=3)[0]
    x1 = data.draw(st.integers(0, 6))
    y1 = data.draw(st.integers(0, 5))
    w1 = data.draw(st.integers(2, 12 - x1))
    h1 = data.draw(st.integers(2, 10 - y1))
    x2 = data.draw(st.integers(0, w1 - 1))
    y2 = data.draw(st.integers(0, h1 - 1))
    w2 = data.draw(st.integers(1, w1 - x2))
    h2 = data.draw(st.integers(1, h1 - y2))
    once = crop(crop(f, x1, y1, w1, h1), x2, y2, w2, h2)
    composed = crop(f, x1 + x2, y1 + y2, w2, h2)
    assert np.array_equal(once, composed)


def test_crop_sequence_matches_per_frame():
    seq = FrameSequence(frames=small_frames(n=3, h=8, w=8))
    out = crop_sequence(seq, 2, 1, 4, 5)
    assert out.geometry == (5, 4, 3)
    for t in range(3):
        assert np.array_equal(out.frames[t], crop(seq.frames[t], 2, 1, 4, 5))


# ----------------------------------------------------------------- luma

def test_luma_white():
    f = np.full((1, 1, 3), 255, dtype=np.uint8)
    assert to_luma(f)[0, 0, 0] == 255


def test_luma_pure_red():
    f = np.zeros((1, 1, 3), dtype=np.uint8)
    f[0, 0, 0] = 255
    assert to_luma(f)[0, 0, 0] == 76


def test_luma_single_channel_passthrough():
    f = small_frames(n=1, c=1)[0]
    assert np.array_equal(to_luma(f), f)


@settings(max_examples=30, deadline=None)
@given(hnp.arrays(np.uint8, (4, 5, 3)))
def test_luma_matches_oracle(frame):
    assert np.array_equal(to_luma(frame), luma_oracle(frame))


# ---------------------------------------------------------------- masks

def test_mask_bias_zero():
    m = np.zeros((2, 2, 1), dtype=np.int16)
    assert int(encode_mask(m)[0, 0, 0]) == 255


def test_mask_bias_endpoints():
    m = np.array([[[-255], [255]]], dtype=np.int16)
    stored = encode_mask(m)
    assert int(stored[0, 0, 0]) == 0
    assert int(stored[0, 1, 0]) == 510


def test_decode_rejects_out_of_range():
    stored = np.full((1, 1, 1), 511, dtype=np.uint16)
    with pytest.raises(MaskRangeError):
        decode_mask(stored)


@settings(max_examples=50, deadline=None)
@given(hnp.arrays(np.int16, (3, 4, 3),
                  elements=st.integers(min_value=-255, max_value=255)))
def test_mask_roundtrip_exact(m):
    assert np.array_equal(decode_mask(encode_mask(m)), m)


def test_mask_sequence_roundtrip(tmp_path):
    rng = np.random.default_rng(7)
    masks = rng.integers(-255, 256, size=(4, 6, 5, 3)).astype(np.int16)
    ms = MaskSequence(masks=masks, source_id="cam0/patch", patch_origin=(100, 50),
                      median_ref="cam0/median", noise_floor=2, source_frames=4)
    save_mask_sequence(ms, tmp_path)
    back = load_mask_sequence(tmp_path)
    assert np.array_equal(back.masks, masks)
    assert back.patch_origin == (100, 50)
    assert back.noise_floor == 2
    assert back.source_id == "cam0/patch"


def test_load_mask_sequence_requires_sidecar(tmp_path):
    with pytest.raises(SchemaError):
        load_mask_sequence(tmp_path)


# ------------------------------------------------------------ checksums

def test_buffer_sha256_includes_geometry():
    a = np.zeros((2, 8, 3), dtype=np.uint8)
    b = np.zeros((8, 2, 3), dtype=np.uint8)
    assert buffer_sha256(a) != buffer_sha256(b)


def test_buffer_sha256_stable():
    f = small_frames(n=1)[0]
    assert buffer_sha256(f) == buffer_sha256(f.copy())
