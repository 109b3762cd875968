import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from snowforge import brief_pattern
from snowforge.errors import FrameTooSmall, PairingMismatch, SchemaError
from snowforge.evaluation import (
    CSV_COLUMNS,
    DESCRIPTOR_MARGIN,
    FAST_CIRCLE,
    PSNR_SENTINEL_DB,
    KeyPoint,
    MatchStats,
    _box_sums,
    compute_descriptors,
    detect_keypoints,
    evaluate_sequence,
    filter_keypoints_for_descriptors,
    hamming_distances,
    match_features,
    psnr,
    read_metrics_csv,
    ssim,
    write_metrics_csv,
)
from snowforge.frame_io import FrameSequence
from oracles import psnr_oracle, ssim_oracle


def gray(h, w, value=50, c=1):
    return np.full((h, w, c), value, dtype=np.uint8)


def noise(h, w, c=3, seed=0):
    return np.random.default_rng(seed).integers(0, 256, size=(h, w, c),
                                                dtype=np.uint8)


# ------------------------------------------------------------------ FAST

def test_circle_offsets_are_the_radius3_bresenham_ring():
    assert len(FAST_CIRCLE) == 16
    assert len(set(FAST_CIRCLE)) == 16
    assert FAST_CIRCLE[0] == (0, -3)
    for dx, dy in FAST_CIRCLE:
        assert max(abs(dx), abs(dy)) == 3 or (abs(dx), abs(dy)) in ((2, 2), (2, 2))
        assert 2 <= dx * dx + dy * dy <= 10


def test_single_dot_is_one_corner_with_known_score():
    frame = gray(21, 21)
    frame[10, 10] = 255
    kps = detect_keypoints(frame)
    # the dot's 16 circle samples are all 205 below center, so the full
    # ring qualifies as the dark arc: score = 16 * (205 - 20)
    assert kps == [KeyPoint(x=10, y=10, score=2960)]


def test_blank_frame_has_no_corners():
    assert detect_keypoints(gray(32, 32)) == []


def test_smooth_ramp_has_no_corners():
    ramp = np.tile(np.arange(40, dtype=np.uint8)[None, :, None], (40, 1, 1))
    assert detect_keypoints(ramp) == []


def test_frame_too_small():
    with pytest.raises(FrameTooSmall):
        detect_keypoints(gray(6, 9))
    with pytest.raises(FrameTooSmall):
        detect_keypoints(gray(9, 6))
    detect_keypoints(gray(7, 7))


def test_nms_tie_keeps_raster_earlier_pixel():
    frame = gray(21, 21)
    frame[10, 10] = 255
    frame[10, 11] = 255
    kps = detect_keypoints(frame)
    # both dots score identically; the later one loses the strict
    # greater-than test against its earlier neighbor
    assert len(kps) == 1
    assert (kps[0].x, kps[0].y) == (10, 10)


def test_dark_corner_detected():
    frame = gray(21, 21, value=200)
    frame[10, 10] = 0
    kps = detect_keypoints(frame)
    assert len(kps) == 1 and (kps[0].x, kps[0].y) == (10, 10)


def test_subthreshold_contrast_ignored():
    frame = gray(21, 21, value=100)
    frame[10, 10] = 120  # only 20 above surround, needs > 20
    assert detect_keypoints(frame) == []


def test_keypoints_sorted_raster_order():
    frame = gray(40, 40)
    for y, x in ((8, 30), (20, 10), (31, 31)):
        frame[y, x] = 255
    kps = detect_keypoints(frame)
    assert [(kp.y, kp.x) for kp in kps] == [(8, 30), (20, 10), (31, 31)]


# ----------------------------------------------------------- descriptors

def test_pattern_head_and_shape():
    assert len(brief_pattern.PAIRS) == 256
    assert brief_pattern.PAIRS[:3] == ((10, 13, 8, -2), (4, 5, 13, -8),
                                       (14, 7, -2, 4))
    coords = np.asarray(brief_pattern.PAIRS)
    assert coords.shape == (256, 4)
    assert np.abs(coords).max() <= 15


def test_box_sums_match_direct_loops():
    img = noise(12, 13, c=1, seed=4)[:, :, 0]
    sums = _box_sums(img)
    for y in range(2, 10):
        for x in range(2, 11):
            direct = int(img[y - 2:y + 3, x - 2:x + 3].astype(np.int64).sum())
            assert sums[y, x] == direct
    assert sums[0].sum() == 0 and sums[-1].sum() == 0


def test_margin_filter():
    h = w = 64
    kps = [KeyPoint(x=16, y=30, score=1), KeyPoint(x=17, y=30, score=1),
           KeyPoint(x=46, y=30, score=1), KeyPoint(x=47, y=30, score=1),
           KeyPoint(x=30, y=16, score=1), KeyPoint(x=30, y=47, score=1)]
    kept = filter_keypoints_for_descriptors(kps, h, w)
    assert [(kp.x, kp.y) for kp in kept] == [(17, 30), (46, 30)]
    assert DESCRIPTOR_MARGIN == 17


def test_descriptor_bits_match_direct_comparison():
    frame = noise(48, 48, seed=9)
    kps = [KeyPoint(x=20, y=24, score=1), KeyPoint(x=25, y=20, score=1)]
    desc = compute_descriptors(frame, kps)
    assert desc.shape == (2, 32) and desc.dtype == np.uint8
    bits = np.unpackbits(desc, axis=1)
    sums = _box_sums(
        np.floor(0.299 * frame[:, :, 0] + 0.587 * frame[:, :, 1]
                 + 0.114 * frame[:, :, 2] + 0.5).astype(np.int64))
    for row, kp in enumerate(kps):
        for i, (ax, ay, bx, by) in enumerate(brief_pattern.PAIRS):
            expected = int(sums[kp.y + ay, kp.x + ax] < sums[kp.y + by, kp.x + bx])
            assert bits[row, i] == expected


def test_descriptors_empty_without_valid_keypoints():
    frame = noise(48, 48)
    desc = compute_descriptors(frame, [KeyPoint(x=3, y=3, score=1)])
    assert desc.shape == (0, 32)


def test_descriptor_bits_survive_brightness_offset():
    # the three luma weights sum to exactly 1, so +10 in every channel
    # shifts each box sum by the same amount and no comparison flips
    rng = np.random.default_rng(13)
    frame = rng.integers(0, 246, size=(48, 48, 3), dtype=np.uint8)
    brighter = (frame.astype(np.int16) + 10).astype(np.uint8)
    kps = [KeyPoint(x=22, y=22, score=1), KeyPoint(x=25, y=19, score=1)]
    assert np.array_equal(compute_descriptors(frame, kps),
                          compute_descriptors(brighter, kps))


# --------------------------------------------------------------- hamming

def test_hamming_hand_values():
    zeros = np.zeros((1, 32), dtype=np.uint8)
    ones = np.full((1, 32), 0xFF, dtype=np.uint8)
    assert hamming_distances(zeros, ones)[0, 0] == 256
    assert hamming_distances(zeros, zeros)[0, 0] == 0
    one_bit = zeros.copy()
    one_bit[0, 7] = 0b10110000
    assert hamming_distances(zeros, one_bit)[0, 0] == 3


def test_hamming_empty_inputs():
    empty = np.zeros((0, 32), dtype=np.uint8)
    some = np.zeros((2, 32), dtype=np.uint8)
    assert hamming_distances(empty, some).shape == (0, 2)
    assert hamming_distances(some, empty).shape == (2, 0)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_hamming_matches_bitcount_oracle(seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, 256, size=(3, 32), dtype=np.uint8)
    b = rng.integers(0, 256, size=(4, 32), dtype=np.uint8)
    d = hamming_distances(a, b)
    for i in range(3):
        for j in range(4):
            expected = sum((int(x) ^ int(y)).bit_count()
                           for x, y in zip(a[i], b[j]))
            assert d[i, j] == expected


# -------------------------------------------------------------- matching

def pack_bits(n_set, offset=0):
    """Packed 256-bit row with ``n_set`` bits set starting at ``offset``."""
    bits = np.zeros(256, dtype=np.uint8)
    bits[offset:offset + n_set] = 1
    return np.packbits(bits)


def test_mutual_best_pairs_match():
    a = np.stack([pack_bits(0), pack_bits(256)])
    b = np.stack([pack_bits(1), pack_bits(255)])
    got = match_features(a, b)
    assert got == [(0, 0, 1), (1, 1, 1)]


def test_ambiguous_neighbor_rejected_by_ratio():
    # best 10 vs second 12 fails 10 < 0.8 * 12
    a = pack_bits(0)[None, :]
    b = np.stack([pack_bits(10), pack_bits(12, offset=100)])
    assert match_features(a, b) == []
    # best 10 vs second 200 passes
    b2 = np.stack([pack_bits(10), pack_bits(200)])
    assert match_features(a, b2) == [(0, 0, 10)]


def test_equal_distance_tie_is_rejected():
    a = pack_bits(0)[None, :]
    b = np.stack([pack_bits(2), pack_bits(2, offset=50)])
    assert match_features(a, b) == []


def test_single_neighbor_skips_ratio():
    a = pack_bits(0)[None, :]
    b = pack_bits(40)[None, :]
    assert match_features(a, b) == [(0, 0, 40)]


def test_non_mutual_best_rejected():
    # both a rows prefer b0, so only one can be mutual
    a = np.stack([pack_bits(0), pack_bits(4, offset=200)])
    b = pack_bits(0)[None, :]
    got = match_features(a, b)
    assert got == [(0, 0, 0)]


def test_match_empty_inputs():
    empty = np.zeros((0, 32), dtype=np.uint8)
    some = np.zeros((1, 32), dtype=np.uint8)
    assert match_features(empty, some) == []
    assert match_features(some, empty) == []


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 6), st.integers(1, 6))
def test_matching_is_symmetric(seed, na, nb):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, 256, size=(na, 32), dtype=np.uint8)
    b = rng.integers(0, 256, size=(nb, 32), dtype=np.uint8)
    fwd = {(i, j, d) for i, j, d in match_features(a, b)}
    rev = {(i, j, d) for j, i, d in match_features(b, a)}
    assert fwd == rev


def test_identical_descriptor_sets_fully_match():
    rng = np.random.default_rng(17)
    a = rng.integers(0, 256, size=(8, 32), dtype=np.uint8)
    got = match_features(a, a)
    assert got == [(i, i, 0) for i in range(8)]


# ------------------------------------------------------- quality metrics

def test_psnr_identical_hits_sentinel():
    frame = noise(16, 16)
    assert psnr(frame, frame) == PSNR_SENTINEL_DB


def test_psnr_full_scale_error_is_zero_db():
    a = np.zeros((8, 8, 3), dtype=np.uint8)
    b = np.full((8, 8, 3), 255, dtype=np.uint8)
    assert psnr(a, b) == pytest.approx(0.0, abs=1e-12)


def test_psnr_geometry_mismatch():
    with pytest.raises(PairingMismatch):
        psnr(np.zeros((4, 4, 3), np.uint8), np.zeros((4, 5, 3), np.uint8))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_psnr_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, 256, size=(6, 7, 3), dtype=np.uint8)
    b = rng.integers(0, 256, size=(6, 7, 3), dtype=np.uint8)
    assert psnr(a, b) == pytest.approx(psnr_oracle(a, b), abs=1e-9)


def test_ssim_identical_is_one():
    frame = noise(16, 16)
    assert ssim(frame, frame) == pytest.approx(1.0, abs=1e-12)


def test_ssim_degrades_with_noise():
    a = np.tile(np.linspace(40, 220, 24, dtype=np.uint8)[None, :, None],
                (24, 1, 3))
    b = np.clip(a.astype(np.int16)
                + np.random.default_rng(2).integers(-80, 81, a.shape), 0,
                255).astype(np.uint8)
    assert ssim(a, b) < 0.9
    assert ssim(a, b) < ssim(a, a)


def test_ssim_anticorrelated_is_negative():
    yy, xx = np.mgrid[0:16, 0:16]
    a = np.where((yy + xx) % 2 == 0, 255, 0).astype(np.uint8)[:, :, None]
    b = (255 - a.astype(np.int16)).astype(np.uint8)
    assert ssim(a, b) < 0.0


def test_ssim_frame_too_small():
    with pytest.raises(FrameTooSmall):
        ssim(gray(10, 12), gray(10, 12))


def test_ssim_geometry_mismatch():
    with pytest.raises(PairingMismatch):
        ssim(gray(12, 12), gray(12, 13))


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_ssim_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, 256, size=(16, 16, 3), dtype=np.uint8)
    b = rng.integers(0, 256, size=(16, 16, 3), dtype=np.uint8)
    assert ssim(a, b) == pytest.approx(ssim_oracle(a, b), abs=1e-6)


# ------------------------------------------------------------ evaluation

def make_seq(n=3, h=48, w=48, seed=0, source_id="seq"):
    rng = np.random.default_rng(seed)
    frames = rng.integers(0, 256, size=(n, h, w, 3), dtype=np.uint8)
    return FrameSequence(frames=frames, source_id=source_id)


def test_evaluate_sequence_row_shapes():
    method = make_seq(seed=1, source_id="m")
    clean = make_seq(seed=2, source_id="c")
    snowy = make_seq(seed=3, source_id="s")
    stats = evaluate_sequence(method, clean, snowy, sequence_id="seq_0001",
                              method="median")
    assert len(stats.keypoint_counts) == 3
    assert len(stats.match_counts) == 2
    assert len(stats.psnr_db) == 3
    assert len(stats.ssim) == 3
    rows = stats.rows()
    assert rows[0]["matches_prev"] == ""
    assert rows[1]["matches_prev"] == stats.match_counts[0]
    assert rows[0]["sequence_id"] == "seq_0001"
    assert rows[0]["method"] == "median"
    assert [r["t"] for r in rows] == [0, 1, 2]


def test_evaluate_sequence_identity_method_scores_perfectly():
    clean = make_seq(seed=5)
    stats = evaluate_sequence(clean, clean, clean)
    assert all(v == PSNR_SENTINEL_DB for v in stats.psnr_db)
    assert all(v == pytest.approx(1.0, abs=1e-12) for v in stats.ssim)


def test_evaluate_sequence_pairing_checks():
    method = make_seq(n=3)
    short = make_seq(n=2)
    with pytest.raises(PairingMismatch):
        evaluate_sequence(method, short, method)
    small = make_seq(n=3, w=40)
    with pytest.raises(PairingMismatch):
        evaluate_sequence(method, method, small)


def test_evaluate_sequence_defaults_ids_from_source():
    seq = make_seq(source_id="dive3/cleaned")
    stats = evaluate_sequence(seq, seq, seq)
    assert stats.sequence_id == "dive3/cleaned"
    assert stats.method == "dive3/cleaned"


def test_stats_summary_helpers():
    stats = MatchStats(sequence_id="s", method="m",
                       keypoint_counts=[1, 2, 3], match_counts=[4, 6],
                       psnr_db=[30.0, 40.0, 50.0], ssim=[0.5, 0.7, 0.9])
    assert stats.mean_keypoints() == 2.0
    assert stats.mean_matches() == 5.0
    assert stats.mean_psnr() == 40.0
    assert stats.median_psnr() == 40.0
    assert stats.mean_ssim() == pytest.approx(0.7)
    assert stats.median_ssim() == 0.7


# ------------------------------------------------------------------- CSV

def sample_stats():
    return MatchStats(sequence_id="seq_0000", method="median",
                      keypoint_counts=[5, 7], match_counts=[3],
                      psnr_db=[31.5, 29.25], ssim=[0.91, 0.88])


def test_csv_roundtrip(tmp_path):
    path = tmp_path / "metrics.csv"
    write_metrics_csv([sample_stats()], path)
    rows = read_metrics_csv(path)
    assert len(rows) == 2
    assert tuple(rows[0]) == CSV_COLUMNS
    assert rows[0]["keypoints"] == "5"
    assert rows[0]["matches_prev"] == ""
    assert rows[1]["matches_prev"] == "3"
    assert rows[0]["psnr_db"] == "31.500000"
    assert rows[1]["ssim"] == "0.880000"


def test_csv_append_mode(tmp_path):
    path = tmp_path / "metrics.csv"
    write_metrics_csv([sample_stats()], path)
    other = sample_stats()
    other.method = "udnet"
    write_metrics_csv([other], path, append=True)
    rows = read_metrics_csv(path)
    assert len(rows) == 4
    assert {r["method"] for r in rows} == {"median", "udnet"}
    # append without an existing file still writes a header
    path2 = tmp_path / "fresh.csv"
    write_metrics_csv([sample_stats()], path2, append=True)
    assert len(read_metrics_csv(path2)) == 2


def test_csv_rejects_wrong_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,c\n1,2,3\n", encoding="utf-8")
    with pytest.raises(SchemaError):
        read_metrics_csv(path)


def test_csv_rejects_empty(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("", encoding="utf-8")
    with pytest.raises(SchemaError):
        read_metrics_csv(path)
    path.write_text(",".join(CSV_COLUMNS) + "\n", encoding="utf-8")
    with pytest.raises(SchemaError):
        read_metrics_csv(path)
