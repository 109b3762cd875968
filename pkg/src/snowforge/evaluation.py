"""SLAM-proxy metrics and full-reference quality metrics.

Keypoints per frame and frame-to-frame descriptor matches stand in for a
production SLAM front end: more keypoints on a snowy frame means more
particle clutter, more surviving matches means more stable features. The
whole chain is pinned (FAST-9 with threshold 20, a 256-bit binary
descriptor over a frozen pattern, mutual-best Hamming matching with a 0.8
ratio test) so counts are reproducible across runs and platforms.
Absolute numbers are specific to this chain; only directions and deltas
are meaningful for comparing enhancement methods.
"""

from __future__ import annotations

import csv
import math
import statistics
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import ndimage

from . import brief_pattern
from .errors import FrameTooSmall, PairingMismatch, SchemaError
from .frame_io import FrameSequence, to_luma

FAST_THRESHOLD = 20
FAST_ARC = 9
DESCRIPTOR_BITS = 256
DESCRIPTOR_MARGIN = 17  # patch half-width 15 + box blur radius 2
MATCH_RATIO = 0.8
PSNR_SENTINEL_DB = 99.0

# Radius-3 Bresenham circle, clockwise from 12 o'clock: (dx, dy) offsets.
FAST_CIRCLE = (
    (0, -3), (1, -3), (2, -2), (3, -1), (3, 0), (3, 1), (2, 2), (1, 3),
    (0, 3), (-1, 3), (-2, 2), (-3, 1), (-3, 0), (-3, -1), (-2, -2), (-1, -3),
)

CSV_COLUMNS = ("sequence_id", "method", "t", "keypoints", "matches_prev",
               "psnr_db", "ssim")

_POPCOUNT = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint8)


@dataclass(frozen=True)
class KeyPoint:
    x: int
    y: int
    score: int


@dataclass
class MatchStats:
    """Per-frame metric rows for one (sequence, method) evaluation."""

    sequence_id: str
    method: str
    keypoint_counts: list[int] = field(default_factory=list)
    match_counts: list[int] = field(default_factory=list)  # per adjacent pair
    psnr_db: list[float] = field(default_factory=list)
    ssim: list[float] = field(default_factory=list)

    def rows(self) -> list[dict]:
        out = []
        for t in range(len(self.keypoint_counts)):
            out.append({
                "sequence_id": self.sequence_id,
                "method": self.method,
                "t": t,
                "keypoints": self.keypoint_counts[t],
                "matches_prev": self.match_counts[t - 1] if t >= 1 else "",
                "psnr_db": f"{self.psnr_db[t]:.6f}",
                "ssim": f"{self.ssim[t]:.6f}",
            })
        return out

    def mean_keypoints(self) -> float:
        return statistics.fmean(self.keypoint_counts)

    def mean_matches(self) -> float:
        return statistics.fmean(self.match_counts)

    def mean_psnr(self) -> float:
        return statistics.fmean(self.psnr_db)

    def median_psnr(self) -> float:
        return statistics.median(self.psnr_db)

    def mean_ssim(self) -> float:
        return statistics.fmean(self.ssim)

    def median_ssim(self) -> float:
        return statistics.median(self.ssim)


def _segment_candidates(luma: np.ndarray):
    """Boolean corner map plus the shifted circle stack for scoring."""
    h, w = luma.shape
    ih, iw = h - 6, w - 6  # interior where the full circle fits
    center = luma[3:3 + ih, 3:3 + iw].astype(np.int16)
    circle = np.empty((16, ih, iw), dtype=np.int16)
    for k, (dx, dy) in enumerate(FAST_CIRCLE):
        circle[k] = luma[3 + dy:3 + dy + ih, 3 + dx:3 + dx + iw]

    bright = circle > center + FAST_THRESHOLD
    dark = circle < center - FAST_THRESHOLD

    def has_run(flags):
        tiled = np.concatenate([flags, flags[:FAST_ARC - 1]], axis=0)
        hit = np.zeros((ih, iw), dtype=bool)
        for s in range(16):
            hit |= tiled[s:s + FAST_ARC].all(axis=0)
        return hit

    return has_run(bright) | has_run(dark), circle, center


def _arc_score(values, p: int) -> int:
    """Score of the maximal qualifying arc around one candidate.

    values: the 16 circle samples in order; exactly one polarity can have
    a contiguous run of >= 9, and the score sums (|v - p| - t) over that
    maximal run.
    """
    best = 0
    for sign in (1, -1):
        flags = [(v - p) * sign > FAST_THRESHOLD for v in values]
        if all(flags):
            run = 16
        else:
            # longest circular run of True
            run = 0
            cur = 0
            doubled = flags + flags
            for f in doubled:
                cur = cur + 1 if f else 0
                run = max(run, cur)
            run = min(run, 16)
        if run >= FAST_ARC:
            # locate one maximal run and sum over it
            doubled = flags + flags
            cur = 0
            end = -1
            for i, f in enumerate(doubled):
                cur = cur + 1 if f else 0
                if cur == run:
                    end = i
                    break
            start = end - run + 1
            score = sum(abs(values[i % 16] - p) - FAST_THRESHOLD
                        for i in range(start, start + run))
            best = max(best, score)
    return best


def detect_keypoints(frame: np.ndarray) -> list[KeyPoint]:
    """FAST-9 corners with 3x3 non-maximum suppression, raster order.

    A corner needs >= 9 contiguous circle pixels all brighter than
    center + 20 or all darker than center - 20. Score ties in the NMS are
    broken toward the smallest (y, x).
    """
    h, w = frame.shape[0], frame.shape[1]
    if h < 7 or w < 7:
        raise FrameTooSmall(f"need at least 7x7, got {w}x{h}")
    luma = to_luma(frame)[:, :, 0]
    candidates, circle, center = _segment_candidates(luma)

    scores = np.zeros((h, w), dtype=np.int64)
    ys, xs = np.nonzero(candidates)
    for y, x in zip(ys.tolist(), xs.tolist()):
        values = circle[:, y, x].tolist()
        scores[y + 3, x + 3] = _arc_score(values, int(center[y, x]))

    padded = np.pad(scores, 1, mode="constant")
    c = padded[1:-1, 1:-1]
    earlier = np.maximum.reduce([
        padded[:-2, :-2], padded[:-2, 1:-1], padded[:-2, 2:], padded[1:-1, :-2],
    ])
    later = np.maximum.reduce([
        padded[1:-1, 2:], padded[2:, :-2], padded[2:, 1:-1], padded[2:, 2:],
    ])
    keep = (c > 0) & (c > earlier) & (c >= later)

    ky, kx = np.nonzero(keep)
    return [KeyPoint(x=int(x), y=int(y), score=int(scores[y, x]))
            for y, x in zip(ky.tolist(), kx.tolist())]


def _box_sums(luma: np.ndarray) -> np.ndarray:
    """5x5 neighborhood sums via an integral image (exact integers)."""
    h, w = luma.shape
    ii = np.zeros((h + 1, w + 1), dtype=np.int64)
    ii[1:, 1:] = luma.astype(np.int64).cumsum(axis=0).cumsum(axis=1)
    out = np.zeros((h, w), dtype=np.int64)
    out[2:h - 2, 2:w - 2] = (
        ii[5:h + 1, 5:w + 1] - ii[0:h - 4, 5:w + 1]
        - ii[5:h + 1, 0:w - 4] + ii[0:h - 4, 0:w - 4]
    )
    return out


def filter_keypoints_for_descriptors(kps: list[KeyPoint], h: int, w: int) -> list[KeyPoint]:
    """Keep only keypoints with the full descriptor margin inside the frame."""
    m = DESCRIPTOR_MARGIN
    return [kp for kp in kps if m <= kp.x <= w - 1 - m and m <= kp.y <= h - 1 - m]


def compute_descriptors(frame: np.ndarray, kps: list[KeyPoint]) -> np.ndarray:
    """256-bit binary descriptors, packed as (n, 32) uint8 rows.

    Bit i is set when the box-blurred luma at pattern point a_i is less
    than at b_i. Comparisons of 5x5 sums equal comparisons of means, so
    everything stays in exact integer arithmetic. Keypoints without the
    17-pixel margin are dropped.
    """
    h, w = frame.shape[0], frame.shape[1]
    kept = filter_keypoints_for_descriptors(kps, h, w)
    if not kept:
        return np.zeros((0, DESCRIPTOR_BITS // 8), dtype=np.uint8)
    sums = _box_sums(to_luma(frame)[:, :, 0])
    pat = np.asarray(brief_pattern.PAIRS, dtype=np.int64)  # (256, 4)
    xs = np.array([kp.x for kp in kept], dtype=np.int64)[:, None]
    ys = np.array([kp.y for kp in kept], dtype=np.int64)[:, None]
    a = sums[ys + pat[None, :, 1], xs + pat[None, :, 0]]
    b = sums[ys + pat[None, :, 3], xs + pat[None, :, 2]]
    return np.packbits(a < b, axis=1)


def hamming_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(len(a), len(b)) Hamming distance matrix for packed descriptors."""
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((a.shape[0], b.shape[0]), dtype=np.int32)
    out = np.empty((a.shape[0], b.shape[0]), dtype=np.int32)
    step = max(1, (1 << 22) // max(b.shape[0] * b.shape[1], 1))
    for i0 in range(0, a.shape[0], step):
        block = a[i0:i0 + step, None, :] ^ b[None, :, :]
        out[i0:i0 + step] = _POPCOUNT[block].sum(axis=2, dtype=np.int32)
    return out


def _ratio_ok(dists: np.ndarray, best_idx: int) -> bool:
    """Lowe ratio against the second-smallest distance; passes when there
    is no second neighbor."""
    if dists.shape[0] < 2:
        return True
    best = dists[best_idx]
    second = np.partition(dists, 1)[1]
    return best < MATCH_RATIO * second


def match_features(a: np.ndarray, b: np.ndarray) -> list[tuple[int, int, int]]:
    """Mutual-best Hamming matches filtered by a two-sided ratio test.

    (i, j) survives when each is the other's nearest neighbor (argmin ties
    broken by lowest index) and the best distance beats 0.8x the
    second-best distance of both queries. The two-sided test makes the
    result symmetric: match_features(b, a) is the index-swapped list.
    """
    if a.shape[0] == 0 or b.shape[0] == 0:
        return []
    d = hamming_distances(a, b)
    best_j = d.argmin(axis=1)
    best_i = d.argmin(axis=0)
    matches = []
    for i in range(a.shape[0]):
        j = int(best_j[i])
        if int(best_i[j]) != i:
            continue
        if not _ratio_ok(d[i, :], j):
            continue
        if not _ratio_ok(d[:, j], i):
            continue
        matches.append((i, j, int(d[i, j])))
    return matches


def psnr(a: np.ndarray, b: np.ndarray) -> float:
    """Peak signal-to-noise ratio in dB over all samples; 99.0 when equal."""
    if a.shape != b.shape:
        raise PairingMismatch(f"geometry {a.shape} vs {b.shape}")
    diff = a.astype(np.float64) - b.astype(np.float64)
    mse = float(np.mean(diff * diff))
    if mse == 0.0:
        return PSNR_SENTINEL_DB
    return 10.0 * math.log10(255.0 ** 2 / mse)


def _gaussian_kernel(size: int = 11, sigma: float = 1.5) -> np.ndarray:
    half = size // 2
    coords = np.arange(-half, half + 1, dtype=np.float64)
    g = np.exp(-(coords ** 2) / (2.0 * sigma ** 2))
    k = np.outer(g, g)
    return k / k.sum()


_SSIM_KERNEL = _gaussian_kernel()
_SSIM_C1 = (0.01 * 255.0) ** 2
_SSIM_C2 = (0.03 * 255.0) ** 2


def ssim(a: np.ndarray, b: np.ndarray) -> float:
    """Mean structural similarity over valid 11x11 Gaussian windows.

    Computed on luma with sigma 1.5, K1 = 0.01, K2 = 0.03, L = 255;
    border pixels without a full window are excluded.
    """
    if a.shape != b.shape:
        raise PairingMismatch(f"geometry {a.shape} vs {b.shape}")
    h, w = a.shape[0], a.shape[1]
    if h < 11 or w < 11:
        raise FrameTooSmall(f"need at least 11x11, got {w}x{h}")
    la = to_luma(a)[:, :, 0].astype(np.float64)
    lb = to_luma(b)[:, :, 0].astype(np.float64)

    def valid(img):
        return ndimage.correlate(img, _SSIM_KERNEL, mode="constant")[5:-5, 5:-5]

    mu_a = valid(la)
    mu_b = valid(lb)
    var_a = valid(la * la) - mu_a * mu_a
    var_b = valid(lb * lb) - mu_b * mu_b
    cov = valid(la * lb) - mu_a * mu_b
    num = (2.0 * mu_a * mu_b + _SSIM_C1) * (2.0 * cov + _SSIM_C2)
    den = (mu_a * mu_a + mu_b * mu_b + _SSIM_C1) * (var_a + var_b + _SSIM_C2)
    return float(np.mean(num / den))


def evaluate_sequence(method_seq: FrameSequence, clean_seq: FrameSequence,
                      snowy_seq: FrameSequence, sequence_id: str = "",
                      method: str = "") -> MatchStats:
    """Keypoint, match, and quality metrics for one method sequence.

    Keypoints and adjacent-frame matches are computed on the method
    frames; PSNR and SSIM are computed against the paired clean frames.
    The snowy sequence rides along to enforce that all three line up.
    """
    for name, seq in (("clean", clean_seq), ("snowy", snowy_seq)):
        if len(seq) != len(method_seq) or seq.geometry != method_seq.geometry:
            raise PairingMismatch(
                f"{name} sequence does not pair with method sequence: "
                f"{len(seq)} frames {seq.geometry} vs "
                f"{len(method_seq)} frames {method_seq.geometry}"
            )
    stats = MatchStats(
        sequence_id=sequence_id or method_seq.source_id,
        method=method or method_seq.source_id,
    )
    prev_desc = None
    for t in range(len(method_seq)):
        frame = method_seq.frames[t]
        kps = detect_keypoints(frame)
        desc = compute_descriptors(frame, kps)
        stats.keypoint_counts.append(len(kps))
        stats.psnr_db.append(psnr(frame, clean_seq.frames[t]))
        stats.ssim.append(ssim(frame, clean_seq.frames[t]))
        if prev_desc is not None:
            stats.match_counts.append(len(match_features(prev_desc, desc)))
        prev_desc = desc
    return stats


def write_metrics_csv(stats_list: list[MatchStats], path, append: bool = False) -> None:
    """Write per-frame metric rows in the standard column order."""
    path = Path(path)
    exists = path.exists()
    mode = "a" if append and exists else "w"
    with open(path, mode, newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        if mode == "w":
            writer.writeheader()
        for stats in stats_list:
            for row in stats.rows():
                writer.writerow(row)


def read_metrics_csv(path) -> list[dict]:
    """Read rows written by write_metrics_csv, checking the header."""
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: empty metrics file")
        if tuple(reader.fieldnames) != CSV_COLUMNS:
            raise SchemaError(
                f"{path}: columns {reader.fieldnames} do not match {list(CSV_COLUMNS)}"
            )
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: no metric rows")
    return rows
