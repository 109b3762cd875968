"""Frame and mask sequence I/O.

Conventions used throughout the package:

* A frame is a numpy array of shape (height, width, channels), dtype uint8,
  channels 1 (luma) or 3 (RGB). Arrays are treated as immutable once built.
* A residual (signed snow mask) frame has the same shape, dtype int16,
  every sample in [-255, 255].
* Sequences live on disk as ``<dir>/frame_%06d.png`` with contiguous,
  zero-padded indices. Masks are persisted as one 16-bit grayscale PNG
  plane per channel, ``mask_%06d_c%d.png``, with a bias of +255 so the
  stored range is [0, 510]; a ``mask_meta.json`` sidecar records
  provenance. PNG keeps every round trip bit-exact.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import (
    CropOutOfBounds,
    DecodeError,
    EmptySequence,
    GeometryMismatch,
    MaskRangeError,
    MissingFrame,
    SchemaError,
)

FRAME_PATTERN = "frame_%06d.png"
MASK_PLANE_PATTERN = "mask_%06d_c%d.png"
MASK_META_NAME = "mask_meta.json"

MASK_BIAS = 255  # stored = residual + MASK_BIAS, range [0, 510]

# BT.601 luma weights, applied with round-half-up. Pinned so keypoint
# counts are reproducible; inputs never specify their color handling.
LUMA_WEIGHTS = (0.299, 0.587, 0.114)


@dataclass
class FrameSequence:
    """Ordered stack of same-geometry frames.

    ``frames`` has shape (n, height, width, channels), dtype uint8.
    """

    frames: np.ndarray
    source_id: str = ""

    def __post_init__(self):
        f = self.frames
        if f.ndim != 4:
            raise GeometryMismatch(f"expected (n, h, w, c) stack, got shape {f.shape}")
        if f.shape[0] < 1:
            raise EmptySequence("sequence has no frames")
        if f.dtype != np.uint8:
            raise GeometryMismatch(f"frames must be uint8, got {f.dtype}")
        if f.shape[3] not in (1, 3):
            raise GeometryMismatch(f"channels must be 1 or 3, got {f.shape[3]}")

    def __len__(self) -> int:
        return self.frames.shape[0]

    @property
    def geometry(self) -> tuple[int, int, int]:
        """(height, width, channels)."""
        return self.frames.shape[1], self.frames.shape[2], self.frames.shape[3]

    @classmethod
    def from_frames(cls, frames, source_id: str = "") -> "FrameSequence":
        frames = list(frames)
        if not frames:
            raise EmptySequence("sequence has no frames")
        first = frames[0].shape
        for i, f in enumerate(frames):
            if f.shape != first:
                raise GeometryMismatch(
                    f"frame {i} has shape {f.shape}, expected {first}"
                )
        return cls(frames=np.stack(frames, axis=0), source_id=source_id)


@dataclass
class MaskSequence:
    """Signed residual stack with provenance of the patch it came from.

    ``masks`` has shape (n, height, width, channels), dtype int16, values
    in [-255, 255].
    """

    masks: np.ndarray
    source_id: str = ""
    patch_origin: tuple[int, int] = (0, 0)
    median_ref: str = ""
    noise_floor: int = 0
    source_frames: int = 0
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        m = self.masks
        if m.ndim != 4:
            raise GeometryMismatch(f"expected (n, h, w, c) stack, got shape {m.shape}")
        if m.shape[0] < 1:
            raise EmptySequence("mask sequence has no frames")
        if m.dtype != np.int16:
            raise GeometryMismatch(f"masks must be int16, got {m.dtype}")
        lo, hi = int(m.min()), int(m.max())
        if lo < -255 or hi > 255:
            raise MaskRangeError(f"residuals outside [-255, 255]: min {lo}, max {hi}")

    def __len__(self) -> int:
        return self.masks.shape[0]

    @property
    def geometry(self) -> tuple[int, int, int]:
        return self.masks.shape[1], self.masks.shape[2], self.masks.shape[3]


def _pattern_to_regex(pattern: str) -> re.Pattern:
    m = re.search(r"%0(\d+)d", pattern)
    if m is None:
        raise ValueError(f"pattern {pattern!r} has no %0Nd index field")
    width = int(m.group(1))
    head, tail = pattern[: m.start()], pattern[m.end():]
    return re.compile(re.escape(head) + rf"(\d{{{width}}})" + re.escape(tail) + "$")


def _decode_frame(path: Path) -> np.ndarray:
    try:
        with Image.open(path) as img:
            mode = img.mode
            if mode == "L":
                arr = np.asarray(img, dtype=np.uint8)[:, :, None]
            elif mode == "RGB":
                arr = np.asarray(img, dtype=np.uint8)
            else:
                raise DecodeError(f"{path}: unsupported image mode {mode!r}")
    except (UnidentifiedImageError, OSError) as exc:
        raise DecodeError(f"{path}: {exc}") from exc
    return arr


def load_frame(path) -> np.ndarray:
    """Decode a single 8-bit gray or RGB PNG into a (h, w, c) uint8 array."""
    return _decode_frame(Path(path))


def save_frame(frame: np.ndarray, path, compress_level: int = 1) -> None:
    """Write a (h, w, c) uint8 frame as a lossless PNG."""
    path = Path(path)
    if frame.shape[2] == 1:
        img = Image.fromarray(frame[:, :, 0], mode="L")
    else:
        img = Image.fromarray(frame, mode="RGB")
    img.save(path, format="PNG", compress_level=compress_level)


def frame_indices(dir_path, pattern: str = FRAME_PATTERN) -> list[int]:
    """Sorted frame indices present in a directory, gap-checked.

    Indices must be contiguous from the first (smallest) one present.
    """
    dir_path = Path(dir_path)
    rx = _pattern_to_regex(pattern)
    indices = []
    for entry in dir_path.iterdir() if dir_path.is_dir() else []:
        m = rx.match(entry.name)
        if m:
            indices.append(int(m.group(1)))
    if not indices:
        raise MissingFrame(0, f"no files matching {pattern!r} in {dir_path}")
    indices.sort()
    for offset, idx in enumerate(indices):
        expected = indices[0] + offset
        if idx != expected:
            raise MissingFrame(expected)
    return indices


def load_sequence(dir_path, pattern: str = FRAME_PATTERN, source_id: str | None = None) -> FrameSequence:
    """Load a contiguous frame sequence from a directory.

    Raises MissingFrame on index gaps, GeometryMismatch if files disagree
    on size or channel count, DecodeError on undecodable files.
    """
    dir_path = Path(dir_path)
    indices = frame_indices(dir_path, pattern)
    frames = []
    shape = None
    for idx in indices:
        path = dir_path / (pattern % idx)
        arr = _decode_frame(path)
        if shape is None:
            shape = arr.shape
        elif arr.shape != shape:
            raise GeometryMismatch(
                f"{path}: shape {arr.shape} differs from first frame {shape}"
            )
        frames.append(arr)
    sid = source_id if source_id is not None else dir_path.name
    return FrameSequence(frames=np.stack(frames, axis=0), source_id=sid)


def save_sequence(seq: FrameSequence, dir_path, pattern: str = FRAME_PATTERN,
                  compress_level: int = 1) -> None:
    """Write every frame of a sequence as frame_%06d.png starting at 0."""
    dir_path = Path(dir_path)
    dir_path.mkdir(parents=True, exist_ok=True)
    for t in range(len(seq)):
        save_frame(seq.frames[t], dir_path / (pattern % t), compress_level)


def buffer_sha256(frame: np.ndarray) -> str:
    """Checksum of the raw sample buffer plus its geometry.

    Hashing decoded samples rather than file bytes keeps checksums
    independent of the PNG encoder.
    """
    header = f"{frame.shape[0]}x{frame.shape[1]}x{frame.shape[2]}:".encode()
    return hashlib.sha256(header + np.ascontiguousarray(frame).tobytes()).hexdigest()


def crop(frame: np.ndarray, x0: int, y0: int, w: int, h: int) -> np.ndarray:
    """Copy the w x h rectangle with top-left corner (x0, y0)."""
    fh, fw = frame.shape[0], frame.shape[1]
    if w < 1 or h < 1 or x0 < 0 or y0 < 0 or x0 + w > fw or y0 + h > fh:
        raise CropOutOfBounds(
            f"rect (x0={x0}, y0={y0}, w={w}, h={h}) exceeds frame {fw}x{fh}"
        )
    return frame[y0:y0 + h, x0:x0 + w].copy()


def crop_sequence(seq: FrameSequence, x0: int, y0: int, w: int, h: int) -> FrameSequence:
    """Crop every frame of a sequence to the same rectangle."""
    fh, fw = seq.frames.shape[1], seq.frames.shape[2]
    if w < 1 or h < 1 or x0 < 0 or y0 < 0 or x0 + w > fw or y0 + h > fh:
        raise CropOutOfBounds(
            f"rect (x0={x0}, y0={y0}, w={w}, h={h}) exceeds frame {fw}x{fh}"
        )
    return FrameSequence(
        frames=seq.frames[:, y0:y0 + h, x0:x0 + w].copy(),
        source_id=seq.source_id,
    )


def to_luma(frame: np.ndarray) -> np.ndarray:
    """BT.601 luma with round-half-up; 1-channel frames pass through."""
    if frame.shape[2] == 1:
        return frame
    r = frame[:, :, 0].astype(np.float64)
    g = frame[:, :, 1].astype(np.float64)
    b = frame[:, :, 2].astype(np.float64)
    wr, wg, wb = LUMA_WEIGHTS
    y = np.floor(wr * r + wg * g + wb * b + 0.5)
    return y.astype(np.uint8)[:, :, None]


def encode_mask(mask: np.ndarray) -> np.ndarray:
    """Bias-encode a signed residual frame into uint16 samples [0, 510]."""
    lo, hi = int(mask.min()), int(mask.max())
    if lo < -255 or hi > 255:
        raise MaskRangeError(f"residuals outside [-255, 255]: min {lo}, max {hi}")
    return (mask.astype(np.int32) + MASK_BIAS).astype(np.uint16)


def decode_mask(stored: np.ndarray) -> np.ndarray:
    """Exact inverse of encode_mask; rejects stored samples above 510."""
    hi = int(stored.max())
    if hi > 2 * MASK_BIAS:
        raise MaskRangeError(f"stored sample {hi} exceeds {2 * MASK_BIAS}")
    return (stored.astype(np.int32) - MASK_BIAS).astype(np.int16)


def save_mask_sequence(ms: MaskSequence, dir_path, compress_level: int = 1) -> None:
    """Persist residuals as 16-bit grayscale planes plus a JSON sidecar."""
    dir_path = Path(dir_path)
    dir_path.mkdir(parents=True, exist_ok=True)
    n, h, w, c = ms.masks.shape
    for t in range(n):
        stored = encode_mask(ms.masks[t])
        for k in range(c):
            img = Image.fromarray(stored[:, :, k])  # mode I;16
            img.save(dir_path / (MASK_PLANE_PATTERN % (t, k)), format="PNG",
                     compress_level=compress_level)
    meta = {
        "source_id": ms.source_id,
        "patch_origin": list(ms.patch_origin),
        "noise_floor": ms.noise_floor,
        "source_frames": ms.source_frames,
        "median_ref": ms.median_ref,
        "frames": n,
        "height": h,
        "width": w,
        "channels": c,
    }
    with open(dir_path / MASK_META_NAME, "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2)
        fh.write("\n")


def _decode_mask_plane(path: Path) -> np.ndarray:
    try:
        with Image.open(path) as img:
            if img.mode not in ("I", "I;16"):
                raise DecodeError(f"{path}: expected 16-bit grayscale, got {img.mode!r}")
            return np.asarray(img, dtype=np.uint16)
    except (UnidentifiedImageError, OSError) as exc:
        raise DecodeError(f"{path}: {exc}") from exc


def load_mask_sequence(dir_path) -> MaskSequence:
    """Load a mask sequence saved by save_mask_sequence."""
    dir_path = Path(dir_path)
    meta_path = dir_path / MASK_META_NAME
    if not meta_path.exists():
        raise SchemaError(f"{meta_path} not found")
    with open(meta_path, encoding="utf-8") as fh:
        meta = json.load(fh)
    n, h, w, c = meta["frames"], meta["height"], meta["width"], meta["channels"]
    masks = np.empty((n, h, w, c), dtype=np.int16)
    for t in range(n):
        for k in range(c):
            path = dir_path / (MASK_PLANE_PATTERN % (t, k))
            if not path.exists():
                raise MissingFrame(t, f"missing mask plane {path}")
            stored = _decode_mask_plane(path)
            if stored.shape != (h, w):
                raise GeometryMismatch(
                    f"{path}: shape {stored.shape} differs from sidecar ({h}, {w})"
                )
            masks[t, :, :, k] = decode_mask(stored[:, :, None])[:, :, 0]
    return MaskSequence(
        masks=masks,
        source_id=meta.get("source_id", dir_path.name),
        patch_origin=tuple(meta.get("patch_origin", (0, 0))),
        median_ref=meta.get("median_ref", ""),
        noise_floor=meta.get("noise_floor", 0),
        source_frames=meta.get("source_frames", n),
        metadata=meta,
    )
