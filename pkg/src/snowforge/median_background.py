"""Per-pixel temporal median of a frame sequence.

The median estimates the static background: suspended particles lit by
artificial illumination show up as bright outliers, so for even frame
counts the lower of the two middle values is taken, biasing toward the
darker background rather than the snow. Each channel is reduced
independently. The banded variant streams fixed-height row bands from
disk so arbitrarily long sequences fit a fixed memory budget, and is
bit-identical to the in-memory result.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import EmptySequence, GeometryMismatch
from .frame_io import FRAME_PATTERN, FrameSequence, _decode_frame, frame_indices

DEFAULT_MEMORY_BUDGET = 512 * 1024 * 1024  # band buffer bytes


@dataclass(frozen=True)
class BandPlan:
    """Row banding that keeps the (N, band_height, W, C) buffer in budget."""

    band_height: int
    band_count: int

    def __post_init__(self):
        if self.band_height < 1:
            raise ValueError("band_height must be >= 1")
        if self.band_count < 1:
            raise ValueError("band_count must be >= 1")


def plan_bands(height: int, width: int, channels: int, n_frames: int,
               memory_budget: int = DEFAULT_MEMORY_BUDGET) -> BandPlan:
    """Derive the tallest band whose uint8 buffer fits the budget."""
    per_row = width * channels * n_frames  # bytes per band row
    band_height = max(1, min(height, memory_budget // max(per_row, 1)))
    band_count = -(-height // band_height)
    return BandPlan(band_height=band_height, band_count=band_count)


def median_of_stack(stack: np.ndarray) -> np.ndarray:
    """Lower-middle median along axis 0 of a (N, ...) uint8 stack."""
    n = stack.shape[0]
    if n < 1:
        raise EmptySequence("median of zero frames")
    k = (n - 1) // 2
    return np.partition(stack, k, axis=0)[k]


def temporal_median(seq: FrameSequence) -> np.ndarray:
    """Per-pixel, per-channel temporal median frame of a loaded sequence."""
    return median_of_stack(seq.frames)


def temporal_median_banded(dir_path, plan: BandPlan | None = None,
                           pattern: str = FRAME_PATTERN,
                           memory_budget: int = DEFAULT_MEMORY_BUDGET) -> np.ndarray:
    """Temporal median of an on-disk sequence, streamed in row bands.

    Each band decodes every frame once and keeps only the band's rows, so
    peak residency is one decoded frame plus the band buffer. The result
    is bit-identical to temporal_median on the fully loaded sequence.
    """
    dir_path = Path(dir_path)
    indices = frame_indices(dir_path, pattern)
    first = _decode_frame(dir_path / (pattern % indices[0]))
    h, w, c = first.shape
    n = len(indices)
    if plan is None:
        plan = plan_bands(h, w, c, n, memory_budget)

    out = np.empty((h, w, c), dtype=np.uint8)
    for y0 in range(0, h, plan.band_height):
        y1 = min(y0 + plan.band_height, h)
        band = np.empty((n, y1 - y0, w, c), dtype=np.uint8)
        for row, idx in enumerate(indices):
            frame = _decode_frame(dir_path / (pattern % idx))
            if frame.shape != (h, w, c):
                raise GeometryMismatch(
                    f"frame {idx} has shape {frame.shape}, expected {(h, w, c)}"
                )
            band[row] = frame[y0:y1]
        out[y0:y1] = median_of_stack(band)
    return out
