"""Dynamic snow mask extraction by median-frame subtraction.

Subtracting the temporal median from each frame removes the static
background and leaves the moving particles as signed residuals. Residuals
are kept signed and unclamped; clamping happens only when a mask is later
composed onto a clean frame. An optional noise floor zeroes residuals
whose magnitude is at or below a threshold; the default of 0 keeps the
plain difference.
"""

from __future__ import annotations

import numpy as np

from .errors import GeometryMismatch
from .frame_io import FrameSequence, MaskSequence, crop_sequence
from .median_background import temporal_median

PATCH_WIDTH = 550
PATCH_HEIGHT = 600


def extract_mask_sequence(seq: FrameSequence, median: np.ndarray,
                          noise_floor: int = 0) -> MaskSequence:
    """Signed residuals frame - median, with |r| <= noise_floor zeroed."""
    if median.shape != seq.frames.shape[1:]:
        raise GeometryMismatch(
            f"median shape {median.shape} differs from frames {seq.frames.shape[1:]}"
        )
    if not 0 <= noise_floor <= 255:
        raise ValueError(f"noise_floor must be in [0, 255], got {noise_floor}")
    residuals = seq.frames.astype(np.int16) - median.astype(np.int16)
    if noise_floor > 0:
        residuals[np.abs(residuals) <= noise_floor] = 0
    return MaskSequence(
        masks=residuals,
        source_id=seq.source_id,
        patch_origin=(0, 0),
        median_ref=f"{seq.source_id}/median",
        noise_floor=noise_floor,
        source_frames=len(seq),
    )


def extract_patch_masks(seq: FrameSequence, rect: tuple[int, int, int, int] | None = None,
                        noise_floor: int = 0) -> MaskSequence:
    """Crop all frames to a patch, take its median, then extract masks.

    ``rect`` is (x0, y0, w, h); width/height default to the standard
    550 x 600 patch. The patch is chosen by hand so it holds snow
    particles but no foreground objects; this function only records the
    choice.
    """
    if rect is None:
        x0, y0, w, h = 0, 0, PATCH_WIDTH, PATCH_HEIGHT
    else:
        x0, y0, w, h = rect
    patch = crop_sequence(seq, x0, y0, w, h)
    median = temporal_median(patch)
    ms = extract_mask_sequence(patch, median, noise_floor)
    ms.patch_origin = (x0, y0)
    return ms
