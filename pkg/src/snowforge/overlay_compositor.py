"""Snow overlay compositing onto randomized crops of clean footage.

A snowy frame is a mask-sized crop of the clean sequence, taken at a
randomized spatial offset and temporal start, plus the signed snow
residuals, clamped to [0, 255]. Offsets and the temporal window are drawn
once per generated sequence so particle motion stays temporally coherent.
Masks shorter than the output wrap around modulo their length, entering
at a random phase.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GeometryMismatch, OverlayOutOfBounds, SequenceTooShort
from .frame_io import FrameSequence, MaskSequence
from .rng import SplitMix64


@dataclass(frozen=True)
class OverlaySpec:
    """Placement of one mask sequence over one clean sequence."""

    dx: int
    dy: int
    t_start: int
    mask_phase: int
    out_len: int
    seed: int

    def validate(self, gt_geom: tuple[int, int, int], gt_len: int,
                 mask_geom: tuple[int, int, int], mask_len: int) -> None:
        """Check every bound against the actual geometries."""
        gh, gw, gc = gt_geom
        mh, mw, mc = mask_geom
        if mc != gc:
            raise GeometryMismatch(
                f"mask channels {mc} differ from clean channels {gc}"
            )
        if self.out_len < 1:
            raise OverlayOutOfBounds(f"out_len must be >= 1, got {self.out_len}")
        if not (0 <= self.dx <= gw - mw):
            raise OverlayOutOfBounds(
                f"dx={self.dx} outside [0, {gw - mw}] for {mw}-wide mask in {gw}-wide frame"
            )
        if not (0 <= self.dy <= gh - mh):
            raise OverlayOutOfBounds(
                f"dy={self.dy} outside [0, {gh - mh}] for {mh}-tall mask in {gh}-tall frame"
            )
        if not (0 <= self.t_start <= gt_len - self.out_len):
            raise OverlayOutOfBounds(
                f"t_start={self.t_start} outside [0, {gt_len - self.out_len}]"
            )
        if not (0 <= self.mask_phase < mask_len):
            raise OverlayOutOfBounds(
                f"mask_phase={self.mask_phase} outside [0, {mask_len})"
            )

    def to_dict(self) -> dict:
        return {
            "dx": self.dx,
            "dy": self.dy,
            "t_start": self.t_start,
            "mask_phase": self.mask_phase,
            "out_len": self.out_len,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "OverlaySpec":
        return cls(dx=d["dx"], dy=d["dy"], t_start=d["t_start"],
                   mask_phase=d["mask_phase"], out_len=d["out_len"],
                   seed=d["seed"])


def draw_overlay_spec(rng: SplitMix64, gt_geom: tuple[int, int, int], gt_len: int,
                      mask_geom: tuple[int, int, int], mask_len: int,
                      out_len: int) -> OverlaySpec:
    """Draw dx, dy, t_start, mask_phase in that fixed order from ``rng``.

    Each is uniform over its full legal range, so any valid placement can
    occur and a fixed seed reproduces the same spec on every platform.
    """
    gh, gw, _ = gt_geom
    mh, mw, _ = mask_geom
    if out_len > gt_len:
        raise SequenceTooShort(
            f"out_len {out_len} exceeds clean sequence length {gt_len}"
        )
    if mw > gw or mh > gh:
        raise OverlayOutOfBounds(
            f"mask {mw}x{mh} does not fit clean frame {gw}x{gh}"
        )
    dx = rng.below(gw - mw + 1)
    dy = rng.below(gh - mh + 1)
    t_start = rng.below(gt_len - out_len + 1)
    mask_phase = rng.below(mask_len)
    return OverlaySpec(dx=dx, dy=dy, t_start=t_start, mask_phase=mask_phase,
                       out_len=out_len, seed=rng.seed)


def compose_snowy(gt: FrameSequence, masks: MaskSequence,
                  spec: OverlaySpec) -> tuple[FrameSequence, FrameSequence]:
    """Compose the (snowy, clean) pair described by an overlay spec.

    For each output frame t, the clean frame is the mask-sized crop of
    gt[t_start + t] at (dx, dy) and the snowy frame is that crop plus
    mask[(mask_phase + t) mod n_masks], clamped to [0, 255].
    """
    mh, mw, _ = masks.geometry
    n_masks = len(masks)
    spec.validate(gt.geometry, len(gt), masks.geometry, n_masks)

    clean = np.empty((spec.out_len, mh, mw, gt.geometry[2]), dtype=np.uint8)
    snowy = np.empty_like(clean)
    for t in range(spec.out_len):
        window = gt.frames[spec.t_start + t,
                           spec.dy:spec.dy + mh,
                           spec.dx:spec.dx + mw]
        clean[t] = window
        mask = masks.masks[(spec.mask_phase + t) % n_masks]
        snowy[t] = np.clip(window.astype(np.int16) + mask, 0, 255).astype(np.uint8)

    tag = f"{gt.source_id}+{masks.source_id}"
    return (FrameSequence(frames=snowy, source_id=f"{tag}/snowy"),
            FrameSequence(frames=clean, source_id=f"{tag}/clean"))
