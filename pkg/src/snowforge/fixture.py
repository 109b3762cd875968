"""Deterministic synthetic fixture: clean footage, snow masks, composed pair.

The clean sequence is a static value-noise background with a slowly
translating dark rectangle, so frames carry stable corners. The mask
sequence holds bright Gaussian particles drifting with per-particle
velocities, mimicking suspended particles under artificial light. Every
number is drawn in a fixed order from one SplitMix64 stream, so a seed
fully determines all output bytes.

Draw order: background lattice (row-major), rectangle size/position/
velocity, then per particle sigma, peak, start x/y, speed, heading,
then the overlay spec (dx, dy, t_start, mask_phase).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .frame_io import (
    FrameSequence,
    MaskSequence,
    buffer_sha256,
    save_mask_sequence,
    save_sequence,
)
from .overlay_compositor import OverlaySpec, compose_snowy, draw_overlay_spec
from .rng import SplitMix64

CLEAN_SIZE = 256
MASK_SIZE = 160
N_FRAMES = 64
N_PARTICLES = 40
LATTICE_SPACING = 9
NOISE_LO, NOISE_HI = 24.0, 190.0
CHANNEL_GAINS = (0.72, 0.95, 1.0)  # blue-green tint
RECT_DARKEN = 0.3
SIGMA_LO, SIGMA_HI = 1.0, 3.0
PEAK_LO, PEAK_HI = 80.0, 200.0
SPEED_LO, SPEED_HI = 8.0, 12.0
# Particles are rendered only where they exceed the default detection
# threshold of the baseline cleaner (tau = 25), so the fixture measures
# detect-and-replace behaviour rather than sub-threshold residue that no
# temporal cleaner could act on.
MIN_RESIDUAL = 26.0


@dataclass
class FixtureData:
    seed: int
    clean_source: FrameSequence  # full-size footage
    masks: MaskSequence
    spec: OverlaySpec
    snowy: FrameSequence  # mask-size composed pair
    clean: FrameSequence


def _round_half_up(a: np.ndarray) -> np.ndarray:
    return np.floor(a + 0.5)


def _value_noise(rng: SplitMix64, size: int) -> np.ndarray:
    """Bilinear interpolation of a random lattice, float64 in [lo, hi)."""
    cells = size // LATTICE_SPACING + 2
    lattice = np.empty((cells, cells), dtype=np.float64)
    for i in range(cells):
        for j in range(cells):
            lattice[i, j] = rng.uniform(NOISE_LO, NOISE_HI)
    coords = np.arange(size, dtype=np.float64) / LATTICE_SPACING
    i0 = coords.astype(np.int64)
    frac = coords - i0
    fy, fx = frac[:, None], frac[None, :]
    y0, x0 = i0[:, None], i0[None, :]
    return ((1 - fy) * (1 - fx) * lattice[y0, x0]
            + (1 - fy) * fx * lattice[y0, x0 + 1]
            + fy * (1 - fx) * lattice[y0 + 1, x0]
            + fy * fx * lattice[y0 + 1, x0 + 1])


def _render_clean(rng: SplitMix64) -> FrameSequence:
    base = _value_noise(rng, CLEAN_SIZE)
    background = np.empty((CLEAN_SIZE, CLEAN_SIZE, 3), dtype=np.float64)
    for k, gain in enumerate(CHANNEL_GAINS):
        background[:, :, k] = base * gain

    rect_w = rng.below(33) + 32
    rect_h = rng.below(25) + 24
    # Every MASK_SIZE crop of the source covers the central band
    # [CLEAN_SIZE - MASK_SIZE, MASK_SIZE). Starting the rectangle inside
    # that band and capping its drift keeps it at least partly visible
    # in the composed pair for every overlay placement.
    band_lo = CLEAN_SIZE - MASK_SIZE
    rect_x = band_lo + rng.below(MASK_SIZE - rect_w - band_lo + 1)
    rect_y = band_lo + rng.below(MASK_SIZE - rect_h - band_lo + 1)
    rect_vx = rng.uniform(-0.4, 0.4)
    rect_vy = rng.uniform(-0.4, 0.4)

    frames = np.empty((N_FRAMES, CLEAN_SIZE, CLEAN_SIZE, 3), dtype=np.uint8)
    for t in range(N_FRAMES):
        img = background.copy()
        x = int(np.clip(_round_half_up(np.float64(rect_x + rect_vx * t)),
                        0, CLEAN_SIZE - rect_w))
        y = int(np.clip(_round_half_up(np.float64(rect_y + rect_vy * t)),
                        0, CLEAN_SIZE - rect_h))
        img[y:y + rect_h, x:x + rect_w] *= RECT_DARKEN
        frames[t] = np.clip(_round_half_up(img), 0, 255).astype(np.uint8)
    return FrameSequence(frames=frames, source_id="fixture_clean")


def _render_masks(rng: SplitMix64) -> MaskSequence:
    particles = []
    for _ in range(N_PARTICLES):
        # Quadratic bias toward small sigma keeps most particles sharp
        # (strong corners when snowy, little sub-threshold halo once
        # cleaned) while still spanning the full [SIGMA_LO, SIGMA_HI].
        u = rng.uniform(0.0, 1.0)
        sigma = SIGMA_LO + (SIGMA_HI - SIGMA_LO) * u * u * u
        peak = rng.uniform(PEAK_LO, PEAK_HI)
        x0 = rng.uniform(0.0, MASK_SIZE)
        y0 = rng.uniform(0.0, MASK_SIZE)
        speed = rng.uniform(SPEED_LO, SPEED_HI)
        theta = rng.uniform(0.0, 2.0 * math.pi)
        particles.append((sigma, peak, x0, y0,
                          speed * math.cos(theta), speed * math.sin(theta)))

    masks = np.zeros((N_FRAMES, MASK_SIZE, MASK_SIZE, 3), dtype=np.int16)
    for t in range(N_FRAMES):
        acc = np.zeros((MASK_SIZE, MASK_SIZE), dtype=np.float64)
        for sigma, peak, x0, y0, vx, vy in particles:
            cx = (x0 + vx * t) % MASK_SIZE
            cy = (y0 + vy * t) % MASK_SIZE
            r = int(math.ceil(sigma * math.sqrt(2.0 * math.log(peak / MIN_RESIDUAL))))
            ylo, yhi = max(0, int(cy) - r), min(MASK_SIZE, int(cy) + r + 1)
            xlo, xhi = max(0, int(cx) - r), min(MASK_SIZE, int(cx) + r + 1)
            yy = np.arange(ylo, yhi, dtype=np.float64)[:, None]
            xx = np.arange(xlo, xhi, dtype=np.float64)[None, :]
            splat = peak * np.exp(
                -((xx - cx) ** 2 + (yy - cy) ** 2) / (2.0 * sigma ** 2)
            )
            splat[splat < MIN_RESIDUAL] = 0.0
            acc[ylo:yhi, xlo:xhi] += splat
        plane = np.clip(_round_half_up(acc), 0, 255).astype(np.int16)
        masks[t] = plane[:, :, None]
    return MaskSequence(masks=masks, source_id="fixture_masks",
                        source_frames=N_FRAMES)


def generate_fixture(seed: int = 0) -> FixtureData:
    """Build the full fixture in memory from one seed."""
    rng = SplitMix64(seed)
    clean_source = _render_clean(rng)
    masks = _render_masks(rng)
    spec = draw_overlay_spec(rng, clean_source.geometry, len(clean_source),
                             masks.geometry, len(masks), out_len=N_FRAMES)
    snowy, clean = compose_snowy(clean_source, masks, spec)
    return FixtureData(seed=seed, clean_source=clean_source, masks=masks,
                       spec=spec, snowy=snowy, clean=clean)


def make_fixture(out_dir, seed: int = 0) -> FixtureData:
    """Generate the fixture and write it under out_dir.

    Layout: source_clean/ (full footage), masks/, snowy/ and clean/ (the
    composed pair), and fixture.json with the overlay spec and first-frame
    buffer checksums.
    """
    data = generate_fixture(seed)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    save_sequence(data.clean_source, out_dir / "source_clean")
    save_mask_sequence(data.masks, out_dir / "masks")
    save_sequence(data.snowy, out_dir / "snowy")
    save_sequence(data.clean, out_dir / "clean")
    info = {
        "seed": seed,
        "frames": N_FRAMES,
        "clean_size": CLEAN_SIZE,
        "mask_size": MASK_SIZE,
        "particles": N_PARTICLES,
        "overlay_spec": data.spec.to_dict(),
        "checksums": {
            "snowy_first": buffer_sha256(data.snowy.frames[0]),
            "clean_first": buffer_sha256(data.clean.frames[0]),
        },
    }
    with open(out_dir / "fixture.json", "w", encoding="utf-8") as fh:
        json.dump(info, fh, indent=2)
        fh.write("\n")
    return data
