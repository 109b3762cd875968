"""End-to-end paired dataset generation with a reproducible manifest.

Every sequence owns a SplitMix64 stream keyed by master_seed XOR its
index, from which it draws its clean source, mask source, and overlay
placement in that fixed order. Streams never interact, so sequences can
be generated on any number of threads with byte-identical results. The
manifest is written last and records what actually landed on disk,
including buffer checksums of each sequence's first and last frames.

Defaults (300 train + 10 test sequences of 269 frames) produce
310 x 269 = 83,390 paired frames.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .errors import OverlayOutOfBounds, SequenceTooShort, SnowforgeError
from .frame_io import (
    FrameSequence,
    MaskSequence,
    buffer_sha256,
    frame_indices,
    load_frame,
    load_mask_sequence,
    load_sequence,
    save_sequence,
)
from .overlay_compositor import OverlaySpec, compose_snowy, draw_overlay_spec
from .rng import SplitMix64

log = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
SCHEMA_VERSION = 1
DEFAULT_N_TRAIN = 300
DEFAULT_N_TEST = 10
DEFAULT_OUT_LEN = 269


@dataclass
class DatasetConfig:
    clean_sources: list[str]
    mask_sources: list[str]
    out_dir: str
    n_train: int = DEFAULT_N_TRAIN
    n_test: int = DEFAULT_N_TEST
    out_len: int = DEFAULT_OUT_LEN
    master_seed: int = 0

    def __post_init__(self):
        if self.n_train < 0 or self.n_test < 0:
            raise ValueError("n_train and n_test must be >= 0")
        if self.out_len < 1:
            raise ValueError("out_len must be >= 1")
        if not self.clean_sources or not self.mask_sources:
            raise ValueError("clean_sources and mask_sources must be non-empty")

    @classmethod
    def from_json(cls, path) -> "DatasetConfig":
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        return cls(**raw)


@dataclass
class SequenceRecord:
    sequence_id: str
    split: str
    clean_source: str
    mask_source: str
    overlay_spec: OverlaySpec
    frame_count: int
    geometry: dict
    gt_geometry: dict
    mask_frames: int
    checksums: dict

    def to_dict(self) -> dict:
        return {
            "sequence_id": self.sequence_id,
            "split": self.split,
            "clean_source": self.clean_source,
            "mask_source": self.mask_source,
            "overlay_spec": self.overlay_spec.to_dict(),
            "frame_count": self.frame_count,
            "geometry": self.geometry,
            "gt_geometry": self.gt_geometry,
            "mask_frames": self.mask_frames,
            "checksums": self.checksums,
        }


@dataclass
class DatasetManifest:
    master_seed: int
    n_train: int
    n_test: int
    out_len: int
    clean_sources: list[str]
    mask_sources: list[str]
    records: list[SequenceRecord] = field(default_factory=list)
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "master_seed": self.master_seed,
            "n_train": self.n_train,
            "n_test": self.n_test,
            "out_len": self.out_len,
            "clean_sources": list(self.clean_sources),
            "mask_sources": list(self.mask_sources),
            "sequences": [r.to_dict() for r in self.records],
        }


def _validate_compat(cleans: list[FrameSequence], masks: list[MaskSequence],
                     cfg: DatasetConfig) -> None:
    """Any mask may be drawn for any clean source, so all pairs must fit."""
    for ci, c in enumerate(cleans):
        if len(c) < cfg.out_len:
            raise SequenceTooShort(
                f"clean source {cfg.clean_sources[ci]!r} has {len(c)} frames, "
                f"need out_len {cfg.out_len}"
            )
        ch, cw, cc = c.geometry
        for mi, m in enumerate(masks):
            mh, mw, mc = m.geometry
            if mh > ch or mw > cw or mc != cc:
                raise OverlayOutOfBounds(
                    f"mask source {cfg.mask_sources[mi]!r} ({mw}x{mh}x{mc}) does "
                    f"not fit clean source {cfg.clean_sources[ci]!r} ({cw}x{ch}x{cc})"
                )


def _generate_one(i: int, cfg: DatasetConfig, cleans, masks, out_dir: Path) -> SequenceRecord:
    rng = SplitMix64(cfg.master_seed ^ i)
    clean_idx = rng.below(len(cleans))
    mask_idx = rng.below(len(masks))
    gt = cleans[clean_idx]
    ms = masks[mask_idx]
    spec = draw_overlay_spec(rng, gt.geometry, len(gt), ms.geometry, len(ms),
                             cfg.out_len)
    snowy, clean = compose_snowy(gt, ms, spec)

    split = "train" if i < cfg.n_train else "test"
    seq_id = f"seq_{i:04d}"
    seq_dir = out_dir / split / seq_id
    save_sequence(snowy, seq_dir / "snowy")
    save_sequence(clean, seq_dir / "clean")

    h, w, c = snowy.geometry
    gh, gw, gc = gt.geometry
    record = SequenceRecord(
        sequence_id=seq_id,
        split=split,
        clean_source=cfg.clean_sources[clean_idx],
        mask_source=cfg.mask_sources[mask_idx],
        overlay_spec=spec,
        frame_count=cfg.out_len,
        geometry={"height": h, "width": w, "channels": c},
        gt_geometry={"height": gh, "width": gw, "channels": gc, "frames": len(gt)},
        mask_frames=len(ms),
        checksums={
            "snowy_first": buffer_sha256(snowy.frames[0]),
            "snowy_last": buffer_sha256(snowy.frames[-1]),
            "clean_first": buffer_sha256(clean.frames[0]),
            "clean_last": buffer_sha256(clean.frames[-1]),
        },
    )
    log.info("generated %s (%s) from %s + %s", seq_id, split,
             record.clean_source, record.mask_source)
    return record


def build_dataset(cfg: DatasetConfig, threads: int = 1) -> DatasetManifest:
    """Generate all sequences, then write the manifest.

    If anything fails after output starts, an INVALID marker file is left
    in the output directory and the error is re-raised.
    """
    cleans = [load_sequence(p) for p in cfg.clean_sources]
    masks = [load_mask_sequence(p) for p in cfg.mask_sources]
    _validate_compat(cleans, masks, cfg)

    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    total = cfg.n_train + cfg.n_test
    manifest = DatasetManifest(
        master_seed=cfg.master_seed,
        n_train=cfg.n_train,
        n_test=cfg.n_test,
        out_len=cfg.out_len,
        clean_sources=[str(p) for p in cfg.clean_sources],
        mask_sources=[str(p) for p in cfg.mask_sources],
    )
    try:
        if threads <= 1:
            records = [_generate_one(i, cfg, cleans, masks, out_dir)
                       for i in range(total)]
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                futures = [pool.submit(_generate_one, i, cfg, cleans, masks, out_dir)
                           for i in range(total)]
                records = [f.result() for f in futures]
    except Exception as exc:
        marker = out_dir / "INVALID"
        marker.write_text(f"dataset generation aborted: {exc}\n", encoding="utf-8")
        raise
    manifest.records = records

    with open(out_dir / MANIFEST_NAME, "w", encoding="utf-8") as fh:
        json.dump(manifest.to_dict(), fh, indent=2)
        fh.write("\n")
    return manifest


@dataclass
class VerifyEntry:
    sequence_id: str
    ok: bool
    problems: list[str] = field(default_factory=list)


@dataclass
class VerifyReport:
    entries: list[VerifyEntry] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)


def _verify_half(seq_dir: Path, half: str, rec: dict, problems: list[str]) -> None:
    half_dir = seq_dir / half
    count = rec["frame_count"]
    geom = rec["geometry"]
    expected_shape = (geom["height"], geom["width"], geom["channels"])
    try:
        indices = frame_indices(half_dir)
    except SnowforgeError as exc:
        problems.append(f"{half}: {type(exc).__name__}: {exc}")
        return
    if len(indices) != count:
        problems.append(
            f"{half}: {len(indices)} frames on disk, manifest says {count}"
        )
        return
    for label, idx in (("first", indices[0]), ("last", indices[-1])):
        try:
            frame = load_frame(half_dir / f"frame_{idx:06d}.png")
        except SnowforgeError as exc:
            problems.append(f"{half} {label}: {type(exc).__name__}: {exc}")
            continue
        if frame.shape != expected_shape:
            problems.append(
                f"{half} {label}: shape {frame.shape} != manifest {expected_shape}"
            )
            continue
        digest = buffer_sha256(frame)
        want = rec["checksums"][f"{half}_{label}"]
        if digest != want:
            problems.append(f"{half} {label}: checksum mismatch")


def verify_dataset(manifest_path) -> VerifyReport:
    """Re-check an on-disk dataset against its manifest.

    Verifies frame counts and contiguity, first/last frame geometry and
    checksums, and overlay spec bounds; failures become report entries
    rather than exceptions.
    """
    manifest_path = Path(manifest_path)
    with open(manifest_path, encoding="utf-8") as fh:
        data = json.load(fh)
    base = manifest_path.parent
    report = VerifyReport()
    for rec in data["sequences"]:
        problems: list[str] = []
        seq_dir = base / rec["split"] / rec["sequence_id"]
        spec = OverlaySpec.from_dict(rec["overlay_spec"])
        gtg = rec["gt_geometry"]
        geom = rec["geometry"]
        try:
            spec.validate(
                (gtg["height"], gtg["width"], gtg["channels"]), gtg["frames"],
                (geom["height"], geom["width"], geom["channels"]),
                rec["mask_frames"],
            )
        except SnowforgeError as exc:
            problems.append(f"overlay_spec: {type(exc).__name__}: {exc}")
        if rec["frame_count"] != spec.out_len:
            problems.append(
                f"frame_count {rec['frame_count']} != overlay_spec.out_len {spec.out_len}"
            )
        for half in ("snowy", "clean"):
            _verify_half(seq_dir, half, rec, problems)
        report.entries.append(VerifyEntry(
            sequence_id=rec["sequence_id"], ok=not problems, problems=problems,
        ))
    return report
