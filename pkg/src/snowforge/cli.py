"""Single entry point wiring the pipeline stages into subcommands.

Exit codes: 0 success, 1 usage error (bad argv), 2 data error (anything
a module rejected, including I/O failures). Every subcommand is a pure
function of its inputs, flags, and seed; --threads only changes wall
time. The seed is taken from --seed, then the SNOWFORGE_SEED environment
variable, then 0.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .dataset_builder import DatasetConfig, build_dataset, verify_dataset
from .errors import SchemaError, SnowforgeError
from .evaluation import evaluate_sequence, write_metrics_csv
from .fixture import make_fixture
from .frame_io import (
    MASK_META_NAME,
    load_mask_sequence,
    load_sequence,
    save_frame,
    save_mask_sequence,
    save_sequence,
)
from .mask_extraction import extract_mask_sequence, extract_patch_masks
from .median_background import (
    DEFAULT_MEMORY_BUDGET,
    temporal_median,
    temporal_median_banded,
)
from .overlay_compositor import compose_snowy, draw_overlay_spec
from .report import ChartSpec, format_summary_table, summarize, write_chart, write_summary_csv
from .rng import SplitMix64
from .snow_removal import CleanerParams, load_external_enhanced, temporal_median_clean

SEED_ENV = "SNOWFORGE_SEED"

log = logging.getLogger(__name__)


@dataclass
class GlobalConfig:
    seed: int = 0
    seed_explicit: bool = False
    memory_budget: int = DEFAULT_MEMORY_BUDGET
    threads: int = 1
    log_level: str = "warning"


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is exit 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _parse_threads(value: str) -> int:
    if value == "auto":
        return os.cpu_count() or 1
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("threads must be >= 1 or 'auto'")
    return n


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help=f"64-bit seed (default: ${SEED_ENV} or 0)")
    common.add_argument("--memory-budget", type=int, default=DEFAULT_MEMORY_BUDGET,
                        metavar="BYTES", help="working-buffer budget in bytes")
    common.add_argument("--threads", type=_parse_threads, default=1,
                        metavar="N", help="worker count, or 'auto'")
    common.add_argument("--log-level", default="warning",
                        choices=("debug", "info", "warning", "error"))
    return common


def build_parser() -> _Parser:
    common = _common_flags()
    parser = _Parser(prog="snowforge",
                     description="Paired snowy/clean underwater video synthesis "
                                 "and evaluation toolkit.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("median", parents=[common],
                       help="temporal median frame of an on-disk sequence")
    p.add_argument("--in", dest="in_dir", required=True, metavar="DIR")
    p.add_argument("--out", required=True, metavar="PNG")

    p = sub.add_parser("extract-mask", parents=[common],
                       help="signed residual masks of a sequence against its median")
    p.add_argument("--in", dest="in_dir", required=True, metavar="DIR")
    p.add_argument("--out", required=True, metavar="DIR")
    p.add_argument("--noise-floor", type=int, default=0, metavar="TAU",
                   help="zero residuals with |r| <= TAU")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--rect", type=int, nargs=4, metavar=("X", "Y", "W", "H"),
                   help="extract from this patch instead of the full frame")
    g.add_argument("--patch", action="store_true",
                   help="use the standard 550x600 patch at the origin")

    p = sub.add_parser("compose", parents=[common],
                       help="overlay a mask sequence onto clean footage at a "
                            "seeded random placement")
    p.add_argument("--clean", required=True, metavar="DIR")
    p.add_argument("--masks", required=True, metavar="DIR")
    p.add_argument("--out", required=True, metavar="DIR")
    p.add_argument("--out-len", type=int, default=None, metavar="N",
                   help="output frames (default: clean sequence length)")

    p = sub.add_parser("build-dataset", parents=[common],
                       help="generate a full train/test dataset with manifest")
    p.add_argument("--config", metavar="JSON",
                   help="DatasetConfig as JSON; flags override its fields")
    p.add_argument("--clean-dir", metavar="DIR",
                   help="clean source sequence, or directory of them")
    p.add_argument("--mask-dir", metavar="DIR",
                   help="mask source sequence, or directory of them")
    p.add_argument("--n-train", type=int, default=None)
    p.add_argument("--n-test", type=int, default=None)
    p.add_argument("--out-len", type=int, default=None)
    p.add_argument("--out", metavar="DIR")

    p = sub.add_parser("denoise", parents=[common],
                       help="baseline temporal-median snow removal")
    p.add_argument("--in", dest="in_dir", required=True, metavar="DIR")
    p.add_argument("--out", required=True, metavar="DIR")
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--tau", type=int, default=25)
    p.add_argument("--mode", default="replace-rgb",
                   choices=("replace-rgb", "replace-luma"))

    p = sub.add_parser("evaluate", parents=[common],
                       help="keypoint/match/PSNR/SSIM metrics for one method")
    p.add_argument("--clean", required=True, metavar="DIR")
    p.add_argument("--snowy", required=True, metavar="DIR")
    p.add_argument("--method", required=True, metavar="DIR",
                   help="frames to evaluate (may equal --snowy)")
    p.add_argument("--label", required=True, help="method name for the CSV")
    p.add_argument("--out", required=True, metavar="CSV")
    p.add_argument("--sequence-id", default=None)
    p.add_argument("--append", action="store_true",
                   help="append to an existing metrics CSV")

    p = sub.add_parser("report", parents=[common],
                       help="summary tables and SVG charts from metrics CSVs")
    p.add_argument("--metrics", required=True, metavar="CSV")
    p.add_argument("--summary", metavar="CSV", help="write per-sequence stats here")
    p.add_argument("--chart", metavar="METRIC",
                   help="render this metric (keypoints, matches_prev, psnr_db, ssim)")
    p.add_argument("--out", metavar="SVG", help="chart output path")
    p.add_argument("--smoothing-window", type=int, default=15)
    p.add_argument("--chart-method", action="append", default=None, metavar="LABEL",
                   help="restrict the chart to this method (repeatable)")
    p.add_argument("--sequence-id", default=None)

    p = sub.add_parser("verify", parents=[common],
                       help="re-check a dataset tree against its manifest")
    p.add_argument("manifest", metavar="MANIFEST_JSON")

    p = sub.add_parser("fixture", parents=[common],
                       help="write the deterministic synthetic test fixture")
    p.add_argument("--out", required=True, metavar="DIR")

    return parser


def _resolve_seed(args) -> tuple[int, bool]:
    if args.seed is not None:
        return args.seed, True
    env = os.environ.get(SEED_ENV)
    if env is not None and env != "":
        return int(env), True
    return 0, False


def _cmd_median(args, cfg: GlobalConfig) -> int:
    median = temporal_median_banded(args.in_dir, memory_budget=cfg.memory_budget)
    save_frame(median, args.out)
    return 0


def _cmd_extract_mask(args, cfg: GlobalConfig) -> int:
    seq = load_sequence(args.in_dir)
    if args.rect is not None:
        ms = extract_patch_masks(seq, rect=tuple(args.rect),
                                 noise_floor=args.noise_floor)
    elif args.patch:
        ms = extract_patch_masks(seq, noise_floor=args.noise_floor)
    else:
        ms = extract_mask_sequence(seq, temporal_median(seq),
                                   noise_floor=args.noise_floor)
    save_mask_sequence(ms, args.out)
    return 0


def _cmd_compose(args, cfg: GlobalConfig) -> int:
    gt = load_sequence(args.clean)
    ms = load_mask_sequence(args.masks)
    out_len = args.out_len if args.out_len is not None else len(gt)
    rng = SplitMix64(cfg.seed)
    spec = draw_overlay_spec(rng, gt.geometry, len(gt), ms.geometry, len(ms),
                             out_len)
    snowy, clean = compose_snowy(gt, ms, spec)
    out = Path(args.out)
    save_sequence(snowy, out / "snowy")
    save_sequence(clean, out / "clean")
    with open(out / "overlay.json", "w", encoding="utf-8") as fh:
        json.dump(spec.to_dict(), fh, indent=2)
        fh.write("\n")
    return 0


def _discover_sources(root, mask: bool) -> list[str]:
    """A source dir itself, or a directory of source dirs."""
    root = Path(root)
    if not root.is_dir():
        raise SchemaError(f"{root}: not a directory")

    def is_source(p: Path) -> bool:
        if mask:
            return (p / MASK_META_NAME).exists()
        return next(p.glob("frame_*.png"), None) is not None

    if is_source(root):
        return [str(root)]
    found = sorted(str(p) for p in root.iterdir() if p.is_dir() and is_source(p))
    if not found:
        kind = "mask" if mask else "frame"
        raise SchemaError(f"{root}: no {kind} sequences found")
    return found


def _cmd_build_dataset(args, cfg: GlobalConfig) -> int:
    fields: dict = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            fields = json.load(fh)
        if not isinstance(fields, dict):
            raise SchemaError(f"{args.config}: expected a JSON object")
    if args.clean_dir:
        fields["clean_sources"] = _discover_sources(args.clean_dir, mask=False)
    if args.mask_dir:
        fields["mask_sources"] = _discover_sources(args.mask_dir, mask=True)
    for key in ("n_train", "n_test", "out_len"):
        value = getattr(args, key)
        if value is not None:
            fields[key] = value
    if args.out:
        fields["out_dir"] = args.out
    if cfg.seed_explicit or "master_seed" not in fields:
        fields["master_seed"] = cfg.seed
    try:
        dataset_cfg = DatasetConfig(**fields)
    except TypeError as exc:
        raise SchemaError(f"bad dataset config: {exc}") from exc
    manifest = build_dataset(dataset_cfg, threads=cfg.threads)
    print(f"wrote {len(manifest.records)} sequences under {dataset_cfg.out_dir}")
    return 0


def _cmd_denoise(args, cfg: GlobalConfig) -> int:
    seq = load_sequence(args.in_dir)
    params = CleanerParams(window=args.window, tau=args.tau, mode=args.mode)
    save_sequence(temporal_median_clean(seq, params), args.out)
    return 0


def _cmd_evaluate(args, cfg: GlobalConfig) -> int:
    clean = load_sequence(args.clean)
    snowy = load_sequence(args.snowy)
    method = load_external_enhanced(args.method, clean, label=args.label)
    seq_id = args.sequence_id or Path(args.clean).resolve().parent.name
    stats = evaluate_sequence(method, clean, snowy,
                              sequence_id=seq_id, method=args.label)
    write_metrics_csv([stats], args.out, append=args.append)
    return 0


def _cmd_report(args, cfg: GlobalConfig) -> int:
    if not args.summary and not args.chart:
        raise SchemaError("nothing to do: pass --summary and/or --chart")
    if args.chart and not args.out:
        raise SchemaError("--chart requires --out")
    if args.summary:
        rows = summarize([args.metrics])
        write_summary_csv(rows, args.summary)
        print(format_summary_table(rows), end="")
    if args.chart:
        spec = ChartSpec(
            metric=args.chart,
            out_path=args.out,
            smoothing_window=args.smoothing_window,
            methods=tuple(args.chart_method or ()),
            sequence_id=args.sequence_id,
        )
        write_chart(spec, args.metrics)
    return 0


def _cmd_verify(args, cfg: GlobalConfig) -> int:
    report = verify_dataset(args.manifest)
    for entry in report.entries:
        if entry.ok:
            print(f"ok   {entry.sequence_id}")
        else:
            print(f"FAIL {entry.sequence_id}: " + "; ".join(entry.problems))
    if not report.ok:
        return 2
    print(f"{len(report.entries)} sequences verified")
    return 0


def _cmd_fixture(args, cfg: GlobalConfig) -> int:
    make_fixture(args.out, seed=cfg.seed)
    print(f"fixture written to {args.out} (seed {cfg.seed})")
    return 0


_HANDLERS = {
    "median": _cmd_median,
    "extract-mask": _cmd_extract_mask,
    "compose": _cmd_compose,
    "build-dataset": _cmd_build_dataset,
    "denoise": _cmd_denoise,
    "evaluate": _cmd_evaluate,
    "report": _cmd_report,
    "verify": _cmd_verify,
    "fixture": _cmd_fixture,
}


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 0
    seed, explicit = _resolve_seed(args)
    cfg = GlobalConfig(
        seed=seed,
        seed_explicit=explicit,
        memory_budget=args.memory_budget,
        threads=args.threads,
        log_level=args.log_level,
    )
    logging.basicConfig(level=getattr(logging, cfg.log_level.upper()))
    try:
        return _HANDLERS[args.command](args, cfg)
    except (SnowforgeError, OSError, ValueError) as exc:
        print(f"snowforge: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
