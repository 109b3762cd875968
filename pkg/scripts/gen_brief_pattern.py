#!/usr/bin/env python3
"""Regenerate the frozen binary descriptor sampling pattern.

256 point pairs, coordinates uniform in [-15, 15], drawn as
(ax, ay, bx, by) per pair from SplitMix64(seed=42). The output module is
committed so the pattern is a reviewable constant; rerunning this script
must reproduce it byte-for-byte.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from snowforge.rng import SplitMix64

PATTERN_SEED = 42
N_PAIRS = 256
HALF_WIDTH = 15

HEADER = '''"""Frozen sampling pattern for the 256-bit binary descriptor.

Generated by scripts/gen_brief_pattern.py: %d (ax, ay, bx, by) pairs,
coordinates uniform in [-%d, %d], drawn in that order from
SplitMix64(seed=%d). Do not edit by hand.
"""

PATTERN_SEED = %d
HALF_WIDTH = %d

# fmt: off
PAIRS = (
''' % (N_PAIRS, HALF_WIDTH, HALF_WIDTH, PATTERN_SEED, PATTERN_SEED, HALF_WIDTH)

FOOTER = ")\n# fmt: on\n"


def draw_pairs():
    rng = SplitMix64(PATTERN_SEED)
    span = 2 * HALF_WIDTH + 1
    pairs = []
    for _ in range(N_PAIRS):
        ax = rng.below(span) - HALF_WIDTH
        ay = rng.below(span) - HALF_WIDTH
        bx = rng.below(span) - HALF_WIDTH
        by = rng.below(span) - HALF_WIDTH
        pairs.append((ax, ay, bx, by))
    return pairs


def main():
    out = Path(__file__).resolve().parents[1] / "src" / "snowforge" / "brief_pattern.py"
    lines = [HEADER]
    for ax, ay, bx, by in draw_pairs():
        lines.append(f"    ({ax}, {ay}, {bx}, {by}),\n")
    lines.append(FOOTER)
    out.write_text("".join(lines), encoding="utf-8")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
