"""Frozen sampling pattern for the 256-bit binary descriptor.

Generated by scripts/gen_brief_pattern.py: 256 (ax, ay, bx, by) pairs,
coordinates uniform in [-15, 15], drawn in that order from
SplitMix64(seed=42). Do not edit by hand.
"""

PATTERN_SEED = 42
HALF_WIDTH = 15

# fmt: off
PAIRS = (
    (10, 13, 8, -2),
    (4, 5, 13, -8),
    (14, 7, -2, 4),
    (14, -7, 13, -6),
    (-7, -3, -11, 3),
    (-8, -10, -14, 11),
    (-4, -7, 1, -10),
    (14, 6, 3, 3),
    (7, -11, 4, 2),
    (-14, -7, -9, 5),
    (-14, 7, 3, -12),
    (10, 6, -8, -2),
    (13, 9, -2, 12),
    (5, -13, 7, -5),
    (-14, -7, 6, -4),
    (9, 0, -15, 11),
    (-11, 4, 12, 2),
    (11, -11, 3, 5),
    (11, -11, 8, 12),
    (0, 9, -13, 3),
    (-12, -10, 13, 5),
    (15, 11, -11, -3),
    (3, -10, -6, -9),
    (-15, -8, -6, -6),
    (1, -9, 12, 3),
    (10, 8, -1, 8),
    (6, 12, -2, -15),
    (-3, 10, 10, -12),
    (5, -10, -4, -7),
    (7, 5, -2, -3),
    (-1, -8, 8, 0),
    (4, 14, 6, 14),
    (5, -13, -10, -12),
    (15, 10, 11, -1),
    (14, -8, 11, -6),
    (7, 3, 7, 0),
    (-13, 15, 12, 5),
    (-2, -13, 8, 3),
    (-1, -7, -13, -5),
    (-11, 7, -14, 14),
    (-14, 14, -3, -7),
    (-3, -5, -5, 9),
    (6, -9, 1, 9),
    (-9, -3, 6, -1),
    (8, -2, -4, -6),
    (-13, -8, 4, -12),
    (5, 12, 10, 7),
    (-9, -14, 11, 3),
    (14, 3, 7, 15),
    (-8, 12, 9, -10),
    (-12, 14, 5, -3),
    (-15, 5, -5, 7),
    (-6, 3, 15, 3),
    (8, 3, -15, 5),
    (4, -7, -1, 0),
    (-6, -1, -12, -1),
    (13, 15, -9, -11),
    (12, -13, 10, 5),
    (6, 8, 4, 0),
    (-2, 4, 1, -11),
    (6, -1, 4, -12),
    (-6, 13, -3, -8),
    (14, -2, 14, -3),
    (12, -1, -14, 13),
    (-2, -13, -11, 9),
    (9, 9, 13, 15),
    (0, 10, 12, -9),
    (1, 5, -1, 2),
    (-8, 5, -14, -11),
    (-9, 1, -12, 0),
    (-10, 7, -10, -1),
    (15, 12, -5, -3),
    (-11, -1, -3, 2),
    (-3, 5, 5, -15),
    (-8, -15, -3, 15),
    (-3, 14, 4, -7),
    (-2, -9, 7, 7),
    (-12, 0, 3, 1),
    (13, 3, 10, 4),
    (2, -5, -6, -5),
    (-5, -7, -12, 0),
    (3, 13, -6, -2),
    (-4, 10, -1, -15),
    (-9, 4, 6, -13),
    (7, -3, -14, -8),
    (-10, 0, 0, -11),
    (-13, 0, -7, 3),
    (-1, -6, -5, -6),
    (0, 10, -1, 4),
    (1, 15, 4, 5),
    (-7, 2, 4, 3),
    (7, 12, -4, -10),
    (-3, 6, -9, 5),
    (-12, -1, 9, 7),
    (14, -8, -5, -11),
    (9, 9, -11, 11),
    (2, -4, 13, -12),
    (7, 9, -3, 0),
    (-9, 14, -7, -10),
    (-9, 2, 14, 12),
    (-7, -15, -15, 11),
    (14, -12, -9, 13),
    (-15, -6, 13, -15),
    (2, 15, 4, 5),
    (11, 10, 2, 9),
    (-9, -15, -11, -5),
    (-14, 14, 2, -13),
    (2, 0, 10, -14),
    (1, 8, -12, 7),
    (-11, 2, 6, 3),
    (0, -6, -10, 9),
    (10, 15, -4, -8),
    (14, -5, 5, -15),
    (-11, 3, 12, 8),
    (9, -6, -5, 5),
    (4, 14, -5, 1),
    (-13, -1, -10, 1),
    (-8, 3, -9, 15),
    (10, 0, 0, -1),
    (-10, -11, -15, -10),
    (-12, 6, -12, 13),
    (3, -2, 15, 8),
    (12, 8, -8, -11),
    (15, 1, -8, 1),
    (-7, -4, 10, 10),
    (0, -12, 8, 1),
    (-12, -10, -2, 4),
    (15, 13, -10, 11),
    (-12, -9, 15, 10),
    (-9, -5, 10, -7),
    (9, -3, -12, 6),
    (12, 13, -14, -9),
    (-7, 12, -2, -8),
    (-13, -6, 14, 8),
    (-7, 13, 8, 10),
    (-2, -9, 11, -12),
    (0, 9, 6, 10),
    (-5, 14, 8, 9),
    (-7, -9, 12, -7),
    (4, -12, 13, -13),
    (13, 11, 3, 13),
    (13, 9, 6, -4),
    (3, -13, -8, 3),
    (-12, 7, 13, 8),
    (-7, -2, 10, 10),
    (-13, 10, 2, 6),
    (-1, -12, 0, 4),
    (8, 2, 8, -11),
    (-2, -3, -9, -11),
    (8, -9, 8, 2),
    (10, -14, -8, 10),
    (-9, 4, -6, 14),
    (14, 5, 15, 8),
    (-2, -1, -7, 4),
    (-2, 5, 13, 10),
    (6, 14, 9, 14),
    (0, -2, -1, -9),
    (-14, 12, 5, -8),
    (-12, -12, -13, 1),
    (-6, -15, -4, 1),
    (11, 12, 7, -13),
    (-12, -8, 11, -15),
    (-3, 11, 8, -7),
    (-14, -15, 11, -8),
    (-10, -7, -14, -13),
    (-1, -1, -1, 6),
    (-14, 3, 14, 5),
    (-2, 10, -14, 3),
    (-3, 11, -5, -2),
    (2, 5, 14, -13),
    (1, 14, 13, -12),
    (-11, -11, 12, -2),
    (-13, 13, -7, 10),
    (11, -8, -4, 0),
    (-15, -4, -12, -10),
    (9, -5, 9, 4),
    (-14, 6, -10, 8),
    (-2, 1, 11, -3),
    (-8, -13, -3, 4),
    (-7, 14, -9, -1),
    (7, -10, -5, 1),
    (7, 0, 1, -8),
    (5, -2, 14, -12),
    (-9, 8, 13, 6),
    (10, -1, 1, -13),
    (-3, -11, -13, 11),
    (13, -7, -3, 1),
    (-11, -5, -9, 11),
    (-5, 14, -13, 14),
    (8, 2, -7, -1),
    (-8, 4, 13, 15),
    (8, 13, -11, -7),
    (-2, -3, -11, -5),
    (7, 12, -8, -11),
    (8, -15, 15, 14),
    (13, -1, 13, -15),
    (-13, 14, 2, -7),
    (-6, 12, 15, 13),
    (6, -7, 4, -12),
    (-5, 7, -6, 12),
    (12, 15, 6, -14),
    (-14, -15, -12, -8),
    (-6, 6, 10, 9),
    (0, 12, 2, -10),
    (10, -11, -7, 12),
    (-3, -7, 14, 6),
    (-10, -8, 4, 8),
    (-1, 0, 6, 3),
    (-8, 3, 1, -4),
    (-13, 9, -10, 14),
    (2, 13, 4, -6),
    (-7, 14, 1, 6),
    (15, -9, 11, -7),
    (-11, -1, -5, -9),
    (-6, -4, 6, 8),
    (9, 15, 7, 13),
    (-5, -10, -10, 14),
    (9, 2, 5, 6),
    (-6, -8, -15, 7),
    (-10, -4, -7, -10),
    (11, -2, -10, 9),
    (-15, 3, 15, 11),
    (14, -5, 12, -15),
    (8, 0, 0, 9),
    (-8, -8, 8, 6),
    (-2, -5, -1, -8),
    (10, -10, -1, 7),
    (8, 15, 7, -13),
    (-1, 12, -3, -8),
    (-8, 8, -5, 1),
    (14, -15, 9, 5),
    (15, -4, 11, 2),
    (1, -1, -10, -9),
    (-1, -15, 15, -5),
    (-6, -3, -5, 5),
    (-12, -12, -2, 12),
    (-12, -15, 15, -2),
    (6, 0, -8, 5),
    (-7, 5, -11, -4),
    (14, -12, 11, -13),
    (7, 9, 1, 1),
    (-10, 3, -2, -10),
    (4, 5, 13, -8),
    (-3, 9, -13, 15),
    (15, -7, 6, 8),
    (4, -2, 4, 1),
    (-12, 15, 1, 2),
    (7, 14, -3, -4),
    (-10, -14, -8, -11),
    (15, 3, 10, -2),
    (-6, -13, -15, -9),
    (-1, 13, -9, -15),
    (-11, 3, 7, -8),
    (-7, 8, -2, 12),
    (-11, 5, -6, 1),
    (-1, -12, -14, 3),
)
# fmt: on
