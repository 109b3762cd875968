import numpy as np
import pytest

from snowforge.frame_io import FrameSequence, MaskSequence


@pytest.fixture(scope="session")
def std_fixture():
    """The seed-0 synthetic fixture, generated once per test session."""
    from snowforge.fixture import generate_fixture
    return generate_fixture(0)


def random_sequence(rng: np.random.Generator, n: int, h: int, w: int,
                    c: int = 3, source_id: str = "seq") -> FrameSequence:
    frames = rng.integers(0, 256, size=(n, h, w, c), dtype=np.uint8)
    return FrameSequence(frames=frames, source_id=source_id)


def random_masks(rng: np.random.Generator, n: int, h: int, w: int,
                 c: int = 3, lo: int = -255, hi: int = 255,
                 source_id: str = "masks") -> MaskSequence:
    masks = rng.integers(lo, hi + 1, size=(n, h, w, c)).astype(np.int16)
    return MaskSequence(masks=masks, source_id=source_id, source_frames=n)
