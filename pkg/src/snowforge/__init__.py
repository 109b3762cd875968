"""snowforge: synthesize paired snowy/clean underwater video for denoising research.

The pipeline extracts backscatter particles from real footage as signed
residual masks against a temporal median, then composites those masks
onto clean footage at randomized offsets to build aligned (snowy, clean)
training pairs with known ground truth.
"""

__version__ = "0.1.0"

from .errors import SnowforgeError
from .frame_io import FrameSequence, MaskSequence
from .overlay_compositor import OverlaySpec
from .rng import SplitMix64

__all__ = [
    "FrameSequence",
    "MaskSequence",
    "OverlaySpec",
    "SnowforgeError",
    "SplitMix64",
    "__version__",
]
