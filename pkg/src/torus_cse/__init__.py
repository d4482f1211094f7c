"""Lossless 2D codec built on torus window counting."""

from .blocks import Block, from_numpy, is_primitive, make_block
from .codec import CodewordStats, compress, decompress, stats
from .errors import TorusCseError

__all__ = [
    "Block",
    "CodewordStats",
    "TorusCseError",
    "compress",
    "decompress",
    "from_numpy",
    "is_primitive",
    "make_block",
    "stats",
]
__version__ = "0.1.0"
