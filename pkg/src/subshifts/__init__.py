"""Local generation, finite-window certification and classification for subshifts and Wang tilings."""

from .geometry import Point, Region, box, cube, neighborhood
from .patterns import (
    Alphabet,
    ConflictError,
    Pattern,
    dumps_pattern,
    empty_pattern,
    loads_pattern,
    pattern_from_word,
    pattern_union,
    shift_pattern,
)
from .sft import (
    AlphabetMismatchError,
    SftSpec,
    WangTile,
    dumps_tileset,
    loads_tileset,
    locally_admissible,
    lower_wang,
)

__version__ = "0.1.0"
