"""Named example subshifts and tilesets used throughout the library and tests."""

from __future__ import annotations

from .patterns import Alphabet, Pattern
from .sft import SftSpec, WangTile, lower_wang

WHITE, BLACK = 0, 1

#: The 8 even bicolor tiles in canonical order (N, E, S, W bits).
EVEN_TILE_BITS: tuple[tuple[int, int, int, int], ...] = (
    (0, 0, 0, 0),
    (1, 1, 1, 1),
    (1, 1, 0, 0),
    (0, 1, 1, 0),
    (0, 0, 1, 1),
    (1, 0, 0, 1),
    (1, 0, 1, 0),
    (0, 1, 0, 1),
)


def even_tiles() -> list[WangTile]:
    """The 8 bicolor tiles with an even number of each color on their edges."""
    return [WangTile(*bits) for bits in EVEN_TILE_BITS]


def wires_tileset() -> list[WangTile]:
    return even_tiles()


def wires_spec() -> SftSpec:
    return lower_wang(wires_tileset(), name="wires")


def corners_tileset() -> list[WangTile]:
    """The 4 bicolor tiles whose opposite edges have opposite colors.

    corner_tile(a, b) is the unique tile with colors a, b on its lower
    and left edges; the list is ordered by (a, b).
    """
    return [corner_tile(a, b) for a in (0, 1) for b in (0, 1)]


def corner_tile(a: int, b: int) -> WangTile:
    return WangTile(north=1 - a, east=1 - b, south=a, west=b)


def corners_spec() -> SftSpec:
    return lower_wang(corners_tileset(), name="corners")


#: Domino tiles: each carries a single 1-edge pointing at its partner cell.
DOMINO_V_TOP = WangTile(north=0, east=0, south=1, west=0)
DOMINO_V_BOTTOM = WangTile(north=1, east=0, south=0, west=0)
DOMINO_H_LEFT = WangTile(north=0, east=1, south=0, west=0)
DOMINO_H_RIGHT = WangTile(north=0, east=0, south=0, west=1)


def domino_tileset() -> list[WangTile]:
    return [DOMINO_V_TOP, DOMINO_V_BOTTOM, DOMINO_H_LEFT, DOMINO_H_RIGHT]


#: Symbol ids in the lowered domino spec, in tileset order.
VTOP, VBOTTOM, HLEFT, HRIGHT = 0, 1, 2, 3


def domino_spec() -> SftSpec:
    return lower_wang(domino_tileset(), name="dominoes")


def triangles_spec() -> SftSpec:
    """The black-triangles SFT on {white, black}.

    The single forbidden pattern has diameter 1: two vertically adjacent
    black cells with a white cell to the right of the lower one.  A black
    column of height h therefore forces a shrinking black triangle to its
    right, reaching a single cell after h - 1 steps.
    """
    alphabet = Alphabet(("white", "black"))
    forbidden = Pattern(2, {(0, 0): BLACK, (0, 1): BLACK, (1, 0): WHITE})
    return SftSpec(2, alphabet, (forbidden,), name="triangles")


def xzbar_spec_1d() -> SftSpec:
    """Monotone words: white then black, with the transition anywhere (or nowhere)."""
    alphabet = Alphabet(("white", "black"))
    forbidden = Pattern(1, {(0,): BLACK, (1,): WHITE})
    return SftSpec(1, alphabet, (forbidden,), name="xzbar1d")


def xzbar_spec_2d() -> SftSpec:
    """Each row is an independent monotone white-then-black word."""
    alphabet = Alphabet(("white", "black"))
    forbidden = Pattern(2, {(0, 0): BLACK, (1, 0): WHITE})
    return SftSpec(2, alphabet, (forbidden,), name="xzbar2d")


def stacks_spec() -> SftSpec:
    """Rows of 2s separating column stacks of 1s with 0s above them."""
    alphabet = Alphabet(("0", "1", "2"))
    forbidden = (
        Pattern(2, {(0, 0): 0, (0, 1): 1}),  # a 1 directly above a 0
        Pattern(2, {(0, 0): 2, (1, 0): 0}),
        Pattern(2, {(0, 0): 2, (1, 0): 1}),
    )
    return SftSpec(2, alphabet, forbidden, name="stacks")


def checkerboard_spec() -> SftSpec:
    """Adjacent cells must differ; exactly the two checkerboard configurations."""
    alphabet = Alphabet(("0", "1"))
    forbidden = tuple(
        Pattern(2, {(0, 0): a, step: a})
        for a in (0, 1)
        for step in ((1, 0), (0, 1))
    )
    return SftSpec(2, alphabet, forbidden, name="checkerboard")


def golden_mean_spec() -> SftSpec:
    """Binary words with no two consecutive 1s."""
    alphabet = Alphabet(("0", "1"))
    forbidden = Pattern(1, {(0,): 1, (1,): 1})
    return SftSpec(1, alphabet, (forbidden,), name="goldenmean")


def fullshift_spec(size: int, dimension: int) -> SftSpec:
    return SftSpec(dimension, Alphabet.of_size(size), (), name=f"fullshift{size}d{dimension}")


_NAMED = {
    "triangles": triangles_spec,
    "dominoes": domino_spec,
    "wires": wires_spec,
    "corners": corners_spec,
    "xzbar1d": xzbar_spec_1d,
    "xzbar2d": xzbar_spec_2d,
    "stacks": stacks_spec,
    "checkerboard": checkerboard_spec,
    "goldenmean": golden_mean_spec,
}


def named_spec(name: str) -> SftSpec:
    """Look up a named spec; 'fullshift<N>d<D>' builds a fullshift."""
    if name in _NAMED:
        return _NAMED[name]()
    if name.startswith("fullshift"):
        rest = name[len("fullshift"):]
        size_s, _, dim_s = rest.partition("d")
        return fullshift_spec(int(size_s), int(dim_s or "2"))
    raise KeyError(f"unknown spec {name!r}; known: {', '.join(sorted(_NAMED))}")
