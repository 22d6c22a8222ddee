"""Subshifts of finite type: forbidden-pattern specifications and Wang tilesets."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

from .geometry import Point, Region, add, row_major_key
from .patterns import Alphabet, Pattern


class AlphabetMismatchError(ValueError):
    pass


class WangTile(NamedTuple):
    """A unit square with a color id on each edge."""

    north: int
    east: int
    south: int
    west: int


@dataclass(frozen=True)
class SftSpec:
    """An SFT given by a finite list of finite forbidden patterns.

    A pattern is *locally admissible* when no translate of a forbidden pattern
    lies entirely inside its domain and matches it there.  Local admissibility
    is necessary for validity (appearing in a configuration of the subshift)
    but not sufficient.
    """

    dimension: int
    alphabet: Alphabet
    forbidden: tuple[Pattern, ...]
    name: str = ""

    def __post_init__(self):
        for f in self.forbidden:
            if f.dimension != self.dimension:
                raise ValueError("forbidden pattern dimension mismatch")
            if len(f) == 0:
                raise ValueError("forbidden patterns must be nonempty")
            for _, s in f.items():
                if not 0 <= s < len(self.alphabet):
                    raise ValueError("forbidden pattern uses a symbol outside the alphabet")

    @cached_property
    def max_forbidden_diameter(self) -> int:
        return max((f.domain().diameter() for f in self.forbidden), default=0)

    @cached_property
    def _by_shape(self) -> dict[tuple[Point, ...], set[tuple[int, ...]]]:
        # forbidden patterns grouped by translated shape: offsets are relative to
        # the row-major least cell, so each occurrence is one tuple lookup
        shapes: dict[tuple[Point, ...], set[tuple[int, ...]]] = {}
        for f in self.forbidden:
            cells = f.cells()
            base = cells[0]
            offsets = tuple(tuple(c - b for c, b in zip(cell, base)) for cell in cells)
            shapes.setdefault(offsets, set()).add(tuple(f[c] for c in cells))
        return shapes

    def forbidden_shapes(self) -> list[tuple[tuple[Point, ...], set[tuple[int, ...]]]]:
        return [(offs, vals) for offs, vals in self._by_shape.items()]

    def check_symbol(self, s: int):
        if not 0 <= s < len(self.alphabet):
            raise AlphabetMismatchError(f"symbol {s} outside alphabet of size {len(self.alphabet)}")


def locally_admissible(pattern: Pattern, spec: SftSpec) -> bool:
    """True iff no forbidden occurrence lies fully inside the pattern's domain."""
    if pattern.dimension != spec.dimension:
        raise AlphabetMismatchError("pattern dimension does not match spec")
    for _, s in pattern.items():
        spec.check_symbol(s)
    for offsets, value_set in spec._by_shape.items():
        for anchor in pattern.cells():
            values = []
            for off in offsets:
                v = pattern.get(add(anchor, off))
                if v is None:
                    break
                values.append(v)
            else:
                if tuple(values) in value_set:
                    return False
    return True


def first_violation(pattern: Pattern, spec: SftSpec) -> tuple[Point, tuple[Point, ...]] | None:
    """The row-major first forbidden occurrence (anchor, shape), or None."""
    for offsets, value_set in spec._by_shape.items():
        for anchor in pattern.cells():
            values = []
            for off in offsets:
                v = pattern.get(add(anchor, off))
                if v is None:
                    break
                values.append(v)
            else:
                if tuple(values) in value_set:
                    return anchor, offsets
    return None


def lower_wang(tiles: Iterable[WangTile], name: str = "") -> SftSpec:
    """Lower a Wang tileset to an SFT on the tile alphabet.

    Forbidden patterns are exactly the domino-shaped mismatches: horizontal
    pairs with east != west and vertical pairs with north != south (the
    second cell sitting above the first).
    """
    tile_list = list(tiles)
    if not tile_list:
        raise ValueError("tileset must be nonempty")
    labels = tuple("".join(str(c) for c in t) for t in tile_list)
    alphabet = Alphabet(labels)
    forbidden: list[Pattern] = []
    for i, t in enumerate(tile_list):
        for j, u in enumerate(tile_list):
            if t.east != u.west:
                forbidden.append(Pattern(2, {(0, 0): i, (1, 0): j}))
            if t.north != u.south:
                forbidden.append(Pattern(2, {(0, 0): i, (0, 1): j}))
    return SftSpec(2, alphabet, tuple(forbidden), name=name or "wang")


def wang_tiles_of(spec_tiles: Iterable[WangTile]) -> list[WangTile]:
    return list(spec_tiles)


# --- tileset file format: one tile per line, four color ids in order N E S W


def dumps_tileset(tiles: Iterable[WangTile]) -> str:
    return "\n".join(f"{t.north} {t.east} {t.south} {t.west}" for t in tiles) + "\n"


def loads_tileset(text: str) -> list[WangTile]:
    tiles: list[WangTile] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ValueError(f"bad tileset line: {raw!r}")
        tiles.append(WangTile(*(int(v) for v in parts)))
    return tiles
