"""Deterministic image rendering: PGM (P5) for binary patterns, PPM (P6) for Wang tiles."""

from __future__ import annotations

import numpy as np

from .patterns import Pattern
from .sft import WangTile


class UnsupportedAlphabetError(ValueError):
    pass


#: Edge-band palette: color id -> RGB.
_EDGE_COLORS = (
    (235, 235, 235),  # color 0: near-white
    (10, 10, 10),  # color 1: near-black
    (200, 60, 60),
    (60, 60, 200),
    (60, 160, 60),
    (200, 160, 40),
)
_TILE_INTERIOR = (180, 180, 180)
_BACKGROUND = (255, 0, 255)  # cells outside the pattern domain


def _bounds(pattern: Pattern) -> tuple[int, int, int, int]:
    if len(pattern) == 0:
        raise ValueError("cannot render an empty pattern")
    lo, hi = pattern.domain().bounding_box()
    return lo[0], lo[1], hi[0], hi[1]


def render_pgm(pattern: Pattern, scale: int = 8) -> bytes:
    """Binary-alphabet pattern as a P5 graymap: symbol 0 white, symbol 1 black."""
    if pattern.dimension != 2:
        raise UnsupportedAlphabetError("PGM rendering needs a 2D pattern")
    if any(s not in (0, 1) for _, s in pattern.items()):
        raise UnsupportedAlphabetError("PGM rendering needs a 2-symbol pattern")
    x0, y0, x1, y1 = _bounds(pattern)
    w, h = x1 - x0 + 1, y1 - y0 + 1
    img = np.full((h * scale, w * scale), 128, dtype=np.uint8)
    for (x, y), s in pattern.items():
        # image row 0 is the top of the picture, so flip the y axis
        r0 = (y1 - y) * scale
        c0 = (x - x0) * scale
        img[r0 : r0 + scale, c0 : c0 + scale] = 255 if s == 0 else 0
    header = f"P5\n{w * scale} {h * scale}\n255\n".encode()
    return header + img.tobytes()


def render_ppm_wang(pattern: Pattern, tiles: list[WangTile], scale: int = 8) -> bytes:
    """Wang-tile pattern as a P6 pixmap: s x s blocks with colored edge bands."""
    if pattern.dimension != 2:
        raise UnsupportedAlphabetError("PPM rendering needs a 2D pattern")
    if scale < 3:
        raise ValueError("scale must be at least 3")
    x0, y0, x1, y1 = _bounds(pattern)
    w, h = x1 - x0 + 1, y1 - y0 + 1
    img = np.empty((h * scale, w * scale, 3), dtype=np.uint8)
    img[:, :] = _BACKGROUND
    band = max(1, scale // 4)
    for (x, y), s in pattern.items():
        if not 0 <= s < len(tiles):
            raise UnsupportedAlphabetError(f"symbol {s} has no tile")
        tile = tiles[s]
        r0 = (y1 - y) * scale
        c0 = (x - x0) * scale
        block = img[r0 : r0 + scale, c0 : c0 + scale]
        block[:, :] = _TILE_INTERIOR
        block[:band, :] = _EDGE_COLORS[tile.north % len(_EDGE_COLORS)]
        block[-band:, :] = _EDGE_COLORS[tile.south % len(_EDGE_COLORS)]
        block[:, :band] = _EDGE_COLORS[tile.west % len(_EDGE_COLORS)]
        block[:, -band:] = _EDGE_COLORS[tile.east % len(_EDGE_COLORS)]
    header = f"P6\n{w * scale} {h * scale}\n255\n".encode()
    return header + img.tobytes()


def render_text(pattern: Pattern, labels: tuple[str, ...] | None = None) -> str:
    """Text grid, top row first; cells outside the domain print as '.'."""
    if pattern.dimension == 1:
        lo, hi = pattern.domain().bounding_box()
        row = [_cell_text(pattern.get((x,)), labels) for x in range(lo[0], hi[0] + 1)]
        return " ".join(row) + "\n"
    x0, y0, x1, y1 = _bounds(pattern)
    lines = []
    for y in range(y1, y0 - 1, -1):
        lines.append(" ".join(_cell_text(pattern.get((x, y)), labels) for x in range(x0, x1 + 1)))
    return "\n".join(lines) + "\n"


def _cell_text(symbol: int | None, labels: tuple[str, ...] | None) -> str:
    if symbol is None:
        return "."
    if labels is not None:
        return labels[symbol]
    return str(symbol)
