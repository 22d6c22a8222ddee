"""Finite regions of the integer lattice (dimension 1 or 2) under the Chebyshev metric.

Points are plain int tuples: ``(x,)`` in dimension 1, ``(x, y)`` in dimension 2.
All arithmetic is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator

Point = tuple[int, ...]


def add(p: Point, q: Point) -> Point:
    return tuple(a + b for a, b in zip(p, q, strict=True))


def sub(p: Point, q: Point) -> Point:
    return tuple(a - b for a, b in zip(p, q, strict=True))


def neg(p: Point) -> Point:
    return tuple(-a for a in p)


def scale(k: int, p: Point) -> Point:
    return tuple(k * a for a in p)


def chebyshev(p: Point, q: Point) -> int:
    return max(abs(a - b) for a, b in zip(p, q, strict=True))


def row_major_key(p: Point) -> Point:
    # rows (last coordinate) vary slowest, so 2D cells sort row by row
    return tuple(reversed(p))


@dataclass(frozen=True)
class Region:
    """A finite set of lattice points, all of the same dimension."""

    cells: frozenset[Point]
    dimension: int

    @staticmethod
    def of(points: Iterable[Point], dimension: int | None = None) -> "Region":
        cells = frozenset(tuple(p) for p in points)
        if dimension is None:
            if not cells:
                raise ValueError("dimension required for an empty region")
            dimension = len(next(iter(cells)))
        for p in cells:
            if len(p) != dimension:
                raise ValueError(f"point {p} has dimension {len(p)}, expected {dimension}")
        return Region(cells, dimension)

    def __contains__(self, p: Point) -> bool:
        return p in self.cells

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.sorted_cells())

    def sorted_cells(self) -> list[Point]:
        return sorted(self.cells, key=row_major_key)

    def union(self, other: "Region") -> "Region":
        if self.dimension != other.dimension:
            raise ValueError("dimension mismatch")
        return Region(self.cells | other.cells, self.dimension)

    def intersection(self, other: "Region") -> "Region":
        return Region(self.cells & other.cells, self.dimension)

    def difference(self, other: "Region") -> "Region":
        return Region(self.cells - other.cells, self.dimension)

    def isdisjoint(self, other: "Region") -> bool:
        return self.cells.isdisjoint(other.cells)

    def issubset(self, other: "Region") -> bool:
        return self.cells <= other.cells

    def translate(self, p: Point) -> "Region":
        return Region(frozenset(add(c, p) for c in self.cells), self.dimension)

    def diameter(self) -> int:
        if not self.cells:
            return 0
        pts = list(self.cells)
        return max(chebyshev(p, q) for p in pts for q in pts)

    def distance(self, other: "Region") -> int:
        if not self.cells or not other.cells:
            raise ValueError("distance to an empty region is undefined")
        return min(chebyshev(p, q) for p in self.cells for q in other.cells)

    def bounding_box(self) -> tuple[Point, Point]:
        if not self.cells:
            raise ValueError("empty region has no bounding box")
        lo = tuple(min(p[i] for p in self.cells) for i in range(self.dimension))
        hi = tuple(max(p[i] for p in self.cells) for i in range(self.dimension))
        return lo, hi


def cube(n: int, kind: str, dimension: int) -> Region:
    """The cube ``Q_n = [-n, n]^d`` or ``S_n = [0, n-1]^d``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if dimension not in (1, 2):
        raise ValueError("dimension must be 1 or 2")
    if kind == "Q":
        rng = range(-n, n + 1)
    elif kind == "S":
        rng = range(0, n)
    else:
        raise ValueError("kind must be 'Q' or 'S'")
    return Region(frozenset(product(rng, repeat=dimension)), dimension)


def box(lo: Point, hi: Point) -> Region:
    """All points p with lo <= p <= hi coordinatewise."""
    ranges = [range(a, b + 1) for a, b in zip(lo, hi, strict=True)]
    return Region(frozenset(product(*ranges)), len(lo))


def neighborhood(region: Region, r: int) -> Region:
    """Chebyshev r-dilation N(F, r) = {p : d(p, F) <= r}."""
    if r < 0:
        raise ValueError("r must be non-negative")
    if r == 0:
        return region
    offsets = list(product(range(-r, r + 1), repeat=region.dimension))
    cells = frozenset(add(c, o) for c in region.cells for o in offsets)
    return Region(cells, region.dimension)
