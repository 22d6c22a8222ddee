"""Local generation procedures and closed-form configuration descriptors.

Every generator is a pure function of its parameters: the symbol of a cell
never depends on evaluation order, so windows can be produced cell by cell
in any order (or in parallel) with identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Callable, Mapping, Sequence

from .geometry import Point, Region, add
from .patterns import Pattern
from .sft import WangTile
from . import zoo
from .zoo import BLACK, HLEFT, HRIGHT, VBOTTOM, VTOP, WHITE

_MASK64 = (1 << 64) - 1


def _mix64(z: int) -> int:
    # splitmix64 finalizer; the stability of this function is part of the
    # reproducibility contract for seeded generation
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def hash_bit(seed: int, cell: Point, salt: int = 0) -> int:
    h = _mix64(seed ^ (0x9E3779B97F4A7C15 * (salt + 1)))
    for c in cell:
        h = _mix64(h ^ (c & _MASK64))
    return h & 1


def hash_int(seed: int, n: int, salt: int = 0) -> int:
    """A 63-bit counter-based hash; used to drive symbol streams."""
    h = _mix64(seed ^ (0x9E3779B97F4A7C15 * (salt + 1)))
    h = _mix64(h ^ (n & _MASK64))
    return h >> 1


class BitSource:
    """An assignment of bits to lattice cells, evaluable cell by cell."""

    def bit(self, cell: Point) -> int:
        raise NotImplementedError


@dataclass(frozen=True)
class SeededBits(BitSource):
    """Counter-based pseudo-random bits: bit(cell) depends only on (seed, salt, cell)."""

    seed: int
    salt: int = 0

    def bit(self, cell: Point) -> int:
        return hash_bit(self.seed, cell, self.salt)


class ExplicitBits(BitSource):
    """Finitely many explicit bits with a default elsewhere."""

    __slots__ = ("_bits", "default")

    def __init__(self, bits: Mapping[Point, int], default: int = 0):
        self._bits = dict(bits)
        self.default = default

    @staticmethod
    def of(mapping: Mapping[Point, int], default: int = 0) -> "ExplicitBits":
        return ExplicitBits(mapping, default)

    def bit(self, cell: Point) -> int:
        return self._bits.get(cell, self.default)

    def as_dict(self) -> dict[Point, int]:
        return dict(self._bits)

    def __eq__(self, other):
        return (
            isinstance(other, ExplicitBits)
            and self._bits == other._bits
            and self.default == other.default
        )


class ParityObstructionError(ValueError):
    """The tiling is not in the image of the corner-bit rule: some cycle has odd parity."""


class PrecisionInsufficientError(ValueError):
    """An interval endpoint straddles an integer, so a floor cannot be decided."""


class RangeExceedsPrefixError(ValueError):
    pass


class InsufficientInputDomainError(ValueError):
    def __init__(self, missing: Sequence[Point]):
        super().__init__(f"input pattern is missing cells: {sorted(missing)}")
        self.missing = tuple(missing)


class IllFormedDescriptorError(ValueError):
    pass


# --- the wires tileset: tiles from bits at the four corners -----------------

_WIRE_TILES = zoo.wires_tileset()
_WIRE_INDEX = {tuple(t): i for i, t in enumerate(_WIRE_TILES)}


def wire_tile(b00: int, b10: int, b01: int, b11: int) -> int:
    """Tile id from the corner bits (lower-left, lower-right, upper-left, upper-right).

    Each edge gets the mod-2 sum of the bits at its endpoints, so the tile is
    always even and neighboring tiles agree on shared edges.
    """
    north = b01 ^ b11
    east = b10 ^ b11
    south = b00 ^ b10
    west = b00 ^ b01
    return _WIRE_INDEX[(north, east, south, west)]


def wires(bits: BitSource, window: Region) -> Pattern:
    """The wires tiling read off a corner-bit assignment, restricted to `window`."""
    entries = {}
    for (i, j) in window:
        entries[(i, j)] = wire_tile(
            bits.bit((i, j)), bits.bit((i + 1, j)), bits.bit((i, j + 1)), bits.bit((i + 1, j + 1))
        )
    return Pattern(2, entries)


def _edge_bits(symbol: int) -> WangTile:
    return _WIRE_TILES[symbol]


def wires_invert(pattern: Pattern, anchor_bit: int = 0) -> ExplicitBits:
    """Recover corner bits from a wires tiling on a connected window.

    The bit at the lexicographically least corner is `anchor_bit`; every other
    corner gets the parity of the black edges met on a path from the anchor.
    Raises ParityObstructionError if some cycle has odd black-edge count
    (the pattern is not in the image of the corner-bit rule).
    """
    cells = set(pattern.cells())
    if not cells:
        raise ValueError("empty pattern")
    corners: set[Point] = set()
    for (i, j) in cells:
        corners.update({(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)})

    def edge_parity(a: Point, b: Point) -> int | None:
        # parity of the tile edge between two adjacent corners, if some window
        # cell carries that edge
        (ax, ay), (bx, by) = a, b
        if ay == by:  # horizontal corner step: a south/north tile edge
            x = min(ax, bx)
            if (x, ay) in cells:
                return _edge_bits(pattern[(x, ay)]).south
            if (x, ay - 1) in cells:
                return _edge_bits(pattern[(x, ay - 1)]).north
        else:  # vertical corner step: a west/east tile edge
            y = min(ay, by)
            if (ax, y) in cells:
                return _edge_bits(pattern[(ax, y)]).west
            if (ax - 1, y) in cells:
                return _edge_bits(pattern[(ax - 1, y)]).east
        return None

    anchor = min(corners)
    bits: dict[Point, int] = {anchor: anchor_bit}
    frontier = [anchor]
    while frontier:
        a = frontier.pop()
        for d in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            b = add(a, d)
            if b not in corners:
                continue
            p = edge_parity(a, b)
            if p is None:
                continue
            want = bits[a] ^ p
            if b in bits:
                if bits[b] != want:
                    raise ParityObstructionError(f"odd cycle through corner {b}")
            else:
                bits[b] = want
                frontier.append(b)
    if len(bits) < len(corners):
        raise ValueError("window is not connected")
    # every edge must be consistent, including ones closing cycles
    for (i, j) in cells:
        if wire_tile(bits[(i, j)], bits[(i + 1, j)], bits[(i, j + 1)], bits[(i + 1, j + 1)]) != pattern[(i, j)]:
            raise ParityObstructionError(f"tile at {(i, j)} inconsistent with recovered bits")
    return ExplicitBits.of(bits)


# --- the corners tileset -----------------------------------------------------

_CORNER_INDEX = {tuple(t): i for i, t in enumerate(zoo.corners_tileset())}


def corner_symbol(a: int, b: int) -> int:
    return _CORNER_INDEX[tuple(zoo.corner_tile(a % 2, b % 2))]


def corners(k: int, l: int, a: BitSource, b: BitSource, window: Region) -> Pattern:
    """Corner tiling: the tile at (i, j) is t(a_i + l + j, b_j + k + i) mod 2."""
    entries = {}
    for (i, j) in window:
        entries[(i, j)] = corner_symbol(a.bit((i,)) + l + j, b.bit((j,)) + k + i)
    return Pattern(2, entries)


# --- Sturmian words ----------------------------------------------------------


@dataclass(frozen=True)
class Interval:
    """A rational enclosure [lo, hi] of a real number."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty interval")

    @staticmethod
    def exact(q) -> "Interval":
        f = Fraction(q)
        return Interval(f, f)

    def scale_add(self, n: int, other: "Interval") -> "Interval":
        a, b = n * self.lo, n * self.hi
        if a > b:
            a, b = b, a
        return Interval(a + other.lo, b + other.hi)


def sqrt_interval(n: int, digits: int = 40) -> Interval:
    """A tight rational enclosure of sqrt(n)."""
    scale = 10**digits
    root = isqrt(n * scale * scale)
    return Interval(Fraction(root, scale), Fraction(root + 1, scale))


def _as_interval(value) -> Interval:
    if isinstance(value, Interval):
        return value
    return Interval.exact(value)


def _floor_interval(iv: Interval) -> int:
    lo, hi = iv.lo.__floor__(), iv.hi.__floor__()
    if lo != hi:
        raise PrecisionInsufficientError(f"floor undecided on [{iv.lo}, {iv.hi}]")
    return lo


def _ceil_interval(iv: Interval) -> int:
    lo, hi = iv.lo.__ceil__(), iv.hi.__ceil__()
    if lo != hi:
        raise PrecisionInsufficientError(f"ceiling undecided on [{iv.lo}, {iv.hi}]")
    return lo


def sturmian(alpha, x, n0: int, n1: int, convention: str = "lower") -> list[int]:
    """The rotation word w_n = floor((n+1)a + x) - floor(na + x) on [n0, n1].

    `alpha` and `x` are exact rationals or Intervals; with the "upper"
    convention floors become ceilings.  All floors are decided exactly or a
    PrecisionInsufficientError is raised; no symbol is ever guessed.
    """
    if convention not in ("lower", "upper"):
        raise ValueError("convention must be 'lower' or 'upper'")
    a = _as_interval(alpha)
    xv = _as_interval(x)
    if not (0 < a.lo and a.hi < 1):
        raise ValueError("alpha must lie in (0, 1)")
    take = _floor_interval if convention == "lower" else _ceil_interval
    values = [take(a.scale_add(n, xv)) for n in range(n0, n1 + 2)]
    return [values[i + 1] - values[i] for i in range(len(values) - 1)]


# --- the separation-example map ----------------------------------------------


def separation_map(prefix: Sequence[int], p0: int, p1: int) -> list[int]:
    """Expand x_0 x_1 ... into ... x_2 x_2 x_2 x_1 x_1 x_0 x_1 x_1 x_2 x_2 x_2 ...

    Position 0 carries x_0 and the k-th block, of length k+1, carries x_k on
    each side; y is symmetric.
    """
    if p0 > p1:
        raise ValueError("empty range")
    m = len(prefix) - 1
    if m < 0:
        raise ValueError("prefix must be nonempty")
    limit = m * (m + 1) // 2
    out = []
    for p in range(p0, p1 + 1):
        q = abs(p)
        if q > limit:
            raise RangeExceedsPrefixError(f"position {p} needs a prefix longer than {m + 1}")
        if q == 0:
            out.append(prefix[0])
            continue
        k = 1
        while (k + 1) * (k + 2) // 2 <= q:
            k += 1
        out.append(prefix[k])
    return out


# --- local rules (sliding block codes in finite form) ------------------------


@dataclass(frozen=True)
class LocalRule:
    """A finite rule: output symbol from the input symbols at fixed offsets."""

    input_size: int
    output_size: int
    offsets: tuple[Point, ...]
    table: Mapping[tuple[int, ...], int]

    def __post_init__(self):
        want = self.input_size ** len(self.offsets)
        if len(self.table) != want:
            raise ValueError(f"rule table must be total: has {len(self.table)} of {want} rows")

    @staticmethod
    def from_callable(
        fn: Callable[[tuple[int, ...]], int],
        input_size: int,
        output_size: int,
        offsets: Sequence[Point],
    ) -> "LocalRule":
        from itertools import product

        offsets = tuple(tuple(o) for o in offsets)
        table = {key: fn(key) for key in product(range(input_size), repeat=len(offsets))}
        return LocalRule(input_size, output_size, offsets, table)


def apply_rule(rule: LocalRule, input_pattern: Pattern, window: Region) -> Pattern:
    missing = [
        add(p, off)
        for p in window
        for off in rule.offsets
        if add(p, off) not in input_pattern
    ]
    if missing:
        raise InsufficientInputDomainError(sorted(set(missing)))
    entries = {
        p: rule.table[tuple(input_pattern[add(p, off)] for off in rule.offsets)] for p in window
    }
    return Pattern(input_pattern.dimension, entries)


def wires_local_rule() -> LocalRule:
    """The wires generator as a local rule over corner bits."""
    offsets = ((0, 0), (1, 0), (0, 1), (1, 1))
    return LocalRule.from_callable(lambda key: wire_tile(*key), 2, len(_WIRE_TILES), offsets)


# --- closed-form configuration descriptors ------------------------------------


class ConfigDescriptor:
    """A total, deterministic description of an infinite configuration.

    eval(cell) must depend only on (parameters, cell); spec_name names the
    SftSpec the construction is admissible for, when there is one.
    """

    spec_name: str | None = None

    def eval(self, cell: Point) -> int:
        raise NotImplementedError

    def pattern(self, window: Region) -> Pattern:
        return Pattern(window.dimension, {p: self.eval(p) for p in window})


def descriptor_eval(descriptor: ConfigDescriptor, window: Region) -> Pattern:
    """The finite restriction of the described configuration."""
    return descriptor.pattern(window)


@dataclass(frozen=True)
class Constant(ConfigDescriptor):
    symbol: int
    spec_name: str | None = None

    def eval(self, cell: Point) -> int:
        return self.symbol


@dataclass(frozen=True)
class LatticePeriodic(ConfigDescriptor):
    """Periodic configuration with axis-aligned periods and a fundamental pattern."""

    sizes: tuple[int, ...]
    fundamental: Pattern
    spec_name: str | None = None

    def __post_init__(self):
        if any(s < 1 for s in self.sizes):
            raise IllFormedDescriptorError("periods must be positive")
        for p in self.fundamental.cells():
            if any(not 0 <= c < s for c, s in zip(p, self.sizes, strict=True)):
                raise IllFormedDescriptorError("fundamental pattern must live in the period box")

    def eval(self, cell: Point) -> int:
        return self.fundamental[tuple(c % s for c, s in zip(cell, self.sizes, strict=True))]


@dataclass(frozen=True)
class CheckerboardPhase(ConfigDescriptor):
    parity: int = 0
    spec_name: str | None = "checkerboard"

    def eval(self, cell: Point) -> int:
        i, j = cell
        return (i + j + self.parity) % 2


@dataclass(frozen=True)
class TriangleRamification(ConfigDescriptor):
    """Black right triangles repeated at every multiple of v on a white background.

    The triangle attached to position p covers p + {(x, y): -(r+1) <= x <= 0,
    0 <= y <= -x}: a column of height r+2 whose forcing, under the triangles
    rule, shrinks rightward and reaches the single cell p.  The column sits at
    Chebyshev distance r+1 from p, just outside every radius-r modification
    neighborhood of p, which is what makes the radius-r graft refutations go
    through.
    """

    r: int
    v: Point
    spec_name: str | None = "triangles"

    def __post_init__(self):
        if self.r < 0:
            raise IllFormedDescriptorError("r must be non-negative")
        if max(abs(c) for c in self.v) < self.r + 2:
            raise IllFormedDescriptorError("need |v| >= r + 2 to keep the triangles apart")

    def side(self) -> int:
        return self.r + 1

    def eval(self, cell: Point) -> int:
        x, y = cell
        v1, v2 = self.v
        side = self.side()
        for lam in _lattice_candidates(cell, self.v, side + 1):
            dx, dy = x - lam * v1, y - lam * v2
            if -side <= dx <= 0 and 0 <= dy <= -dx:
                return BLACK
        return WHITE


def _lattice_candidates(cell: Point, v: Point, reach: int):
    """Integers lam with lam*v within Chebyshev `reach` of cell in some axis."""
    x, y = cell
    v1, v2 = v
    if v2 != 0:
        base = (y - reach) / v2 if v2 > 0 else (y + reach) / v2
        top = (y + reach) / v2 if v2 > 0 else (y - reach) / v2
    else:
        base = (x - reach) / v1 if v1 > 0 else (x + reach) / v1
        top = (x + reach) / v1 if v1 > 0 else (x - reach) / v1
    return range(math.floor(base), math.ceil(top) + 1)


@dataclass(frozen=True)
class DominoRamification(ConfigDescriptor):
    """Diamonds of vertical dominoes with tips at every multiple of v, bricks elsewhere.

    The diamond with tip at p covers p + {(i, j): |i| + |j + r + 1/2| <= r + 1/2}
    (its widest rows, of width 2r+1, sit r and r+1 below the tip).  Every other
    cell lies on a half-row, filled with horizontal brick pairs anchored at the
    nearest diamond boundary of its row.
    """

    r: int
    v: Point | None = None
    spec_name: str | None = "dominoes"

    def __post_init__(self):
        if self.r < 1:
            raise IllFormedDescriptorError("r must be at least 1")
        if self.v is None:
            object.__setattr__(self, "v", (self.r, self.r + 2))
        v1, v2 = self.v
        if v2 == 0:
            raise IllFormedDescriptorError("v must have a vertical component")

    def _diamond_interval(self, lam: int, y: int) -> tuple[int, int] | None:
        """The x-interval of diamond lam on row y, or None."""
        v1, v2 = self.v
        dy = y - lam * v2
        if not -(2 * self.r + 1) <= dy <= 0:
            return None
        half = Fraction(2 * self.r + 1, 2) - abs(Fraction(2 * (dy + self.r) + 1, 2))
        w = int(half)  # half is a nonnegative half-integer; integer |i| <= half <=> |i| <= w
        return lam * v1 - w, lam * v1 + w

    def _row_intervals(self, y: int) -> list[tuple[int, int, int]]:
        _, v2 = self.v
        bounds = sorted((y / v2, (y + 2 * self.r + 1) / v2))
        out = []
        for lam in range(math.floor(bounds[0]) - 1, math.ceil(bounds[1]) + 2):
            iv = self._diamond_interval(lam, y)
            if iv is not None:
                out.append((iv[0], iv[1], lam))
        return sorted(out)

    def eval(self, cell: Point) -> int:
        x, y = cell
        v1, v2 = self.v
        intervals = self._row_intervals(y)
        for lo, hi, lam in intervals:
            if lo <= x <= hi:
                # inside a diamond: vertical halves, tops where (i + j) is even
                i, j = x - lam * v1, y - lam * v2
                return VTOP if (i + j) % 2 == 0 else VBOTTOM
        # on a brick half-row: pair away from the nearest diamond boundary
        left_end = None
        right_start = None
        for lo, hi, _ in intervals:
            if hi < x:
                left_end = hi if left_end is None else max(left_end, hi)
            if lo > x and right_start is None:
                right_start = lo
        if right_start is not None:
            return HLEFT if (right_start - x) % 2 == 0 else HRIGHT
        if left_end is not None:
            return HLEFT if (x - left_end) % 2 == 1 else HRIGHT
        # rows with no diamond do not occur for the default v = (r, r+2)
        return HLEFT if x % 2 == 0 else HRIGHT


@dataclass(frozen=True)
class WiresFromBits(ConfigDescriptor):
    bits: BitSource
    spec_name: str | None = "wires"

    def eval(self, cell: Point) -> int:
        i, j = cell
        return wire_tile(
            self.bits.bit((i, j)),
            self.bits.bit((i + 1, j)),
            self.bits.bit((i, j + 1)),
            self.bits.bit((i + 1, j + 1)),
        )


@dataclass(frozen=True)
class CornersConfig(ConfigDescriptor):
    k: int
    l: int
    a: BitSource
    b: BitSource
    spec_name: str | None = "corners"

    def eval(self, cell: Point) -> int:
        i, j = cell
        return corner_symbol(self.a.bit((i,)) + self.l + j, self.b.bit((j,)) + self.k + i)


@dataclass(frozen=True)
class StepRow(ConfigDescriptor):
    """1D monotone row: `low` strictly left of the threshold, `high` from it on."""

    threshold: int | None  # None means constant `low`
    low: int = WHITE
    high: int = BLACK
    spec_name: str | None = "xzbar1d"

    def eval(self, cell: Point) -> int:
        (x,) = cell
        if self.threshold is None:
            return self.low
        return self.high if x >= self.threshold else self.low


@dataclass(frozen=True)
class LinearSweep(ConfigDescriptor):
    """x(i, j) = word(a*i + b*j) for an eventually constant word.

    word(c) is `left` for c < m0, the explicit `middle` on [m0, m0 + len),
    and `right` beyond.  Global admissibility of such a configuration is a
    finite exact check (see verify.sweep_admissible), which makes the
    descriptor usable as a sound positive certificate for configurations with
    a single straight seam, e.g. staircase tilings that have no fully
    periodic completion.
    """

    coeffs: Point
    left: int
    right: int
    m0: int = 0
    middle: tuple[int, ...] = ()
    spec_name: str | None = None

    def __post_init__(self):
        if all(c == 0 for c in self.coeffs):
            raise IllFormedDescriptorError("sweep direction must be nonzero")

    def value_at(self, c: int) -> int:
        if c < self.m0:
            return self.left
        if c >= self.m0 + len(self.middle):
            return self.right
        return self.middle[c - self.m0]

    def eval(self, cell: Point) -> int:
        return self.value_at(sum(a * x for a, x in zip(self.coeffs, cell, strict=True)))


@dataclass(frozen=True)
class StackedRows(ConfigDescriptor):
    """2D configuration with an independent 1D descriptor per row."""

    rows: tuple[tuple[int, ConfigDescriptor], ...]
    default: ConfigDescriptor
    spec_name: str | None = None

    @staticmethod
    def of(
        rows: Mapping[int, ConfigDescriptor], default: ConfigDescriptor, spec_name: str | None = None
    ) -> "StackedRows":
        return StackedRows(tuple(sorted(rows.items())), default, spec_name)

    def eval(self, cell: Point) -> int:
        x, y = cell
        for row, desc in self.rows:
            if row == y:
                return desc.eval((x,))
        return self.default.eval((x,))
