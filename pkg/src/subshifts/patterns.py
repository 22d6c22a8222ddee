"""Alphabets and finite patterns (partial symbol assignments on the lattice)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .geometry import Point, Region, add, row_major_key, sub


class ConflictError(ValueError):
    """Two patterns disagree on a shared cell."""

    def __init__(self, cell: Point, a: int, b: int):
        super().__init__(f"conflicting symbols {a} and {b} at cell {cell}")
        self.cell = cell


@dataclass(frozen=True)
class Alphabet:
    """Symbols are dense ids 0..n-1; labels are for display and file formats."""

    labels: tuple[str, ...]

    def __post_init__(self):
        if not self.labels:
            raise ValueError("alphabet must be non-empty")

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[int]:
        return iter(range(len(self.labels)))

    def label(self, symbol: int) -> str:
        return self.labels[symbol]

    def index(self, label: str) -> int:
        return self.labels.index(label)

    @staticmethod
    def of_size(n: int, prefix: str = "") -> "Alphabet":
        return Alphabet(tuple(f"{prefix}{i}" for i in range(n)))


class Pattern:
    """An immutable finite partial map from lattice cells to symbol ids."""

    __slots__ = ("dimension", "_entries", "_hash")

    def __init__(self, dimension: int, entries: Mapping[Point, int] | Iterable[tuple[Point, int]]):
        items = dict(entries)
        for p in items:
            if len(p) != dimension:
                raise ValueError(f"cell {p} has dimension {len(p)}, expected {dimension}")
        object.__setattr__(self, "dimension", dimension)
        object.__setattr__(self, "_entries", items)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Pattern is immutable")

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, cell: Point) -> bool:
        return cell in self._entries

    def __getitem__(self, cell: Point) -> int:
        return self._entries[cell]

    def get(self, cell: Point, default=None):
        return self._entries.get(cell, default)

    def cells(self) -> list[Point]:
        return sorted(self._entries, key=row_major_key)

    def items(self) -> list[tuple[Point, int]]:
        return [(c, self._entries[c]) for c in self.cells()]

    def domain(self) -> Region:
        return Region(frozenset(self._entries), self.dimension)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Pattern)
            and self.dimension == other.dimension
            and self._entries == other._entries
        )

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.dimension, frozenset(self._entries.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        body = ", ".join(f"{c}:{s}" for c, s in self.items())
        return f"Pattern(d={self.dimension}, {{{body}}})"

    def restrict(self, region: Region) -> "Pattern":
        return Pattern(self.dimension, {c: s for c, s in self._entries.items() if c in region})

    def extends(self, other: "Pattern") -> bool:
        return all(self.get(c) == s for c, s in other._entries.items())


def empty_pattern(dimension: int) -> Pattern:
    return Pattern(dimension, {})


def pattern_union(a: Pattern, b: Pattern) -> Pattern:
    """Union of two compatible patterns; raises ConflictError on disagreement."""
    if a.dimension != b.dimension:
        raise ValueError("dimension mismatch")
    merged = dict(a._entries)
    for c, s in b._entries.items():
        prev = merged.get(c)
        if prev is not None and prev != s:
            raise ConflictError(c, prev, s)
        merged[c] = s
    return Pattern(a.dimension, merged)


def shift_pattern(pattern: Pattern, p: Point) -> Pattern:
    """The shift action on patterns: domain moves to dom - p, values follow."""
    return Pattern(pattern.dimension, {sub(c, p): s for c, s in pattern._entries.items()})


def pattern_from_word(word: Iterable[int], start: int = 0) -> Pattern:
    """A 1D pattern laying out `word` on consecutive cells from `start`."""
    return Pattern(1, {(start + i,): s for i, s in enumerate(word)})


def word_from_pattern(pattern: Pattern, start: int, length: int) -> list[int]:
    return [pattern[(start + i,)] for i in range(length)]


# --- pattern file format: first line dim=<1|2>, then one "<x> [<y>] <symbol-id>" per line


def dumps_pattern(pattern: Pattern) -> str:
    lines = [f"dim={pattern.dimension}"]
    for cell, symbol in pattern.items():
        lines.append(" ".join(str(c) for c in cell) + f" {symbol}")
    return "\n".join(lines) + "\n"


def loads_pattern(text: str) -> Pattern:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("dim="):
        raise ValueError("pattern file must start with dim=<1|2>")
    dimension = int(lines[0][4:])
    if dimension not in (1, 2):
        raise ValueError("dim must be 1 or 2")
    entries: dict[Point, int] = {}
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != dimension + 1:
            raise ValueError(f"bad pattern line: {ln!r}")
        cell = tuple(int(v) for v in parts[:dimension])
        entries[cell] = int(parts[dimension])
    return Pattern(dimension, entries)
