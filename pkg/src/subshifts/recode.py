"""Structure-preserving recodings (higher power presentation, intertwining)
and narrow-function analysis (minimal input windows, narrowness radius)."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Mapping, Sequence

from .geometry import Point, Region
from .patterns import Alphabet, Pattern
from .sft import SftSpec


class MisalignedDomainError(ValueError):
    pass


class InsufficientPartDomainError(ValueError):
    pass


class BudgetExceededError(RuntimeError):
    pass


@dataclass(frozen=True)
class BlockVector:
    """Positive block sizes per axis; R_a is the product of [0, a_i - 1]."""

    a: tuple[int, ...]

    def __post_init__(self):
        if not self.a or any(c < 1 for c in self.a):
            raise ValueError("block sizes must be positive")

    @property
    def dimension(self) -> int:
        return len(self.a)

    def volume(self) -> int:
        v = 1
        for c in self.a:
            v *= c
        return v

    def rectangle(self) -> list[Point]:
        """Cells of R_a in row-major order (the super-symbol digit order)."""
        return sorted(product(*(range(c) for c in self.a)), key=lambda p: tuple(reversed(p)))

    def block_of(self, cell: Point) -> tuple[Point, Point]:
        q = tuple(c // s for c, s in zip(cell, self.a, strict=True))
        r = tuple(c % s for c, s in zip(cell, self.a, strict=True))
        return q, r

    def cell_of(self, q: Point, r: Point) -> Point:
        return tuple(s * b + o for b, o, s in zip(q, r, self.a, strict=True))


def block_alphabet(alphabet: Alphabet, a: BlockVector) -> Alphabet:
    """Super-symbols are R_a-patterns, encoded base-|alphabet| over row-major cells."""
    labels = []
    for digits in product(range(len(alphabet)), repeat=a.volume()):
        labels.append("|".join(alphabet.label(d) for d in digits))
    return Alphabet(tuple(labels))


def encode_block(values: Sequence[int], base: int) -> int:
    code = 0
    for v in reversed(values):
        code = code * base + v
    return code


def decode_block(code: int, base: int, volume: int) -> list[int]:
    out = []
    for _ in range(volume):
        out.append(code % base)
        code //= base
    return out


def higher_power_pattern(pattern: Pattern, a: BlockVector, alphabet: Alphabet) -> Pattern:
    """Reread a block-aligned pattern over the super-symbol alphabet.

    The domain must be a union of full blocks a*q + R_a; each block becomes one
    cell at q.  Bijective on its domain of definition.
    """
    if pattern.dimension != a.dimension:
        raise ValueError("dimension mismatch")
    base = len(alphabet)
    blocks: dict[Point, dict[Point, int]] = {}
    for cell, s in pattern.items():
        q, r = a.block_of(cell)
        blocks.setdefault(q, {})[r] = s
    rect = a.rectangle()
    out = {}
    for q, content in blocks.items():
        if len(content) != a.volume():
            missing = [r for r in rect if r not in content]
            raise MisalignedDomainError(f"block {q} is incomplete; missing offsets {missing}")
        out[q] = encode_block([content[r] for r in rect], base)
    return Pattern(pattern.dimension, out)


def lower_power_pattern(pattern: Pattern, a: BlockVector, alphabet: Alphabet) -> Pattern:
    """Inverse of higher_power_pattern: expand super-symbols back to cells."""
    base = len(alphabet)
    rect = a.rectangle()
    out = {}
    for q, code in pattern.items():
        for r, s in zip(rect, decode_block(code, base, a.volume())):
            out[a.cell_of(q, r)] = s
    return Pattern(pattern.dimension, out)


def higher_power_sft(spec: SftSpec, a: BlockVector) -> SftSpec:
    """The higher power presentation [X]_a as an SFT on the super-alphabet.

    For every forbidden pattern and every anchor residue in R_a, all
    super-symbol assignments on the touched block footprint whose decoding
    matches the forbidden occurrence become forbidden.  In-scope forbidden
    patterns span at most two adjacent blocks per axis, so footprints stay
    small.
    """
    if spec.dimension != a.dimension:
        raise ValueError("dimension mismatch")
    base = len(spec.alphabet)
    rect = a.rectangle()
    gamma = block_alphabet(spec.alphabet, a)
    forbidden: set[Pattern] = set()
    for f in spec.forbidden:
        cells = f.cells()
        for t in rect:
            placed = {tuple(c + o for c, o in zip(cell, t)): f[cell] for cell in cells}
            footprint = sorted(
                {a.block_of(cell)[0] for cell in placed}, key=lambda p: tuple(reversed(p))
            )
            shift = footprint[0]
            blocks = [tuple(b - s for b, s in zip(q, shift)) for q in footprint]
            # constrained (block, offset) -> symbol
            constraints: dict[Point, dict[Point, int]] = {q: {} for q in blocks}
            for cell, s in placed.items():
                q, r = a.block_of(cell)
                qn = tuple(b - sft for b, sft in zip(q, shift))
                constraints[qn][r] = s
            choices = []
            for q in blocks:
                fixed = constraints[q]
                opts = []
                for digits in product(range(base), repeat=a.volume()):
                    if all(digits[rect.index(r)] == s for r, s in fixed.items()):
                        opts.append(encode_block(digits, base))
                choices.append(opts)
            for combo in product(*choices):
                forbidden.add(Pattern(spec.dimension, dict(zip(blocks, combo))))
    return SftSpec(
        spec.dimension,
        gamma,
        tuple(sorted(forbidden, key=lambda p: tuple(p.items()))),
        name=f"{spec.name}^{list(a.a)}" if spec.name else "",
    )


def intertwine(parts: Mapping[Point, Pattern], a: BlockVector, window: Region) -> Pattern:
    """Interleave |R_a| patterns: output(a*q + r) = part_r(q)."""
    out = {}
    missing = []
    for cell in window:
        q, r = a.block_of(cell)
        part = parts.get(r)
        if part is None or q not in part:
            missing.append(cell)
            continue
        out[cell] = part[q]
    if missing:
        raise InsufficientPartDomainError(f"parts do not cover cells {sorted(missing)[:8]}")
    return Pattern(window.dimension, out)


def unintertwine(pattern: Pattern, a: BlockVector) -> dict[Point, Pattern]:
    """Split a pattern into its |R_a| interleaved components."""
    parts: dict[Point, dict[Point, int]] = {tuple(r): {} for r in a.rectangle()}
    for cell, s in pattern.items():
        q, r = a.block_of(cell)
        parts[r][q] = s
    return {r: Pattern(pattern.dimension, entries) for r, entries in parts.items()}


# --- narrow functions ---------------------------------------------------------


@dataclass(frozen=True)
class FiniteFunctionSpec:
    """A finite restriction of a function A^E -> B^F: total table over the support."""

    input_size: int
    support: tuple[Point, ...]
    outputs: tuple[Point, ...]
    table: Mapping[tuple[int, ...], tuple[int, ...]]

    def __post_init__(self):
        want = self.input_size ** len(self.support)
        if len(self.table) != want:
            raise ValueError(f"table must be total: has {len(self.table)} of {want} rows")
        for key, val in self.table.items():
            if len(val) != len(self.outputs):
                raise ValueError("output rows must cover all output cells")

    @staticmethod
    def from_callable(
        fn: Callable[[Mapping[Point, int]], Mapping[Point, int]],
        input_size: int,
        support: Sequence[Point],
        outputs: Sequence[Point],
    ) -> "FiniteFunctionSpec":
        support = tuple(tuple(p) for p in support)
        outputs = tuple(tuple(p) for p in outputs)
        table = {}
        for key in product(range(input_size), repeat=len(support)):
            result = fn(dict(zip(support, key)))
            table[key] = tuple(result[q] for q in outputs)
        return FiniteFunctionSpec(input_size, support, outputs, table)


def input_window(
    spec: FiniteFunctionSpec, output_cell: Point, budget: int = 1 << 22
) -> Region:
    """The essential input positions of one output cell.

    A position is essential when two inputs differing only there give
    different outputs at the cell; by the minimal-window property this set is
    the least determining set.
    """
    if spec.input_size ** len(spec.support) > budget:
        raise BudgetExceededError("input space too large for exhaustive window search")
    qi = spec.outputs.index(tuple(output_cell))
    essential = set()
    for key in spec.table:
        out = spec.table[key][qi]
        for ei, e in enumerate(spec.support):
            if e in essential:
                continue
            for alt in range(spec.input_size):
                if alt == key[ei]:
                    continue
                flipped = key[:ei] + (alt,) + key[ei + 1 :]
                if spec.table[flipped][qi] != out:
                    essential.add(e)
                    break
    dim = len(spec.support[0]) if spec.support else 1
    return Region.of(essential, dim if essential else dim)


def narrowness_radius(spec: FiniteFunctionSpec, budget: int = 1 << 22) -> int:
    """Max input-window size over the output cells."""
    return max((len(input_window(spec, q, budget)) for q in spec.outputs), default=0)


# --- truth-table file format ---------------------------------------------------
# header lines `inputs <cells>` and `outputs <cells>` (cells as x or x,y),
# then one line per assignment: input symbols, then output symbols


def _fmt_cell(p: Point) -> str:
    return ",".join(str(c) for c in p)


def _parse_cell(s: str) -> Point:
    return tuple(int(v) for v in s.split(","))


def dumps_function(spec: FiniteFunctionSpec) -> str:
    lines = [
        "inputs " + " ".join(_fmt_cell(p) for p in spec.support),
        "outputs " + " ".join(_fmt_cell(p) for p in spec.outputs),
    ]
    for key in sorted(spec.table):
        row = " ".join(map(str, key)) + "  " + " ".join(map(str, spec.table[key]))
        lines.append(row)
    return "\n".join(lines) + "\n"


def loads_function(text: str, input_size: int | None = None) -> FiniteFunctionSpec:
    support: tuple[Point, ...] | None = None
    outputs: tuple[Point, ...] | None = None
    rows = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "inputs":
            support = tuple(_parse_cell(s) for s in parts[1:])
        elif parts[0] == "outputs":
            outputs = tuple(_parse_cell(s) for s in parts[1:])
        else:
            if support is None or outputs is None:
                raise ValueError("assignment lines must follow the header")
            values = [int(v) for v in parts]
            if len(values) != len(support) + len(outputs):
                raise ValueError(f"bad truth-table line: {raw!r}")
            rows[tuple(values[: len(support)])] = tuple(values[len(support) :])
    if support is None or outputs is None:
        raise ValueError("missing inputs/outputs header")
    if input_size is None:
        input_size = max((max(k) for k in rows if k), default=0) + 1
    return FiniteFunctionSpec(input_size, support, outputs, rows)
