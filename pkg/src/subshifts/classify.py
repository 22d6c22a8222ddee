"""The even-bicolor tileset census: symmetry orbits, minimality certification,
and the report checked against the published counts (36 / 8 / 2 / 6 / 28)."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .patterns import Pattern, empty_pattern
from .search import DEFAULT_BUDGET
from .sft import SftSpec, WangTile, lower_wang
from .verify import (
    Certificate,
    DescriptorWitness,
    InvalidWindow,
    PeriodicCompletion,
    Unknown,
    is_positive,
    prove_invalid,
    prove_valid_periodic,
    prove_valid_sweep,
)
from .zoo import EVEN_TILE_BITS, even_tiles

N_TILES = 8
FULL_MASK = (1 << N_TILES) - 1


def _tile_index() -> dict[tuple[int, int, int, int], int]:
    return {bits: i for i, bits in enumerate(EVEN_TILE_BITS)}


def _rotate(t):
    n, e, s, w = t
    return (e, s, w, n)


def _mirror(t):
    n, e, s, w = t
    return (n, w, s, e)


def _color_swap(t):
    return tuple(1 - c for c in t)


def _ns_swap(t):
    n, e, s, w = t
    return (1 - n, e, 1 - s, w)


def _ew_swap(t):
    n, e, s, w = t
    return (n, 1 - e, s, 1 - w)


#: Tile maps inducing weak conjugacies of the induced subshifts: the square's
#: symmetries plus the per-axis color complements (tile-wise relabelings that
#: preserve edge matching and evenness).
GENERATOR_NAMES = ("rotate90", "mirror", "color_swap", "ns_swap", "ew_swap")
_GENERATOR_FNS = {
    "rotate90": _rotate,
    "mirror": _mirror,
    "color_swap": _color_swap,
    "ns_swap": _ns_swap,
    "ew_swap": _ew_swap,
}


def _perm_of(fn) -> tuple[int, ...]:
    index = _tile_index()
    return tuple(index[tuple(fn(bits))] for bits in EVEN_TILE_BITS)


@dataclass(frozen=True)
class SymmetryGroup:
    """Closure of the chosen generators as permutations of the 8 even tiles."""

    generators: tuple[str, ...]
    permutations: tuple[tuple[int, ...], ...]

    @staticmethod
    def of(generators: Iterable[str]) -> "SymmetryGroup":
        gens = tuple(generators)
        for g in gens:
            if g not in _GENERATOR_FNS:
                raise ValueError(f"unknown generator {g!r}")
        perms = {tuple(range(N_TILES))}
        frontier = set(perms)
        gen_perms = [_perm_of(_GENERATOR_FNS[g]) for g in gens]
        while frontier:
            new = set()
            for p in frontier:
                for g in gen_perms:
                    q = tuple(g[p[i]] for i in range(N_TILES))
                    if q not in perms:
                        new.add(q)
            perms |= new
            frontier = new
        return SymmetryGroup(gens, tuple(sorted(perms)))

    def order(self) -> int:
        return len(self.permutations)

    def apply(self, mask: int, perm: Sequence[int]) -> int:
        out = 0
        for i in range(N_TILES):
            if mask >> i & 1:
                out |= 1 << perm[i]
        return out

    def orbit(self, mask: int) -> set[int]:
        return {self.apply(mask, p) for p in self.permutations}


def canonical_form(mask: int, group: SymmetryGroup) -> int:
    """Least mask in the orbit."""
    if not 0 < mask <= FULL_MASK:
        raise ValueError("mask must select a nonempty subset of the 8 even tiles")
    return min(group.apply(mask, p) for p in group.permutations)


def orbit_count(group: SymmetryGroup) -> int:
    return len({canonical_form(m, group) for m in range(1, FULL_MASK + 1)})


def auto_group(target: int = 36) -> SymmetryGroup:
    """The largest generator subset whose orbit count matches the census checksum."""
    best = None
    for bits in product((0, 1), repeat=len(GENERATOR_NAMES)):
        names = tuple(n for n, b in zip(GENERATOR_NAMES, bits) if b)
        group = SymmetryGroup.of(names)
        if orbit_count(group) == target:
            if best is None or group.order() > best.order():
                best = group
    if best is None:
        raise RuntimeError(f"no generator subset yields {target} orbits")
    return best


# --- per-tileset certification -------------------------------------------------


def tiles_of_mask(mask: int) -> list[WangTile]:
    return [t for i, t in enumerate(even_tiles()) if mask >> i & 1]


def tile_ids_of_mask(mask: int) -> list[int]:
    return [i for i in range(N_TILES) if mask >> i & 1]


def spec_of_mask(mask: int) -> SftSpec:
    return lower_wang(tiles_of_mask(mask), name=f"even:{mask:08b}")


def is_empty_tileset(
    mask: int, window_n: int = 6, period_bound: int = 6, budget: int = DEFAULT_BUDGET
) -> Certificate:
    """InvalidWindow when some Q_n is untileable (empty subshift);
    PeriodicCompletion when a periodic tiling exists; Unknown otherwise."""
    spec = spec_of_mask(mask)
    positive = prove_valid_periodic(empty_pattern(2), spec, period_bound, budget)
    if is_positive(positive):
        return positive
    single = Pattern(2, {(0, 0): 0})
    negative = prove_invalid(single, spec, window_n, budget)
    if isinstance(negative, InvalidWindow):
        return negative
    return Unknown(None, "emptiness unresolved at these budgets")


@dataclass(frozen=True)
class UsabilityReport:
    usable: tuple[tuple[int, Certificate], ...]
    unusable: tuple[tuple[int, Certificate], ...]
    unknown: tuple[int, ...]


def unused_tiles(
    mask: int, window_n: int = 6, period_bound: int = 6, budget: int = DEFAULT_BUDGET
) -> UsabilityReport:
    """Partition the member tiles into usable / unusable / unknown, with certificates.

    A tile is unusable when the singleton pattern placing it at the origin has
    no admissible extension to a small window; usable when a periodic tiling
    contains it, or failing that a linear-sweep configuration (tiles that sit
    on a straight seam, such as staircases, have no periodic completion at
    all, so the sweep route is what closes those).
    """
    spec = spec_of_mask(mask)
    usable, unusable, unknown = [], [], []
    for local_id, tile_id in enumerate(tile_ids_of_mask(mask)):
        single = Pattern(2, {(0, 0): local_id})
        # the sweep route first: it settles both constant tilings and seam
        # tiles instantly, while exhausting all period boxes can be costly
        positive: Certificate = prove_valid_sweep(single, spec, bound=max(2, period_bound // 2))
        if not is_positive(positive):
            positive = prove_valid_periodic(single, spec, period_bound, budget)
        if is_positive(positive):
            usable.append((tile_id, positive))
            continue
        negative = prove_invalid(single, spec, window_n, budget)
        if isinstance(negative, InvalidWindow):
            unusable.append((tile_id, negative))
        else:
            unknown.append(tile_id)
    return UsabilityReport(tuple(usable), tuple(unusable), tuple(unknown))


# --- the census -------------------------------------------------------------------

#: Paper metadata for the minimal classes, keyed by the mask of the class
#: representative named in the text; the full per-class column assignment of
#: Tables 1-2 lives in unreadable figures and a companion article, so only the
#: classes the text identifies are tagged.  Never computed here.
_KNOWN_TAGS = {
    FULL_MASK: "L0",  # the wires tileset
    0b00111100: "L0",  # the corners tileset (tiles 1100, 0110, 0011, 1001)
}


@dataclass(frozen=True)
class ClassReport:
    mask: int  # canonical representative
    orbit_size: int
    verdict: str  # "Minimal" | "Empty" | "UnusedTiles" | "Unknown"
    emptiness: Certificate
    usability: UsabilityReport | None
    paper_tag: str | None
    window_n: int
    period_bound: int

    def unused_tile_ids(self) -> tuple[int, ...]:
        if self.usability is None:
            return ()
        return tuple(t for t, _ in self.usability.unusable)


def classify_even(
    group: SymmetryGroup | None = None,
    window_n: int = 6,
    period_bound: int = 6,
    budget: int = DEFAULT_BUDGET,
    escalation_cap: int = 12,
) -> list[ClassReport]:
    """Census of the 255 nonempty even-bicolor tilesets, one report per orbit.

    Budgets double (up to the cap) for any orbit whose verdict stays Unknown,
    so escalation is deterministic.  Reports are ordered by representative
    mask regardless of evaluation order.
    """
    if group is None:
        group = auto_group()
    orbits: dict[int, set[int]] = {}
    for mask in range(1, FULL_MASK + 1):
        orbits.setdefault(canonical_form(mask, group), set()).add(mask)
    tags = {canonical_form(m, group): tag for m, tag in _KNOWN_TAGS.items()}
    reports = []
    for rep in sorted(orbits):
        wn, pb = window_n, period_bound
        while True:
            report = _classify_one(rep, len(orbits[rep]), tags.get(rep), wn, pb, budget)
            if report.verdict != "Unknown" or (wn >= escalation_cap and pb >= escalation_cap):
                break
            wn = min(2 * wn, escalation_cap)
            pb = min(2 * pb, escalation_cap)
        reports.append(report)
    return reports


def _classify_one(
    rep: int, orbit_size: int, tag: str | None, window_n: int, period_bound: int, budget: int
) -> ClassReport:
    emptiness = is_empty_tileset(rep, window_n, period_bound, budget)
    if isinstance(emptiness, InvalidWindow):
        return ClassReport(rep, orbit_size, "Empty", emptiness, None, tag, window_n, period_bound)
    if not is_positive(emptiness):
        return ClassReport(rep, orbit_size, "Unknown", emptiness, None, tag, window_n, period_bound)
    usability = unused_tiles(rep, window_n, period_bound, budget)
    if usability.unknown:
        return ClassReport(rep, orbit_size, "Unknown", emptiness, usability, tag, window_n, period_bound)
    verdict = "UnusedTiles" if usability.unusable else "Minimal"
    return ClassReport(rep, orbit_size, verdict, emptiness, usability, tag, window_n, period_bound)


@dataclass(frozen=True)
class CensusSummary:
    classes: int
    empty: int
    unused: int
    minimal: int
    unknown: int
    orbit_size_total: int

    @property
    def nonminimal(self) -> int:
        return self.empty + self.unused


def census_summary(reports: Sequence[ClassReport]) -> CensusSummary:
    return CensusSummary(
        classes=len(reports),
        empty=sum(r.verdict == "Empty" for r in reports),
        unused=sum(r.verdict == "UnusedTiles" for r in reports),
        minimal=sum(r.verdict == "Minimal" for r in reports),
        unknown=sum(r.verdict == "Unknown" for r in reports),
        orbit_size_total=sum(r.orbit_size for r in reports),
    )


def _certificate_brief(cert: Certificate) -> str:
    if isinstance(cert, PeriodicCompletion):
        return "periodic" + "x".join(str(s) for s in cert.sizes)
    if isinstance(cert, InvalidWindow):
        lo, hi = cert.window.bounding_box()
        return f"untileable[{lo}..{hi}]"
    return "unknown"


def format_census(reports: Sequence[ClassReport], group: SymmetryGroup, tsv: bool = False) -> str:
    """Fixed-column census table plus the summary line."""
    rows = [("mask", "orbit", "verdict", "certificate", "paper")]
    for r in reports:
        detail = _certificate_brief(r.emptiness)
        if r.verdict == "UnusedTiles":
            detail = "unused:" + ",".join(f"{t}" for t in r.unused_tile_ids())
        rows.append((f"{r.mask:08b}", str(r.orbit_size), r.verdict, detail, r.paper_tag or "-"))
    s = census_summary(reports)
    footer = (
        f"group={'+'.join(group.generators)} order={group.order()} "
        f"classes={s.classes} nonminimal={s.nonminimal} "
        f"(empty={s.empty} unused={s.unused}) remaining={s.minimal}"
    )
    if tsv:
        return "\n".join("\t".join(row) for row in rows) + "\n" + footer + "\n"
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    return "\n".join(lines) + "\n" + footer + "\n"
