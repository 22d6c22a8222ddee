"""Exhaustive completion search over finite windows and tori.

Depth-first fill in row-major cell order with unit propagation against the
forbidden patterns.  Branches try symbols in id order, so the first solution
is the lexicographically least completion and enumeration order is canonical
across runs.  Constraint templates are cached per (spec, window) and cloned
per query, since the same windows are searched with many different pinned
cells.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterator, Mapping, Sequence

from .geometry import Point, Region, add
from .patterns import Pattern
from .sft import SftSpec

DEFAULT_BUDGET = 10**7


class BudgetExceededError(RuntimeError):
    """The node budget was exhausted before the search finished."""


class _Problem:
    """A finite CSP: one symbol per cell, forbidden exact assignments (nogoods)."""

    __slots__ = ("n_cells", "n_symbols", "full_mask", "domains", "assigned",
                 "nogoods", "watch", "budget", "nodes", "infeasible")

    def __init__(self, n_cells: int, n_symbols: int, budget: int):
        self.n_cells = n_cells
        self.n_symbols = n_symbols
        self.full_mask = (1 << n_symbols) - 1
        self.domains = [self.full_mask] * n_cells
        self.assigned: list[int | None] = [None] * n_cells
        # nogoods[i] = (cell index tuple, set of forbidden value tuples)
        self.nogoods: list[tuple[tuple[int, ...], set[tuple[int, ...]]]] = []
        self.watch: list[list[int]] = [[] for _ in range(n_cells)]
        self.budget = budget
        self.nodes = 0
        self.infeasible = False

    def clone(self, budget: int) -> "_Problem":
        # nogoods and watch lists are immutable during search, so share them
        p = _Problem.__new__(_Problem)
        p.n_cells = self.n_cells
        p.n_symbols = self.n_symbols
        p.full_mask = self.full_mask
        p.domains = list(self.domains)
        p.assigned = list(self.assigned)
        p.nogoods = self.nogoods
        p.watch = self.watch
        p.budget = budget
        p.nodes = 0
        p.infeasible = self.infeasible
        return p

    def add_nogood(self, cells: Sequence[int], values):
        vals = set(values)
        if not vals:
            return
        idx = len(self.nogoods)
        self.nogoods.append((tuple(cells), vals))
        for c in set(cells):
            self.watch[c].append(idx)

    def fix(self, cell: int, symbol: int):
        """Pin a cell before the search starts."""
        prev = self.assigned[cell]
        if prev is not None:
            if prev != symbol:
                self.infeasible = True
            return
        if not self._assign(cell, symbol, []):
            self.infeasible = True

    def _assign(self, cell: int, symbol: int, trail: list) -> bool:
        queue = [(cell, symbol)]
        while queue:
            c, v = queue.pop()
            cur = self.assigned[c]
            if cur is not None:
                if cur != v:
                    return False
                continue
            if not (self.domains[c] >> v) & 1:
                return False
            self.nodes += 1
            if self.nodes > self.budget:
                raise BudgetExceededError(f"search budget of {self.budget} nodes exhausted")
            trail.append((c, self.domains[c], None))
            self.domains[c] = 1 << v
            self.assigned[c] = v
            for ni in self.watch[c]:
                cells, vals = self.nogoods[ni]
                hole = -1
                for pos, cc in enumerate(cells):
                    if self.assigned[cc] is None:
                        if hole >= 0:
                            hole = -2
                            break
                        hole = pos
                if hole == -2:
                    continue
                if hole == -1:
                    if tuple(self.assigned[cc] for cc in cells) in vals:
                        return False
                    continue
                banned = 0
                for t in vals:
                    if all(
                        self.assigned[cells[pos]] == t[pos]
                        for pos in range(len(cells))
                        if pos != hole
                    ):
                        banned |= 1 << t[hole]
                if not banned:
                    continue
                hc = cells[hole]
                old = self.domains[hc]
                new = old & ~banned
                if new != old:
                    trail.append((hc, old, self.assigned[hc]))
                    self.domains[hc] = new
                    if new == 0:
                        return False
                    if new & (new - 1) == 0:
                        queue.append((hc, new.bit_length() - 1))
        return True

    def _undo(self, trail: list):
        for c, old_domain, old_assigned in reversed(trail):
            self.domains[c] = old_domain
            self.assigned[c] = old_assigned

    def solutions(self) -> Iterator[list[int]]:
        """All consistent total assignments, in lexicographic order."""
        if self.infeasible:
            return
        yield from self._dfs(0)

    def _dfs(self, start: int) -> Iterator[list[int]]:
        i = start
        while i < self.n_cells and self.assigned[i] is not None:
            i += 1
        if i == self.n_cells:
            yield list(self.assigned)
            return
        domain = self.domains[i]
        for s in range(self.n_symbols):
            if not (domain >> s) & 1:
                continue
            trail: list = []
            try:
                if self._assign(i, s, trail):
                    yield from self._dfs(i + 1)
            finally:
                self._undo(trail)


def _as_entries(fixed) -> list[tuple[Point, int]]:
    if fixed is None:
        return []
    if isinstance(fixed, Pattern):
        return fixed.items()
    return list(dict(fixed).items())


@lru_cache(maxsize=512)
def _window_template(spec: SftSpec, window: Region) -> tuple[_Problem, tuple[Point, ...]]:
    cells = tuple(window.sorted_cells())
    index = {c: i for i, c in enumerate(cells)}
    prob = _Problem(len(cells), len(spec.alphabet), DEFAULT_BUDGET)
    for offsets, vals in spec.forbidden_shapes():
        for anchor in cells:
            idxs = []
            for off in offsets:
                j = index.get(add(anchor, off))
                if j is None:
                    break
                idxs.append(j)
            else:
                prob.add_nogood(idxs, vals)
    return prob, cells


def _mod_point(p: Point, sizes: tuple[int, ...]) -> Point:
    return tuple(a % s for a, s in zip(p, sizes, strict=True))


@lru_cache(maxsize=512)
def _torus_template(spec: SftSpec, sizes: tuple[int, ...]) -> tuple[_Problem, tuple[Point, ...]]:
    cells = tuple(
        sorted(product(*(range(s) for s in sizes)), key=lambda p: tuple(reversed(p)))
    )
    index = {c: i for i, c in enumerate(cells)}
    prob = _Problem(len(cells), len(spec.alphabet), DEFAULT_BUDGET)
    for offsets, vals in spec.forbidden_shapes():
        for anchor in cells:
            mapped = [_mod_point(add(anchor, off), sizes) for off in offsets]
            if len(set(mapped)) == len(mapped):
                prob.add_nogood([index[c] for c in mapped], vals)
                continue
            # wrap collisions: a forbidden tuple survives only if it is
            # self-consistent on cells that fold onto each other
            first_pos: dict[Point, int] = {}
            keep: list[int] = []
            for pos, cell in enumerate(mapped):
                if cell not in first_pos:
                    first_pos[cell] = pos
                    keep.append(pos)
            surviving = set()
            for t in vals:
                if all(t[pos] == t[first_pos[mapped[pos]]] for pos in range(len(mapped))):
                    surviving.add(tuple(t[pos] for pos in keep))
            if surviving:
                prob.add_nogood([index[mapped[pos]] for pos in keep], surviving)
    return prob, cells


def window_problem(
    spec: SftSpec, window: Region, fixed: Pattern | Mapping | None, budget: int
) -> tuple[_Problem, tuple[Point, ...]]:
    template, cells = _window_template(spec, window)
    prob = template.clone(budget)
    index = {c: i for i, c in enumerate(cells)}
    for cell, symbol in _as_entries(fixed):
        i = index.get(cell)
        if i is None:
            raise ValueError(f"fixed cell {cell} lies outside the window")
        spec.check_symbol(symbol)
        prob.fix(i, symbol)
        if prob.infeasible:
            break
    return prob, cells


def iter_completions(
    spec: SftSpec,
    window: Region,
    fixed: Pattern | Mapping | None = None,
    budget: int = DEFAULT_BUDGET,
) -> Iterator[Pattern]:
    """Locally admissible total assignments of the window extending `fixed`."""
    prob, cells = window_problem(spec, window, fixed, budget)
    for sol in prob.solutions():
        yield Pattern(spec.dimension, dict(zip(cells, sol)))


def first_completion(
    spec: SftSpec,
    window: Region,
    fixed: Pattern | Mapping | None = None,
    budget: int = DEFAULT_BUDGET,
) -> Pattern | None:
    for pat in iter_completions(spec, window, fixed, budget):
        return pat
    return None


def torus_problem(
    spec: SftSpec, sizes: tuple[int, ...], fixed: Pattern | Mapping | None, budget: int
) -> tuple[_Problem, tuple[Point, ...]]:
    """Admissibility on the torus Z^d / (sizes): sound for fully periodic
    configurations, since every plane occurrence of a forbidden pattern
    reduces, modulo the period lattice, to an occurrence anchored in the
    fundamental domain."""
    template, cells = _torus_template(spec, sizes)
    prob = template.clone(budget)
    index = {c: i for i, c in enumerate(cells)}
    for cell, symbol in _as_entries(fixed):
        spec.check_symbol(symbol)
        prob.fix(index[_mod_point(cell, sizes)], symbol)
        if prob.infeasible:
            break
    return prob, cells


def iter_torus_fillings(
    spec: SftSpec,
    sizes: tuple[int, ...],
    fixed: Pattern | Mapping | None = None,
    budget: int = DEFAULT_BUDGET,
) -> Iterator[Pattern]:
    """Fundamental-domain patterns whose periodic extension is admissible and extends `fixed`."""
    prob, cells = torus_problem(spec, sizes, fixed, budget)
    for sol in prob.solutions():
        yield Pattern(spec.dimension, dict(zip(cells, sol)))
