"""The one-dimensional SFT pipeline: vertex shifts, graph powers, transitivity,
condensation, block descriptors and the two-stage walk generator."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Sequence

import numpy as np

from .patterns import Pattern
from .sft import SftSpec


class NTooSmallError(ValueError):
    pass


class NotTransitiveError(ValueError):
    pass


class NotFoundWithinCapError(RuntimeError):
    pass


class IllFormedDescriptorError(ValueError):
    pass


@dataclass(frozen=True)
class DirectedGraph:
    """A finite directed graph on dense vertex ids; loops allowed, no multi-edges."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range")

    @staticmethod
    def of(n: int, edges: Iterable[tuple[int, int]]) -> "DirectedGraph":
        return DirectedGraph(n, frozenset((u, v) for u, v in edges))

    def matrix(self) -> np.ndarray:
        m = np.zeros((self.n, self.n), dtype=bool)
        for u, v in self.edges:
            m[u, v] = True
        return m

    @staticmethod
    def from_matrix(m: np.ndarray) -> "DirectedGraph":
        us, vs = np.nonzero(m)
        return DirectedGraph(m.shape[0], frozenset(zip(us.tolist(), vs.tolist())))

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edges

    def successors(self, u: int) -> list[int]:
        return sorted(v for (a, v) in self.edges if a == u)


def _reach_positive(m: np.ndarray) -> np.ndarray:
    """Reachability by walks of length >= 1 (no reflexive seeding)."""
    n = m.shape[0]
    reach = m.copy()
    step = m.copy()
    for _ in range(n):
        new = reach | (step @ m)
        if (new == reach).all():
            break
        step = step @ m
        reach = new
    return reach


def power_graph(graph: DirectedGraph, k: int) -> DirectedGraph:
    """Edges (u, v) with a walk of length exactly k from u to v."""
    if k < 1:
        raise ValueError("k must be >= 1")
    m = graph.matrix()
    result = np.eye(graph.n, dtype=bool)
    base = m
    e = k
    while e:  # boolean fast exponentiation
        if e & 1:
            result = result @ base
        base = base @ base
        e >>= 1
    return DirectedGraph.from_matrix(result)


def is_transitive(graph: DirectedGraph) -> bool:
    """Whether every nonempty walk is shortcut by an edge."""
    m = graph.matrix()
    reach = _reach_positive(m)
    return bool((reach <= m).all())


def _cycle_length_lcm(graph: DirectedGraph) -> int:
    """lcm of one shortest-circuit length through each circuit vertex."""
    m = graph.matrix()
    lcm = 1
    power = m.copy()
    lengths = {}
    for length in range(1, graph.n + 1):
        for u in range(graph.n):
            if power[u, u] and u not in lengths:
                lengths[u] = length
        power = power @ m
    for length in lengths.values():
        lcm = math.lcm(lcm, length)
    return lcm


def default_transitive_cap(graph: DirectedGraph) -> int:
    """Deterministic search cap derived from the existence proof's ingredients."""
    return min(10**4, max(64, 2 * _cycle_length_lcm(graph) * max(graph.n, 1) ** 2))


def transitive_power(graph: DirectedGraph, cap: int | None = None) -> int:
    """Least k <= cap with G^k transitive; the search certifies its own answer."""
    if cap is None:
        cap = default_transitive_cap(graph)
    if cap < 1:
        raise ValueError("cap must be >= 1")
    m = graph.matrix()
    power = m.copy()
    for k in range(1, cap + 1):
        reach = _reach_positive(power)
        if (reach <= power).all():
            return k
        power = power @ m
    raise NotFoundWithinCapError(f"no transitive power found up to k={cap}")


# --- vertex shifts ----------------------------------------------------------------


def admissible_words(spec: SftSpec, length: int) -> list[tuple[int, ...]]:
    """1D words of the given length containing no forbidden occurrence."""
    if spec.dimension != 1:
        raise ValueError("admissible_words needs a 1D spec")
    shapes = spec.forbidden_shapes()
    out = []
    for word in product(range(len(spec.alphabet)), repeat=length):
        ok = True
        for offsets, vals in shapes:
            span = [off[0] for off in offsets]
            for anchor in range(length):
                cells = [anchor + s for s in span]
                if all(0 <= c < length for c in cells):
                    if tuple(word[c] for c in cells) in vals:
                        ok = False
                        break
            if not ok:
                break
        if ok:
            out.append(word)
    return out


@dataclass(frozen=True)
class VertexShift:
    """A vertex-shift presentation of a 1D SFT with its conjugacy dictionary."""

    graph: DirectedGraph
    words: tuple[tuple[int, ...], ...]  # vertex id -> length-n word
    word_length: int

    def vertex_of(self, word: Sequence[int]) -> int:
        return self.words.index(tuple(word))

    def walk_of_word(self, word: Sequence[int]) -> list[int]:
        """Conjugacy: a valid word of length >= n maps to a walk of its n-windows."""
        n = self.word_length
        if len(word) < n:
            raise ValueError(f"word must have length >= {n}")
        return [self.vertex_of(word[i : i + n]) for i in range(len(word) - n + 1)]

    def word_of_walk(self, walk: Sequence[int]) -> list[int]:
        if not walk:
            return []
        first = list(self.words[walk[0]])
        for v in walk[1:]:
            first.append(self.words[v][-1])
        return first


def to_vertex_shift(spec: SftSpec, n: int) -> VertexShift:
    """Vertices are admissible length-n words, edges the (au, ub) overlaps."""
    longest = 0
    for f in spec.forbidden:
        lo, hi = f.domain().bounding_box()
        longest = max(longest, hi[0] - lo[0] + 1)
    if n < longest:
        raise NTooSmallError(f"n must be at least the longest forbidden length {longest}")
    words = admissible_words(spec, n)
    index = {w: i for i, w in enumerate(words)}
    edges = set()
    for w in words:
        for s in range(len(spec.alphabet)):
            succ = w[1:] + (s,)
            j = index.get(succ)
            if j is not None:
                edges.add((index[w], j))
    return VertexShift(DirectedGraph.of(len(words), edges), tuple(words), n)


# --- condensation ---------------------------------------------------------------------


@dataclass(frozen=True)
class CondensationResult:
    """SCC partition, condensation DAG with the loop-retention rule, and
    canonical representative maps f_C (identity on C, cyclic outside)."""

    sccs: tuple[tuple[int, ...], ...]  # sorted members; sccs ordered by least member
    dag: DirectedGraph
    scc_of: tuple[int, ...]

    def representative(self, scc_id: int, vertex: int) -> int:
        members = self.sccs[scc_id]
        if self.scc_of[vertex] == scc_id:
            return vertex
        return members[vertex % len(members)]


def _strongly_connected_components(graph: DirectedGraph) -> list[list[int]]:
    """Iterative Tarjan; components listed in a canonical order (by least member)."""
    n = graph.n
    adj = [graph.successors(u) for u in range(n)]
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, iter(adj[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            u, it = work[-1]
            advanced = False
            for v in it:
                if index[v] == -1:
                    index[v] = low[v] = counter
                    counter += 1
                    stack.append(v)
                    on_stack[v] = True
                    work.append((v, iter(adj[v])))
                    advanced = True
                    break
                if on_stack[v]:
                    low[u] = min(low[u], index[v])
            if advanced:
                continue
            work.pop()
            if work:
                pu = work[-1][0]
                low[pu] = min(low[pu], low[u])
            if low[u] == index[u]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == u:
                        break
                comps.append(sorted(comp))
    comps.sort(key=lambda c: c[0])
    return comps


def condensation(graph: DirectedGraph) -> CondensationResult:
    """Condensation of a transitive graph, keeping loops per the loop rule.

    An SCC keeps a loop exactly when its member vertices have loops in the
    source graph; in a transitive graph that is all-or-none per component.
    """
    if not is_transitive(graph):
        raise NotTransitiveError("condensation requires a transitive graph")
    comps = _strongly_connected_components(graph)
    scc_of = [0] * graph.n
    for ci, comp in enumerate(comps):
        for v in comp:
            scc_of[v] = ci
    dag_edges = set()
    for u, v in graph.edges:
        cu, cv = scc_of[u], scc_of[v]
        if cu != cv:
            dag_edges.add((cu, cv))
    for ci, comp in enumerate(comps):
        loops = [graph.has_edge(v, v) for v in comp]
        if any(loops) and not all(loops):
            raise NotTransitiveError("loop rule violated; graph cannot be transitive")
        if all(loops):
            dag_edges.add((ci, ci))
    dag = DirectedGraph.of(len(comps), dag_edges)
    return CondensationResult(tuple(tuple(c) for c in comps), dag, tuple(scc_of))


# --- block descriptors -----------------------------------------------------------------


@dataclass(frozen=True)
class BlockDescriptor:
    """A window restriction of an element of X_H: constant blocks along a DAG walk.

    labels[i] is the i-th block's SCC id; boundaries[i] is the first position
    of block i+1.  The first and last blocks extend beyond the window.
    """

    labels: tuple[int, ...]
    boundaries: tuple[int, ...]
    window: tuple[int, int]

    def __post_init__(self):
        if len(self.boundaries) != len(self.labels) - 1:
            raise IllFormedDescriptorError("need exactly one boundary between consecutive blocks")
        if any(b0 >= b1 for b0, b1 in zip(self.boundaries, self.boundaries[1:])):
            raise IllFormedDescriptorError("boundaries must strictly increase")
        n0, n1 = self.window
        if self.boundaries and not (n0 < self.boundaries[0] and self.boundaries[-1] <= n1):
            raise IllFormedDescriptorError("boundaries must lie inside the window")

    def label_at(self, n: int) -> int:
        i = 0
        for b in self.boundaries:
            if n >= b:
                i += 1
        return self.labels[i]


def enumerate_block_descriptors(
    dag: DirectedGraph, window: tuple[int, int], max_blocks: int
) -> list[BlockDescriptor]:
    """All window-distinguishable block descriptors with at most max_blocks blocks.

    Walks in the condensation (loops included) of the window's length are
    exactly the label sequences; runs of length >= 2 need a loop edge, which
    the walk constraint enforces by itself.
    """
    n0, n1 = window
    length = n1 - n0 + 1
    if length <= 0:
        raise ValueError("window must be nonempty")
    out = []
    seqs: list[tuple[int, ...]] = [(v,) for v in range(dag.n)]
    for _ in range(length - 1):
        seqs = [s + (v,) for s in seqs for v in range(dag.n) if dag.has_edge(s[-1], v)]
    for seq in seqs:
        labels = [seq[0]]
        bounds = []
        for i in range(1, length):
            if seq[i] != seq[i - 1]:
                labels.append(seq[i])
                bounds.append(n0 + i)
        if len(labels) <= max_blocks:
            out.append(BlockDescriptor(tuple(labels), tuple(bounds), window))
    return out


# --- the two-stage walk generator ---------------------------------------------------------


@dataclass(frozen=True)
class HigherBlockAlphabet:
    """Length-k walks of G as super-symbols, with the partial expansion maps."""

    k: int
    walks: tuple[tuple[int, ...], ...]  # lexicographic

    @staticmethod
    def of(graph: DirectedGraph, k: int) -> "HigherBlockAlphabet":
        walks: list[tuple[int, ...]] = [(v,) for v in range(graph.n)]
        for _ in range(k - 1):
            walks = [w + (v,) for w in walks for v in range(graph.n) if graph.has_edge(w[-1], v)]
        return HigherBlockAlphabet(k, tuple(sorted(walks)))

    def restricted(self, graph: DirectedGraph, u: int, v: int) -> tuple[tuple[int, ...], ...]:
        """Sigma_{u,v}: walks starting at u whose last vertex has an edge to v."""
        return tuple(w for w in self.walks if w[0] == u and graph.has_edge(w[-1], v))

    def expand(self, graph: DirectedGraph, u: int, v: int, symbol_index: int) -> tuple[int, ...]:
        """f_{u,v}: identity on Sigma_{u,v}, cyclic surjection from outside."""
        allowed = self.restricted(graph, u, v)
        if not allowed:
            raise IllFormedDescriptorError(f"no length-{self.k} walk from {u} compatible with {v}")
        sigma = self.walks[symbol_index % len(self.walks)]
        if sigma in allowed:
            return sigma
        return allowed[symbol_index % len(allowed)]


def generate_walk(
    graph: DirectedGraph,
    k: int,
    descriptor: BlockDescriptor,
    coarse_stream: Callable[[int], int],
    fine_stream: Callable[[int], int],
    window: tuple[int, int],
) -> list[int] | None:
    """A valid walk in G over the window, driven by two symbol streams.

    Stage 1 picks a vertex of G^k per block position via the condensation
    representatives f_C; stage 2 expands each to a length-k walk in G via the
    maps f_{u,v}.  Returns None when the graph has empty language.
    """
    if graph.n == 0:
        return None
    power = power_graph(graph, k)
    cond = condensation(power)
    for label in descriptor.labels:
        if not 0 <= label < cond.dag.n:
            raise IllFormedDescriptorError(f"descriptor label {label} is not an SCC id")
    n0, n1 = window
    if n1 < n0:
        raise ValueError("empty window")
    blk0 = n0 // k
    blk1 = n1 // k
    # stage 1: one vertex of G^k per block, plus one successor block
    xs: dict[int, int] = {}
    for b in range(blk0, blk1 + 2):
        c = descriptor.label_at(b)
        xs[b] = cond.representative(c, coarse_stream(b) % graph.n)
    for b in range(blk0, blk1 + 1):
        ca, cb = descriptor.label_at(b), descriptor.label_at(b + 1)
        if ca == cb:
            if not cond.dag.has_edge(ca, ca):
                raise IllFormedDescriptorError(f"block {ca} repeats but has no loop")
        elif not cond.dag.has_edge(ca, cb):
            raise IllFormedDescriptorError(f"blocks {ca} -> {cb} not a condensation edge")
        if not power.has_edge(xs[b], xs[b + 1]):
            raise IllFormedDescriptorError("stage-1 vertices do not form a G^k walk")
    # stage 2: expand every block to a length-k walk in G
    blocks = HigherBlockAlphabet.of(graph, k)
    if not blocks.walks:
        return None
    cells: dict[int, int] = {}
    for b in range(blk0, blk1 + 1):
        walk = blocks.expand(graph, xs[b], xs[b + 1], fine_stream(b))
        for i, vertex in enumerate(walk):
            cells[b * k + i] = vertex
    return [cells[i] for i in range(n0, n1 + 1)]


# --- graph file format: `vertices <n>` then `edge <u> <v>` lines ---------------------------


def dumps_graph(graph: DirectedGraph) -> str:
    lines = [f"vertices {graph.n}"]
    for u, v in sorted(graph.edges):
        lines.append(f"edge {u} {v}")
    return "\n".join(lines) + "\n"


def loads_graph(text: str) -> DirectedGraph:
    n = None
    edges = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "vertices" and len(parts) == 2:
            n = int(parts[1])
        elif parts[0] == "edge" and len(parts) == 3:
            edges.append((int(parts[1]), int(parts[2])))
        else:
            raise ValueError(f"bad graph line: {raw!r}")
    if n is None:
        raise ValueError("graph file must declare `vertices <n>`")
    return DirectedGraph.of(n, edges)
