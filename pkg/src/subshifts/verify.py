"""Sound finite-window certificates for validity, independence, grafts and ramifications.

Validity of a finite pattern (appearing in some configuration of the subshift)
is undecidable in general, so every verdict here is tri-state:

* negative certificates are windows with no locally admissible completion,
  which by compactness rules out any extension to a configuration;
* positive certificates are explicit completions: a periodic configuration or
  a named closed-form descriptor;
* Unknown is an honest answer, never an error.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .generate import ConfigDescriptor
from .geometry import Point, Region, add, cube, neighborhood, scale
from .patterns import Pattern, dumps_pattern, pattern_union
from .search import (
    DEFAULT_BUDGET,
    BudgetExceededError,
    first_completion,
    iter_completions,
    iter_torus_fillings,
)
from .sft import SftSpec, locally_admissible


class MarginTooSmallError(ValueError):
    """The graft window does not exceed the modified neighborhood by the required margin."""


# --- certificates -------------------------------------------------------------


@dataclass(frozen=True)
class InvalidWindow:
    """No locally admissible extension of the pattern to `window` exists."""

    window: Region

    tag = "INVALID_WINDOW"


@dataclass(frozen=True)
class PeriodicCompletion:
    """An axis-aligned periodic configuration extending the pattern."""

    sizes: tuple[int, ...]
    fundamental: Pattern

    tag = "PERIODIC_COMPLETION"

    def periods(self) -> tuple[Point, ...]:
        d = len(self.sizes)
        return tuple(
            tuple(self.sizes[i] if j == i else 0 for j in range(d)) for i in range(d)
        )

    def eval(self, cell: Point) -> int:
        return self.fundamental[tuple(c % s for c, s in zip(cell, self.sizes, strict=True))]


@dataclass(frozen=True)
class DescriptorWitness:
    """A named closed-form configuration extending the pattern."""

    descriptor: ConfigDescriptor

    tag = "DESCRIPTOR_WITNESS"


@dataclass(frozen=True)
class Unknown:
    explored: Region | None = None
    reason: str = ""

    tag = "UNKNOWN"


Certificate = InvalidWindow | PeriodicCompletion | DescriptorWitness | Unknown


def is_positive(cert: Certificate) -> bool:
    return isinstance(cert, (PeriodicCompletion, DescriptorWitness))


def certificate_report(cert: Certificate) -> str:
    """Plain-text report: VERDICT line, window bounds or periods, fundamental pattern."""
    if isinstance(cert, InvalidWindow):
        lo, hi = cert.window.bounding_box()
        return (
            f"VERDICT {cert.tag}\n"
            f"window {' '.join(map(str, lo))} .. {' '.join(map(str, hi))}\n"
        )
    if isinstance(cert, PeriodicCompletion):
        periods = " ".join(",".join(map(str, p)) for p in cert.periods())
        return f"VERDICT {cert.tag}\nperiods {periods}\n" + dumps_pattern(cert.fundamental)
    if isinstance(cert, DescriptorWitness):
        return f"VERDICT {cert.tag}\ndescriptor {cert.descriptor!r}\n"
    return f"VERDICT {cert.tag}\n" + (f"explored {cert.explored}\n" if cert.explored else "")


# --- admissible-pattern enumeration -------------------------------------------


def enumerate_admissible(
    region: Region,
    spec: SftSpec,
    window: Region,
    budget: int = DEFAULT_BUDGET,
) -> tuple[list[Pattern], bool]:
    """All region-patterns extendable to a locally admissible window pattern.

    Returns (patterns, complete); `complete` is False when the node budget ran
    out, in which case the list is a sound partial result.  Output order is
    canonical: lexicographic in symbol ids over the region's row-major cells.
    """
    if not region.issubset(window):
        raise ValueError("region must be contained in the window")
    from itertools import product

    cells = region.sorted_cells()
    found: list[Pattern] = []
    complete = True
    for values in product(range(len(spec.alphabet)), repeat=len(cells)):
        candidate = Pattern(spec.dimension, dict(zip(cells, values)))
        if not locally_admissible(candidate, spec):
            continue
        try:
            if first_completion(spec, window, candidate, budget) is not None:
                found.append(candidate)
        except BudgetExceededError:
            complete = False
    return found, complete


# --- validity certificates ------------------------------------------------------


def _centered_window(pattern: Pattern, n: int) -> Region:
    lo, hi = pattern.domain().bounding_box()
    center = tuple((a + b) // 2 for a, b in zip(lo, hi))
    return cube(n, "Q", pattern.dimension).translate(center)


def _min_covering_n(pattern: Pattern) -> int:
    lo, hi = pattern.domain().bounding_box()
    center = tuple((a + b) // 2 for a, b in zip(lo, hi))
    return max(
        max(abs(a - c), abs(b - c)) for a, b, c in zip(lo, hi, center)
    )


def prove_invalid(
    pattern: Pattern, spec: SftSpec, max_n: int, budget: int = DEFAULT_BUDGET
) -> InvalidWindow | Unknown:
    """Search growing windows for one with no admissible completion.

    A window with no completion proves, by compactness, that no valid
    configuration extends the pattern.  Returns Unknown when every window up
    to Q_max_n still completes (or the budget runs out).
    """
    if len(pattern) == 0:
        return Unknown(None, "empty pattern is vacuously valid")
    if not locally_admissible(pattern, spec):
        return InvalidWindow(pattern.domain())
    explored = None
    for n in range(_min_covering_n(pattern), max_n + 1):
        window = _centered_window(pattern, n)
        try:
            if first_completion(spec, window, pattern, budget) is None:
                return InvalidWindow(window)
        except BudgetExceededError:
            return Unknown(explored, f"budget exhausted at window n={n}")
        explored = window
    return Unknown(explored, f"completions exist up to n={max_n}")


def _period_boxes(dimension: int, bound: int) -> Iterable[tuple[int, ...]]:
    if dimension == 1:
        for k in range(1, bound + 1):
            yield (k,)
    else:
        boxes = [(w, h) for w in range(1, bound + 1) for h in range(1, bound + 1)]
        boxes.sort(key=lambda wh: (wh[0] * wh[1], wh[1], wh[0]))
        yield from boxes


def _mod_consistent(pattern: Pattern, sizes: tuple[int, ...]) -> bool:
    seen: dict[tuple[int, ...], int] = {}
    for cell, s in pattern.items():
        key = tuple(c % m for c, m in zip(cell, sizes, strict=True))
        if seen.setdefault(key, s) != s:
            return False
    return True


def prove_valid_periodic(
    pattern: Pattern, spec: SftSpec, period_bound: int, budget: int = DEFAULT_BUDGET
) -> PeriodicCompletion | Unknown:
    """Look for a periodic configuration extending the pattern.

    Period boxes are tried in increasing area; the certificate is sound
    because admissibility is checked on the torus, where every plane
    occurrence of a forbidden pattern reduces to a wrapped anchor.
    """
    if len(pattern) > 0 and not locally_admissible(pattern, spec):
        raise ValueError("pattern is locally inadmissible; prove_valid_periodic needs an admissible pattern")
    ran_out = False
    for sizes in _period_boxes(spec.dimension, period_bound):
        if not _mod_consistent(pattern, sizes):
            continue
        try:
            for fundamental in iter_torus_fillings(spec, sizes, pattern, budget):
                return PeriodicCompletion(sizes, fundamental)
        except BudgetExceededError:
            ran_out = True
    reason = "budget exhausted" if ran_out else f"no periodic completion with periods <= {period_bound}"
    return Unknown(None, reason)


def sweep_admissible(sweep, spec: SftSpec) -> bool:
    """Exact global admissibility of a LinearSweep configuration.

    Cell values depend only on c = a*i + b*j, so a forbidden occurrence is a
    tuple of word values at c + w_k for the coefficient-weighted offsets w_k.
    The word is constant outside its middle, so checking every c in a bounded
    range covers all occurrence tuples that arise anywhere in the plane.
    """
    weights_all = []
    for offsets, vals in spec.forbidden_shapes():
        weights = tuple(
            sum(a * o for a, o in zip(sweep.coeffs, off, strict=True)) for off in offsets
        )
        weights_all.append((weights, vals))
    span = max((max(map(abs, w)) for w, _ in weights_all if w), default=0)
    lo = sweep.m0 - span - 1
    hi = sweep.m0 + len(sweep.middle) + span + 1
    for c in range(lo, hi + 1):
        for weights, vals in weights_all:
            if tuple(sweep.value_at(c + w) for w in weights) in vals:
                return False
    return True


def prove_valid_sweep(
    pattern: Pattern, spec: SftSpec, bound: int = 4
) -> DescriptorWitness | Unknown:
    """Look for an admissible linear-sweep configuration extending the pattern.

    Covers single-seam configurations (monotone rows, staircases) that admit
    no fully periodic completion.  The witness is exact: the sweep is checked
    with sweep_admissible and then against the pattern cell by cell.
    """
    from itertools import product as iproduct

    from .generate import LinearSweep
    from .search import _Problem

    if spec.dimension != 2:
        return Unknown(None, "sweep certificates are for 2D specs")
    k = len(spec.alphabet)
    directions = ((0, 1), (1, 0), (1, 1), (1, -1), (1, 2), (2, 1), (1, -2), (2, -1))
    shapes = spec.forbidden_shapes()
    for length in range(0, 2 * bound + 1):
        for coeffs in directions:
            for m0 in range(-bound, 1):
                # variables: 0 = left tail, 1 = right tail, 2.. = middle cells
                def var_of(c: int) -> int:
                    if c < m0:
                        return 0
                    if c >= m0 + length:
                        return 1
                    return 2 + c - m0

                prob = _Problem(2 + length, k, budget=10**6)
                weights_all = [
                    (
                        tuple(
                            sum(a * o for a, o in zip(coeffs, off, strict=True))
                            for off in offsets
                        ),
                        vals,
                    )
                    for offsets, vals in shapes
                ]
                span = max((max(map(abs, w)) for w, _ in weights_all if w), default=0)
                for c in range(m0 - span - 1, m0 + length + span + 2):
                    for weights, vals in weights_all:
                        cells = [var_of(c + w) for w in weights]
                        first = {}
                        keep = []
                        for pos, cell in enumerate(cells):
                            if cell not in first:
                                first[cell] = pos
                                keep.append(pos)
                        surviving = set()
                        for t in vals:
                            if all(t[pos] == t[first[cells[pos]]] for pos in range(len(cells))):
                                surviving.add(tuple(t[pos] for pos in keep))
                        if surviving:
                            prob.add_nogood([cells[pos] for pos in keep], surviving)
                ok = True
                for cell, s in pattern.items():
                    c = sum(a * x for a, x in zip(coeffs, cell, strict=True))
                    prob.fix(var_of(c), s)
                    if prob.infeasible:
                        ok = False
                        break
                if not ok:
                    continue
                for sol in prob.solutions():
                    sweep = LinearSweep(
                        coeffs, sol[0], sol[1], m0, tuple(sol[2:]), spec.name or None
                    )
                    if sweep_admissible(sweep, spec) and all(
                        sweep.eval(cell) == s for cell, s in pattern.items()
                    ):
                        return DescriptorWitness(sweep)
                    break
    return Unknown(None, f"no admissible sweep with seam width <= {2 * bound}")


def _wires_witness(pattern: Pattern) -> DescriptorWitness | None:
    # every corner-bit assignment generates a valid wires configuration, so a
    # successful inversion is a complete positive certificate
    from .generate import ParityObstructionError, WiresFromBits, wires_invert

    try:
        bits = wires_invert(pattern)
    except (ParityObstructionError, ValueError):
        return None
    return DescriptorWitness(WiresFromBits(bits))


def certify_pattern(
    pattern: Pattern,
    spec: SftSpec,
    max_n: int = 3,
    period_bound: int = 6,
    budget: int = DEFAULT_BUDGET,
) -> Certificate:
    """Positive, negative, or Unknown verdict for a single pattern."""
    if len(pattern) > 0 and not locally_admissible(pattern, spec):
        return InvalidWindow(pattern.domain())
    if spec.name == "wires" and len(pattern) > 0:
        witness = _wires_witness(pattern)
        if witness is not None:
            return witness
    positive = prove_valid_periodic(pattern, spec, period_bound, budget)
    if is_positive(positive):
        return positive
    negative = prove_invalid(pattern, spec, max_n, budget)
    if isinstance(negative, InvalidWindow):
        return negative
    return Unknown(None, f"open: {positive.reason}; {negative.reason}")


# --- independence ----------------------------------------------------------------


@dataclass(frozen=True)
class Independent:
    """Every pair of positively certified patterns on the two regions glues.

    The verdict is relative to the positively certified pattern sets: patterns
    whose validity stayed Unknown take no part in the pairing.
    """

    left: tuple[Pattern, ...]
    right: tuple[Pattern, ...]
    pair_certificates: tuple[tuple[Pattern, Pattern, Certificate], ...]


@dataclass(frozen=True)
class Correlated:
    left: Pattern
    right: Pattern
    left_certificate: Certificate
    right_certificate: Certificate
    joint_refutation: InvalidWindow


@dataclass(frozen=True)
class IndependenceUnknown:
    reason: str


IndependenceVerdict = Independent | Correlated | IndependenceUnknown


def independent(
    f_region: Region,
    g_region: Region,
    spec: SftSpec,
    window: Region | None = None,
    max_n: int = 4,
    period_bound: int = 6,
    budget: int = DEFAULT_BUDGET,
) -> IndependenceVerdict:
    """Certified independence of two disjoint regions.

    Enumerates window-extendable patterns on each region, certifies each one,
    then certifies every cross pair of positively certified patterns jointly.
    A jointly refuted pair yields Correlated; a pair that resists both
    certification routes yields Unknown.
    """
    if not f_region.isdisjoint(g_region):
        raise ValueError("regions must be disjoint")
    if window is None:
        margin = spec.max_forbidden_diameter + 2
        window = neighborhood(f_region.union(g_region), margin)

    def certified(region: Region) -> tuple[list[tuple[Pattern, Certificate]], bool]:
        candidates, complete = enumerate_admissible(region, spec, window, budget)
        out = []
        for pat in candidates:
            cert = certify_pattern(pat, spec, max_n, period_bound, budget)
            if is_positive(cert):
                out.append((pat, cert))
        return out, complete

    left, left_complete = certified(f_region)
    right, right_complete = certified(g_region)
    pair_certs = []
    unknown_pair = None
    for lp, lc in left:
        for rp, rc in right:
            joint = pattern_union(lp, rp)
            cert = certify_pattern(joint, spec, max_n, period_bound, budget)
            if isinstance(cert, InvalidWindow):
                return Correlated(lp, rp, lc, rc, cert)
            if not is_positive(cert):
                unknown_pair = (lp, rp)
            else:
                pair_certs.append((lp, rp, cert))
    if unknown_pair is not None:
        return IndependenceUnknown(f"pair {unknown_pair} resisted certification")
    if not (left_complete and right_complete):
        return IndependenceUnknown("pattern enumeration hit the node budget")
    return Independent(
        tuple(p for p, _ in left), tuple(p for p, _ in right), tuple(pair_certs)
    )


def weak_mixing_offset(
    spec: SftSpec,
    n: int,
    candidates: Iterable[Point],
    max_n: int = 4,
    period_bound: int = 6,
    budget: int = DEFAULT_BUDGET,
) -> Point | None:
    """First offset p among the candidates with S_n and p + S_n certified independent.

    Witnesses weak mixing at size n: the cube family is equivalent to the
    Q_n family up to translation, and matches the stacks witness family
    (S_m and (0, m+1) + S_m) exactly.
    """
    base = cube(n, "S", spec.dimension)
    for p in candidates:
        shifted = base.translate(p)
        if not base.isdisjoint(shifted):
            continue
        verdict = independent(base, shifted, spec, None, max_n, period_bound, budget)
        if isinstance(verdict, Independent):
            return p
    return None


# --- grafts ------------------------------------------------------------------------


@dataclass(frozen=True)
class Refuted:
    window: Region


@dataclass(frozen=True)
class Confirmed:
    completion: Pattern  # admissible window filling: the graft made explicit


@dataclass(frozen=True)
class GraftUnknown:
    reason: str


GraftVerdict = Refuted | Confirmed | GraftUnknown


def can_graft(
    config: ConfigDescriptor,
    pattern: Pattern,
    position: Point,
    r: int,
    spec: SftSpec,
    window: Region | None = None,
    budget: int = DEFAULT_BUDGET,
) -> GraftVerdict:
    """Can `pattern` be r-grafted into the configuration at `position`?

    The graft may change cells only inside N(position + F, r).  A window
    search that fixes the configuration outside that neighborhood is sound in
    both directions provided the window margin covers the largest forbidden
    diameter: refutation because any grafted configuration restricts to an
    admissible window filling, confirmation because a filling that matches the
    configuration on the margin splices into it without new forbidden
    occurrences.
    """
    target = pattern.domain().translate(position)
    modifiable = neighborhood(target, r)
    margin = max(spec.max_forbidden_diameter, 1)
    if window is None:
        window = neighborhood(modifiable, margin + 2)
    if not neighborhood(modifiable, margin).issubset(window):
        raise MarginTooSmallError(
            f"window must exceed N(p+F, r) by at least {margin} on every side"
        )
    fixed = {cell: config.eval(cell) for cell in window.difference(modifiable)}
    for q, s in pattern.items():
        fixed[add(q, position)] = s
    try:
        completion = first_completion(spec, window, fixed, budget)
    except BudgetExceededError:
        return GraftUnknown("node budget exhausted")
    if completion is None:
        return Refuted(window)
    return Confirmed(completion)


# --- ramification witnesses ----------------------------------------------------------


@dataclass(frozen=True)
class RamificationWitness:
    """Finite ramification data: grafts checked for lambda in [-K, K], mu in [1, K]."""

    config: ConfigDescriptor
    r: int
    u: Point
    v: Point
    f_region: Region
    beta: int = 1
    K: int = 2

    def __post_init__(self):
        if all(c == 0 for c in self.v) or all(c == 0 for c in self.u):
            raise ValueError("u and v must be nonzero")
        if self.beta < 1 or self.K < 1:
            raise ValueError("beta and K must be positive")


@dataclass(frozen=True)
class RamificationReport:
    witness: RamificationWitness
    verdicts: tuple[tuple[tuple[int, int], GraftVerdict], ...]
    config_admissible: bool

    @property
    def passed(self) -> bool:
        return self.config_admissible and all(
            isinstance(v, Refuted) for _, v in self.verdicts
        )

    def failures(self) -> list[tuple[int, int]]:
        return [cell for cell, v in self.verdicts if not isinstance(v, Refuted)]

    def summary(self) -> str:
        lines = [f"ramification r={self.witness.r} v={self.witness.v} u={self.witness.u} K={self.witness.K}"]
        if not self.config_admissible:
            lines.append("configuration FAILED local admissibility on a queried window")
        for (lam, mu), verdict in self.verdicts:
            lines.append(f"  lambda={lam:+d} mu={mu}: {type(verdict).__name__}")
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines)


def verify_ramification(
    witness: RamificationWitness,
    spec: SftSpec,
    budget: int = DEFAULT_BUDGET,
) -> RamificationReport:
    """Check every graft in the witness grid; PASS means all Refuted.

    For each lambda, mu the pattern appearing at lambda*beta*v + mu*beta*u is
    grafted at lambda*beta*v.  The configuration itself is also checked for
    local admissibility on every window used.
    """
    verdicts = []
    config_ok = True
    for lam in range(-witness.K, witness.K + 1):
        for mu in range(1, witness.K + 1):
            src = add(scale(lam * witness.beta, witness.v), scale(mu * witness.beta, witness.u))
            dst = scale(lam * witness.beta, witness.v)
            pat = Pattern(
                spec.dimension, {q: witness.config.eval(add(src, q)) for q in witness.f_region}
            )
            margin = max(spec.max_forbidden_diameter, 1) + 2
            window = neighborhood(
                neighborhood(witness.f_region.translate(dst), witness.r), margin
            )
            env = Pattern(spec.dimension, {c: witness.config.eval(c) for c in window})
            if not locally_admissible(env, spec):
                config_ok = False
            verdict = can_graft(
                witness.config, pat, dst, witness.r, spec, window, budget
            )
            verdicts.append(((lam, mu), verdict))
    return RamificationReport(witness, tuple(verdicts), config_ok)
