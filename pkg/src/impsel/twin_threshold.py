"""Twin-threshold selection: traced runs, exact threshold validation, planning.

The mechanism iteratively deletes the outgoing edges of vertices whose
remaining indegree is at least the lower threshold t, from high indegree to
low (ties to the greater index), then selects the greatest-index vertex of
maximum remaining indegree provided that maximum reaches the upper threshold
T.  The full deletion trace is recorded so audits can re-derive every claim
about the run from first principles.

Threshold planning never floors a floating-point square root: the choice of t
and T for the single-nomination case is computed with integer square-root
predicates on scaled integers, and every certification decision is an exact
integer comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from ._deletion import run_deletion, select_top
from .graphs import DirectedGraph
from .mechanisms import Outcome


@dataclass(frozen=True)
class ThresholdPair:
    """Upper/lower threshold pair; valid for n when 1 <= t <= T <= n-1."""

    upper: int
    lower: int

    def __post_init__(self):
        if not 1 <= self.lower <= self.upper:
            raise ValueError(f"need 1 <= t <= T, got T={self.upper}, t={self.lower}")

    def validate_for(self, n: int) -> None:
        if self.upper > n - 1:
            raise ValueError(f"upper threshold {self.upper} exceeds n-1={n - 1}")


@dataclass(frozen=True, eq=False)
class DeletionTrace:
    """Full record of one run's iterated deletion phase.

    ``deletions`` holds one (iteration, vertex, degree_at_deletion) record per
    deletion, in iteration order.  ``istar`` maps every vertex to the iteration
    its outgoing edges were deleted, with the convention istar(v) =
    iteration_count for vertices never deleted.  ``dstar`` maps deleted
    vertices to their remaining indegree at the moment of deletion.
    """

    deletions: tuple[tuple[int, int, int], ...]
    final_degrees: tuple[int, ...]
    deleted_set: frozenset[int]
    iteration_count: int
    istar: dict[int, int] = field(repr=False)
    dstar: dict[int, int] = field(repr=False)

    def degree_at_deletion(self, v: int) -> int:
        """dstar extended to undeleted vertices by their final remaining indegree."""
        return self.dstar.get(v, self.final_degrees[v - 1])


def run_twin_threshold(graph: DirectedGraph, thresholds: ThresholdPair) -> tuple[Outcome, DeletionTrace]:
    """Run the mechanism and return the outcome together with its deletion trace."""
    thresholds.validate_for(graph.n)
    n = graph.n
    deg, deletions, _ = run_deletion(n, graph.out_tuples, thresholds.lower)
    selected = select_top(n, deg, thresholds.upper)
    iterations = len(deletions)
    istar = {v: iterations for v in range(1, n + 1)}
    dstar: dict[int, int] = {}
    for i, v, d in deletions:
        istar[v] = i
        dstar[v] = d
    trace = DeletionTrace(
        deletions=tuple(deletions),
        final_degrees=tuple(deg[1:]),
        deleted_set=frozenset(dstar),
        iteration_count=iterations,
        istar=istar,
        dstar=dstar,
    )
    outcome = Outcome(frozenset({selected}), graph.indegrees[selected - 1]) if selected else Outcome.none()
    return outcome, trace


def additive_gap(graph: DirectedGraph, outcome: Outcome) -> int:
    """Shortfall of the selected vertex's indegree against the maximum indegree.

    Recomputed from the graph; an empty selection counts as indegree 0.
    """
    v = outcome.vertex
    selected_indegree = graph.indegrees[v - 1] if v is not None else 0
    return graph.max_indegree - selected_indegree


# ---------------------------------------------------------------------------
# threshold validation and planning
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PlanReport:
    """Threshold pair with its exact impartiality certificate and gap bound.

    ``impartial_certified`` is the strict comparison of
    (T^2 + 3T + t - t^2)/2 against k(n+2), evaluated in exact integer
    arithmetic; ``alpha_bound`` is the guaranteed worst additive gap
    T + floor(kn/t) - 2.  ``degenerate`` marks plans whose raw thresholds fell
    outside 1..n-1 and were clamped; such a mechanism may never select.
    """

    n: int
    k: int
    thresholds: ThresholdPair
    condition_lhs: Fraction
    condition_rhs: int
    impartial_certified: bool
    alpha_bound: int
    degenerate: bool = False
    note: str = ""


def validate_thresholds(n: int, k: int, thresholds: ThresholdPair) -> PlanReport:
    """Exact impartiality check for a threshold pair on n-vertex graphs with
    outdegree bound k.

    Certifies when T^2 + 3T + t - t^2 > 2k(n+2); both sides are integers, so
    no floating point enters the comparison.
    """
    if not 1 <= k <= n - 1:
        raise ValueError(f"outdegree bound {k} outside 1..{n - 1}")
    thresholds.validate_for(n)
    upper, lower = thresholds.upper, thresholds.lower
    margin = upper * upper + 3 * upper + lower - lower * lower
    return PlanReport(
        n=n,
        k=k,
        thresholds=thresholds,
        condition_lhs=Fraction(margin, 2),
        condition_rhs=k * (n + 2),
        impartial_certified=margin > 2 * k * (n + 2),
        alpha_bound=upper + (k * n) // lower - 2,
    )


def _ceil_sqrt(n: int) -> int:
    return 1 + isqrt(n - 1) if n > 0 else 0


def plan_thresholds_k1(n: int) -> PlanReport:
    """Threshold plan for single-nomination graphs (outdegree bound 1).

    Picks t = ceil(sqrt(n)) and the largest T whose squared form stays within
    t^2 - t + 2n + 25/4; concretely T is the largest integer with
    (2T+1)^2 <= 4t^2 - 4t + 8n + 25, found by integer square root.  The
    resulting guarantee alpha = T + floor(n/t) - 2 satisfies alpha^2 <= 8n.
    When the raw t or T exceeds n-1 the plan is clamped and flagged degenerate
    instead of erroring.
    """
    if n < 2:
        raise ValueError(f"planning needs n >= 2, got {n}")
    t_raw = _ceil_sqrt(n)
    scaled = 4 * t_raw * t_raw - 4 * t_raw + 8 * n + 25
    upper_raw = (isqrt(scaled) - 1) // 2
    degenerate = t_raw > n - 1 or upper_raw > n - 1
    upper = min(upper_raw, n - 1)
    lower = min(t_raw, upper)
    report = validate_thresholds(n, 1, ThresholdPair(upper, lower))
    if degenerate:
        return PlanReport(
            n=n,
            k=1,
            thresholds=report.thresholds,
            condition_lhs=report.condition_lhs,
            condition_rhs=report.condition_rhs,
            impartial_certified=report.impartial_certified,
            alpha_bound=report.alpha_bound,
            degenerate=True,
            note=f"raw thresholds (T={upper_raw}, t={t_raw}) clamped to 1..{n - 1}; mechanism may never select",
        )
    assert report.impartial_certified, f"k=1 plan for n={n} failed its own certification"
    assert report.alpha_bound**2 <= 8 * n, f"k=1 plan for n={n} broke alpha^2 <= 8n"
    return report


def plan_thresholds_general(n: int, k: int, kappa: float, c: float) -> PlanReport:
    """Threshold plan for outdegree bound k <= c * n**kappa.

    Evaluates the real-valued targets T = (5/2) sqrt(c) n^((1+kappa)/2) - 1 and
    t = (1/2) sqrt(c) n^((1+kappa)/2), rounds T up and t down, clamps into
    1..n-1 with t <= T, and re-certifies the rounded pair exactly; the
    certification never relies on the real-valued formula.
    """
    if n < 2:
        raise ValueError(f"planning needs n >= 2, got {n}")
    if not 0 <= kappa <= 1:
        raise ValueError(f"kappa {kappa} outside [0, 1]")
    if c <= 0:
        raise ValueError(f"coefficient c must be positive, got {c}")
    if not 1 <= k <= n - 1:
        raise ValueError(f"outdegree bound {k} outside 1..{n - 1}")
    if k > c * n**kappa + 1e-9:
        raise ValueError(f"bound k={k} exceeds c*n^kappa = {c * n**kappa:.6g}")
    scale = math.sqrt(c) * n ** ((1 + kappa) / 2)
    upper_raw = math.ceil(2.5 * scale - 1)
    lower_raw = max(1, math.floor(scale / 2))
    degenerate = upper_raw > n - 1 or lower_raw > n - 1
    upper = min(upper_raw, n - 1)
    lower = min(lower_raw, upper)
    report = validate_thresholds(n, k, ThresholdPair(upper, lower))
    if degenerate:
        return PlanReport(
            n=n,
            k=k,
            thresholds=report.thresholds,
            condition_lhs=report.condition_lhs,
            condition_rhs=report.condition_rhs,
            impartial_certified=report.impartial_certified,
            alpha_bound=report.alpha_bound,
            degenerate=True,
            note=f"raw thresholds (T={upper_raw}, t={lower_raw}) clamped to 1..{n - 1}; mechanism may never select",
        )
    return report
