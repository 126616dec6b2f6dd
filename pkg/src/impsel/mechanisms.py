"""Registry of deterministic selection mechanisms.

Every mechanism maps a graph to at most one vertex.  All of them are pure
functions of the input graph and never raise on degenerate inputs (n=1, no
edges): where the rule yields nothing they return the empty outcome.

Mechanism names and parameter syntax (the CLI contract):

    never              select nothing, always
    max-naive          greatest-index vertex of maximum indegree (always selects)
    follow:A           greatest-index out-neighbor of the fixed vertex A
    majority           the vertex with indegree >= floor(n/2)+1, if any
    naive-iter:t       iterated deletion at t, select top remaining >= t
    naive-sim:t        one-shot deletion at t, select top remaining >= t+1
    twin:T,t           iterated deletion at t, select top remaining >= T
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from ._deletion import indegree_array, select_top, twin_select
from .graphs import DirectedGraph

Kernel = Callable[[int, Sequence[Sequence[int]]], int]


@dataclass(frozen=True)
class Outcome:
    """Result of one mechanism run: at most one selected vertex.

    ``selected_indegree`` is the selected vertex's indegree in the input graph,
    with the empty-selection convention 0.
    """

    selected: frozenset[int]
    selected_indegree: int

    def __post_init__(self):
        object.__setattr__(self, "selected", frozenset(self.selected))
        if len(self.selected) > 1:
            raise ValueError(f"at most one vertex may be selected, got {sorted(self.selected)}")
        if not self.selected and self.selected_indegree != 0:
            raise ValueError("empty selection must report indegree 0")

    @property
    def vertex(self) -> int | None:
        return next(iter(self.selected)) if self.selected else None

    @classmethod
    def none(cls) -> "Outcome":
        return cls(frozenset(), 0)


def _outcome(graph: DirectedGraph, v: int) -> Outcome:
    if v == 0:
        return Outcome.none()
    return Outcome(frozenset({v}), graph.indegrees[v - 1])


def _check_threshold(t: int, n: int) -> None:
    if not 1 <= t <= n - 1:
        raise ValueError(f"threshold {t} outside 1..{n - 1}")


# ---------------------------------------------------------------------------
# kernels: (n, out-tuples) -> selected vertex id, 0 for none
# ---------------------------------------------------------------------------


def _never_kernel(n: int, outs: Sequence[Sequence[int]]) -> int:
    return 0


def _max_naive_kernel(n: int, outs: Sequence[Sequence[int]]) -> int:
    deg = indegree_array(n, outs)
    return select_top(n, deg, 0)


def _follow_kernel(anchor: int) -> Kernel:
    def kernel(n: int, outs: Sequence[Sequence[int]]) -> int:
        targets = outs[anchor - 1]
        return max(targets) if targets else 0

    return kernel


def _majority_kernel(n: int, outs: Sequence[Sequence[int]]) -> int:
    deg = indegree_array(n, outs)
    return select_top(n, deg, n // 2 + 1)


def _naive_sim_kernel(t: int) -> Kernel:
    def kernel(n: int, outs: Sequence[Sequence[int]]) -> int:
        deg = indegree_array(n, outs)
        high = [v for v in range(1, n + 1) if deg[v] >= t]
        remaining = list(deg)
        for v in high:
            for u in outs[v - 1]:
                remaining[u] -= 1
        return select_top(n, remaining, t + 1)

    return kernel


# ---------------------------------------------------------------------------
# public mechanisms
# ---------------------------------------------------------------------------


def select_never(graph: DirectedGraph) -> Outcome:
    """The constant mechanism: never selects."""
    return Outcome.none()


def select_max_indegree_naive(graph: DirectedGraph) -> Outcome:
    """Greatest-index vertex among those of maximum indegree; always selects.

    Deliberately manipulable: the fixed tie-breaking lets a top vertex change
    its own fate by redirecting its nomination.  Audit negative control.
    """
    return _outcome(graph, _max_naive_kernel(graph.n, graph.out_tuples))


def select_follow_fixed(graph: DirectedGraph, anchor: int = 1) -> Outcome:
    """Greatest-index out-neighbor of the fixed anchor vertex, if any.

    Never selects the anchor itself, so the anchor's own edges cannot affect
    its (non-)selection.
    """
    if not 1 <= anchor <= graph.n:
        raise ValueError(f"anchor {anchor} outside 1..{graph.n}")
    return _outcome(graph, _follow_kernel(anchor)(graph.n, graph.out_tuples))


def select_majority_threshold(graph: DirectedGraph) -> Outcome:
    """Select the vertex with indegree at least floor(n/2)+1, else nothing.

    On single-nomination graphs at most one vertex can qualify; on general
    inputs ties resolve to the greatest index so the mechanism stays total.
    """
    return _outcome(graph, _majority_kernel(graph.n, graph.out_tuples))


def select_naive_iterated(graph: DirectedGraph, t: int) -> Outcome:
    """Iterated deletion at threshold t, then select top remaining >= t.

    Equals the twin-threshold rule with both thresholds at t.  Not impartial;
    audit negative control.
    """
    _check_threshold(t, graph.n)
    return _outcome(graph, twin_select(graph.n, graph.out_tuples, t, t))


def select_naive_simultaneous(graph: DirectedGraph, t: int) -> Outcome:
    """One-shot deletion of the out-edges of all vertices with indegree >= t,
    then select top remaining >= t+1.  Not impartial; audit negative control.
    """
    _check_threshold(t, graph.n)
    return _outcome(graph, _naive_sim_kernel(t)(graph.n, graph.out_tuples))


def select_twin_threshold(graph: DirectedGraph, upper: int, lower: int) -> Outcome:
    """Twin-threshold selection without the deletion trace.

    The traced variant lives in :mod:`impsel.twin_threshold`; both share the
    same deletion core.
    """
    if not (1 <= lower <= upper <= graph.n - 1):
        raise ValueError(f"thresholds ({upper}, {lower}) invalid for n={graph.n}")
    return _outcome(graph, twin_select(graph.n, graph.out_tuples, upper, lower))


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

MECHANISM_NAMES = ("never", "max-naive", "follow", "majority", "naive-iter", "naive-sim", "twin")

_PARAM_COUNT = {
    "never": 0,
    "max-naive": 0,
    "follow": 1,
    "majority": 0,
    "naive-iter": 1,
    "naive-sim": 1,
    "twin": 2,
}


@dataclass(frozen=True)
class MechanismId:
    """A registry mechanism plus its integer parameters, e.g. twin:(4, 1)."""

    name: str
    params: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(self.params))
        if self.name not in _PARAM_COUNT:
            raise ValueError(f"unknown mechanism {self.name!r}; known: {', '.join(MECHANISM_NAMES)}")
        want = _PARAM_COUNT[self.name]
        if len(self.params) != want:
            raise ValueError(f"mechanism {self.name!r} takes {want} parameter(s), got {len(self.params)}")

    @classmethod
    def parse(cls, text: str) -> "MechanismId":
        """Parse the CLI syntax, e.g. 'never', 'follow:1', 'twin:4,1'."""
        name, _, rest = text.partition(":")
        params: tuple[int, ...] = ()
        if rest:
            try:
                params = tuple(int(p) for p in rest.split(","))
            except ValueError:
                raise ValueError(f"non-integer parameter in {text!r}") from None
        return cls(name, params)

    def text(self) -> str:
        if not self.params:
            return self.name
        return f"{self.name}:{','.join(str(p) for p in self.params)}"

    def validate_for(self, n: int) -> None:
        """Check parameter ranges against a target vertex count."""
        if self.name == "follow":
            (anchor,) = self.params
            if not 1 <= anchor <= n:
                raise ValueError(f"anchor {anchor} outside 1..{n}")
        elif self.name in ("naive-iter", "naive-sim"):
            (t,) = self.params
            _check_threshold(t, n)
        elif self.name == "twin":
            upper, lower = self.params
            if not 1 <= lower <= upper <= n - 1:
                raise ValueError(f"thresholds ({upper}, {lower}) invalid for n={n}")


def kernel_for(mid: MechanismId) -> Kernel:
    """Raw kernel for audit loops: (n, out-tuples) -> selected vertex or 0."""
    if mid.name == "never":
        return _never_kernel
    if mid.name == "max-naive":
        return _max_naive_kernel
    if mid.name == "follow":
        return _follow_kernel(mid.params[0])
    if mid.name == "majority":
        return _majority_kernel
    if mid.name == "naive-iter":
        t = mid.params[0]
        return lambda n, outs: twin_select(n, outs, t, t)
    if mid.name == "naive-sim":
        return _naive_sim_kernel(mid.params[0])
    if mid.name == "twin":
        upper, lower = mid.params
        return lambda n, outs: twin_select(n, outs, upper, lower)
    raise ValueError(f"unknown mechanism {mid.name!r}")


def resolve(mid: MechanismId) -> Callable[[DirectedGraph], Outcome]:
    """Graph-level callable for a registry mechanism."""
    kernel = kernel_for(mid)

    def mechanism(graph: DirectedGraph) -> Outcome:
        mid.validate_for(graph.n)
        return _outcome(graph, kernel(graph.n, graph.out_tuples))

    return mechanism
