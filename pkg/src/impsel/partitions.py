"""Ordered-partition graphs, their transition structure, and exact infeasibility
certificates.

A composition (s_1, ..., s_r) of n generates the graph on consecutive vertex
blocks where every vertex points to everything in its own and later blocks.
The number of labeled graphs isomorphic to that generated graph is the
multinomial n!/prod(s_i!), and the sum of those multiplicities over all 2^(n-1)
compositions counts weak orders.

Merging a singleton block into its left neighbor is a transition; transitions
pair up the (composition, block) terms of two inequality families - selection
mass at most 1, and full mass on nominated vertices when someone is nominated
by everybody - so that a signed multinomial-weighted combination cancels every
variable while the constants sum to an odd negative number.  The resulting
``Certificate`` is an exact-arithmetic proof object that no selection rule can
satisfy both families at once; the reductions at the bottom of the module
transport it to bounded-outdegree and no-abstention settings.

All arithmetic is arbitrary-precision integer or exact rational; floating
point never enters any comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Iterator, NamedTuple

from .graphs import CapExceeded, DirectedGraph

#: Composition streams are refused past this n by default (2^(n-1) growth).
COMPOSITION_CAP = 24

AT_MOST_ONE = "at_most_one"
AT_LEAST_ONE = "at_least_one"


@dataclass(frozen=True)
class OrderedPartition:
    """A composition of n: ordered positive parts summing to n."""

    parts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if not self.parts or any(p < 1 for p in self.parts):
            raise ValueError(f"parts must be positive integers, got {self.parts}")

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def r(self) -> int:
        return len(self.parts)

    @property
    def first_block_index(self) -> int:
        """Lowest block index carrying a constraint variable: 2 when the first
        block is a singleton (its vertex has indegree 0), else 1."""
        return 2 if self.parts[0] == 1 else 1

    @property
    def is_palindromic(self) -> bool:
        return self.parts == self.parts[::-1]

    def blocks(self) -> tuple[tuple[int, ...], ...]:
        """Consecutive vertex blocks: block i holds s_i vertices in order."""
        out = []
        start = 1
        for size in self.parts:
            out.append(tuple(range(start, start + size)))
            start += size
        return tuple(out)

    def __repr__(self) -> str:
        return f"OrderedPartition({self.parts})"


def enumerate_compositions(n: int, cap: int = COMPOSITION_CAP) -> Iterator[OrderedPartition]:
    """All 2^(n-1) compositions of n, in lexicographic order of the part tuple."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if n > cap:
        raise CapExceeded(f"n={n} exceeds composition cap {cap}")

    def rec(total: int) -> Iterator[tuple[int, ...]]:
        if total == 0:
            yield ()
            return
        for first in range(1, total + 1):
            for rest in rec(total - first):
                yield (first,) + rest

    for parts in rec(n):
        yield OrderedPartition(parts)


def lambda_of(p: OrderedPartition) -> int:
    """Number of labeled graphs isomorphic to the generated graph: n!/prod(s_i!)."""
    value = factorial(p.n)
    for part in p.parts:
        value //= factorial(part)
    return value


class FubiniResult(NamedTuple):
    value: int
    odd: bool


def fubini(n: int, cap: int = COMPOSITION_CAP) -> FubiniResult:
    """Number of weak orders on n elements: the multiplicity sum over all
    compositions of n.  The parity flag is part of the result because the
    certificate construction hinges on it being odd."""
    total = sum(lambda_of(p) for p in enumerate_compositions(n, cap))
    return FubiniResult(total, total % 2 == 1)


def graph_of_composition(p: OrderedPartition) -> DirectedGraph:
    """The generated graph: each vertex points to every other vertex in its own
    or a later block.  Vertex v in block i has indegree (s_1+...+s_i) - 1."""
    n = p.n
    starts = []
    acc = 1
    for size in p.parts:
        starts.extend([acc] * size)
        acc += size
    outs = tuple(
        frozenset(u for u in range(starts[v - 1], n + 1) if u != v) for v in range(1, n + 1)
    )
    return DirectedGraph(n, outs)


# ---------------------------------------------------------------------------
# transitions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransitionEdge:
    """A j-transition: the singleton block j of `source` merges into block j-1,
    which is exactly a rewrite of that single vertex's outgoing edges."""

    source: OrderedPartition
    target: OrderedPartition
    j: int


def transition_target(p: OrderedPartition, j: int) -> OrderedPartition:
    """Merge singleton block j (j >= 2) into block j-1."""
    if not 2 <= j <= p.r:
        raise ValueError(f"transition index {j} outside 2..{p.r}")
    if p.parts[j - 1] != 1:
        raise ValueError(f"block {j} of {p.parts} is not a singleton")
    parts = p.parts[: j - 2] + (p.parts[j - 2] + 1,) + p.parts[j:]
    return OrderedPartition(parts)


def transitions(n: int, cap: int = COMPOSITION_CAP) -> list[TransitionEdge]:
    """Every valid (source, j) pair contributes exactly one edge."""
    edges = []
    for p in enumerate_compositions(n, cap):
        for j in range(2, p.r + 1):
            if p.parts[j - 1] == 1:
                edges.append(TransitionEdge(p, transition_target(p, j), j))
    return edges


def _partner_term(p: OrderedPartition, i: int) -> tuple[OrderedPartition, int]:
    """The unique opposite-parity term (q, i') whose coefficient cancels (p, i).

    A singleton block i merges down (an i-transition from p, partner index
    i-1); a larger block i is the merge target of the unique split of p at i
    (an (i+1)-transition into p, partner index i+1).
    """
    if p.parts[i - 1] == 1:
        if i < 2:
            raise ValueError(f"block 1 of {p.parts} is a singleton and carries no variable")
        return transition_target(p, i), i - 1
    split = p.parts[: i - 1] + (p.parts[i - 1] - 1, 1) + p.parts[i:]
    return OrderedPartition(split), i + 1


@dataclass(frozen=True)
class StructureCheck:
    name: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class TransitionStructureReport:
    n: int
    edge_count: int
    checks: tuple[StructureCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)


def verify_transition_structure(n: int, cap: int = COMPOSITION_CAP) -> TransitionStructureReport:
    """Re-derive the three facts the certificate construction rests on.

    unique_partner: every term (composition, block index >= its variable floor)
        has exactly one partner term, found in the independently built edge
        list, and partnering is an involution.
    bipartite_by_parity: every transition changes the part count by one, so the
        transition graph is bipartite by parity of the part count.
    coefficient_identity: along every edge the multinomial-weighted block sizes
        agree: lambda(target) * target_part(j-1) = lambda(source) * source_part(j).
    """
    comps = list(enumerate_compositions(n, cap))
    edges = transitions(n, cap)
    by_source: dict[tuple[tuple[int, ...], int], list[TransitionEdge]] = {}
    by_target: dict[tuple[tuple[int, ...], int], list[TransitionEdge]] = {}
    for e in edges:
        by_source.setdefault((e.source.parts, e.j), []).append(e)
        by_target.setdefault((e.target.parts, e.j), []).append(e)

    problems = []
    for p in comps:
        for i in range(p.first_block_index, p.r + 1):
            q, i2 = _partner_term(p, i)
            if not q.first_block_index <= i2 <= q.r:
                problems.append(f"{p.parts} term {i}: partner index {i2} outside range of {q.parts}")
                continue
            if _partner_term(q, i2) != (p, i):
                problems.append(f"{p.parts} term {i}: partnering is not an involution")
            if p.parts[i - 1] == 1:
                hits = by_source.get((p.parts, i), [])
                if len(hits) != 1 or hits[0].target != q:
                    problems.append(f"{p.parts} term {i}: expected one {i}-transition to {q.parts}")
            else:
                hits = by_target.get((p.parts, i + 1), [])
                if len(hits) != 1 or hits[0].source != q:
                    problems.append(f"{p.parts} term {i}: expected one {i + 1}-transition from {q.parts}")
    unique = StructureCheck("unique_partner", not problems, "; ".join(problems))

    problems = [
        f"{e.source.parts} -> {e.target.parts}: part counts {e.source.r}, {e.target.r}"
        for e in edges
        if e.source.r != e.target.r + 1
    ]
    bipartite = StructureCheck("bipartite_by_parity", not problems, "; ".join(problems))

    problems = []
    for e in edges:
        left = lambda_of(e.target) * e.target.parts[e.j - 2]
        right = lambda_of(e.source) * e.source.parts[e.j - 1]
        if left != right:
            problems.append(f"{e.source.parts} -> {e.target.parts} (j={e.j}): {left} != {right}")
    identity = StructureCheck("coefficient_identity", not problems, "; ".join(problems))

    return TransitionStructureReport(n, len(edges), (unique, bipartite, identity))


# ---------------------------------------------------------------------------
# infeasibility certificate
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CertificateRow:
    """One inequality row: the composition's constraint, scaled by its
    multiplicity and signed by the parity of its part count."""

    composition: OrderedPartition
    lam: int
    sign: int
    sense: str

    @property
    def multiplier(self) -> int:
        return self.sign * self.lam


@dataclass(frozen=True)
class Certificate:
    """Signed multiplier system witnessing that no selection rule can both keep
    mass at most 1 everywhere and place full mass on nominated vertices
    whenever some vertex is nominated by everyone.

    ``cancellation_ok`` records that every variable's signed coefficient sums
    to zero across the system, verified pair by pair; ``rhs_total`` is the
    signed multiplicity sum, oriented negative (the alternate orientation is
    its negation).  Zero is impossible since the total multiplicity is odd.
    """

    n: int
    rows: tuple[CertificateRow, ...]
    rhs_total: int
    rhs_alternate: int
    sign_even_parts: int
    cancellation_ok: bool

    def multipliers(self) -> tuple[int, ...]:
        return tuple(row.multiplier for row in self.rows)


def build_certificate(n: int, cap: int = COMPOSITION_CAP) -> Certificate:
    """Construct and verify the infeasibility certificate for n >= 2."""
    if n < 2:
        raise ValueError(f"certificate needs n >= 2, got {n}")
    comps = list(enumerate_compositions(n, cap))
    lam = {p.parts: lambda_of(p) for p in comps}

    even_total = sum(lam[p.parts] for p in comps if p.r % 2 == 0)
    odd_total = sum(lam[p.parts] for p in comps if p.r % 2 == 1)
    plus_even = even_total - odd_total
    sign_even = 1 if plus_even < 0 else -1
    rhs_total = sign_even * even_total - sign_even * odd_total
    assert rhs_total < 0 and rhs_total % 2 != 0, f"signed total {rhs_total} must be odd and negative"

    rows = []
    for p in comps:
        sign = sign_even if p.r % 2 == 0 else -sign_even
        sense = AT_MOST_ONE if sign > 0 else AT_LEAST_ONE
        rows.append(CertificateRow(p, lam[p.parts], sign, sense))

    cancellation_ok = True
    for p in comps:
        sign = sign_even if p.r % 2 == 0 else -sign_even
        for i in range(p.first_block_index, p.r + 1):
            q, i2 = _partner_term(p, i)
            partner_sign = sign_even if q.r % 2 == 0 else -sign_even
            coefficient = sign * lam[p.parts] * p.parts[i - 1]
            partner_coefficient = partner_sign * lam[q.parts] * q.parts[i2 - 1]
            if (
                _partner_term(q, i2) != (p, i)
                or not q.first_block_index <= i2 <= q.r
                or coefficient + partner_coefficient != 0
            ):
                cancellation_ok = False

    return Certificate(
        n=n,
        rows=tuple(rows),
        rhs_total=rhs_total,
        rhs_alternate=-rhs_total,
        sign_even_parts=sign_even,
        cancellation_ok=cancellation_ok,
    )


# ---------------------------------------------------------------------------
# reductions
# ---------------------------------------------------------------------------


def composition_of_graph(graph: DirectedGraph) -> OrderedPartition | None:
    """Recover the generating composition, or None if the graph is not
    composition-generated.  Verified by full reconstruction."""
    parts: list[int] = []
    prev: int | None = None
    for d in graph.indegrees:
        if prev is not None and d == prev:
            parts[-1] += 1
        else:
            parts.append(1)
        prev = d
    candidate = OrderedPartition(tuple(parts))
    if graph_of_composition(candidate) == graph:
        return candidate
    return None


def reduce_add_isolated(graph: DirectedGraph, n_target: int) -> DirectedGraph:
    """Pad the vertex set to n_target with isolated vertices; edges unchanged.

    Carries a selection problem on few vertices into a larger instance whose
    outdegree bound is the original vertex count minus one.
    """
    if graph.n < 2:
        raise ValueError(f"need at least 2 vertices, got {graph.n}")
    if n_target < graph.n:
        raise ValueError(f"target {n_target} smaller than input {graph.n}")
    outs = graph.out_sets + tuple(frozenset() for _ in range(n_target - graph.n))
    return DirectedGraph(n_target, outs)


def reduce_add_inneighbors(graph: DirectedGraph, n_target: int) -> DirectedGraph:
    """Pad a composition-generated graph to n_target vertices u_1, u_2, ... that
    each nominate every original vertex; original vertices that nominated
    nobody now nominate u_1.

    Every vertex of the result nominates someone; each added vertex has
    outdegree equal to the original vertex count, u_1 has indegree at most 1,
    later added vertices have indegree 0, and every original vertex gains
    exactly n_target - k in-edges.
    """
    k = graph.n
    if k < 2:
        raise ValueError(f"need at least 2 vertices, got {k}")
    if composition_of_graph(graph) is None:
        raise ValueError("input graph is not composition-generated")
    if n_target < k + 1:
        raise ValueError(f"target {n_target} must exceed input size {k}")
    first_added = k + 1
    originals = frozenset(range(1, k + 1))
    outs = [
        outset | frozenset({first_added}) if not outset else outset for outset in graph.out_sets
    ]
    outs.extend(originals for _ in range(n_target - k))
    return DirectedGraph(n_target, tuple(outs))
