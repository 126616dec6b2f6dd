"""Directed nomination graphs: data model, graph classes, enumeration, sampling, I/O.

Vertices are the integers 1..n and an edge (u, v) records that u nominates v.
Graphs are loop-free, unweighted and immutable.  Families of graphs with a
maximum-outdegree bound and/or a strictly-positive-outdegree requirement are
described by :class:`GraphClassSpec`, which also owns enumeration, deviation
generation and uniform sampling.

Enumeration order
-----------------
The admissible out-sets of a vertex are ordered lexicographically by their
sorted member tuple, abstention (the empty set) first when admissible.  For
targets {1, 2, 3} and no bound this gives

    (), (1,), (1, 2), (1, 2, 3), (1, 3), (2,), (2, 3), (3,).

A class is enumerated in lexicographic order of the per-vertex choice tuple,
the choice of vertex 1 varying slowest.  ``graph_at_index`` unranks the same
order, so index arithmetic can replace materialized streams.

Sampling
--------
``sample_graph`` draws each vertex's out-set uniformly and independently from
its admissible out-sets, for vertices 1..n in order.  Randomness comes from
the Philox4x64 counter-based generator (numpy's implementation) keyed with the
seed; uniform integers below m are obtained by rejection sampling on
big-endian 64-bit words.  A (spec, seed) pair therefore identifies one graph,
portably across machines and runs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import comb
from typing import Iterable, Iterator

import numpy as np

#: Refuse to enumerate classes larger than this unless the caller raises the cap.
ENUMERATION_CAP = 10**8


class GraphFormatError(ValueError):
    """Raised when a graph file is malformed; carries the offending line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class CapExceeded(RuntimeError):
    """Raised when an exhaustive operation would exceed its configured cap."""


# ---------------------------------------------------------------------------
# core data model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DirectedGraph:
    """Loop-free directed graph on vertices 1..n, immutable after construction.

    ``out_sets[v - 1]`` is the set of out-neighbors of vertex v.  Derived views
    (in-neighborhoods, degrees, edge list) are computed lazily and cached; the
    object is safe to share across threads.
    """

    n: int
    out_sets: tuple[frozenset[int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"vertex count must be positive, got {self.n}")
        object.__setattr__(self, "out_sets", tuple(frozenset(s) for s in self.out_sets))
        if len(self.out_sets) != self.n:
            raise ValueError(f"expected {self.n} out-sets, got {len(self.out_sets)}")
        for v, outs in enumerate(self.out_sets, start=1):
            for u in outs:
                if not isinstance(u, int) or not 1 <= u <= self.n:
                    raise ValueError(f"vertex {v} has out-neighbor {u!r} outside 1..{self.n}")
                if u == v:
                    raise ValueError(f"self-loop at vertex {v}")

    # ---- constructors ----

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "DirectedGraph":
        outs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not 1 <= u <= n or not 1 <= v <= n:
                raise ValueError(f"edge ({u}, {v}) outside 1..{n}")
            outs[u - 1].add(v)
        return cls(n, tuple(frozenset(s) for s in outs))

    @classmethod
    def empty(cls, n: int) -> "DirectedGraph":
        return cls(n, tuple(frozenset() for _ in range(n)))

    # ---- derived views ----

    @cached_property
    def out_tuples(self) -> tuple[tuple[int, ...], ...]:
        """Out-neighborhoods as sorted tuples; the form the audit kernels consume."""
        return tuple(tuple(sorted(s)) for s in self.out_sets)

    @cached_property
    def in_sets(self) -> tuple[frozenset[int], ...]:
        ins: list[set[int]] = [set() for _ in range(self.n)]
        for v, outs in enumerate(self.out_sets, start=1):
            for u in outs:
                ins[u - 1].add(v)
        return tuple(frozenset(s) for s in ins)

    @cached_property
    def indegrees(self) -> tuple[int, ...]:
        degs = [0] * self.n
        for outs in self.out_sets:
            for u in outs:
                degs[u - 1] += 1
        return tuple(degs)

    @cached_property
    def outdegrees(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.out_sets)

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted((v, u) for v, outs in enumerate(self.out_sets, start=1) for u in outs))

    @property
    def edge_count(self) -> int:
        return sum(len(s) for s in self.out_sets)

    @cached_property
    def max_indegree(self) -> int:
        return max(self.indegrees)

    @cached_property
    def key(self) -> tuple[int, ...]:
        """Per-vertex out-set bitmasks (bit u-1 set for out-neighbor u)."""
        return tuple(sum(1 << (u - 1) for u in outs) for outs in self.out_sets)

    def in_neighbors(self, v: int) -> frozenset[int]:
        return self.in_sets[v - 1]

    def out_neighbors(self, v: int) -> frozenset[int]:
        return self.out_sets[v - 1]

    def indegree(self, v: int) -> int:
        return self.indegrees[v - 1]

    def outdegree(self, v: int) -> int:
        return len(self.out_sets[v - 1])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.out_sets[u - 1]

    # ---- transformations ----

    def relabel(self, perm: "Permutation") -> "DirectedGraph":
        """Image graph under the permutation: edge (u, v) becomes (perm(u), perm(v))."""
        if perm.n != self.n:
            raise ValueError(f"permutation on {perm.n} elements applied to n={self.n}")
        outs: list[frozenset[int]] = [frozenset()] * self.n
        images = perm.images
        for v, s in enumerate(self.out_sets, start=1):
            outs[images[v - 1] - 1] = frozenset(images[u - 1] for u in s)
        return DirectedGraph(self.n, tuple(outs))

    def serialize(self) -> str:
        """Canonical file form: header, then edge lines sorted by (u, v)."""
        lines = [f"n {self.n}"]
        lines.extend(f"e {u} {v}" for u, v in self.edges)
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return f"DirectedGraph(n={self.n}, edges={list(self.edges)})"


@dataclass(frozen=True)
class Permutation:
    """Bijection on 1..n, given by the image tuple (images[v-1] = image of v)."""

    images: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        n = len(self.images)
        if sorted(self.images) != list(range(1, n + 1)):
            raise ValueError(f"not a bijection on 1..{n}: {self.images}")

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, v: int) -> int:
        return self.images[v - 1]

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for v, image in enumerate(self.images, start=1):
            inv[image - 1] = v
        return Permutation(tuple(inv))

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def all_of(cls, n: int) -> Iterator["Permutation"]:
        for images in itertools.permutations(range(1, n + 1)):
            yield cls(images)


@dataclass(frozen=True)
class DegreeProfile:
    """Per-vertex degrees plus the maximum indegree and its largest attaining vertex."""

    indegrees: tuple[int, ...]
    outdegrees: tuple[int, ...]
    max_indegree: int
    argmax_vertex: int


def degree_profile(graph: DirectedGraph) -> DegreeProfile:
    """Degrees of every vertex; ties for the maximum resolve to the greatest index."""
    ins = graph.indegrees
    best = max(range(1, graph.n + 1), key=lambda v: (ins[v - 1], v))
    return DegreeProfile(ins, graph.outdegrees, ins[best - 1], best)


# ---------------------------------------------------------------------------
# graph classes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GraphClassSpec:
    """A family of graphs on 1..n with outdegree constraints.

    ``max_outdegree=None`` means unbounded (effectively n-1); with
    ``require_positive_outdegree`` every vertex must nominate someone.
    """

    n: int
    max_outdegree: int | None = None
    require_positive_outdegree: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"vertex count must be positive, got {self.n}")
        k = self.max_outdegree
        if k is not None and not 1 <= k <= self.n - 1:
            raise ValueError(f"outdegree bound {k} outside 1..{self.n - 1}")

    @property
    def bound(self) -> int:
        """Effective outdegree bound."""
        return self.n - 1 if self.max_outdegree is None else self.max_outdegree

    @property
    def min_outdegree(self) -> int:
        return 1 if self.require_positive_outdegree else 0

    @cached_property
    def outset_count(self) -> int:
        """Number of admissible out-sets per vertex (identical for all vertices)."""
        m = self.n - 1
        return sum(comb(m, j) for j in range(self.min_outdegree, self.bound + 1))

    @cached_property
    def size(self) -> int:
        """Number of graphs in the class: per-vertex choices are independent."""
        return self.outset_count**self.n

    def contains(self, graph: DirectedGraph) -> bool:
        if graph.n != self.n:
            return False
        lo, hi = self.min_outdegree, self.bound
        return all(lo <= len(s) <= hi for s in graph.out_sets)

    def targets(self, v: int) -> tuple[int, ...]:
        return tuple(u for u in range(1, self.n + 1) if u != v)

    def admissible_outsets(self, v: int) -> list[tuple[int, ...]]:
        """All admissible out-sets of vertex v in the documented order."""
        pool = self.targets(v)
        sets = itertools.chain.from_iterable(
            itertools.combinations(pool, j) for j in range(self.min_outdegree, self.bound + 1)
        )
        return sorted(sets)

    def outset_at(self, v: int, rank: int) -> tuple[int, ...]:
        """Unrank: the rank-th admissible out-set of v in the documented order."""
        if not 0 <= rank < self.outset_count:
            raise ValueError(f"out-set rank {rank} outside 0..{self.outset_count - 1}")
        return _unrank_outset(rank, self.targets(v), self.min_outdegree, self.bound)

    def describe(self) -> str:
        plus = "+" if self.require_positive_outdegree else ""
        bound = "" if self.max_outdegree is None else f"({self.max_outdegree})"
        return f"G{plus}_{self.n}{bound}"


def class_membership(graph: DirectedGraph, spec: GraphClassSpec) -> bool:
    return spec.contains(graph)


def class_size(spec: GraphClassSpec) -> int:
    return spec.size


def _count_upto(m: int, b: int) -> int:
    """Number of subsets of an m-element pool with at most b elements."""
    if b < 0:
        return 0
    return sum(comb(m, j) for j in range(0, min(b, m) + 1))


def _unrank_outset(rank: int, pool: tuple[int, ...], lo: int, hi: int) -> tuple[int, ...]:
    """rank-th subset of `pool` with size in [lo, hi], in lexicographic tuple order.

    lo is 0 or 1; the empty set, when allowed, is rank 0.
    """
    chosen: list[int] = []
    i, m = 0, len(pool)
    budget = hi
    allow_empty = lo == 0
    x = rank
    while True:
        if allow_empty:
            if x == 0:
                return tuple(chosen)
            x -= 1
        while i < m:
            block = _count_upto(m - i - 1, budget - 1)
            if x < block:
                chosen.append(pool[i])
                i += 1
                budget -= 1
                allow_empty = True
                break
            x -= block
            i += 1
        else:
            raise ValueError(f"rank {rank} out of range")


def enumerate_graphs(spec: GraphClassSpec, cap: int = ENUMERATION_CAP) -> Iterator[DirectedGraph]:
    """All graphs of the class, each exactly once, in the documented order.

    Refuses upfront when the advertised count exceeds `cap`.
    """
    if spec.size > cap:
        raise CapExceeded(f"class {spec.describe()} has {spec.size} graphs, cap is {cap}")
    choices = [spec.admissible_outsets(v) for v in range(1, spec.n + 1)]
    for combo in itertools.product(*choices):
        yield DirectedGraph(spec.n, tuple(frozenset(s) for s in combo))


def graph_at_index(spec: GraphClassSpec, index: int) -> DirectedGraph:
    """The index-th graph of the enumeration order, by mixed-radix unranking."""
    if not 0 <= index < spec.size:
        raise ValueError(f"index {index} outside 0..{spec.size - 1}")
    radix = spec.outset_count
    digits = []
    x = index
    for _ in range(spec.n):
        x, digit = divmod(x, radix)
        digits.append(digit)
    digits.reverse()  # vertex 1 is the most significant digit
    outs = tuple(frozenset(spec.outset_at(v, digit)) for v, digit in enumerate(digits, start=1))
    return DirectedGraph(spec.n, outs)


def deviations(graph: DirectedGraph, v: int, spec: GraphClassSpec) -> Iterator[DirectedGraph]:
    """All class members that agree with `graph` outside v's outgoing edges.

    Emits every admissible replacement of v's out-set exactly once, in the
    documented order, including `graph` itself.
    """
    if not 1 <= v <= graph.n:
        raise ValueError(f"vertex {v} outside 1..{graph.n}")
    if not spec.contains(graph):
        raise ValueError(f"graph is not in class {spec.describe()}")
    for choice in spec.admissible_outsets(v):
        outs = list(graph.out_sets)
        outs[v - 1] = frozenset(choice)
        yield DirectedGraph(graph.n, tuple(outs))


# ---------------------------------------------------------------------------
# seeded sampling (Philox4x64)
# ---------------------------------------------------------------------------


class _PhiloxWords:
    """Buffered stream of 64-bit words from a Philox4x64 generator keyed by `seed`."""

    def __init__(self, seed: int, block: int = 512):
        self._gen = np.random.Generator(np.random.Philox(key=seed))
        self._block = block
        self._buf: list[int] = []

    def next_word(self) -> int:
        if not self._buf:
            words = self._gen.integers(0, 2**64, size=self._block, dtype=np.uint64)
            self._buf = [int(w) for w in reversed(words)]
        return self._buf.pop()

    def below(self, m: int) -> int:
        """Uniform integer in [0, m) by rejection on big-endian 64-bit words."""
        if m < 1:
            raise ValueError(f"cannot draw below {m}")
        if m == 1:
            return 0
        nwords = (m.bit_length() + 63) // 64
        span = 1 << (64 * nwords)
        limit = span - span % m
        while True:
            x = 0
            for _ in range(nwords):
                x = (x << 64) | self.next_word()
            if x < limit:
                return x % m


def sample_graph(spec: GraphClassSpec, seed: int) -> DirectedGraph:
    """Uniform member of the class, deterministic for a fixed seed.

    Each vertex's out-set is drawn uniformly from its admissible out-sets,
    independently, for vertices 1..n in order (one draw per vertex).
    """
    return next(sample_stream(spec, seed, 1))


def sample_stream(spec: GraphClassSpec, seed: int, count: int) -> Iterator[DirectedGraph]:
    """`count` independent uniform samples drawn from one seeded Philox stream."""
    if spec.outset_count == 0:
        raise ValueError(f"class {spec.describe()} is empty")
    words = _PhiloxWords(seed)
    per_vertex = spec.outset_count
    for _ in range(count):
        outs = tuple(
            frozenset(spec.outset_at(v, words.below(per_vertex))) for v in range(1, spec.n + 1)
        )
        yield DirectedGraph(spec.n, outs)


# ---------------------------------------------------------------------------
# file format
# ---------------------------------------------------------------------------


def parse_graph(text: str) -> DirectedGraph:
    """Parse the line-oriented graph format.

    Comment lines start with '#'; exactly one header line ``n <count>`` must
    precede the edge lines ``e <u> <v>``.  Self-loops, out-of-range ids and
    duplicate edges are rejected with the offending line number.
    """
    n: int | None = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if fields[0] == "n":
            if n is not None:
                raise GraphFormatError(lineno, "duplicate 'n' header")
            if len(fields) != 2:
                raise GraphFormatError(lineno, "header must be 'n <count>'")
            try:
                n = int(fields[1])
            except ValueError:
                raise GraphFormatError(lineno, f"vertex count {fields[1]!r} is not an integer") from None
            if n < 1:
                raise GraphFormatError(lineno, f"vertex count must be positive, got {n}")
        elif fields[0] == "e":
            if n is None:
                raise GraphFormatError(lineno, "edge line before 'n' header")
            if len(fields) != 3:
                raise GraphFormatError(lineno, "edge line must be 'e <u> <v>'")
            try:
                u, v = int(fields[1]), int(fields[2])
            except ValueError:
                raise GraphFormatError(lineno, f"edge endpoints {fields[1]!r} {fields[2]!r} must be integers") from None
            if not 1 <= u <= n or not 1 <= v <= n:
                raise GraphFormatError(lineno, f"edge ({u}, {v}) outside 1..{n}")
            if u == v:
                raise GraphFormatError(lineno, f"self-loop at vertex {u}")
            if (u, v) in seen:
                raise GraphFormatError(lineno, f"duplicate edge ({u}, {v})")
            seen.add((u, v))
            edges.append((u, v))
        else:
            raise GraphFormatError(lineno, f"unrecognized directive {fields[0]!r}")
    if n is None:
        raise GraphFormatError(last_line + 1, "missing 'n <count>' header")
    return DirectedGraph.from_edges(n, edges)
