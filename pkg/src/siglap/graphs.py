"""Graph representation, family constructors, transforms and graph6 I/O.

Vertices are integers ``0..n-1``. Adjacency is stored as one Python int
bitmask per vertex, so degree, neighborhood and connectivity computations
are plain bitwise operations and graphs of any supported order fit in a
small tuple of ints. Graph values are immutable and hashable; every
transform returns a new value.

The two paths attached by :func:`coalesce_paths` have lengths named
``p`` and ``q`` (with ``p >= q`` in the grafting context). The letter
``r`` is deliberately kept free for the triangle count of firefly
parameters, so it never denotes a path length in this package.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from .errors import CapacityError, ConnectivityError, Graph6Error, ParameterError

#: Hard cap on vertex count. Python ints give bit-parallel adjacency rows at
#: any width, so the cap is set by what the dense eigensolver and the
#: certification grids actually need.
MAX_VERTICES = 128

#: Largest order for which the brute-force canonical form is allowed.
CANONICAL_MAX = 10


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on ``n`` vertices with bitmask adjacency.

    ``adj[v]`` has bit ``u`` set iff ``{u, v}`` is an edge. The relation is
    kept symmetric and irreflexive by construction and verified on creation.
    """

    n: int
    adj: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_VERTICES:
            raise CapacityError(f"vertex count {self.n} outside 1..{MAX_VERTICES}")
        if len(self.adj) != self.n:
            raise ParameterError("adjacency length does not match vertex count")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row & ~full:
                raise ParameterError(f"vertex {v} has a neighbor >= n")
            if (row >> v) & 1:
                raise ParameterError(f"self-loop at vertex {v}")
        for v in range(self.n):
            for u in _bits(self.adj[v]):
                if not (self.adj[u] >> v) & 1:
                    raise ParameterError(f"adjacency not symmetric at ({u}, {v})")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise ParameterError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ParameterError(f"edge ({u}, {v}) outside 0..{n - 1}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> tuple[int, ...]:
        return tuple(row.bit_count() for row in self.adj)

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def edges(self) -> Iterator[tuple[int, int]]:
        for v in range(self.n):
            row = self.adj[v] >> (v + 1)
            u = v + 1
            while row:
                if row & 1:
                    yield (v, u)
                row >>= 1
                u += 1

    def with_edge(self, u: int, v: int) -> "Graph":
        if u == v:
            raise ParameterError("cannot add a self-loop")
        adj = list(self.adj)
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        return Graph(self.n, tuple(adj))

    def without_edge(self, u: int, v: int) -> "Graph":
        if not self.has_edge(u, v):
            raise ParameterError(f"edge ({u}, {v}) not present")
        adj = list(self.adj)
        adj[u] &= ~(1 << v)
        adj[v] &= ~(1 << u)
        return Graph(self.n, tuple(adj))

    def relabel(self, perm: Iterable[int]) -> "Graph":
        """Return the graph with vertex ``v`` renamed to ``perm[v]``."""
        perm = tuple(perm)
        if sorted(perm) != list(range(self.n)):
            raise ParameterError("relabeling is not a permutation of the vertices")
        adj = [0] * self.n
        for v in range(self.n):
            row = 0
            for u in _bits(self.adj[v]):
                row |= 1 << perm[u]
            adj[perm[v]] = row
        return Graph(self.n, tuple(adj))


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _connected_masks(adj: tuple[int, ...], n: int, skip: int = -1) -> bool:
    """Connectivity of the graph given by bitmask rows, optionally with one
    vertex removed."""
    remaining = (1 << n) - 1
    if skip >= 0:
        remaining ^= 1 << skip
    if remaining == 0:
        return False
    start = remaining & -remaining
    seen = start
    frontier = start
    while frontier:
        reach = 0
        m = frontier
        while m:
            low = m & -m
            reach |= adj[low.bit_length() - 1]
            m ^= low
        frontier = reach & remaining & ~seen
        seen |= frontier
    return seen == remaining


# ---------------------------------------------------------------------------
# basic statistics


def edge_count(g: Graph) -> int:
    return sum(row.bit_count() for row in g.adj) // 2


def max_degree(g: Graph) -> int:
    return max(row.bit_count() for row in g.adj)


def is_connected(g: Graph) -> bool:
    return _connected_masks(g.adj, g.n)


def cyclomatic(g: Graph) -> int:
    """Number of independent cycles, ``e - n + 1`` for a connected graph."""
    if not is_connected(g):
        raise ConnectivityError("cyclomatic number requires a connected graph")
    return edge_count(g) - g.n + 1


# ---------------------------------------------------------------------------
# family constructors


@dataclass(frozen=True)
class FireflyParams:
    """Counts of triangles, pendant edges and pendant 2-paths at a common
    center. Resulting order is ``2r + s + 2t + 1``, size ``3r + s + 2t``."""

    r: int
    s: int
    t: int

    def __post_init__(self) -> None:
        if self.r < 0 or self.s < 0 or self.t < 0:
            raise ParameterError("firefly parameters must be nonnegative")

    @property
    def order(self) -> int:
        return 2 * self.r + self.s + 2 * self.t + 1

    @property
    def size(self) -> int:
        return 3 * self.r + self.s + self.t * 2


def build_firefly(params: FireflyParams) -> Graph:
    """Build the firefly graph for the given counts.

    Labeling convention (relied on by the quotient constructions): vertex 0
    is the center; triangle vertices come next in pairs, then pendant leaves,
    then the 2-paths with the inner vertex before its leaf.
    """
    r, s, t = params.r, params.s, params.t
    n = params.order
    if n > MAX_VERTICES:
        raise CapacityError(f"firefly order {n} exceeds {MAX_VERTICES}")
    edges: list[tuple[int, int]] = []
    for k in range(r):
        a, b = 1 + 2 * k, 2 + 2 * k
        edges += [(0, a), (0, b), (a, b)]
    base = 2 * r
    for k in range(s):
        edges.append((0, base + 1 + k))
    base = 2 * r + s
    for k in range(t):
        inner, leaf = base + 1 + 2 * k, base + 2 + 2 * k
        edges += [(0, inner), (inner, leaf)]
    return Graph.from_edges(n, edges)


def build_star_plus_edge(n: int) -> Graph:
    """Star on ``n`` vertices with one extra edge between two leaves.

    Identical labeling to ``build_firefly(FireflyParams(1, n - 3, 0))``.
    """
    if n < 4:
        raise ParameterError("star plus edge needs at least 4 vertices")
    return build_firefly(FireflyParams(1, n - 3, 0))


def build_join_complete_empty(k: int, t: int) -> Graph:
    """Join of a complete graph on ``k`` vertices with ``t`` isolated
    vertices (a complete split graph). First ``k`` labels form the clique."""
    if k < 1 or t < 0:
        raise ParameterError("join needs k >= 1 and t >= 0")
    n = k + t
    if n > MAX_VERTICES:
        raise CapacityError(f"join order {n} exceeds {MAX_VERTICES}")
    edges = [(i, j) for i in range(k) for j in range(i + 1, k)]
    edges += [(i, j) for i in range(k) for j in range(k, n)]
    return Graph.from_edges(n, edges)


# ---------------------------------------------------------------------------
# path coalescence and edge grafting


@dataclass(frozen=True)
class CoalesceSpec:
    """Attach two paths of ``p`` and ``q`` edges at vertex ``v`` of ``base``."""

    base: Graph
    v: int
    p: int
    q: int

    def __post_init__(self) -> None:
        if not 0 <= self.v < self.base.n:
            raise ParameterError(f"anchor vertex {self.v} not in base graph")
        if self.p < 1 or self.q < 1:
            raise ParameterError("both attached paths need length >= 1")
        if self.base.n + self.p + self.q > MAX_VERTICES:
            raise CapacityError("coalesced order exceeds capacity")


@dataclass(frozen=True)
class CoalescedGraph:
    """A graph built by path coalescence, with the construction bookkeeping
    needed for grafting: which vertices form each attached path, listed from
    the anchor outward."""

    graph: Graph
    anchor: int
    path_a: tuple[int, ...]
    path_b: tuple[int, ...]

    @property
    def p(self) -> int:
        return len(self.path_a)

    @property
    def q(self) -> int:
        return len(self.path_b)


def coalesce_paths(spec: CoalesceSpec) -> CoalescedGraph:
    """Build the coalescence of ``spec``: the base graph with two disjoint
    paths of ``p`` and ``q`` edges hung at vertex ``v``."""
    b = spec.base.n
    n = b + spec.p + spec.q
    edges = list(spec.base.edges())
    path_a = tuple(range(b, b + spec.p))
    path_b = tuple(range(b + spec.p, b + spec.p + spec.q))
    for path in (path_a, path_b):
        prev = spec.v
        for w in path:
            edges.append((prev, w))
            prev = w
    return CoalescedGraph(Graph.from_edges(n, edges), spec.v, path_a, path_b)


def graft_edge(cg: CoalescedGraph) -> CoalescedGraph:
    """Move the outermost edge of the shorter path onto the end of the longer
    one: the tracked paths of lengths ``(p, q)`` become ``(p + 1, q - 1)``.
    Vertex and edge counts are unchanged."""
    if cg.q < 1:
        raise ParameterError("nothing to graft: second path is empty")
    u1 = cg.path_b[-1]
    u2 = cg.path_b[-2] if cg.q >= 2 else cg.anchor
    v1 = cg.path_a[-1] if cg.p >= 1 else cg.anchor
    g = cg.graph.without_edge(u2, u1).with_edge(v1, u1)
    return CoalescedGraph(g, cg.anchor, cg.path_a + (u1,), cg.path_b[:-1])


# ---------------------------------------------------------------------------
# canonical form


def canonical_form(g: Graph) -> bytes:
    """Canonical byte string: equal iff isomorphic, for orders up to 10.

    The form is the graph6 encoding of the relabeling that minimizes the
    upper-triangle adjacency bit string over all vertex permutations, found
    by brute force (so it doubles as a trusted oracle for the generation
    machinery, which must agree with it).
    """
    if g.n > CANONICAL_MAX:
        raise CapacityError(
            f"brute-force canonical form is limited to {CANONICAL_MAX} vertices"
        )
    return _canonical_form_cached(g.adj, g.n)


@lru_cache(maxsize=1 << 16)
def _canonical_form_cached(adj: tuple[int, ...], n: int) -> bytes:
    from . import _canonical

    order = _canonical.canonical_data(adj, n).order
    inverse = [0] * n
    for pos, v in enumerate(order):
        inverse[v] = pos
    return to_graph6(Graph(n, adj).relabel(inverse)).encode("ascii")


def canonical_graph(g: Graph) -> Graph:
    """The canonically labeled copy of ``g`` (same order cap as
    :func:`canonical_form`)."""
    return from_graph6(canonical_form(g).decode("ascii"))


# ---------------------------------------------------------------------------
# graph6 encoding (column-major upper triangle, 6-bit chunks, offset 63)


def _g6_order_bytes(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    # long form: 126 followed by three 6-bit groups of n (handles n < 2**18)
    return chr(126) + "".join(
        chr(((n >> shift) & 0x3F) + 63) for shift in (12, 6, 0)
    )

def to_graph6(g: Graph) -> str:
    """Encode in the standard graph6 format (long order form above 62)."""
    n = g.n
    out = [_g6_order_bytes(n)]
    bits = 0
    nbits = 0
    for j in range(1, n):
        col = g.adj[j]
        for i in range(j):
            bits = (bits << 1) | ((col >> i) & 1)
            nbits += 1
            if nbits == 6:
                out.append(chr(bits + 63))
                bits = nbits = 0
    if nbits:
        out.append(chr((bits << (6 - nbits)) + 63))
    return "".join(out)


def from_graph6(text: str) -> Graph:
    """Decode a graph6 string; raises :class:`Graph6Error` with the byte
    offset on malformed input."""
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise Graph6Error("empty graph6 text", 0)
    data = s.encode("ascii", errors="replace")
    pos = 0

    def sixbits(at: int) -> int:
        b = data[at]
        if not 63 <= b <= 126:
            raise Graph6Error(f"byte {b!r} outside graph6 range", at)
        return b - 63

    first = sixbits(0)
    if first < 63:
        n = first
        pos = 1
    else:
        if len(data) < 4:
            raise Graph6Error("truncated long-form order", len(data))
        if data[1] == 126:
            raise Graph6Error("orders needing the 8-byte form are unsupported", 1)
        n = (sixbits(1) << 12) | (sixbits(2) << 6) | sixbits(3)
        pos = 4
    if n < 1:
        raise Graph6Error("graph6 order must be at least 1", 0)
    if n > MAX_VERTICES:
        raise CapacityError(f"decoded order {n} exceeds {MAX_VERTICES}")
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    if len(data) - pos != nbytes:
        raise Graph6Error(
            f"expected {nbytes} adjacency bytes, got {len(data) - pos}",
            min(len(data), pos + nbytes),
        )
    adj = [0] * n
    bit = 0
    for k in range(nbytes):
        chunk = sixbits(pos + k)
        for off in range(5, -1, -1):
            if bit >= nbits:
                if (chunk >> off) & 1:
                    raise Graph6Error("nonzero padding bits", pos + k)
                continue
            if (chunk >> off) & 1:
                i, j = _pair_from_index(bit)
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            bit += 1
    return Graph(n, tuple(adj))


def _pair_from_index(idx: int) -> tuple[int, int]:
    # invert idx = j*(j-1)/2 + i with i < j
    j = int(((8 * idx + 1) ** 0.5 + 1) / 2)
    while j * (j - 1) // 2 > idx:
        j -= 1
    while (j + 1) * j // 2 <= idx:
        j += 1
    return idx - j * (j - 1) // 2, j
