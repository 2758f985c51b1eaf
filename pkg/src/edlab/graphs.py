"""Simple undirected graphs on dense bit-matrix adjacency, plus weighted complete graphs.

Vertices are 0-based contiguous integers.  Adjacency is stored as one Python
integer bitmask per vertex, which keeps popcount-based edge counting fast at
any size and converts cheaply to the word-packed form the compiled kernels
use.  Graphs are immutable; every constructor returns a fresh object.

Vertex sets are plain iterables of vertex indices at the API surface and
bitmasks internally; ``bitmask`` / ``bits`` convert between the two.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ContractViolation


def bitmask(vertices) -> int:
    """Pack an iterable of vertex indices into a bitmask."""
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def bits(mask: int):
    """Iterate the set bits of a mask in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    """Immutable simple undirected graph; ``rows[v]`` is v's neighbor bitmask."""

    __slots__ = ("n", "rows", "_m")

    def __init__(self, n: int, rows):
        if n < 0:
            raise ContractViolation("vertex count must be nonnegative")
        rows = tuple(rows)
        if len(rows) != n:
            raise ContractViolation("adjacency row count must equal n")
        full = (1 << n) - 1
        for v, row in enumerate(rows):
            if row & ~full:
                raise ContractViolation("adjacency row exceeds vertex range")
            if row >> v & 1:
                raise ContractViolation("self-loops are not allowed")
        for v, row in enumerate(rows):
            for u in bits(row):
                if not rows[u] >> v & 1:
                    raise ContractViolation("adjacency must be symmetric")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "_m", sum(r.bit_count() for r in rows) // 2)

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ContractViolation(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise ContractViolation(f"self-loop ({u},{v}) not allowed")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, rows)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, [0] * n)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, [full ^ (1 << v) for v in range(n)])

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        if n < 3:
            raise ContractViolation("cycle needs at least 3 vertices")
        return cls.from_edges(n, [(v, (v + 1) % n) for v in range(n)])

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(v, v + 1) for v in range(n - 1)])

    @classmethod
    def complete_multipartite(cls, sizes) -> "Graph":
        sizes = list(sizes)
        n = sum(sizes)
        rows = [0] * n
        start = 0
        full = (1 << n) - 1
        for s in sizes:
            block = ((1 << s) - 1) << start
            for v in range(start, start + s):
                rows[v] = full & ~block
            start += s
        return cls(n, rows)

    @classmethod
    def complete_bipartite(cls, a: int, b: int) -> "Graph":
        return cls.complete_multipartite([a, b])

    @classmethod
    def petersen(cls) -> "Graph":
        outer = [(v, (v + 1) % 5) for v in range(5)]
        inner = [(5 + v, 5 + (v + 2) % 5) for v in range(5)]
        spokes = [(v, 5 + v) for v in range(5)]
        return cls.from_edges(10, outer + inner + spokes)

    # -- basic queries -------------------------------------------------

    def edge_count(self) -> int:
        return self._m

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def min_degree(self) -> int:
        return min((self.degree(v) for v in range(self.n)), default=0)

    def edges(self):
        """Yield edges (u, v) with u < v, lexicographically."""
        for u in range(self.n):
            for v in bits(self.rows[u] >> (u + 1) << (u + 1)):
                yield (u, v)

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.rows == other.rows

    def __hash__(self):
        return hash((self.n, self.rows))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.edge_count()})"

    # -- derived graphs ------------------------------------------------

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        return Graph(self.n, [full & ~row & ~(1 << v) for v, row in enumerate(self.rows)])

    def with_edges_removed(self, edges) -> "Graph":
        rows = list(self.rows)
        for u, v in edges:
            rows[u] &= ~(1 << v)
            rows[v] &= ~(1 << u)
        return Graph(self.n, rows)

    def induced_subgraph(self, vertices) -> "Graph":
        """Induced subgraph on the given vertices, relabeled in sorted order."""
        order = sorted(set(vertices))
        index = {v: i for i, v in enumerate(order)}
        rows = [0] * len(order)
        for v in order:
            for u in bits(self.rows[v]):
                if u in index:
                    rows[index[v]] |= 1 << index[u]
        return Graph(len(order), rows)

    def relabel(self, perm) -> "Graph":
        """Image under the vertex permutation ``perm`` (old index -> new index)."""
        rows = [0] * self.n
        for u, v in self.edges():
            pu, pv = perm[u], perm[v]
            rows[pu] |= 1 << pv
            rows[pv] |= 1 << pu
        return Graph(self.n, rows)

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges())
        return g

    # -- counting ------------------------------------------------------

    def count_within(self, mask: int) -> int:
        """Number of edges with both endpoints in the masked set."""
        total = 0
        for v in bits(mask):
            total += (self.rows[v] & mask).bit_count()
        return total // 2

    def count_between(self, amask: int, bmask: int) -> int:
        """Number of edges with one endpoint in each masked set (sets disjoint)."""
        total = 0
        for v in bits(amask):
            total += (self.rows[v] & bmask).bit_count()
        return total


def edge_density(G: Graph, A, B) -> Fraction:
    """Exact pair density: crossing edges over |A|·|B|, for disjoint nonempty A, B."""
    amask = A if isinstance(A, int) else bitmask(A)
    bmask = B if isinstance(B, int) else bitmask(B)
    if amask == 0 or bmask == 0:
        raise ContractViolation("edge_density requires nonempty vertex sets")
    if amask & bmask:
        raise ContractViolation("edge_density requires disjoint vertex sets")
    return Fraction(G.count_between(amask, bmask), amask.bit_count() * bmask.bit_count())


def blowup(F: Graph, b: int) -> Graph:
    """Replace each vertex by an independent set of size b, each edge by a b×b biclique.

    Vertex (u, i) of the blow-up gets index u*b + i, so blow-up classes are
    contiguous index ranges.
    """
    if b < 1:
        raise ContractViolation("blow-up size must be at least 1")
    n = F.n * b
    rows = [0] * n
    block = (1 << b) - 1
    for u in range(F.n):
        neighbor_mask = 0
        for v in bits(F.rows[u]):
            neighbor_mask |= block << (v * b)
        for i in range(b):
            rows[u * b + i] = neighbor_mask
    return Graph(n, rows)


def boolean_or(G1: Graph, G2: Graph) -> Graph:
    """Union of edge sets on a shared vertex set."""
    if G1.n != G2.n:
        raise ContractViolation("boolean_or requires equal vertex counts")
    return Graph(G1.n, [a | b for a, b in zip(G1.rows, G2.rows)])


def disjoint_copies(F: Graph, r: int) -> Graph:
    """Vertex-disjoint union of r copies of F (block-diagonal adjacency)."""
    if r < 1:
        raise ContractViolation("copy count must be at least 1")
    n = F.n * r
    rows = []
    for c in range(r):
        shift = c * F.n
        rows.extend(row << shift for row in F.rows)
    return Graph(n, rows)


# -- edge-list text format ----------------------------------------------
# First line `n m`, then m lines `u v` with 0 <= u < v < n, sorted.


def to_edge_list_text(G: Graph) -> str:
    lines = [f"{G.n} {G.edge_count()}"]
    lines.extend(f"{u} {v}" for u, v in G.edges())
    return "\n".join(lines) + "\n"


def from_edge_list_text(text: str) -> Graph:
    tokens = text.split()
    if len(tokens) < 2:
        raise ContractViolation("edge-list text needs a header line `n m`")
    if not all(t.isdigit() for t in tokens):
        raise ContractViolation("edge-list text must contain only nonnegative integers")
    n, m = int(tokens[0]), int(tokens[1])
    if len(tokens) != 2 + 2 * m:
        raise ContractViolation(f"edge-list text: expected {m} edges, found {(len(tokens) - 2) // 2}")
    edges = []
    for i in range(m):
        u, v = int(tokens[2 + 2 * i]), int(tokens[3 + 2 * i])
        if not u < v:
            raise ContractViolation(f"edge-list text: edge ({u},{v}) must satisfy u < v")
        edges.append((u, v))
    G = Graph.from_edges(n, edges)
    if G.edge_count() != m:
        raise ContractViolation("edge-list text: duplicate edges")
    return G


class WeightedCompleteGraph:
    """Complete graph on k vertices with exact rational pair weights in [0, 1]."""

    __slots__ = ("k", "_w")

    def __init__(self, k: int, weights):
        """``weights``: mapping (i, j) -> weight for all pairs i < j (complete coverage)."""
        if k < 0:
            raise ContractViolation("vertex count must be nonnegative")
        w = {}
        for (i, j), value in dict(weights).items():
            if not (0 <= i < j < k):
                raise ContractViolation(f"weight pair ({i},{j}) out of range")
            value = Fraction(value)
            if not 0 <= value <= 1:
                raise ContractViolation(f"weight w({i},{j})={value} outside [0,1]")
            w[(i, j)] = value
        expected = k * (k - 1) // 2
        if len(w) != expected:
            raise ContractViolation(f"weights must cover all {expected} pairs, got {len(w)}")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "_w", w)

    def __setattr__(self, name, value):
        raise AttributeError("WeightedCompleteGraph is immutable")

    @classmethod
    def uniform(cls, k: int, value) -> "WeightedCompleteGraph":
        value = Fraction(value)
        return cls(k, {(i, j): value for i in range(k) for j in range(i + 1, k)})

    def weight(self, i: int, j: int) -> Fraction:
        if i == j:
            raise ContractViolation("no self-pair weights")
        return self._w[(min(i, j), max(i, j))]

    def pairs(self):
        for i in range(self.k):
            for j in range(i + 1, self.k):
                yield (i, j, self._w[(i, j)])

    @property
    def total_weight(self) -> Fraction:
        return sum(self._w.values(), Fraction(0))

    def support_graph(self) -> Graph:
        """Unweighted graph on the pairs of strictly positive weight."""
        return Graph.from_edges(self.k, [(i, j) for i, j, w in self.pairs() if w > 0])

    def __eq__(self, other):
        return (
            isinstance(other, WeightedCompleteGraph)
            and self.k == other.k
            and self._w == other._w
        )

    def __repr__(self):
        return f"WeightedCompleteGraph(k={self.k})"


# -- weighted-graph text format -------------------------------------------
# First line `k`, then one line `i j p/q` per pair i < j.


def to_weighted_text(W: WeightedCompleteGraph) -> str:
    lines = [str(W.k)]
    for i, j, w in W.pairs():
        lines.append(f"{i} {j} {w.numerator}/{w.denominator}")
    return "\n".join(lines) + "\n"


def from_weighted_text(text: str) -> WeightedCompleteGraph:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise ContractViolation("weighted-graph text is empty")
    if not lines[0].strip().isdigit():
        raise ContractViolation("weighted-graph text must start with the order k")
    k = int(lines[0])
    weights = {}
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != 3 or not (parts[0].isdigit() and parts[1].isdigit()):
            raise ContractViolation(f"weighted-graph line malformed: {line!r}")
        i, j = int(parts[0]), int(parts[1])
        weights[(i, j)] = parse_rational(parts[2])
    return WeightedCompleteGraph(k, weights)


def parse_rational(token: str) -> Fraction:
    """Parse `p/q` or integer text into an exact rational."""
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise ContractViolation(f"bad rational {token!r}") from exc


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
