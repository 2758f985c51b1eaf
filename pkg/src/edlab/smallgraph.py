"""Small-graph utilities shared across the oracles and the hardness tools.

Everything here targets desk-scale graphs: exhaustive enumeration goes
through the networkx atlas (7 vertices and below), isomorphism through
VF2 with cheap invariant prefilters, coloring through the homomorphism
kernel (a proper k-coloring is exactly a map into the complete graph).
"""

from fractions import Fraction
from functools import lru_cache

import networkx as nx
from networkx.generators.atlas import graph_atlas_g

from . import kernels
from .errors import ContractViolation, SizeLimitExceeded
from .graphs import Graph


def bipartition(G):
    """Two-coloring of G as a 0/1 list, or None if G has an odd cycle."""
    color = [-1] * G.n
    for root in range(G.n):
        if color[root] >= 0:
            continue
        color[root] = 0
        stack = [root]
        while stack:
            v = stack.pop()
            w = G.rows[v]
            while w:
                low = w & -w
                u = low.bit_length() - 1
                if color[u] < 0:
                    color[u] = 1 - color[v]
                    stack.append(u)
                elif color[u] == color[v]:
                    return None
                w ^= low
    return color


def is_bipartite(G):
    return bipartition(G) is not None


def find_odd_cycle(G):
    """Vertex list of some odd cycle in G, or None if G is bipartite.

    Breadth-first layering from each component root; the first same-parity
    edge closes a cycle through the lowest common ancestor, which has odd
    length and is simple.  BFS keeps the cycles short, which matters for
    branching factors downstream.
    """
    depth = [-1] * G.n
    parent = [-1] * G.n
    for root in range(G.n):
        if depth[root] >= 0:
            continue
        depth[root] = 0
        parent[root] = -1
        queue = [root]
        head = 0
        while head < len(queue):
            v = queue[head]
            head += 1
            w = G.rows[v]
            while w:
                low = w & -w
                u = low.bit_length() - 1
                w ^= low
                if depth[u] < 0:
                    depth[u] = depth[v] + 1
                    parent[u] = v
                    queue.append(u)
                elif (depth[u] ^ depth[v]) & 1 == 0 and u != parent[v]:
                    # same parity: odd cycle through the common ancestor
                    pu, pv_ = u, v
                    path_u, path_v = [u], [v]
                    while depth[pu] > depth[pv_]:
                        pu = parent[pu]
                        path_u.append(pu)
                    while depth[pv_] > depth[pu]:
                        pv_ = parent[pv_]
                        path_v.append(pv_)
                    while pu != pv_:
                        pu = parent[pu]
                        pv_ = parent[pv_]
                        path_u.append(pu)
                        path_v.append(pv_)
                    cycle = path_u + path_v[-2::-1]
                    return cycle
    return None


def connected_components(G):
    """List of vertex bitmasks, one per connected component, in vertex order."""
    seen = 0
    comps = []
    for root in range(G.n):
        if seen >> root & 1:
            continue
        mask = 1 << root
        stack = [root]
        while stack:
            v = stack.pop()
            w = G.rows[v] & ~mask
            while w:
                low = w & -w
                mask |= low
                stack.append(low.bit_length() - 1)
                w &= ~mask
        seen |= mask
        comps.append(mask)
    return comps


def is_colorable(G, k):
    """Whether G admits a proper coloring with k colors."""
    if k < 0:
        raise ValueError("color count must be >= 0")
    if G.n == 0:
        return True
    if k == 0:
        return False
    Kk = Graph.complete(k)
    return kernels.find_hom(k, Kk.rows, G.n, G.rows) is not None


def chromatic_number(G, cap=10):
    """Exact chromatic number by increasing k; intended for G.n <= cap."""
    if G.n > cap:
        raise SizeLimitExceeded(
            "chromatic number restricted to small graphs",
            cap_name="chromatic-vertices",
            limit=cap,
            actual=G.n,
        )
    if G.n == 0:
        return 0
    if G.edge_count() == 0:
        return 1
    if is_bipartite(G):
        return 2
    for k in range(3, G.n + 1):
        if is_colorable(G, k):
            return k
    return G.n


def max_clique_size(G):
    """Clique number by growing embeddings of complete graphs."""
    if G.n == 0:
        return 0
    best = 1
    for s in range(2, G.n + 1):
        Ks = Graph.complete(s)
        if kernels.find_embedding(G.n, G.rows, s, Ks.rows) is None:
            break
        best = s
    return best


def graphs_isomorphic(G1, G2):
    """Isomorphism test with invariant prefilters, then VF2."""
    if G1.n != G2.n or G1.edge_count() != G2.edge_count():
        return False
    if sorted(G1.degree(v) for v in range(G1.n)) != sorted(
        G2.degree(v) for v in range(G2.n)
    ):
        return False
    return nx.is_isomorphic(G1.to_networkx(), G2.to_networkx())


@lru_cache(maxsize=None)
def _atlas_by_order():
    by_order = {}
    for g in graph_atlas_g()[1:]:  # entry 0 is the empty placeholder
        by_order.setdefault(g.number_of_nodes(), []).append(g)
    return by_order


@lru_cache(maxsize=None)
def enumerate_graphs(n):
    """All graphs on exactly n vertices up to isomorphism, atlas order.

    Backed by the networkx atlas, so n is capped at 7.
    """
    if n < 0:
        raise ValueError("vertex count must be >= 0")
    if n > 7:
        raise SizeLimitExceeded(
            "exhaustive graph enumeration restricted to the atlas range",
            cap_name="enumeration-vertices",
            limit=7,
            actual=n,
        )
    out = []
    for g in _atlas_by_order().get(n, []):
        nodes = sorted(g.nodes())
        index = {v: i for i, v in enumerate(nodes)}
        edges = sorted(
            (min(index[u], index[v]), max(index[u], index[v])) for u, v in g.edges()
        )
        out.append(Graph.from_edges(n, edges))
    if n == 0:
        out = [Graph.empty(0)]
    return tuple(out)


def enumerate_graphs_upto(n):
    """All graphs with at most n vertices up to isomorphism (n >= 1)."""
    out = []
    for k in range(1, n + 1):
        out.extend(enumerate_graphs(k))
    return out


def dedupe_isomorphic(graphs):
    """Keep the first representative of each isomorphism class, in order."""
    kept = []
    buckets = {}
    for G in graphs:
        key = (
            G.n,
            G.edge_count(),
            tuple(sorted(G.degree(v) for v in range(G.n))),
        )
        bucket = buckets.setdefault(key, [])
        if any(graphs_isomorphic(G, H) for H in bucket):
            continue
        bucket.append(G)
        kept.append(G)
    return kept


def min_bipartition_sides(G):
    """Lexicographically smallest (s, t), s <= t, over proper 2-colorings.

    G must be bipartite with at least one edge; isolated vertices may land
    on either side, and each connected component's two sides may swap, so
    the minimum is taken over those choices.  Used for the bipartite-member
    error bound, where smaller sides give a stronger bound.
    """
    col = bipartition(G)
    if col is None:
        raise ContractViolation("graph is not bipartite")
    comps = connected_components(G)
    sized = []
    isolated = 0
    for mask in comps:
        if mask.bit_count() == 1:
            isolated += 1
            continue
        zero = sum(
            1 for v in range(G.n) if mask >> v & 1 and col[v] == 0
        )
        one = mask.bit_count() - zero
        sized.append((zero, one))
    base_pairs = [(0, 0)]
    for zero, one in sized:
        base_pairs = [
            (s + a, t + b) for s, t in base_pairs for a, b in ((zero, one), (one, zero))
        ]
    best = None
    for s, t in base_pairs:
        # isolated vertices pad whichever side keeps the pair lex-smallest
        for extra in range(isolated + 1):
            a, c = s + extra, t + isolated - extra
            pair = (min(a, c), max(a, c))
            if best is None or pair < best:
                best = pair
    return best


def fraction_sqrt_ceil(x):
    """Smallest integer with square >= x, for exact spectral-style bounds."""
    if x < 0:
        raise ValueError("negative input")
    r = int(float(x) ** 0.5)
    while r * r < x:
        r += 1
    while r >= 1 and (r - 1) * (r - 1) >= x:
        r -= 1
    return r


def fraction_is_le_sqrt(value, x):
    """Exact test value <= sqrt(x) for nonnegative rationals."""
    value = Fraction(value)
    x = Fraction(x)
    if value < 0:
        return True
    return value * value <= x
