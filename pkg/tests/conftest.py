"""Shared test helpers: independent brute-force referees and generators.

The referees here deliberately avoid the package's optimized search code:
distances are recomputed by raw subset/assignment enumeration and membership
is checked with plain set arithmetic, so a bug in the solvers cannot hide in
its own mirror.
"""

import itertools
import random
from fractions import Fraction

from hypothesis import HealthCheck, settings

from edlab.graphs import Graph

settings.register_profile(
    "suite",
    max_examples=25,
    deadline=None,
    suppress_health_check=list(HealthCheck),
)
settings.load_profile("suite")


def random_graph(n, p, rng):
    edges = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < p
    ]
    return Graph.from_edges(n, edges)


def neighbor_sets(G):
    nbrs = [set() for _ in range(G.n)]
    for u, v in G.edges():
        nbrs[u].add(v)
        nbrs[v].add(u)
    return nbrs


def has_triangle(G):
    nbrs = neighbor_sets(G)
    return any(nbrs[u] & nbrs[v] for u, v in G.edges())


def has_c4(G):
    nbrs = neighbor_sets(G)
    for x, y in itertools.combinations(range(G.n), 2):
        if len(nbrs[x] & nbrs[y]) >= 2:
            return True
    return False


def two_colorable(G):
    nbrs = neighbor_sets(G)
    color = {}
    for start in range(G.n):
        if start in color:
            continue
        color[start] = 0
        queue = [start]
        while queue:
            u = queue.pop()
            for w in nbrs[u]:
                if w not in color:
                    color[w] = 1 - color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    return False
    return True


def clique_below(s):
    def check(G):
        nbrs = neighbor_sets(G)
        for combo in itertools.combinations(range(G.n), s):
            if all(b in nbrs[a] for a, b in itertools.combinations(combo, 2)):
                return False
        return True

    return check


def free_predicate(tag):
    """Independent family-free test for the families the suite exercises."""
    if tag == "K3":
        return lambda G: not has_triangle(G)
    if tag == "C4":
        return lambda G: not has_c4(G)
    if tag == "odd":
        return two_colorable
    if isinstance(tag, tuple) and tag[0] == "clique":
        return clique_below(tag[1])
    raise ValueError(f"unknown family tag {tag!r}")


def brute_min_deletions(G, free):
    """Minimum deletion count by subset enumeration, smallest size first."""
    edges = list(G.edges())
    if free(G):
        return 0
    for size in range(1, len(edges) + 1):
        for combo in itertools.combinations(edges, size):
            if free(G.with_edges_removed(combo)):
                return size
    raise AssertionError("deleting every edge must satisfy any monotone family")


def brute_r_partite(G, r):
    """Minimum non-crossing edge count over every r-part assignment."""
    edges = list(G.edges())
    best = len(edges)
    for assign in itertools.product(range(r), repeat=G.n):
        uncut = sum(1 for u, v in edges if assign[u] == assign[v])
        best = min(best, uncut)
    return best


def brute_hom_exists(F, K):
    """Is there an edge-preserving map from F into K (plain enumeration)?"""
    k_adj = neighbor_sets(K)
    for image in itertools.product(range(K.n), repeat=F.n):
        if all(image[v] in k_adj[image[u]] for u, v in F.edges()):
            return True
    return False


def brute_hom_weight(W, member_graphs):
    """Minimum total weight of pairs whose removal blocks all member maps."""
    pairs = [(i, j, w) for i, j, w in W.pairs() if w > 0]

    def blocked(keep_mask):
        support = Graph.from_edges(
            W.k,
            [(i, j) for idx, (i, j, _) in enumerate(pairs) if keep_mask >> idx & 1],
        )
        return not any(brute_hom_exists(F, support) for F in member_graphs)

    best = None
    for keep in range(1 << len(pairs)):
        if blocked(keep):
            removed = sum(
                w for idx, (_, _, w) in enumerate(pairs) if not keep >> idx & 1
            )
            if best is None or removed < best:
                best = removed
    assert best is not None
    return Fraction(best)
