"""Forbidden families of graphs: explicit finite lists and named infinite ones.

A family is a set of forbidden graphs, each with at least one edge (an
edgeless forbidden graph would make every host infinitely far from the
property, so construction rejects it).  Explicit families are stored as an
antichain: members containing another member as a subgraph are dropped,
since forbidding the smaller one already forbids the larger.

Named families cover the two infinite sets used throughout: all odd cycles,
and all cliques of at least a given size.  Both get closed-form membership,
violation search, and restriction-parameter formulas; explicit families get
the generic search-based versions.

The JSON wire format accepts ``{"named": "odd-cycles"}``,
``{"named": {"clique-at-least": s}}``, or ``{"graphs": [edge-list, ...]}``
with edge lists in the standard text format.
"""

import json

from . import kernels, smallgraph
from .errors import ContractViolation, SizeLimitExceeded
from .graphs import Graph, from_edge_list_text, to_edge_list_text

MEMBER_SEARCH_CAP = 8


class ForbiddenFamily:
    """A family of forbidden graphs; construct via the classmethods."""

    __slots__ = ("kind", "members", "clique_size", "_frozen")

    def __init__(self, kind, members=None, clique_size=None):
        object.__setattr__(self, "_frozen", False)
        self.kind = kind
        self.members = members
        self.clique_size = clique_size
        object.__setattr__(self, "_frozen", True)

    def __setattr__(self, name, value):
        if getattr(self, "_frozen", False):
            raise AttributeError("ForbiddenFamily is immutable")
        object.__setattr__(self, name, value)

    # -- constructors ------------------------------------------------------

    @classmethod
    def explicit(cls, graphs):
        """Finite family from a list of graphs, normalized to an antichain."""
        graphs = list(graphs)
        if not graphs:
            raise ContractViolation("a forbidden family must be nonempty")
        for G in graphs:
            if G.edge_count() == 0:
                raise ContractViolation(
                    "forbidden graphs must contain at least one edge"
                )
            if G.n > MEMBER_SEARCH_CAP:
                raise SizeLimitExceeded(
                    "explicit family members drive exhaustive pattern searches",
                    cap_name="member-vertices",
                    limit=MEMBER_SEARCH_CAP,
                    actual=G.n,
                )
        ordered = sorted(
            graphs, key=lambda G: (G.n, G.edge_count(), [G.rows[v] for v in range(G.n)])
        )
        deduped = smallgraph.dedupe_isomorphic(ordered)
        kept = []
        for G in deduped:
            redundant = False
            for H in deduped:
                if H is G or H.n > G.n or H.edge_count() > G.edge_count():
                    continue
                if kernels.find_embedding(G.n, G.rows, H.n, H.rows) is not None:
                    redundant = True
                    break
            if not redundant:
                kept.append(G)
        return cls("explicit", members=tuple(kept))

    @classmethod
    def single(cls, H):
        """Family forbidding exactly one graph."""
        return cls.explicit([H])

    @classmethod
    def odd_cycles(cls):
        """All odd cycles C3, C5, C7, ...; hosts avoiding them are bipartite."""
        return cls("odd-cycles")

    @classmethod
    def clique_at_least(cls, s):
        """All complete graphs on s or more vertices (s >= 2)."""
        if s < 2:
            raise ContractViolation(
                "clique threshold must be >= 2 (smaller cliques have no edge)"
            )
        return cls("clique-at-least", clique_size=int(s))

    # -- identity ----------------------------------------------------------

    def describe(self):
        if self.kind == "odd-cycles":
            return "odd-cycles"
        if self.kind == "clique-at-least":
            return f"clique-at-least-{self.clique_size}"
        return f"explicit-{len(self.members)}-members"

    def __repr__(self):
        return f"ForbiddenFamily({self.describe()})"

    def __eq__(self, other):
        if not isinstance(other, ForbiddenFamily):
            return NotImplemented
        if self.kind != other.kind:
            return False
        if self.kind == "clique-at-least":
            return self.clique_size == other.clique_size
        if self.kind == "explicit":
            return self.members == other.members
        return True

    def __hash__(self):
        return hash((self.kind, self.clique_size, self.members))

    # -- structure queries -------------------------------------------------

    @property
    def has_single_edge_member(self):
        """Whether a bare edge (two vertices, one edge) is a member; then any
        host edge forms a copy and every edge must be deleted."""
        if self.kind == "explicit":
            return any(F.n == 2 and F.edge_count() == 1 for F in self.members)
        if self.kind == "clique-at-least":
            return self.clique_size == 2
        return False

    def members_upto(self, n):
        """Members with at most n vertices, smallest first."""
        if self.kind == "explicit":
            return [F for F in self.members if F.n <= n]
        if self.kind == "odd-cycles":
            return [Graph.cycle(k) for k in range(3, n + 1, 2)]
        return [Graph.complete(s) for s in range(self.clique_size, n + 1)]

    def min_member_order(self):
        if self.kind == "explicit":
            return min(F.n for F in self.members)
        if self.kind == "odd-cycles":
            return 3
        return self.clique_size

    def is_member(self, G):
        """Membership of G in the family, up to isomorphism."""
        if self.kind == "explicit":
            return any(smallgraph.graphs_isomorphic(G, F) for F in self.members)
        if self.kind == "odd-cycles":
            if G.n < 3 or G.n % 2 == 0 or G.edge_count() != G.n:
                return False
            return all(G.degree(v) == 2 for v in range(G.n)) and len(
                smallgraph.connected_components(G)
            ) == 1 and not smallgraph.is_bipartite(G)
        return G.n >= self.clique_size and G.edge_count() == G.n * (G.n - 1) // 2

    # -- violation search (copies as subgraphs) ------------------------------

    def find_violation(self, n, rows):
        """Edge list of some member copy in the host given as bitmask rows.

        Returns a sorted tuple of (u, v) host edges forming the copy, or
        None when the host is family-free.
        """
        if self.kind == "odd-cycles":
            cyc = _find_odd_cycle_rows(n, rows)
            if cyc is None:
                return None
            return _cycle_edges(cyc)
        if self.kind == "clique-at-least":
            s = self.clique_size
            if n < s:
                return None
            Ks = Graph.complete(s)
            image = kernels.find_embedding(n, rows, s, Ks.rows)
            if image is None:
                return None
            verts = sorted(image)
            return tuple(
                (verts[i], verts[j]) for i in range(s) for j in range(i + 1, s)
            )
        for F in sorted(self.members, key=lambda F: (F.edge_count(), F.n)):
            if F.n > n:
                continue
            image = kernels.find_embedding(n, rows, F.n, F.rows)
            if image is not None:
                edges = set()
                for u, v in F.edges():
                    a, b = image[u], image[v]
                    edges.add((min(a, b), max(a, b)))
                return tuple(sorted(edges))
        return None

    def find_hom_violation(self, n, rows):
        """Edge list of the image of some member under a homomorphism into
        the host (bitmask rows), or None if no member maps in."""
        if self.kind == "odd-cycles":
            cyc = _find_odd_cycle_rows(n, rows)
            if cyc is None:
                return None
            return _cycle_edges(cyc)
        if self.kind == "clique-at-least":
            # adjacent clique vertices need distinct images, so any
            # homomorphic image of a clique is a clique of the same size
            return self.find_violation(n, rows)
        best = None
        for F in sorted(self.members, key=lambda F: (F.n, F.edge_count())):
            image = kernels.find_hom(n, rows, F.n, F.rows)
            if image is not None:
                edges = set()
                for u, v in F.edges():
                    a, b = image[u], image[v]
                    edges.add((min(a, b), max(a, b)))
                cand = tuple(sorted(edges))
                if best is None or len(cand) < len(best):
                    best = cand
                if len(best) <= 3:
                    break
        return best

    def admits_hom_into(self, G):
        """Whether some member admits a homomorphism into G."""
        return self.find_hom_violation(G.n, G.rows) is not None

    def min_member_order_homming_into(self, G):
        """Smallest member order with a homomorphism into G, or None."""
        if self.kind == "odd-cycles":
            g = odd_girth(G)
            return g
        if self.kind == "clique-at-least":
            s = self.clique_size
            if smallgraph.max_clique_size(G) >= s:
                return s
            return None
        best = None
        for F in sorted(self.members, key=lambda F: F.n):
            if best is not None and F.n >= best:
                break
            if kernels.find_hom(G.n, G.rows, F.n, F.rows) is not None:
                best = F.n
        return best

    def bipartite_member_sides(self):
        """Lex-smallest (s, t) bipartition sides over bipartite members.

        Raises ContractViolation when the family has no bipartite member.
        """
        if self.kind == "odd-cycles":
            raise ContractViolation("family has no bipartite member")
        if self.kind == "clique-at-least":
            if self.clique_size > 2:
                raise ContractViolation("family has no bipartite member")
            return (1, 1)
        best = None
        for F in self.members:
            if smallgraph.is_bipartite(F):
                pair = smallgraph.min_bipartition_sides(F)
                if best is None or pair < best:
                    best = pair
        if best is None:
            raise ContractViolation("family has no bipartite member")
        return best


def odd_girth(G):
    """Length of a shortest odd cycle in G, or None if bipartite."""
    if smallgraph.is_bipartite(G):
        return None
    best = None
    for root in range(G.n):
        dist = [-1] * G.n
        dist[root] = 0
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
                if dist[u] < 0:
                    dist[u] = dist[v] + 1
                    queue.append(u)
        for u, v in G.edges():
            if dist[u] >= 0 and dist[v] >= 0 and (dist[u] + dist[v]) % 2 == 0:
                cand = dist[u] + dist[v] + 1
                if best is None or cand < best:
                    best = cand
    return best


def _find_odd_cycle_rows(n, rows):
    G = Graph(n, list(rows))
    return smallgraph.find_odd_cycle(G)


def _cycle_edges(cycle):
    edges = []
    k = len(cycle)
    for i in range(k):
        a, b = cycle[i], cycle[(i + 1) % k]
        edges.append((min(a, b), max(a, b)))
    return tuple(sorted(edges))


# -- restriction to bounded hosts and the restriction parameter -------------


def family_restriction(fam, r, cap=6):
    """All graphs on at most r vertices receiving a homomorphism from some
    member, up to isomorphism, in deterministic enumeration order."""
    if r > cap:
        raise SizeLimitExceeded(
            "family restriction enumerates all small graphs",
            cap_name="restriction-order",
            limit=cap,
            actual=r,
        )
    if r < 1:
        return []
    out = []
    for R in smallgraph.enumerate_graphs_upto(r):
        if fam.admits_hom_into(R):
            out.append(R)
    return out


def psi(fam, r, cap=6):
    """Restriction parameter: the largest, over r-vertex-bounded targets
    receiving some member, of the smallest member order mapping in; 0 when
    no member maps into any such target.

    Named families use closed forms valid for every r; explicit families
    enumerate targets and are capped.
    """
    if r < 0:
        raise ContractViolation("target order must be >= 0")
    if fam.kind == "odd-cycles":
        if r < 3:
            return 0
        return r if r % 2 == 1 else r - 1
    if fam.kind == "clique-at-least":
        return fam.clique_size if r >= fam.clique_size else 0
    if len(fam.members) == 1:
        H = fam.members[0]
        chi = smallgraph.chromatic_number(H)
        return H.n if r >= chi else 0
    if r > cap:
        raise SizeLimitExceeded(
            "restriction parameter enumerates all small targets",
            cap_name="restriction-order",
            limit=cap,
            actual=r,
        )
    best = 0
    for R in family_restriction(fam, r, cap=cap):
        m = fam.min_member_order_homming_into(R)
        if m is not None and m > best:
            best = m
    return best


# -- JSON wire format --------------------------------------------------------


def family_to_json(fam):
    """Serialize a family to the JSON wire format (a string)."""
    if fam.kind == "odd-cycles":
        payload = {"named": "odd-cycles"}
    elif fam.kind == "clique-at-least":
        payload = {"named": {"clique-at-least": fam.clique_size}}
    else:
        payload = {"graphs": [to_edge_list_text(F) for F in fam.members]}
    return json.dumps(payload, indent=2) + "\n"


def family_from_json(text):
    """Parse the JSON wire format into a ForbiddenFamily."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ContractViolation(f"invalid family JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ContractViolation("family JSON must be an object")
    if "named" in payload:
        named = payload["named"]
        if named == "odd-cycles":
            return ForbiddenFamily.odd_cycles()
        if isinstance(named, dict) and set(named) == {"clique-at-least"}:
            s = named["clique-at-least"]
            if not isinstance(s, int):
                raise ContractViolation("clique threshold must be an integer")
            return ForbiddenFamily.clique_at_least(s)
        raise ContractViolation(f"unknown named family: {named!r}")
    if "graphs" in payload:
        blocks = payload["graphs"]
        if not isinstance(blocks, list) or not blocks:
            raise ContractViolation("'graphs' must be a nonempty list")
        return ForbiddenFamily.explicit([from_edge_list_text(b) for b in blocks])
    raise ContractViolation("family JSON needs 'named' or 'graphs'")
