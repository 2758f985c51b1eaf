"""Extremal counting helpers, cut augmentation, and the dense-equality harness.

* ``turan_count``: edge count of the balanced complete r-partite graph, the
  unique maximizer among r-colorable graphs.
* ``augment_cut``: extends a partial class assignment to a full one by the
  conditional-expectation rule, with the exact guarantee

      crossing >= crossing(assigned part) + (r-1)/r * m

  where m counts edges incident to at least one initially-unassigned
  vertex; the guarantee is asserted, not merely hoped for.
* ``local_search_r_cut``: single-vertex-move hill climbing.
* ``min_degree_equality_harness``: samples graphs of large minimum degree
  and tabulates how often the exact deletion count for a forbidden clique
  pattern equals the exact distance to r-partiteness.
"""

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import ContractViolation
from .exact import edit_distance_value, r_partite_distance_exact
from .families import ForbiddenFamily
from .graphs import Graph
from .smallgraph import chromatic_number


def balanced_partition_sizes(n, r):
    if r < 1 or n < 0:
        raise ContractViolation("need r >= 1 and n >= 0")
    base, extra = divmod(n, r)
    return tuple(base + (1 if i < extra else 0) for i in range(r))


def turan_count(n, r):
    """Edges of the balanced complete r-partite graph on n vertices."""
    sizes = balanced_partition_sizes(n, r)
    return n * (n - 1) // 2 - sum(s * (s - 1) // 2 for s in sizes)


@dataclass(frozen=True)
class CutReport:
    assignment: tuple
    crossing: int
    base_crossing: int
    incident_edges: int
    guarantee: Fraction
    r: int


def _crossing_count(G, assignment):
    total = 0
    for u, v in G.edges():
        if assignment[u] != assignment[v]:
            total += 1
    return total


def augment_cut(G, r, partial=None):
    """Complete a partial assignment greedily, with an exact lower bound.

    Unassigned vertices are processed in descending-degree order (ties by
    index); each goes to the class with the fewest already-assigned
    neighbors (ties to the lowest class).  Every placement gains at least
    (r-1)/r of its edges into the already-placed set, which telescopes to
    the guarantee recorded in the report.
    """
    if r < 2:
        raise ContractViolation("need at least two classes")
    partial = dict(partial or {})
    for v, c in partial.items():
        if not 0 <= v < G.n or not 0 <= c < r:
            raise ContractViolation("partial assignment out of range")
    assignment = [partial.get(v) for v in range(G.n)]
    assigned = {v for v in range(G.n) if assignment[v] is not None}
    base_crossing = sum(
        1
        for u, v in G.edges()
        if u in assigned and v in assigned and assignment[u] != assignment[v]
    )
    incident = sum(
        1 for u, v in G.edges() if u not in assigned or v not in assigned
    )
    order = sorted(
        (v for v in range(G.n) if assignment[v] is None),
        key=lambda v: (-G.degree(v), v),
    )
    for v in order:
        counts = [0] * r
        for u, c in enumerate(assignment):
            if c is not None and G.has_edge(u, v):
                counts[c] += 1
        best = min(range(r), key=lambda c: (counts[c], c))
        assignment[v] = best
    assignment = tuple(assignment)
    crossing = _crossing_count(G, assignment)
    guarantee = Fraction(base_crossing) + Fraction(r - 1, r) * incident
    if Fraction(crossing) < guarantee:
        raise AssertionError("conditional-expectation guarantee violated")
    return CutReport(
        assignment=assignment,
        crossing=crossing,
        base_crossing=base_crossing,
        incident_edges=incident,
        guarantee=guarantee,
        r=r,
    )


@dataclass(frozen=True)
class LocalSearchReport:
    assignment: tuple
    crossing: int
    moves: int
    locally_optimal: bool


def local_search_r_cut(G, r, start=None, max_moves=10000):
    """Hill-climb single-vertex moves until no move increases the crossing."""
    if r < 2:
        raise ContractViolation("need at least two classes")
    if start is None:
        assignment = [v % r for v in range(G.n)]
    else:
        assignment = list(start)
        if len(assignment) != G.n or any(not 0 <= c < r for c in assignment):
            raise ContractViolation("start assignment out of range")
    moves = 0
    improved = True
    while improved and moves < max_moves:
        improved = False
        for v in range(G.n):
            counts = [0] * r
            for u in range(G.n):
                if u != v and G.has_edge(u, v):
                    counts[assignment[u]] += 1
            current = counts[assignment[v]]
            best = min(range(r), key=lambda c: (counts[c], c))
            if counts[best] < current:
                assignment[v] = best
                moves += 1
                improved = True
                if moves >= max_moves:
                    break
    return LocalSearchReport(
        assignment=tuple(assignment),
        crossing=_crossing_count(G, assignment),
        moves=moves,
        locally_optimal=not improved,
    )


# ---------------------------------------------------------------------------
# the dense-equality harness


def is_edge_critical(H):
    """Every single-edge deletion lowers the chromatic number."""
    if H.edge_count() == 0:
        return False
    c = chromatic_number(H)
    for edge in H.edges():
        if chromatic_number(H.with_edges_removed([edge])) >= c:
            return False
    return True


def aes_condition(n, r, delta):
    """Dense-regime predicate: delta > (3r-4) n / (3r-1)."""
    return Fraction(delta) > Fraction((3 * r - 4) * n, 3 * r - 1)


def default_min_degree_floor(n):
    """Floor slightly above 17n/20, capped at n-2 so instances exist."""
    return min(-(-17 * n // 20) + 1, n - 2)


def sample_min_degree_graph(n, floor, rng, p=Fraction(1, 20), max_tries=20000):
    """Complement of a sparse random graph, rejected until delta >= floor."""
    if floor > n - 1:
        raise ContractViolation("no graph meets a floor above n - 1")
    pf = float(p)
    for _ in range(max_tries):
        rows = [0] * n
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < pf:
                    rows[u] |= 1 << v
                    rows[v] |= 1 << u
        G = Graph(n, rows).complement()
        if G.min_degree() >= floor:
            return G
    raise ContractViolation("rejection sampler exhausted its tries")


@dataclass(frozen=True)
class HarnessRow:
    n: int
    delta: int
    count_pattern: int
    count_parts: int
    equal: bool


@dataclass(frozen=True)
class HarnessReport:
    pattern_n: int
    r: int
    rows: tuple

    @property
    def equality_rate(self):
        if not self.rows:
            return Fraction(0)
        return Fraction(sum(1 for row in self.rows if row.equal), len(self.rows))

    def to_text(self):
        lines = [
            f"{row.n} {row.delta} {row.count_pattern} {row.count_parts} "
            f"{1 if row.equal else 0}"
            for row in self.rows
        ]
        return "\n".join(lines) + "\n"


def min_degree_equality_harness(
    H, r, ns, trials, seed, floor=None, p=Fraction(1, 20)
):
    """Compare exact pattern-deletion and r-partiteness counts at high
    minimum degree.

    Requires H edge-critical with chromatic number r + 1 (the regime where
    the two counts are expected to coincide on dense hosts).  Output rows:
    one per sampled graph, fields n, delta, both counts, and the equality
    bit; ``to_text`` renders the space-delimited table.
    """
    if chromatic_number(H) != r + 1:
        raise ContractViolation("pattern must have chromatic number r + 1")
    if not is_edge_critical(H):
        raise ContractViolation("pattern must be edge-critical")
    fam = ForbiddenFamily.single(H)
    rows = []
    rng = random.Random(seed)
    for n in ns:
        f = default_min_degree_floor(n) if floor is None else floor(n)
        for _ in range(trials):
            G = sample_min_degree_graph(n, f, rng, p=p)
            count_pattern = edit_distance_value(G, fam)
            count_parts = r_partite_distance_exact(G, r).raw
            rows.append(
                HarnessRow(
                    n=n,
                    delta=G.min_degree(),
                    count_pattern=count_pattern,
                    count_parts=count_parts,
                    equal=count_pattern == count_parts,
                )
            )
    return HarnessReport(pattern_n=H.n, r=r, rows=tuple(rows))
