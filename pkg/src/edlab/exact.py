"""Exact oracles: deletion distances, homomorphism variants, packings.

All oracles are exhaustive and exact at desk scale.  The central routine is
a branch-and-bound over hitting sets: while a forbidden copy is present,
some edge of it must be deleted, and branching over those edges with an
accumulating "protected" set (the i-th branch forbids deleting the edges
tried before it) partitions the solution space, so no optimum is counted
twice and protection-aware feasibility queries come for free.

Witness sets are canonical: among all optimal deletion sets the
lexicographically smallest (as a sorted tuple of (u, v) pairs) is returned.
This is built in a second phase by greedy inclusion with feasibility
queries, so the value search itself stays unconstrained and fast.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from . import kernels, smallgraph
from .errors import ContractViolation, SizeLimitExceeded
from .families import ForbiddenFamily
from .graphs import Graph, WeightedCompleteGraph

EDIT_CAP_DEFAULT = 16
HOM_CAP_DEFAULT = 8
PACKING_CAP_DEFAULT = 8
PATTERN_CAP_DEFAULT = 8


@dataclass(frozen=True)
class DistanceResult:
    """Outcome of an exact deletion-distance computation.

    ``raw`` counts deleted edges; ``normalized`` divides by n^2 (zero for
    the empty host).  ``witness`` is an optimal deletion set, and
    ``partition`` carries the optimal class assignment for partition-style
    distances.
    """

    raw: object
    normalized: Fraction
    witness: tuple
    partition: tuple = None

    def verify_against(self, G, fam):
        """Check the witness: deleting it really leaves G family-free."""
        rows = list(G.rows)
        for u, v in self.witness:
            if not rows[u] >> v & 1:
                return False
            rows[u] ^= 1 << v
            rows[v] ^= 1 << u
        return fam.find_violation(G.n, rows) is None


# ---------------------------------------------------------------------------
# copy and homomorphism existence


def contains_copy(G, F, cap=PATTERN_CAP_DEFAULT):
    """Injective copy of F in G as a dict pattern->host, or None."""
    if F.n > cap:
        raise SizeLimitExceeded(
            "pattern too large for exhaustive copy search",
            cap_name="pattern-vertices",
            limit=cap,
            actual=F.n,
        )
    image = kernels.find_embedding(G.n, G.rows, F.n, F.rows)
    if image is None:
        return None
    return {i: image[i] for i in range(F.n)}


def hom_exists(F, K, cap=PATTERN_CAP_DEFAULT):
    """Whether an edge-preserving map from F into K exists."""
    if F.n > cap:
        raise SizeLimitExceeded(
            "pattern too large for exhaustive homomorphism search",
            cap_name="pattern-vertices",
            limit=cap,
            actual=F.n,
        )
    return kernels.find_hom(K.n, K.rows, F.n, F.rows) is not None


# ---------------------------------------------------------------------------
# unweighted deletion distance


def _pair_bit(n, u, v):
    return 1 << (u * n + v)


def _structural_parts(fam):
    """Class count r such that family-free graphs are at most r-partite-sized.

    Families forbidding a complete graph on s vertices bound free graphs by
    the balanced (s-1)-partite edge count; forbidding all odd cycles bounds
    them by the bipartite count.  Returns None when no such bound applies.
    """
    if fam.kind == "odd-cycles":
        return 2
    if fam.kind == "clique-at-least":
        return fam.clique_size - 1
    best = None
    for F in fam.members:
        if F.n >= 2 and F.edge_count() == F.n * (F.n - 1) // 2:
            cand = F.n - 1
            if best is None or cand < best:
                best = cand
    return best


def _balanced_parts_count(n, r):
    sizes = [n // r + (1 if i < n % r else 0) for i in range(r)]
    return n * (n - 1) // 2 - sum(s * (s - 1) // 2 for s in sizes)


def _packing_lb(n, rows, fam, budget):
    """Greedy edge-disjoint violation packing; early exit above budget."""
    work = list(rows)
    count = 0
    while count <= budget:
        viol = fam.find_violation(n, work)
        if viol is None:
            break
        count += 1
        for u, v in viol:
            work[u] &= ~(1 << v)
            work[v] &= ~(1 << u)
    return count


def _edge_count(rows):
    return sum(r.bit_count() for r in rows) // 2


def _bb_solve(n, rows, fam, budget, prot, struct_r):
    """Minimum deletions (avoiding protected pairs) within budget, else None."""
    viol = fam.find_violation(n, rows)
    if viol is None:
        return 0
    if budget <= 0:
        return None
    lb = _packing_lb(n, rows, fam, budget)
    if struct_r is not None:
        lb2 = _edge_count(rows) - _balanced_parts_count(n, struct_r)
        if lb2 > lb:
            lb = lb2
    if lb > budget:
        return None
    best = None
    for u, v in viol:
        bit = _pair_bit(n, u, v)
        if prot & bit:
            continue
        child_budget = (budget if best is None else best - 1) - 1
        if child_budget < 0:
            break
        rows[u] ^= 1 << v
        rows[v] ^= 1 << u
        sub = _bb_solve(n, rows, fam, child_budget, prot, struct_r)
        rows[u] ^= 1 << v
        rows[v] ^= 1 << u
        if sub is not None:
            best = sub + 1
            if best <= lb:
                break
        prot |= bit
    return best


def _greedy_ub(n, rows, fam):
    work = list(rows)
    count = 0
    while True:
        viol = fam.find_violation(n, work)
        if viol is None:
            return count
        u, v = viol[0]
        work[u] &= ~(1 << v)
        work[v] &= ~(1 << u)
        count += 1


def edit_distance_value(G, fam, cap=EDIT_CAP_DEFAULT):
    """Minimum number of edge deletions making G free of every family member.

    Value-only fast path used by sweeps and samplers; ``edit_distance_exact``
    adds the canonical witness on top of it.
    """
    if not isinstance(fam, ForbiddenFamily):
        raise ContractViolation("expected a ForbiddenFamily")
    if G.n > cap:
        raise SizeLimitExceeded(
            "exact deletion distance restricted to desk-scale hosts",
            cap_name="edit-vertices",
            limit=cap,
            actual=G.n,
        )
    if fam.has_single_edge_member:
        return G.edge_count()
    rows = list(G.rows)
    if fam.find_violation(G.n, rows) is None:
        return 0
    if fam.kind == "odd-cycles":
        cut, _ = kernels.max_rcut(G.n, rows, 2)
        return G.edge_count() - cut
    struct_r = _structural_parts(fam)
    if struct_r is not None and 2 <= struct_r <= 8 and G.n >= 2:
        # splitting into struct_r classes is an achievable deletion strategy
        try:
            cut, _ = kernels.max_rcut(G.n, rows, struct_r)
            ub = G.edge_count() - cut
        except SizeLimitExceeded:
            ub = _greedy_ub(G.n, rows, fam)
    else:
        ub = _greedy_ub(G.n, rows, fam)
    lb = _packing_lb(G.n, rows, fam, ub)
    if struct_r is not None and 2 <= struct_r:
        lb = max(lb, _edge_count(rows) - _balanced_parts_count(G.n, struct_r))
    if lb >= ub:
        # both bounds are exact (achievable above, certified below)
        return ub
    value = _bb_solve(G.n, rows, fam, ub, 0, struct_r)
    if value is None:
        # the upper bound is achievable, so the search can never fail
        raise AssertionError("branch-and-bound missed its own upper bound")
    return value


def _lex_witness(G, fam, value, struct_r):
    """Lexicographically smallest optimal deletion set, by greedy inclusion.

    Scanning pairs in lex order: stop once the current prefix is already
    family-free; otherwise include the next pair exactly when some optimal
    solution extends prefix + pair using only later pairs.  Skipped pairs
    become protected in the feasibility queries, which is what restricts
    completions to later pairs.
    """
    n = G.n
    rows = list(G.rows)
    witness = []
    prot = 0
    remaining = value
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    for u, v in pairs:
        if remaining == 0:
            break
        if not rows[u] >> v & 1:
            continue
        if fam.find_violation(n, rows) is None:
            break
        rows[u] ^= 1 << v
        rows[v] ^= 1 << u
        sub = _bb_solve(n, rows, fam, remaining - 1, prot, struct_r)
        if sub is not None:
            witness.append((u, v))
            remaining -= 1
        else:
            rows[u] ^= 1 << v
            rows[v] ^= 1 << u
            prot |= _pair_bit(n, u, v)
    if fam.find_violation(n, rows) is not None:
        raise AssertionError("witness construction failed to reach a free graph")
    return tuple(witness)


def edit_distance_exact(G, fam, cap=EDIT_CAP_DEFAULT):
    """Exact deletion distance with the canonical optimal witness."""
    value = edit_distance_value(G, fam, cap=cap)
    if value == 0:
        witness = ()
    elif fam.has_single_edge_member:
        witness = tuple(G.edges())
    else:
        witness = _lex_witness(G, fam, value, _structural_parts(fam))
    normalized = Fraction(0) if G.n == 0 else Fraction(value, G.n * G.n)
    return DistanceResult(raw=value, normalized=normalized, witness=witness)


def r_partite_distance_exact(G, r):
    """Minimum deletions making G r-partite, with an optimal partition.

    Exhaustive over class assignments (vertex 0 pinned), so the budget guard
    in the kernel bounds r**(n-1).  The witness lists the deleted
    (non-crossing) edges of the first optimal assignment in sweep order.
    """
    if r < 1:
        raise ContractViolation("class count must be >= 1")
    cut, assign = kernels.max_rcut(G.n, G.rows, r)
    witness = tuple(
        (u, v) for u, v in G.edges() if assign[u] == assign[v]
    )
    raw = G.edge_count() - cut
    if raw != len(witness):
        raise AssertionError("assignment does not match its cut value")
    normalized = Fraction(0) if G.n == 0 else Fraction(raw, G.n * G.n)
    return DistanceResult(
        raw=raw, normalized=normalized, witness=witness, partition=tuple(assign)
    )


# ---------------------------------------------------------------------------
# weighted homomorphism deletion distance


@dataclass(frozen=True)
class HomDistanceResult:
    """Outcome of the weighted homomorphism deletion distance.

    ``raw`` is the minimum total weight removed; ``normalized`` divides by
    k^2.  ``witness`` is the canonical deleted pair set (zero-weight pairs
    are free, so the lex rule sweeps eligible ones in; the value is what
    matters downstream).
    """

    raw: Fraction
    normalized: Fraction
    witness: tuple


def _support_rows(W, removed):
    rows = [0] * W.k
    for i, j, w in W.pairs():
        if w > 0 and (i, j) not in removed:
            rows[i] |= 1 << j
            rows[j] |= 1 << i
    return rows


def _hom_packing_lb(k, rows, W, fam, budget):
    work = list(rows)
    lb = Fraction(0)
    while lb <= budget:
        viol = fam.find_hom_violation(k, work)
        if viol is None:
            break
        lb += min(W.weight(u, v) for u, v in viol)
        for u, v in viol:
            work[u] &= ~(1 << v)
            work[v] &= ~(1 << u)
    return lb


def _hom_bb(k, rows, W, fam, budget, prot):
    """Minimum removed weight (avoiding protected pairs) within budget."""
    viol = fam.find_hom_violation(k, rows)
    if viol is None:
        return Fraction(0)
    if budget < 0:
        return None
    lb = _hom_packing_lb(k, rows, W, fam, budget)
    if lb > budget:
        return None
    best = None
    for u, v in viol:
        bit = _pair_bit(k, u, v)
        if prot & bit:
            continue
        w = W.weight(u, v)
        child_budget = (budget if best is None else best) - w
        if child_budget < 0:
            continue
        rows[u] ^= 1 << v
        rows[v] ^= 1 << u
        sub = _hom_bb(k, rows, W, fam, child_budget, prot)
        rows[u] ^= 1 << v
        rows[v] ^= 1 << u
        if sub is not None:
            cand = w + sub
            if best is None or cand < best:
                best = cand
                if best <= lb:
                    break
        prot |= bit
    return best


def _hom_value(W, fam):
    k = W.k
    rows = _support_rows(W, frozenset())
    if fam.find_hom_violation(k, rows) is None:
        return Fraction(0)
    if fam.kind == "odd-cycles":
        # minimum weight to make the support bipartite: exhaust the 2^(k-1) cuts
        total = sum(w for _, _, w in W.pairs())
        best_cross = Fraction(0)
        for mask in range(1 << (k - 1)):
            side = (mask << 1) | 0  # vertex 0 pinned to side 0
            cross = Fraction(0)
            for i, j, w in W.pairs():
                if (side >> i & 1) != (side >> j & 1):
                    cross += w
            if cross > best_cross:
                best_cross = cross
        return total - best_cross
    # greedy start: repeatedly drop the lightest pair of some violation
    work = list(rows)
    removed = set()
    ub = Fraction(0)
    while True:
        viol = fam.find_hom_violation(k, work)
        if viol is None:
            break
        u, v = min(viol, key=lambda e: (W.weight(*e), e))
        removed.add((u, v))
        ub += W.weight(u, v)
        work[u] &= ~(1 << v)
        work[v] &= ~(1 << u)
    value = _hom_bb(k, rows, W, fam, ub, 0)
    if value is None:
        raise AssertionError("weighted branch-and-bound missed its upper bound")
    return value


def _hom_lex_witness(W, fam, value):
    k = W.k
    removed = set()
    witness = []
    prot = 0
    spent = Fraction(0)
    for u in range(k):
        for v in range(u + 1, k):
            rows = _support_rows(W, removed)
            if fam.find_hom_violation(k, rows) is None:
                return tuple(witness)
            w = W.weight(u, v)
            if spent + w > value:
                prot |= _pair_bit(k, u, v)
                continue
            trial = set(removed)
            trial.add((u, v))
            rows2 = _support_rows(W, trial)
            sub = _hom_bb(k, rows2, W, fam, value - spent - w, prot)
            if sub is not None:
                removed = trial
                witness.append((u, v))
                spent += w
            else:
                prot |= _pair_bit(k, u, v)
    rows = _support_rows(W, removed)
    if fam.find_hom_violation(k, rows) is not None:
        raise AssertionError("weighted witness construction failed")
    return tuple(witness)


def hom_edit_distance_exact(W, fam, cap=HOM_CAP_DEFAULT):
    """Minimum total weight of pairs to delete from the weighted complete
    graph so that no family member admits a homomorphism into the support
    of the remaining positive weights."""
    if not isinstance(W, WeightedCompleteGraph):
        raise ContractViolation("expected a WeightedCompleteGraph")
    if not isinstance(fam, ForbiddenFamily):
        raise ContractViolation("expected a ForbiddenFamily")
    if W.k > cap:
        raise SizeLimitExceeded(
            "weighted deletion distance restricted to small orders",
            cap_name="hom-order",
            limit=cap,
            actual=W.k,
        )
    value = _hom_value(W, fam)
    witness = _hom_lex_witness(W, fam, value)
    normalized = Fraction(0) if W.k == 0 else value / (W.k * W.k)
    return HomDistanceResult(raw=value, normalized=normalized, witness=witness)


# ---------------------------------------------------------------------------
# minimal forbidden families and packings


def minimal_forbidden_family(predicate, max_size, monotone_samples=120, seed=7):
    """Minimal graphs violating a monotone decreasing property.

    ``predicate`` maps a Graph to a bool and must be preserved by vertex and
    edge deletions; a sampled spot-check guards against non-monotone input.
    Returns the violators all of whose proper subgraphs satisfy the
    predicate, on at most ``max_size`` vertices, in deterministic
    enumeration order.
    """
    import random

    if max_size > 7:
        raise SizeLimitExceeded(
            "minimal-family search enumerates all small graphs",
            cap_name="minimal-family-order",
            limit=7,
            actual=max_size,
        )
    universe = smallgraph.enumerate_graphs_upto(max_size)
    rng = random.Random(seed)
    pool = [G for G in universe if G.n >= 1]
    for G in rng.sample(pool, min(monotone_samples, len(pool))):
        if not predicate(G):
            continue
        for u, v in G.edges():
            if not predicate(G.with_edges_removed([(u, v)])):
                raise ContractViolation(
                    "predicate is not monotone: fails after deleting an edge"
                )
        for v in range(G.n):
            keep = [x for x in range(G.n) if x != v]
            if not predicate(G.induced_subgraph(keep)):
                raise ContractViolation(
                    "predicate is not monotone: fails after deleting a vertex"
                )
    out = []
    for G in universe:
        if predicate(G):
            continue
        minimal = True
        for u, v in G.edges():
            if not predicate(G.with_edges_removed([(u, v)])):
                minimal = False
                break
        if minimal:
            for v in range(G.n):
                keep = [x for x in range(G.n) if x != v]
                if not predicate(G.induced_subgraph(keep)):
                    minimal = False
                    break
        if minimal:
            out.append(G)
    return out


def _all_copy_edge_masks(G, fam):
    """Edge masks (over pair indices) of every member copy in G, deduped."""
    n = G.n
    masks = set()
    for F in fam.members_upto(n):
        if F.n > n:
            continue
        for image in _all_embeddings(G, F):
            mask = 0
            for u, v in F.edges():
                a, b = image[u], image[v]
                if a > b:
                    a, b = b, a
                mask |= _pair_bit(n, a, b)
            masks.add(mask)
    return sorted(masks, key=lambda m: (m.bit_count(), m))


def _all_embeddings(G, F):
    """Every injective edge-preserving map of F into G (exhaustive)."""
    n, k = G.n, F.n
    out = []
    assign = [-1] * k
    used = [False] * n

    def rec(i):
        if i == k:
            out.append(tuple(assign))
            return
        w = F.rows[i] & ((1 << i) - 1)
        cands = range(n)
        for v in cands:
            if used[v]:
                continue
            ok = True
            ww = w
            while ww:
                low = ww & -ww
                if not G.rows[v] >> assign[low.bit_length() - 1] & 1:
                    ok = False
                    break
                ww ^= low
            if ok:
                assign[i] = v
                used[v] = True
                rec(i + 1)
                used[v] = False
        assign[i] = -1

    rec(0)
    return out


def packing_number_exact(G, fam, cap=PACKING_CAP_DEFAULT):
    """Maximum number of pairwise edge-disjoint member copies in G.

    Branches on the lowest-index free edge: either a chosen copy uses it or
    it is wasted; with the edges-left/smallest-copy bound this is exact and
    quick at desk scale.
    """
    if G.n > cap:
        raise SizeLimitExceeded(
            "exact packing restricted to small hosts",
            cap_name="packing-vertices",
            limit=cap,
            actual=G.n,
        )
    masks = _all_copy_edge_masks(G, fam)
    if not masks:
        return 0
    n = G.n
    edge_bits = [_pair_bit(n, u, v) for u, v in G.edges()]
    all_edges_mask = 0
    for b in edge_bits:
        all_edges_mask |= b
    min_size = min(m.bit_count() for m in masks)
    by_edge = {b: [m for m in masks if m & b] for b in edge_bits}
    best = 0

    def rec(free_mask, count):
        nonlocal best
        if count > best:
            best = count
        if count + free_mask.bit_count() // min_size <= best:
            return
        m = free_mask
        while m:
            low = m & -m
            options = [c for c in by_edge[low] if c & ~free_mask == 0]
            for c in options:
                rec(free_mask & ~c, count + 1)
            # or waste this edge entirely
            m &= ~low
            free_mask &= ~low
            if count + free_mask.bit_count() // min_size <= best:
                return
        return

    rec(all_edges_mask, 0)
    return best
