"""Independent checker for regular pairs and nested partition pairs.

This module deliberately re-implements the checking criterion from scratch
on its own data representations (neighbor sets instead of bitmask rows, and
its own subset enumeration and deviation statistic) so that agreement with
the construction code in ``regularity`` is evidence, not tautology.

Decision rule per pair at level g, mirroring the construction criterion:

* both sides of size <= 10: exhaustive subset sweep, exact answer;
* larger: the one-sided deviation statistic must satisfy stat <= g^5.

The statistic is sound (stat <= g^5 genuinely implies g-regularity), so an
``ok`` verdict from this module never overstates regularity.  For side
sizes 11 and 12 the construction module can decide exactly while this one
falls back to the statistic, so this module is the more conservative of the
two on that narrow band.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import ContractViolation

EXACT_CAP = 10


def _neighbor_sets(G):
    adj = [set() for _ in range(G.n)]
    for u, v in G.edges():
        adj[u].add(v)
        adj[v].add(u)
    return adj


def _as_vertex_list(side):
    if isinstance(side, int):
        out = []
        m = side
        while m:
            low = m & -m
            out.append(low.bit_length() - 1)
            m ^= low
        return out
    return sorted(side)


def _edges_between(adj, a_list, b_set):
    return sum(len(adj[x] & b_set) for x in a_list)


def _exact_regular(adj, a_list, b_list, gamma):
    """Exhaustive decision: no qualifying subset pair deviates by more
    than gamma from the pair density."""
    a, b = len(a_list), len(b_list)
    d = Fraction(_edges_between(adj, a_list, set(b_list)), a * b)
    # intersection sizes of each A-vertex's neighborhood with every B-subset
    b_index = {y: j for j, y in enumerate(b_list)}
    nbr_bits = []
    for x in a_list:
        bits = 0
        for y in adj[x]:
            j = b_index.get(y)
            if j is not None:
                bits |= 1 << j
        nbr_bits.append(bits)
    min_sa = None
    for am in range(1, 1 << a):
        sa = am.bit_count()
        if sa * 1 < gamma * a:  # |A'| >= gamma |A| fails
            continue
        chosen = [nbr_bits[i] for i in range(a) if am >> i & 1]
        for bm in range(1, 1 << b):
            sb = bm.bit_count()
            if sb * 1 < gamma * b:
                continue
            e = 0
            for bits in chosen:
                e += (bits & bm).bit_count()
            if abs(Fraction(e, sa * sb) - d) > gamma:
                return False
    return True


def _stat_side(adj, a_list, b_set, d):
    a = len(a_list)
    b = len(b_set)
    degs = {x: len(adj[x] & b_set) for x in a_list}
    d_abs = sum(abs(Fraction(deg) - d * b) for deg in degs.values())
    d2b = d * d * b
    c_plus = Fraction(0)
    for x in a_list:
        nx = adj[x] & b_set
        for x2 in a_list:
            if x2 == x:
                continue
            sigma = len(nx & adj[x2])
            excess = Fraction(sigma) - d2b
            if excess > 0:
                c_plus += excess
    top = a * b * d * (1 - d) + (1 + 2 * d * (a - 1)) * d_abs + c_plus
    return top / (a * a * b)


def verify_regular_pair(G, a_side, b_side, gamma):
    """Decide (or soundly bound) g-regularity of a disjoint pair."""
    gamma = Fraction(gamma)
    a_list = _as_vertex_list(a_side)
    b_list = _as_vertex_list(b_side)
    if not a_list or not b_list:
        raise ContractViolation("pair sides must be nonempty")
    if set(a_list) & set(b_list):
        raise ContractViolation("pair sides must be disjoint")
    adj = _neighbor_sets(G)
    if len(a_list) <= EXACT_CAP and len(b_list) <= EXACT_CAP:
        return _exact_regular(adj, a_list, b_list, gamma)
    b_set = set(b_list)
    a_set = set(a_list)
    d = Fraction(_edges_between(adj, a_list, b_set), len(a_list) * len(b_list))
    stat = min(_stat_side(adj, a_list, b_set, d), _stat_side(adj, b_list, a_set, d))
    return stat <= gamma ** 5


@dataclass(frozen=True)
class VerifierReport:
    ok: bool
    cond1_ok: bool
    cond2_ok: bool
    outer_order: int
    l: int
    bad_inner_worst: int
    bad_outer_pairs: int
    pairs_checked: int


def verify_nested_pair(G, outer_assignment, inner_assignment, l, e0, ek):
    """Check the two nested-pair conditions from raw class assignments.

    Condition 1: every outer pair has at most ek * l^2 inner pairs that
    fail the per-pair decision at level ek.  Condition 2: at most
    e0 * C(k, 2) outer pairs have more than e0 * l^2 inner pairs whose
    density differs from the outer pair density by at least e0.
    """
    e0 = Fraction(e0)
    ek = Fraction(ek)
    n = len(outer_assignment)
    if len(inner_assignment) != n:
        raise ContractViolation("assignments must cover the same vertex set")
    k = max(outer_assignment) + 1
    if max(inner_assignment) + 1 != k * l:
        raise ContractViolation("inner order must be k * l")
    outer_classes = [[] for _ in range(k)]
    inner_classes = [[] for _ in range(k * l)]
    for v in range(n):
        oc = outer_assignment[v]
        ic = inner_assignment[v]
        if ic // l != oc:
            raise ContractViolation("inner class does not nest in its outer class")
        outer_classes[oc].append(v)
        inner_classes[ic].append(v)
    if any(not c for c in outer_classes) or any(not c for c in inner_classes):
        raise ContractViolation("all classes must be nonempty")
    adj = _neighbor_sets(G)

    def density(xs, ys):
        return Fraction(_edges_between(adj, xs, set(ys)), len(xs) * len(ys))

    def certified(xs, ys):
        if len(xs) <= EXACT_CAP and len(ys) <= EXACT_CAP:
            return _exact_regular(adj, xs, ys, ek)
        d = density(xs, ys)
        stat = min(
            _stat_side(adj, xs, set(ys), d), _stat_side(adj, ys, set(xs), d)
        )
        return stat <= ek ** 5

    cond1_ok = True
    bad_outer = 0
    worst = 0
    pairs_checked = 0
    for i in range(k):
        for i2 in range(i + 1, k):
            d_outer = density(outer_classes[i], outer_classes[i2])
            bad1 = 0
            dev_bad = 0
            for j in range(l):
                xs = inner_classes[i * l + j]
                for j2 in range(l):
                    ys = inner_classes[i2 * l + j2]
                    pairs_checked += 1
                    if not certified(xs, ys):
                        bad1 += 1
                    if abs(density(xs, ys) - d_outer) >= e0:
                        dev_bad += 1
            worst = max(worst, bad1)
            if Fraction(bad1) > ek * l * l:
                cond1_ok = False
            if Fraction(dev_bad) > e0 * l * l:
                bad_outer += 1
    cond2_ok = Fraction(bad_outer) <= e0 * (k * (k - 1) // 2)
    return VerifierReport(
        ok=cond1_ok and cond2_ok,
        cond1_ok=cond1_ok,
        cond2_ok=cond2_ok,
        outer_order=k,
        l=l,
        bad_inner_worst=worst,
        bad_outer_pairs=bad_outer,
        pairs_checked=pairs_checked,
    )


def verify_refined_partition(G, ref, schedule):
    """Convenience wrapper taking the construction module's objects."""
    return verify_nested_pair(
        G,
        list(ref.outer.assignment),
        list(ref.inner.assignment),
        ref.l,
        schedule.e(0),
        schedule.e(ref.outer.k),
    )
