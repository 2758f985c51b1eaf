"""Cross-module invariant sweep backing ``edlab verify --suite``.

Each check pits an implementation against an independent reference: the
branch-and-bound oracle against subset brute force, the cut kernel against
direct enumeration over assignments, closed-form restriction parameters
against enumeration, the certifier against the exhaustive pair oracle and
against the independently written verifier, and the reduction arithmetic
against exact roundtrips.  All randomness is seeded; results are
independent of thread count.
"""

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from . import kernels, regularity, verifier
from .errors import ContractViolation
from .exact import edit_distance_exact, edit_distance_value, r_partite_distance_exact
from .families import ForbiddenFamily, family_restriction, psi
from .graphs import Graph
from .hardness import build_reduction, predict_e_r, recover_ell


def random_graph(n, p, rng):
    """Erdos-Renyi sample as a Graph (p a float, rng a random.Random)."""
    rows = [0] * n
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
    return Graph(n, rows)


def brute_edit_distance(G, fam):
    """Reference oracle: try all deletion sets in increasing size order."""
    edges = list(G.edges())
    for k in range(len(edges) + 1):
        for combo in combinations(edges, k):
            H = G.with_edges_removed(combo)
            if fam.find_violation(H.n, list(H.rows)) is None:
                return k
    raise AssertionError("deleting every edge always succeeds")


def brute_r_partite_distance(G, r):
    """Reference count: minimize same-class edges over all assignments."""
    best = None
    for assign in product(range(r), repeat=G.n):
        same = sum(1 for u, v in G.edges() if assign[u] == assign[v])
        if best is None or same < best:
            best = same
    return best


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


def _check_oracle_vs_brute(seed, trials):
    rng = random.Random(seed)
    fams = [
        ForbiddenFamily.odd_cycles(),
        ForbiddenFamily.clique_at_least(3),
        ForbiddenFamily.single(Graph.cycle(4)),
        ForbiddenFamily.explicit([Graph.complete(3), Graph.cycle(5)]),
    ]
    cases = 0
    for t in range(trials):
        n = 5 + t % 3
        p = (0.3, 0.5, 0.6)[t % 3]
        G = random_graph(n, p, rng)
        for fam in fams:
            value = edit_distance_value(G, fam)
            ref = brute_edit_distance(G, fam)
            if value != ref:
                return CheckResult(
                    "oracle-vs-brute",
                    False,
                    f"value {value} != brute {ref} on n={n} seed case {t}",
                )
            res = edit_distance_exact(G, fam)
            if len(res.witness) != value or not res.verify_against(G, fam):
                return CheckResult(
                    "oracle-vs-brute", False, f"bad witness on n={n} seed case {t}"
                )
            cases += 1
    return CheckResult("oracle-vs-brute", True, f"{cases} cases agree")


def _check_rpartite_vs_brute(seed, trials):
    rng = random.Random(seed)
    cases = 0
    for t in range(trials):
        n = 5 + t % 3
        G = random_graph(n, 0.5, rng)
        for r in (2, 3):
            got = r_partite_distance_exact(G, r).raw
            ref = brute_r_partite_distance(G, r)
            if got != ref:
                return CheckResult(
                    "rpartite-vs-brute", False, f"{got} != {ref} on n={n} r={r}"
                )
            cases += 1
    return CheckResult("rpartite-vs-brute", True, f"{cases} cases agree")


def _check_kernel_parity(seed, trials):
    backends = kernels.get_backends()
    if len(backends) < 2:
        return CheckResult(
            "kernel-parity", True, f"single backend ({backends[0][0]}); skipped"
        )
    rng = random.Random(seed)
    cases = 0
    for t in range(trials):
        n = 6 + t % 5
        G = random_graph(n, 0.5, rng)
        for r in (2, 3):
            results = {
                name: kernels.max_rcut(G.n, list(G.rows), r, impl=mod)
                for name, mod in backends
            }
            values = {name: res for name, res in results.items()}
            first = next(iter(values.values()))
            if any(res != first for res in values.values()):
                return CheckResult("kernel-parity", False, f"max_rcut differs: {values}")
        F = Graph.cycle(4)
        embeds = {
            name: kernels.find_embedding(G.n, G.rows, F.n, F.rows, impl=mod)
            for name, mod in backends
        }
        first = next(iter(embeds.values()))
        if any(e != first for e in embeds.values()):
            return CheckResult("kernel-parity", False, f"find_embedding differs: {embeds}")
        a = 4 + t % 3
        b = 4 + (t + 1) % 3
        cols = [rng.randrange(1 << a) for _ in range(b)]
        scans = {
            name: kernels.irregularity_scan(a, b, cols, impl=mod)
            for name, mod in backends
        }
        first = next(iter(scans.values()))
        if any(s != first for s in scans.values()):
            return CheckResult("kernel-parity", False, f"scan differs: {scans}")
        cases += 1
    return CheckResult("kernel-parity", True, f"{cases} cases agree on both backends")


def _psi_by_enumeration(fam, r):
    best = 0
    for R in family_restriction(fam, r, cap=5):
        m = fam.min_member_order_homming_into(R)
        if m is not None and m > best:
            best = m
    return best


def _check_psi_closed_forms(seed, trials):
    fams = [
        ForbiddenFamily.odd_cycles(),
        ForbiddenFamily.clique_at_least(3),
        ForbiddenFamily.clique_at_least(4),
        ForbiddenFamily.single(Graph.complete(3)),
    ]
    cases = 0
    for fam in fams:
        for r in range(1, 6):
            closed = psi(fam, r)
            enum = _psi_by_enumeration(fam, r)
            if closed != enum:
                return CheckResult(
                    "psi-closed-forms",
                    False,
                    f"{fam.describe()} at r={r}: closed {closed} != enumerated {enum}",
                )
            cases += 1
    return CheckResult("psi-closed-forms", True, f"{cases} values agree")


def _check_certifier_sound(seed, trials):
    rng = random.Random(seed)
    cases = 0
    for t in range(trials):
        G = random_graph(16, (0.3, 0.5, 0.7)[t % 3], rng)
        amask = (1 << 8) - 1
        bmask = ((1 << 8) - 1) << 8
        for gamma in (Fraction(1, 4), Fraction(1, 3)):
            rep = regularity.certify_or_witness(G, amask, bmask, gamma)
            exact = regularity.is_regular_at(G, amask, bmask, gamma)
            if rep.kind == "certificate" and not exact:
                return CheckResult(
                    "certifier-sound", False, f"false certificate at gamma={gamma}"
                )
            if rep.kind == "witness":
                if exact:
                    return CheckResult(
                        "certifier-sound", False, f"false witness at gamma={gamma}"
                    )
                sa = rep.a_subset.bit_count()
                sb = rep.b_subset.bit_count()
                d = Fraction(G.count_between(amask, bmask), 64)
                dev = abs(Fraction(G.count_between(rep.a_subset, rep.b_subset), sa * sb) - d)
                if sa < gamma * 8 or sb < gamma * 8 or dev <= gamma:
                    return CheckResult("certifier-sound", False, "witness fails its bounds")
            cases += 1
    return CheckResult("certifier-sound", True, f"{cases} pair decisions consistent")


def _check_verifier_agreement(seed, trials):
    rng = random.Random(seed)
    cases = 0
    for t in range(trials):
        # sides 8 (exact on both) and sides 16 (statistic on both)
        for half in (8, 16):
            G = random_graph(2 * half, 0.5, rng)
            amask = (1 << half) - 1
            bmask = ((1 << half) - 1) << half
            for level in (Fraction(2, 5), Fraction(4, 5)):
                mine = regularity.pair_certified_at(G, amask, bmask, level)
                theirs = verifier.verify_regular_pair(G, amask, bmask, level)
                if mine != theirs:
                    return CheckResult(
                        "verifier-agreement",
                        False,
                        f"disagree at sides {half}, level {level}",
                    )
                cases += 1
    return CheckResult("verifier-agreement", True, f"{cases} decisions agree")


def _check_reduction_roundtrip(seed, trials):
    inst = build_reduction(Graph.cycle(5), 2, 2, Fraction(1, 2))
    if inst.q != 5:
        return CheckResult("reduction-roundtrip", False, f"expected q=5, got {inst.q}")
    for ell in range(13):
        rec = recover_ell(inst, predict_e_r(inst, ell))
        if rec.ell != ell or rec.tie or rec.residual != 0:
            return CheckResult(
                "reduction-roundtrip", False, f"roundtrip failed at ell={ell}"
            )
    return CheckResult("reduction-roundtrip", True, "13 planted values recovered")


def _check_partition_io(seed, trials):
    rng = random.Random(seed)
    G = random_graph(24, 0.5, rng)
    part = regularity.new_equipartition(24, 3)
    ref = regularity.refine_partition(G, part, Fraction(1, 3))
    text = regularity.to_partition_text(ref)
    back = regularity.from_partition_text(text)
    ok = (
        back.outer.assignment == ref.outer.assignment
        and back.inner.assignment == ref.inner.assignment
        and back.l == ref.l
    )
    return CheckResult("partition-io", ok, "text roundtrip preserves both layers")


def _check_schedules(seed, trials):
    regularity.schedule_strict(Fraction(1, 10)).validate()
    regularity.schedule_desk().validate()
    try:
        regularity.ParameterSchedule(
            name="bad",
            epsilon=Fraction(1, 4),
            m=2,
            iteration_cap=2,
            class_floor=1,
            max_order=16,
            rule=lambda r: Fraction(min(r + 1, 3), 8),
        ).validate()
    except ContractViolation:
        return CheckResult("schedule-validation", True, "presets pass, bad rule rejected")
    return CheckResult("schedule-validation", False, "increasing rule was accepted")


CHECKS = (
    ("oracle-vs-brute", _check_oracle_vs_brute),
    ("rpartite-vs-brute", _check_rpartite_vs_brute),
    ("kernel-parity", _check_kernel_parity),
    ("psi-closed-forms", _check_psi_closed_forms),
    ("certifier-sound", _check_certifier_sound),
    ("verifier-agreement", _check_verifier_agreement),
    ("reduction-roundtrip", _check_reduction_roundtrip),
    ("partition-io", _check_partition_io),
    ("schedule-validation", _check_schedules),
)


@dataclass(frozen=True)
class SuiteReport:
    ok: bool
    results: tuple

    def to_lines(self):
        return [
            f"{'ok  ' if r.ok else 'FAIL'} {r.name}: {r.detail}" for r in self.results
        ]


def run_suite(seed=0, trials=6, threads=None):
    """Run every invariant check; deterministic for a fixed (seed, trials)."""

    def run_one(item):
        offset, (name, fn) = item
        try:
            return fn(seed * 7919 + offset, trials)
        except Exception as exc:  # a crashed check is a failed check
            return CheckResult(name, False, f"raised {type(exc).__name__}: {exc}")

    items = list(enumerate(CHECKS))
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = tuple(pool.map(run_one, items))
    else:
        results = tuple(run_one(item) for item in items)
    return SuiteReport(ok=all(r.ok for r in results), results=results)
