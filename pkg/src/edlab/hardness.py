"""Generators and verifiers for hardness-reduction instances.

The host graphs live on the affine plane over GF(q): vertices are the q^2
points, and two points are adjacent when the line through them has one of
the first k directions in the canonical order (slopes 0, 1, ..., q-1, then
vertical).  Such a graph is k(q-1)-regular and its adjacency spectrum is
contained in {k(q-1), -k, q-k}, which yields sharp pseudo-randomness via
the edge-distribution (mixing) inequalities checked here with exact
rational arithmetic.

A reduction instance pairs such a host with the pattern F' consisting of r
disjoint b-fold blow-ups of a base pattern F; the planted parameter ell
enters through the exact prediction formula

    predict = (1 - mu_eff) n^2 / (2 r) + mu_eff * r * ell * b^2

and ``recover_ell`` inverts it (nearest integer, half-ties to even, tie
flagged).  mu_eff is the exactly-achieved density parameter 1 - k(q-1)/q^2
after rounding k, and every downstream formula uses mu_eff, never the
requested mu.
"""

import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p, gf_mul, gf_rem

from .errors import ContractViolation, SizeLimitExceeded
from .graphs import (
    Graph,
    blowup,
    disjoint_copies,
    format_rational,
    from_edge_list_text,
    parse_rational,
    to_edge_list_text,
)

MAX_FIELD_ORDER = 49

BUNDLE_FORMAT = "edlab-reduction-bundle-v1"


def _factor_prime_power(q):
    for p in range(2, q + 1):
        if q % p == 0:
            e = 0
            m = q
            while m % p == 0:
                m //= p
                e += 1
            if m == 1:
                return p, e
            return None
    return None


def prime_powers_upto(limit):
    out = []
    for q in range(2, limit + 1):
        pe = _factor_prime_power(q)
        if pe is not None:
            out.append(q)
    return out


class FiniteField:
    """Arithmetic tables for GF(q), q = p^e a prime power up to 49.

    Elements are the integers 0..q-1; the base-p digits of an element are
    the coefficients of its polynomial representative (most significant
    digit = highest power).  For e >= 2 the modulus is the lexicographically
    first monic irreducible polynomial of degree e over GF(p).  Field axioms
    are spot-checked on construction.
    """

    def __init__(self, q):
        pe = _factor_prime_power(q)
        if pe is None:
            raise ContractViolation(f"{q} is not a prime power")
        if q > MAX_FIELD_ORDER:
            raise SizeLimitExceeded(
                "field order too large for table arithmetic",
                cap_name="field-order",
                limit=MAX_FIELD_ORDER,
                actual=q,
            )
        p, e = pe
        self.q = q
        self.p = p
        self.e = e
        self.modulus = self._first_irreducible(p, e) if e > 1 else [1, 0]
        self._add = [[0] * q for _ in range(q)]
        self._mul = [[0] * q for _ in range(q)]
        for a in range(q):
            for b in range(q):
                self._add[a][b] = self._add_slow(a, b)
                self._mul[a][b] = self._mul_slow(a, b)
        self._inv = [None] * q
        for a in range(1, q):
            for b in range(1, q):
                if self._mul[a][b] == 1:
                    self._inv[a] = b
                    break
            if self._inv[a] is None:
                raise ContractViolation("field table lacks an inverse")
        self._spot_check()

    @staticmethod
    def _first_irreducible(p, e):
        for tail in product(range(p), repeat=e):
            poly = [1, *tail]
            if gf_irreducible_p(list(map(ZZ, poly)), p, ZZ):
                return poly
        raise ContractViolation("no irreducible polynomial found")

    def _digits(self, a):
        out = []
        for _ in range(self.e):
            out.append(a % self.p)
            a //= self.p
        return list(reversed(out))

    def _from_digits(self, digits):
        a = 0
        for d in digits:
            a = a * self.p + int(d) % self.p
        return a

    def _add_slow(self, a, b):
        da, db = self._digits(a), self._digits(b)
        return self._from_digits((x + y) % self.p for x, y in zip(da, db))

    def _mul_slow(self, a, b):
        if self.e == 1:
            return a * b % self.p
        pa = list(map(ZZ, self._digits(a)))
        pb = list(map(ZZ, self._digits(b)))
        prod = gf_mul(pa, pb, self.p, ZZ)
        rem = gf_rem(prod, list(map(ZZ, self.modulus)), self.p, ZZ)
        rem = [int(c) for c in rem]
        rem = [0] * (self.e - len(rem)) + rem
        return self._from_digits(rem)

    def _spot_check(self):
        q = self.q
        probes = sorted(set(range(min(q, 6))) | {q - 1})
        for a in probes:
            for b in probes:
                if self._add[a][b] != self._add[b][a] or self._mul[a][b] != self._mul[b][a]:
                    raise ContractViolation("field tables are not commutative")
                for c in probes:
                    if self._add[self._add[a][b]][c] != self._add[a][self._add[b][c]]:
                        raise ContractViolation("field addition is not associative")
                    if self._mul[self._mul[a][b]][c] != self._mul[a][self._mul[b][c]]:
                        raise ContractViolation("field multiplication is not associative")
                    lhs = self._mul[a][self._add[b][c]]
                    rhs = self._add[self._mul[a][b]][self._mul[a][c]]
                    if lhs != rhs:
                        raise ContractViolation("field distributivity fails")
            if self._add[a][0] != a or self._mul[a][1] != a:
                raise ContractViolation("field identities fail")

    def add(self, a, b):
        return self._add[a][b]

    def mul(self, a, b):
        return self._mul[a][b]

    def neg(self, a):
        for b in range(self.q):
            if self._add[a][b] == 0:
                return b
        raise ContractViolation("field element lacks a negative")

    def sub(self, a, b):
        return self._add[a][self.neg(b)]

    def inv(self, a):
        if a == 0:
            raise ContractViolation("zero has no inverse")
        return self._inv[a]

    def elements(self):
        return range(self.q)


def dgt_graph(q, k):
    """Direction graph on GF(q)^2: adjacency along the first k directions.

    Point (x, y) has index x*q + y.  Direction order: slope s lines
    y = s*x + c for s = 0..q-1, then vertical lines x = c.  The graph is
    k(q-1)-regular on n = q^2 vertices.
    """
    field = FiniteField(q)
    if not 1 <= k <= q + 1:
        raise ContractViolation("need 1 <= k <= q + 1 directions")
    n = q * q
    rows = [0] * n
    lines = []
    for s in range(min(k, q)):
        for c in field.elements():
            lines.append([x * q + field.add(field.mul(s, x), c) for x in field.elements()])
    if k == q + 1:
        for c in field.elements():
            lines.append([c * q + y for y in field.elements()])
    for line in lines:
        for i, u in enumerate(line):
            for v in line[i + 1 :]:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
    return Graph(n, rows)


@dataclass(frozen=True)
class SpectrumReport:
    ok: bool
    top: float
    second_abs: float
    max_deviation: float
    allowed: tuple
    eigenvalues: tuple = field(compare=False, repr=False, default=())


def spectrum_check(G, allowed, tol=1e-6):
    """Every adjacency eigenvalue must lie within tol of an allowed value.

    ``second_abs`` is the largest absolute eigenvalue after removing one
    copy of the largest eigenvalue (the usual pseudo-randomness lambda).
    """
    n = G.n
    mat = np.zeros((n, n))
    for u, v in G.edges():
        mat[u, v] = 1.0
        mat[v, u] = 1.0
    eigs = np.linalg.eigvalsh(mat)
    max_dev = 0.0
    for lam in eigs:
        dev = min(abs(lam - a) for a in allowed)
        max_dev = max(max_dev, dev)
    top = float(eigs[-1])
    rest = list(eigs[:-1])
    second = max((abs(x) for x in rest), default=0.0)
    return SpectrumReport(
        ok=max_dev <= tol,
        top=top,
        second_abs=float(second),
        max_deviation=float(max_dev),
        allowed=tuple(float(a) for a in allowed),
        eigenvalues=tuple(float(x) for x in eigs),
    )


def dgt_spectrum_report(q, k, G=None, tol=1e-6):
    if G is None:
        G = dgt_graph(q, k)
    d = k * (q - 1)
    return spectrum_check(G, allowed=(d, -k, q - k), tol=tol)


@dataclass(frozen=True)
class EdgeDistributionReport:
    ok: bool
    form: str
    lhs: Fraction
    bound_sq: Fraction = None
    bound: Fraction = None


def _as_mask(G, side):
    if isinstance(side, int):
        return side
    m = 0
    for v in side:
        if not 0 <= v < G.n:
            raise ContractViolation("vertex out of range")
        m |= 1 << v
    return m


def edge_distribution_check(G, X, Y=None, *, d, lam):
    """Exact-arithmetic mixing inequality for a d-regular graph.

    Disjoint X, Y: |e(X,Y) - d|X||Y|/n| <= lam * sqrt(|X||Y|), compared in
    squared form so no floating point enters.  Single set X:
    |e(X) - d|X|^2/(2n)| <= lam |X| / 2.
    """
    n = G.n
    d = Fraction(d)
    lam = Fraction(lam)
    xmask = _as_mask(G, X)
    if xmask == 0:
        raise ContractViolation("X must be nonempty")
    x = xmask.bit_count()
    if Y is None:
        e = G.count_within(xmask)
        lhs = abs(Fraction(e) - d * x * x / (2 * n))
        bound = lam * x / 2
        return EdgeDistributionReport(
            ok=lhs <= bound, form="single", lhs=lhs, bound=bound
        )
    ymask = _as_mask(G, Y)
    if ymask == 0:
        raise ContractViolation("Y must be nonempty")
    if xmask & ymask:
        raise ContractViolation("X and Y must be disjoint")
    y = ymask.bit_count()
    e = G.count_between(xmask, ymask)
    lhs = abs(Fraction(e) - d * x * y / n)
    bound_sq = lam * lam * x * y
    return EdgeDistributionReport(
        ok=lhs * lhs <= bound_sq, form="pair", lhs=lhs, bound_sq=bound_sq
    )


# ---------------------------------------------------------------------------
# reduction instances


@dataclass(frozen=True)
class HardnessInstance:
    q: int
    k: int
    r: int
    b: int
    mu_request: Fraction
    mu_eff: Fraction
    pattern: Graph
    pattern_blowup: Graph
    host: Graph
    k_clamped: bool = False

    @property
    def n(self):
        return self.q * self.q

    @property
    def d(self):
        return self.k * (self.q - 1)

    @property
    def m(self):
        return self.pattern.n


def choose_field_order(target):
    """Smallest prime power q with target <= q^2 <= 4 * target."""
    for q in prime_powers_upto(MAX_FIELD_ORDER):
        if q * q >= target:
            if q * q > 4 * target:
                raise ContractViolation(
                    f"no prime power q has {target} <= q^2 <= {4 * target}"
                )
            return q
    raise SizeLimitExceeded(
        "reduction size exceeds the field-order table",
        cap_name="reduction-size",
        limit=MAX_FIELD_ORDER * MAX_FIELD_ORDER,
        actual=target,
    )


def build_reduction(F, r, b, mu):
    """Host + pattern pair realizing the planted-count prediction formula.

    The pattern F' is r disjoint copies of the b-fold blow-up of F laid out
    on vertices 0..r*m*b-1 (copy-major, then blow-up-class-major); the host
    is the direction graph on the smallest field whose point count falls in
    the window [r*m*b, 4*r*m*b].
    """
    if not isinstance(F, Graph) or F.edge_count() == 0:
        raise ContractViolation("base pattern must be a graph with at least one edge")
    if r < 1 or b < 1:
        raise ContractViolation("need r >= 1 disjoint copies and blow-up size b >= 1")
    mu = Fraction(mu)
    if not 0 < mu < 1:
        raise ContractViolation("mu must lie strictly between 0 and 1")
    m = F.n
    target = r * m * b
    q = choose_field_order(target)
    k_raw = round(Fraction(1 - mu) * q * q / (q - 1))
    k = min(max(1, k_raw), q + 1)
    mu_eff = 1 - Fraction(k * (q - 1), q * q)
    host = dgt_graph(q, k)
    pattern_blowup = disjoint_copies(blowup(F, b), r)
    return HardnessInstance(
        q=q,
        k=k,
        r=r,
        b=b,
        mu_request=mu,
        mu_eff=mu_eff,
        pattern=F,
        pattern_blowup=pattern_blowup,
        host=host,
        k_clamped=(k != k_raw),
    )


def predict_e_r(inst, ell):
    """Predicted deletion count at planted parameter ell (exact rational)."""
    if ell < 0:
        raise ContractViolation("planted parameter must be >= 0")
    n = inst.n
    lead = (1 - inst.mu_eff) * n * n / (2 * inst.r)
    return lead + inst.mu_eff * inst.r * ell * inst.b * inst.b


@dataclass(frozen=True)
class RecoverResult:
    ell: int
    tie: bool
    predicted: Fraction
    residual: Fraction

    def __int__(self):
        return self.ell


def recover_ell(inst, observed):
    """Invert the prediction: nearest integer, half-ties to even (flagged)."""
    observed = Fraction(observed)
    slope = inst.mu_eff * inst.r * inst.b * inst.b
    if slope == 0:
        raise ContractViolation("degenerate instance: mu_eff is zero")
    lead = (1 - inst.mu_eff) * inst.n * inst.n / (2 * inst.r)
    exact = (observed - lead) / slope
    floor = math.floor(exact)
    frac = exact - floor
    tie = frac == Fraction(1, 2)
    if tie:
        ell = floor if floor % 2 == 0 else floor + 1
    elif frac < Fraction(1, 2):
        ell = floor
    else:
        ell = floor + 1
    predicted = predict_e_r(inst, ell) if ell >= 0 else Fraction(0)
    return RecoverResult(
        ell=ell, tie=tie, predicted=predicted, residual=observed - predicted
    )


def growth_report(inst, delta):
    """Numeric growth comparison: blow-up cost b^2 against n^(2-delta)."""
    delta = float(delta)
    n_power = float(inst.n) ** (2.0 - delta)
    b_sq = float(inst.b * inst.b)
    c_equiv = (
        math.log(inst.b) / math.log(inst.m) if inst.b > 1 and inst.m > 1 else None
    )
    return {
        "n_power": n_power,
        "b_squared": b_sq,
        "ratio": b_sq / n_power if n_power else float("inf"),
        "c_equivalent": c_equiv,
    }


# ---------------------------------------------------------------------------
# envelope measurements


@dataclass(frozen=True)
class Claim71Report:
    rows: tuple
    c_measured: float

    def bound(self, m, n):
        return self.c_measured * m * m * n ** 1.5


def envelope_bound(m, n, c):
    """Envelope value C * m^2 * n^(3/2)."""
    return float(c) * m * m * float(n) ** 1.5


def envelope_sweep(qs=None, tol=1e-6):
    """Measure the envelope constant over a grid of direction graphs.

    For each (q, k) the pseudo-randomness lambda is measured from the exact
    spectrum and expressed as a multiple of sqrt(n); the report's constant
    is the largest multiple seen, so C * m^2 * n^(3/2) dominates the
    lambda * m^2 * n error term on the whole grid.
    """
    if qs is None:
        qs = [q for q in prime_powers_upto(13)]
    rows = []
    c_measured = 0.0
    for q in qs:
        n = q * q
        for k in range(1, q + 2):
            G = dgt_graph(q, k)
            rep = dgt_spectrum_report(q, k, G=G, tol=tol)
            lam = rep.second_abs
            ratio = lam / math.sqrt(n)
            rows.append(
                {"q": q, "k": k, "lambda": lam, "ratio": ratio, "spectrum_ok": rep.ok}
            )
            c_measured = max(c_measured, ratio)
    return Claim71Report(rows=tuple(rows), c_measured=c_measured)


# ---------------------------------------------------------------------------
# count-only estimate with a certified error bound


@dataclass(frozen=True)
class Part1Report:
    estimate: int
    error_bound: float
    sides: tuple
    vacuous: bool
    n: int
    delta_power: float = None


def part1_estimate(G, fam, delta=None):
    """Estimate the deletion count by e(G), with a certified error bound.

    Deleting every edge removes all copies, so e(G) overshoots the true
    count by at most the largest number of edges a member-free graph on n
    vertices can have; with a bipartite member on sides (s, t) that is at
    most the classical bipartite-exclusion bound

        (1/2) * ((t-1)^(1/s) (n-s+1) n^(1-1/s) + (s-1) n).

    ``vacuous`` flags bounds at least as large as the estimate itself.
    """
    sides = fam.bipartite_member_sides()
    if sides is None:
        raise ContractViolation(
            "count-only estimate needs a family with a bipartite member"
        )
    s, t = sides
    n = G.n
    e = G.edge_count()
    bound = 0.5 * (
        (t - 1) ** (1.0 / s) * (n - s + 1) * n ** (1.0 - 1.0 / s) + (s - 1) * n
    )
    return Part1Report(
        estimate=e,
        error_bound=bound,
        sides=(s, t),
        vacuous=bound >= e,
        n=n,
        delta_power=(float(n) ** (2.0 - float(delta)) if delta is not None else None),
    )


# ---------------------------------------------------------------------------
# bundle io


def write_bundle(path, inst):
    os.makedirs(path, exist_ok=True)
    with open(os.path.join(path, "graph.el"), "w") as fh:
        fh.write(to_edge_list_text(inst.host))
    meta = {
        "format": BUNDLE_FORMAT,
        "q": inst.q,
        "k": inst.k,
        "r": inst.r,
        "b": inst.b,
        "m": inst.m,
        "n": inst.n,
        "d": inst.d,
        "mu_request": format_rational(inst.mu_request),
        "mu_eff": format_rational(inst.mu_eff),
        "k_clamped": inst.k_clamped,
        "pattern_n": inst.pattern.n,
        "pattern_edges": [[u, v] for u, v in inst.pattern.edges()],
    }
    with open(os.path.join(path, "meta.json"), "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_bundle(path):
    with open(os.path.join(path, "meta.json")) as fh:
        meta = json.load(fh)
    if meta.get("format") != BUNDLE_FORMAT:
        raise ContractViolation("unrecognized bundle format")
    with open(os.path.join(path, "graph.el")) as fh:
        host = from_edge_list_text(fh.read())
    pattern = Graph.from_edges(
        meta["pattern_n"], [tuple(e) for e in meta["pattern_edges"]]
    )
    inst = HardnessInstance(
        q=meta["q"],
        k=meta["k"],
        r=meta["r"],
        b=meta["b"],
        mu_request=parse_rational(meta["mu_request"]),
        mu_eff=parse_rational(meta["mu_eff"]),
        pattern=pattern,
        pattern_blowup=disjoint_copies(blowup(pattern, meta["b"]), meta["r"]),
        host=host,
        k_clamped=bool(meta.get("k_clamped", False)),
    )
    return inst


@dataclass(frozen=True)
class BundleReport:
    ok: bool
    checks: tuple


def verify_bundle(path_or_inst):
    """Recompute every derivable quantity of a bundle and compare."""
    inst = (
        path_or_inst
        if isinstance(path_or_inst, HardnessInstance)
        else read_bundle(path_or_inst)
    )
    checks = []

    def record(name, ok, detail=""):
        checks.append({"name": name, "ok": bool(ok), "detail": detail})

    record("field-order", _factor_prime_power(inst.q) is not None, f"q={inst.q}")
    record("direction-count", 1 <= inst.k <= inst.q + 1, f"k={inst.k}")
    target = inst.r * inst.m * inst.b
    record(
        "size-window",
        target <= inst.n <= 4 * target,
        f"{target} <= {inst.n} <= {4 * target}",
    )
    mu_eff = 1 - Fraction(inst.k * (inst.q - 1), inst.q * inst.q)
    record("mu-eff", mu_eff == inst.mu_eff, format_rational(mu_eff))
    record("host-order", inst.host.n == inst.n, f"n={inst.host.n}")
    degrees_ok = all(inst.host.degree(v) == inst.d for v in range(inst.host.n))
    record("host-regular", degrees_ok, f"d={inst.d}")
    rebuilt = dgt_graph(inst.q, inst.k)
    record("host-construction", rebuilt == inst.host)
    spec = dgt_spectrum_report(inst.q, inst.k, G=inst.host)
    record(
        "host-spectrum",
        spec.ok,
        f"max deviation {spec.max_deviation:.2e}",
    )
    expected_pattern = disjoint_copies(blowup(inst.pattern, inst.b), inst.r)
    record("pattern-blowup", expected_pattern == inst.pattern_blowup)
    ok = all(c["ok"] for c in checks)
    return BundleReport(ok=ok, checks=tuple(checks))
