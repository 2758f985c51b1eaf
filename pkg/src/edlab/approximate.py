"""Additive approximation of the normalized deletion distance.

Three routes, each recorded truthfully in the report:

* ``exact-small`` — tiny hosts go straight to the exact oracle.
* ``sparse-zero`` — when e(G) < eps * n^2, deleting every edge already
  costs less than eps * n^2, so 0 is within the additive target.
* ``pipeline`` — build a nested pair of partitions, read off the reduced
  weighted graph W of class densities, and return the exact weighted
  hom-deletion value H_F(W); with a theorem-grade schedule that value is
  within the additive target of the true normalized distance.

The sampling estimator draws induced subgraphs on a fixed number of
vertices and averages their exact normalized distances; per-trial seeds are
derived deterministically from the base seed, so a report is reproducible
from (seed, d, trials) alone.
"""

import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import regularity
from .errors import ContractViolation
from .exact import edit_distance_exact, hom_edit_distance_exact
from .families import ForbiddenFamily
from .graphs import Graph, format_rational

EXACT_SMALL_CAP = 10


@dataclass(frozen=True)
class ApproxReport:
    estimate: Fraction
    epsilon: Fraction
    route: str
    certified: bool
    diagnostics: dict = field(compare=False, repr=False)
    reduced: object = None
    partition: object = None

    def to_json_dict(self):
        diag = {}
        for key, value in self.diagnostics.items():
            if isinstance(value, Fraction):
                diag[key] = format_rational(value)
            else:
                diag[key] = value
        return {
            "estimate": format_rational(self.estimate),
            "epsilon": format_rational(self.epsilon),
            "route": self.route,
            "certified": self.certified,
            "diagnostics": diag,
        }


def _clamp_unit_half(x):
    if x < 0:
        return Fraction(0)
    if x > Fraction(1, 2):
        return Fraction(1, 2)
    return x


def _snap(value, epsilon):
    """Round to the nearest multiple of epsilon (ties toward zero stay exact
    because value and epsilon are rationals)."""
    steps = value / epsilon
    nearest = int(steps + Fraction(1, 2)) if steps >= 0 else -int(-steps + Fraction(1, 2))
    return _clamp_unit_half(nearest * epsilon)


def approximate_edit_density(
    G, fam, epsilon, schedule=None, snap_to_grid=False
):
    """Estimate the normalized deletion distance to within epsilon."""
    if not isinstance(G, Graph):
        raise ContractViolation("host must be a Graph")
    if not isinstance(fam, ForbiddenFamily):
        raise ContractViolation("forbidden family required")
    epsilon = Fraction(epsilon)
    if not 0 < epsilon <= Fraction(1, 2):
        raise ContractViolation("epsilon must lie in (0, 1/2]")
    n = G.n
    if n <= EXACT_SMALL_CAP:
        res = edit_distance_exact(G, fam)
        estimate = _snap(res.normalized, epsilon) if snap_to_grid else res.normalized
        return ApproxReport(
            estimate=estimate,
            epsilon=epsilon,
            route="exact-small",
            certified=True,
            diagnostics={"n": n, "raw": res.raw},
        )
    if Fraction(G.edge_count()) < epsilon * n * n:
        return ApproxReport(
            estimate=Fraction(0),
            epsilon=epsilon,
            route="sparse-zero",
            certified=True,
            diagnostics={"n": n, "edges": G.edge_count()},
        )
    if schedule is None:
        schedule = regularity.schedule_strict(epsilon)
    if n < schedule.m * schedule.class_floor:
        raise ContractViolation(
            "host too small for the schedule's initial order; "
            "use a smaller initial order or the exact oracle"
        )
    ref = regularity.e_regular_pair_of_partitions(G, schedule)
    part = ref.inner
    reduced = regularity.reduced_weighted_graph(G, part)
    hom = hom_edit_distance_exact(reduced, fam, cap=max(8, part.k))
    estimate = _clamp_unit_half(hom.normalized)
    if snap_to_grid:
        estimate = _snap(estimate, epsilon)
    certified = bool(
        ref.meta.get("ok")
        and schedule.name == "strict"
        and schedule.epsilon <= epsilon
    )
    diagnostics = {
        "n": n,
        "schedule": schedule.name,
        "partition_order": part.k,
        "partition_ok": bool(ref.meta.get("ok")),
        "partition_reason": ref.meta.get("reason"),
        "iterations": ref.meta.get("iterations"),
        "hom_value": hom.normalized,
        "snap_to_grid": bool(snap_to_grid),
    }
    return ApproxReport(
        estimate=estimate,
        epsilon=epsilon,
        route="pipeline",
        certified=certified,
        diagnostics=diagnostics,
        reduced=reduced,
        partition=ref,
    )


# ---------------------------------------------------------------------------
# sampling estimator


@dataclass(frozen=True)
class SampleReport:
    mean: Fraction
    values: tuple
    d: int
    trials: int
    seed: int

    def to_json_dict(self):
        return {
            "mean": format_rational(self.mean),
            "values": [format_rational(v) for v in self.values],
            "d": self.d,
            "trials": self.trials,
            "seed": self.seed,
        }


def _trial_seed(seed, t):
    return seed * 1_000_003 + t


def _default_threads(threads):
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get("EDLAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def sample_estimate(G, fam, d, trials, seed, threads=None):
    """Mean normalized distance over induced subgraphs on d random vertices.

    Each trial uses its own RNG derived from (seed, trial index), so results
    are independent of trial execution order and thread count.
    """
    if not isinstance(fam, ForbiddenFamily):
        raise ContractViolation("forbidden family required")
    if d < 1 or d > G.n:
        raise ContractViolation("sample size d must satisfy 1 <= d <= n")
    if trials < 1:
        raise ContractViolation("need at least one trial")

    def run_trial(t):
        rng = random.Random(_trial_seed(seed, t))
        verts = sorted(rng.sample(range(G.n), d))
        sub = G.induced_subgraph(verts)
        return edit_distance_exact(sub, fam).normalized

    workers = _default_threads(threads)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = tuple(pool.map(run_trial, range(trials)))
    else:
        values = tuple(run_trial(t) for t in range(trials))
    mean = sum(values, Fraction(0)) / trials
    return SampleReport(mean=mean, values=values, d=d, trials=trials, seed=seed)
