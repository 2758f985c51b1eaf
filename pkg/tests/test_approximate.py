"""Approximation pipeline routing and the induced-subgraph sampling estimator."""

import random
from fractions import Fraction

import pytest

from conftest import random_graph
from edlab.approximate import approximate_edit_density, sample_estimate
from edlab.errors import ContractViolation
from edlab.exact import edit_distance_exact
from edlab.families import ForbiddenFamily
from edlab.graphs import Graph, blowup
from edlab.regularity import schedule_strict

ODD = ForbiddenFamily.odd_cycles()
K3 = ForbiddenFamily.single(Graph.complete(3))


class TestRouting:
    def test_exact_small(self):
        G = Graph.complete(6)
        rep = approximate_edit_density(G, ODD, Fraction(1, 10))
        assert rep.route == "exact-small"
        assert rep.certified
        assert rep.estimate == edit_distance_exact(G, ODD).normalized

    def test_sparse_zero(self):
        G = Graph.from_edges(40, [(0, 1), (2, 3)])
        rep = approximate_edit_density(G, ODD, Fraction(1, 10))
        assert rep.route == "sparse-zero"
        assert rep.estimate == 0

    def test_pipeline_planted(self):
        G = blowup(Graph.cycle(5), 12)
        sched = schedule_strict(Fraction(1, 8), m=5)
        rep = approximate_edit_density(G, ODD, Fraction(1, 8), schedule=sched)
        assert rep.route == "pipeline"
        assert rep.certified
        assert rep.estimate == Fraction(1, 25)
        assert rep.diagnostics["partition_ok"]

    def test_pipeline_uncertified_still_estimates(self):
        rng = random.Random(61)
        G = random_graph(24, 0.7, rng)
        sched = schedule_strict(Fraction(1, 10), m=2)
        rep = approximate_edit_density(G, ODD, Fraction(1, 10), schedule=sched)
        assert rep.route == "pipeline"
        assert 0 <= rep.estimate <= Fraction(1, 2)
        if not rep.diagnostics["partition_ok"]:
            assert not rep.certified

    def test_estimate_always_in_range(self):
        rng = random.Random(62)
        for _ in range(6):
            G = random_graph(rng.randrange(4, 16), 0.6, rng)
            rep = approximate_edit_density(G, K3, Fraction(1, 6))
            assert 0 <= rep.estimate <= Fraction(1, 2)

    def test_snap_to_grid(self):
        G = Graph.complete(7)
        rep = approximate_edit_density(G, ODD, Fraction(1, 10), snap_to_grid=True)
        assert rep.estimate % Fraction(1, 10) == 0

    def test_validation(self):
        with pytest.raises(ContractViolation):
            approximate_edit_density(Graph.complete(6), ODD, Fraction(0))
        with pytest.raises(ContractViolation):
            approximate_edit_density(Graph.complete(6), ODD, Fraction(2, 3))
        with pytest.raises(ContractViolation):
            # host smaller than the schedule's starting order times class floor
            approximate_edit_density(
                Graph.complete(12), ODD, Fraction(1, 10), schedule=schedule_strict(Fraction(1, 10))
            )

    def test_json_dict_uses_rational_strings(self):
        rep = approximate_edit_density(Graph.complete(5), ODD, Fraction(1, 4))
        d = rep.to_json_dict()
        assert d["estimate"] == "1/5" or "/" in d["estimate"] or d["estimate"].isdigit()
        assert d["route"] == "exact-small"


class TestSampling:
    def test_complete_host_is_deterministic(self):
        rep = sample_estimate(Graph.complete(64), ForbiddenFamily.clique_at_least(3), 8, 5, seed=42)
        assert rep.values == (Fraction(3, 16),) * 5
        assert rep.mean == Fraction(3, 16)

    def test_seed_reproducibility(self):
        G = blowup(Graph.cycle(5), 8)
        a = sample_estimate(G, ODD, 10, 6, seed=7)
        b = sample_estimate(G, ODD, 10, 6, seed=7)
        c = sample_estimate(G, ODD, 10, 6, seed=8)
        assert a.values == b.values
        assert a.values != c.values or a.mean == c.mean  # different seed, may differ

    def test_threads_do_not_change_values(self):
        G = blowup(Graph.cycle(5), 8)
        a = sample_estimate(G, ODD, 10, 6, seed=7)
        b = sample_estimate(G, ODD, 10, 6, seed=7, threads=4)
        assert a.values == b.values

    def test_mean_is_mean(self):
        rng = random.Random(63)
        G = random_graph(20, 0.5, rng)
        rep = sample_estimate(G, K3, 6, 9, seed=1)
        assert rep.mean == sum(rep.values, Fraction(0)) / 9

    def test_validation(self):
        with pytest.raises(ContractViolation):
            sample_estimate(Graph.complete(6), ODD, 8, 2, seed=0)  # d > n
        with pytest.raises(ContractViolation):
            sample_estimate(Graph.complete(6), ODD, 3, 0, seed=0)  # no trials

    def test_env_thread_count(self, monkeypatch):
        monkeypatch.setenv("EDLAB_THREADS", "3")
        G = Graph.complete(16)
        rep = sample_estimate(G, K3, 4, 4, seed=5)
        baseline = sample_estimate(G, K3, 4, 4, seed=5, threads=1)
        assert rep.values == baseline.values
