"""Balanced cuts, local search, edge-critical patterns, min-degree harness."""

import random
from fractions import Fraction

import pytest

from conftest import brute_r_partite, random_graph
from edlab.errors import ContractViolation
from edlab.exact import edit_distance_value, r_partite_distance_exact
from edlab.extremal import (
    aes_condition,
    augment_cut,
    balanced_partition_sizes,
    default_min_degree_floor,
    is_edge_critical,
    local_search_r_cut,
    min_degree_equality_harness,
    sample_min_degree_graph,
    turan_count,
)
from edlab.families import ForbiddenFamily
from edlab.graphs import Graph


class TestTuranCount:
    def test_frozen_values(self):
        assert turan_count(4, 2) == 4
        assert turan_count(5, 2) == 6
        assert turan_count(6, 3) == 12
        assert turan_count(5, 7) == 10  # all parts singletons

    def test_balanced_sizes(self):
        assert balanced_partition_sizes(10, 3) == (4, 3, 3)
        assert sum(balanced_partition_sizes(17, 4)) == 17

    def test_identity_with_exact_distance(self):
        for n in range(2, 11):
            for r in (2, 3):
                lhs = turan_count(n, r)
                rhs = Graph.complete(n).edge_count() - r_partite_distance_exact(
                    Graph.complete(n), r
                ).raw
                assert lhs == rhs, (n, r)


class TestAugmentCut:
    def test_k4_meets_bound(self):
        rep = augment_cut(Graph.complete(4), 2)
        assert rep.crossing >= 3

    def test_c5_lands_in_range(self):
        rep = augment_cut(Graph.cycle(5), 2)
        assert rep.crossing >= 3
        assert rep.crossing <= 4  # exact optimum

    def test_bipartite_partial_preserved(self):
        G = Graph.complete_bipartite(3, 4)
        partial = {0: 0, 1: 0, 2: 0, 3: 1, 4: 1, 5: 1, 6: 1}
        rep = augment_cut(G, 2, partial=partial)
        assert rep.crossing == G.edge_count()

    def test_guarantee_formula(self):
        rng = random.Random(81)
        for _ in range(12):
            G = random_graph(rng.randrange(4, 12), 0.5, rng)
            for r in (2, 3):
                rep = augment_cut(G, r)
                assert rep.crossing >= rep.guarantee
                assert rep.guarantee == rep.base_crossing + Fraction(
                    (r - 1) * rep.incident_edges, r
                )

    def test_partial_from_midway(self):
        G = Graph.petersen()
        rep = augment_cut(G, 2, partial={0: 0, 1: 0, 4: 1, 5: 1})
        assert rep.crossing >= rep.guarantee
        assignment = rep.assignment
        assert assignment[0] == assignment[1] == 0
        assert assignment[4] == assignment[5] == 1

    def test_out_of_range_partial_rejected(self):
        with pytest.raises(ContractViolation):
            augment_cut(Graph.complete(4), 2, partial={0: 5})
        with pytest.raises(ContractViolation):
            augment_cut(Graph.complete(4), 2, partial={12: 0})


class TestLocalSearch:
    def test_bipartite_reaches_zero_uncut(self):
        for G in (
            Graph.complete_bipartite(3, 4),
            Graph.cycle(6),
            Graph.cycle(8),
            Graph.path(7),
        ):
            rep = local_search_r_cut(G, 2)
            assert rep.locally_optimal
            assert rep.crossing == G.edge_count()

    def test_triangle_leaves_one_edge(self):
        rep = local_search_r_cut(Graph.complete(3), 2)
        assert Graph.complete(3).edge_count() - rep.crossing == 1

    def test_local_optimum_invariant(self):
        rng = random.Random(82)
        for _ in range(10):
            G = random_graph(rng.randrange(5, 14), 0.5, rng)
            r = rng.choice([2, 3])
            rep = local_search_r_cut(G, r)
            assert rep.locally_optimal
            counts = [[0] * r for _ in range(G.n)]
            for u, v in G.edges():
                counts[u][rep.assignment[v]] += 1
                counts[v][rep.assignment[u]] += 1
            for v in range(G.n):
                own = counts[v][rep.assignment[v]]
                assert all(own <= counts[v][p] for p in range(r) if p != rep.assignment[v])

    def test_near_exact_on_small_hosts(self):
        # A single run can stall on a poor local optimum, but every local
        # optimum leaves at most half the edges uncut, and a handful of
        # fixed-seed restarts lands within one edge of the true optimum.
        rng = random.Random(83)
        for _ in range(20):
            G = random_graph(rng.randrange(4, 11), 0.5, rng)
            exact_uncut = brute_r_partite(G, 2)
            best = None
            srng = random.Random(830)
            for t in range(6):
                start = [srng.randrange(2) for _ in range(G.n)] if t else None
                rep = local_search_r_cut(G, 2, start=start)
                assert 2 * rep.crossing >= G.edge_count()
                uncut = G.edge_count() - rep.crossing
                best = uncut if best is None else min(best, uncut)
            assert best <= exact_uncut + 1

    def test_custom_start(self):
        G = Graph.cycle(6)
        rep = local_search_r_cut(G, 2, start=[0] * 6)
        assert rep.crossing == 6


class TestEdgeCritical:
    def test_knowns(self):
        assert is_edge_critical(Graph.complete(3))
        assert is_edge_critical(Graph.complete(4))
        assert is_edge_critical(Graph.cycle(5))
        assert not is_edge_critical(Graph.cycle(4))
        k3_pendant = Graph.from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
        assert not is_edge_critical(k3_pendant)


class TestThresholds:
    def test_aes_condition(self):
        assert aes_condition(10, 2, 5)  # 5 > 2*10/5 = 4
        assert not aes_condition(10, 2, 4)
        assert aes_condition(14, 3, 9)  # 9 > 5*14/8 = 8.75
        assert not aes_condition(14, 3, 8)

    def test_default_floor(self):
        assert [default_min_degree_floor(n) for n in range(8, 13)] == [6, 7, 8, 9, 10]
        assert default_min_degree_floor(40) == 35
        assert default_min_degree_floor(100) == 86

    def test_sampler_respects_floor(self):
        rng = random.Random(84)
        for n in (8, 10, 12):
            floor = default_min_degree_floor(n)
            G = sample_min_degree_graph(n, floor, rng)
            assert G.min_degree() >= floor

    def test_sampler_deterministic(self):
        a = sample_min_degree_graph(10, 8, random.Random(9))
        b = sample_min_degree_graph(10, 8, random.Random(9))
        assert a == b


class TestHarness:
    def test_small_run(self):
        rep = min_degree_equality_harness(Graph.complete(3), 2, [8, 9], 3, seed=5)
        assert len(rep.rows) == 6
        for row in rep.rows:
            assert row.count_pattern <= row.count_parts
            assert row.equal == (row.count_pattern == row.count_parts)
        lines = rep.to_text().splitlines()
        assert len(lines) == 6
        assert all(len(line.split()) == 5 for line in lines)

    def test_pattern_domination_invariant(self):
        # deleting down to an r-partite graph also removes every pattern copy
        rep = min_degree_equality_harness(Graph.cycle(5), 2, [9], 3, seed=6)
        for row in rep.rows:
            assert row.count_pattern <= row.count_parts

    def test_complete_host_identity(self):
        fam = ForbiddenFamily.single(Graph.complete(3))
        for n in (5, 6, 7, 8):
            G = Graph.complete(n)
            assert edit_distance_value(G, fam) == r_partite_distance_exact(G, 2).raw

    def test_rejects_non_edge_critical(self):
        k3_pendant = Graph.from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
        with pytest.raises(ContractViolation):
            min_degree_equality_harness(k3_pendant, 2, [8], 1, seed=0)

    def test_rejects_chromatic_mismatch(self):
        with pytest.raises(ContractViolation):
            min_degree_equality_harness(Graph.complete(3), 3, [8], 1, seed=0)
