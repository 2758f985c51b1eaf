"""Forbidden families: membership, minimality, restriction, witness sizes."""

import pytest

from edlab.errors import ContractViolation
from edlab.families import (
    ForbiddenFamily,
    family_from_json,
    family_restriction,
    family_to_json,
    odd_girth,
    psi,
)
from edlab.graphs import Graph
from edlab.smallgraph import graphs_isomorphic


class TestConstructors:
    def test_single(self):
        fam = ForbiddenFamily.single(Graph.complete(3))
        assert fam.is_member(Graph.complete(3))
        assert not fam.is_member(Graph.complete(4))
        assert fam.min_member_order() == 3

    def test_odd_cycles_members(self):
        fam = ForbiddenFamily.odd_cycles()
        for k in (3, 5, 7):
            assert fam.is_member(Graph.cycle(k))
        for k in (4, 6):
            assert not fam.is_member(Graph.cycle(k))
        assert not fam.is_member(Graph.path(3))
        assert [g.n for g in fam.members_upto(7)] == [3, 5, 7]

    def test_clique_at_least(self):
        fam = ForbiddenFamily.clique_at_least(4)
        assert fam.is_member(Graph.complete(4))
        assert fam.is_member(Graph.complete(5))  # any host with a big clique
        assert not fam.is_member(Graph.complete(3))
        assert not fam.is_member(Graph.cycle(5))
        assert fam.clique_size == 4

    def test_explicit_minimalizes(self):
        fam = ForbiddenFamily.explicit([Graph.complete(3), Graph.complete(4)])
        # K4 contains K3, so it is redundant as a minimal violator
        assert fam.is_member(Graph.complete(3))
        assert not fam.is_member(Graph.complete(4))

    def test_explicit_rejects_empty_members(self):
        with pytest.raises(ContractViolation):
            ForbiddenFamily.explicit([Graph.empty(3)])

    def test_single_edge_member(self):
        fam = ForbiddenFamily.explicit([Graph.from_edges(2, [(0, 1)])])
        assert fam.has_single_edge_member
        assert not ForbiddenFamily.odd_cycles().has_single_edge_member


class TestViolations:
    def test_find_violation(self):
        fam = ForbiddenFamily.single(Graph.complete(3))
        host = Graph.complete(4)
        hit = fam.find_violation(host.n, host.rows)
        assert hit is not None
        free = Graph.complete_bipartite(3, 3)
        assert fam.find_violation(free.n, free.rows) is None

    def test_odd_cycles_violation_is_bipartiteness(self):
        fam = ForbiddenFamily.odd_cycles()
        pet = Graph.petersen()
        assert fam.find_violation(pet.n, pet.rows) is not None
        c8 = Graph.cycle(8)
        assert fam.find_violation(c8.n, c8.rows) is None

    def test_admits_hom_into(self):
        fam = ForbiddenFamily.odd_cycles()
        assert fam.admits_hom_into(Graph.cycle(5))
        assert not fam.admits_hom_into(Graph.complete_bipartite(4, 4))
        k3 = ForbiddenFamily.single(Graph.complete(3))
        assert k3.admits_hom_into(Graph.complete(3))
        assert not k3.admits_hom_into(Graph.cycle(5))

    def test_hom_violation_vs_subcopy(self):
        # C9 contains no C3 subgraph but is itself an odd cycle
        fam = ForbiddenFamily.odd_cycles()
        host = Graph.cycle(9)
        assert fam.find_violation(host.n, host.rows) is not None


class TestBipartiteMemberSides:
    def test_c4_family(self):
        fam = ForbiddenFamily.single(Graph.cycle(4))
        assert fam.bipartite_member_sides() == (2, 2)

    def test_k23(self):
        fam = ForbiddenFamily.single(Graph.complete_bipartite(2, 3))
        assert fam.bipartite_member_sides() == (2, 3)

    def test_no_bipartite_member_is_an_error(self):
        with pytest.raises(ContractViolation):
            ForbiddenFamily.odd_cycles().bipartite_member_sides()
        with pytest.raises(ContractViolation):
            ForbiddenFamily.single(Graph.complete(3)).bipartite_member_sides()


class TestRestrictionParameter:
    def test_odd_cycles_closed_form(self):
        fam = ForbiddenFamily.odd_cycles()
        for r in range(1, 8):
            expected = 0 if r < 3 else (r if r % 2 == 1 else r - 1)
            assert psi(fam, r) == expected, r

    def test_single_member_closed_form(self):
        for H, chi in ((Graph.complete(3), 3), (Graph.cycle(5), 3), (Graph.complete(4), 4)):
            fam = ForbiddenFamily.single(H)
            for r in range(1, 7):
                expected = H.n if r >= chi else 0
                assert psi(fam, r) == expected, (H.n, r)

    def test_clique_closed_form(self):
        for s in (3, 4):
            fam = ForbiddenFamily.clique_at_least(s)
            for r in range(1, 7):
                assert psi(fam, r) == (s if r >= s else 0)

    def test_restriction_members_land_in_r_colorable_targets(self):
        fam = ForbiddenFamily.single(Graph.complete(3))
        assert list(family_restriction(fam, 2)) == []
        r3 = family_restriction(fam, 3)
        assert any(graphs_isomorphic(R, Graph.complete(3)) for R in r3)


class TestJsonRoundtrip:
    def test_roundtrip(self):
        fam = ForbiddenFamily.explicit([Graph.complete(3), Graph.cycle(5)])
        back = family_from_json(family_to_json(fam))
        assert back.is_member(Graph.complete(3))
        assert back.is_member(Graph.cycle(5))
        assert not back.is_member(Graph.cycle(7))

    def test_rejects_malformed(self):
        with pytest.raises(ContractViolation):
            family_from_json("{}")
        with pytest.raises(ContractViolation):
            family_from_json("not json")


def test_odd_girth():
    assert odd_girth(Graph.cycle(5)) == 5
    assert odd_girth(Graph.complete(4)) == 3
    assert odd_girth(Graph.cycle(6)) is None
