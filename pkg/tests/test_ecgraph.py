import pytest

from qisog import ecgraph
from qisog.errors import PreconditionError


class TestSupersingularList:
    @pytest.mark.parametrize("p,count", [(11, 2), (13, 1), (37, 3), (101, 9)])
    def test_counts(self, p, count):
        assert len(ecgraph.supersingular_j_list(p)) == count

    def test_special_j_values(self):
        # j = 0 supersingular iff p = 2 mod 3; j = 1728 iff p = 3 mod 4
        f = ecgraph._field(11)
        js = {f.key(j) for j in ecgraph.supersingular_j_list(11)}
        assert (0, 0) in js and (1728 % 11, 0) in js

    def test_every_reported_j_passes_point_count(self):
        f = ecgraph._field(37)
        for j in ecgraph.supersingular_j_list(37):
            assert ecgraph.is_supersingular_j(f, j)

    def test_ordinary_j_rejected(self):
        f = ecgraph._field(11)
        assert not ecgraph.is_supersingular_j(f, f.scalar(2))


class TestModPoly:
    @pytest.mark.parametrize("ell", [2, 3, 5, 7])
    def test_load_and_validate(self, ell):
        mp = ecgraph.load_modpoly(ell)
        assert mp.degree() == ell + 1
        # symmetric storage: a >= b covers everything
        assert all(a >= b for (a, b) in mp.coeffs)

    def test_phi2_classical_values(self):
        mp = ecgraph.load_modpoly(2)
        assert mp.coefficient(2, 1) == 1488
        assert mp.coefficient(1, 1) == 40773375
        assert mp.coefficient(0, 0) == -157464000000000

    def test_missing_ell_rejected(self):
        with pytest.raises(PreconditionError):
            ecgraph.load_modpoly(13)


class TestIsogenyGraph:
    @pytest.mark.parametrize("p,ell", [(11, 2), (37, 2), (37, 3), (11, 5), (13, 7)])
    def test_out_degree_and_connectivity(self, p, ell):
        g = ecgraph.build_isogeny_graph(p, ell)
        for v in g.vertices():
            assert g.out_degree(v) == ell + 1
        assert g.is_connected()

    def test_p11_l2_shape(self):
        g = ecgraph.build_isogeny_graph(11, 2)
        assert g.num_vertices() == 2
        assert g.num_edges() == 6

    def test_dual_edge_balance_away_from_special_j(self):
        for p, ell in ((37, 2), (101, 2), (37, 3)):
            g = ecgraph.build_isogeny_graph(p, ell)
            f = ecgraph._field(p)
            special = {f.key(f.scalar(0)), f.key(f.scalar(1728))}
            for (s, d), rec in g.edges.items():
                if s != d and s not in special and d not in special:
                    assert g.multiplicity(d, s) == rec["count"]

    def test_ell_equal_p_rejected(self):
        with pytest.raises(PreconditionError):
            ecgraph.build_isogeny_graph(7, 7)


class TestReducedGraph:
    def test_conjugates_merge(self):
        g = ecgraph.build_isogeny_graph(37, 2)
        r = ecgraph.reduce_graph(g)
        assert r.num_vertices() == 2
        assert r.num_vertices() <= g.num_vertices()

    def test_out_degree_preserved(self):
        g = ecgraph.build_isogeny_graph(101, 2)
        r = ecgraph.reduce_graph(g)
        for v in r.vertices():
            assert r.out_degree(v) == 3

    def test_rational_vertices_fixed(self):
        g = ecgraph.build_isogeny_graph(11, 2)
        r = ecgraph.reduce_graph(g)
        assert r.num_vertices() == g.num_vertices() == 2  # both j in F_p
