import math

import pytest

from strongedge.graph import (
    C4,
    C5,
    CONFIGURATION_KINDS,
    Graph,
    K23,
    K24,
    K33,
    MULTI_EDGE,
    TRIANGLE,
    find_configuration,
    find_edge_cut_at_most,
    format_edge_list,
    gen_blowup_c5,
    gen_incidence_pg,
    gen_random_regular,
    girth,
    graph_from_json,
    graph_to_json,
    is_2k2_free,
    parse_edge_list,
)

from helpers import (
    brute_has_configuration,
    brute_min_cut,
    circulant,
    complete,
    complete_bipartite,
    cycle,
    girth_oracle,
    path,
    petersen,
    random_graph,
    random_graph_max_deg,
)


class TestGraphBasics:
    def test_ids_stable_under_deletion(self):
        g = Graph(5)
        eids = [g.add_edge(i, (i + 1) % 5) for i in range(5)]
        before = {e: g.endpoints(e) for e in eids if e != eids[2]}
        g.remove_edge(eids[2])
        assert {e: g.endpoints(e) for e in g.edges()} == before
        g.remove_vertex(0)
        assert g.vertices() == [1, 2, 3, 4]
        # survivors keep their ids and endpoints
        assert g.endpoints(eids[1]) == (1, 2)

    def test_parallel_edges_get_distinct_ids(self):
        g = Graph(2)
        e1 = g.add_edge(0, 1)
        e2 = g.add_edge(0, 1)
        assert e1 != e2
        assert g.edges_between(0, 1) == [e1, e2]
        assert g.degree(0) == 2

    def test_no_self_loops(self):
        g = Graph(2)
        with pytest.raises(ValueError):
            g.add_edge(1, 1)

    def test_new_ids_never_collide_after_subgraph(self):
        g = Graph(4)
        for i in range(3):
            g.add_edge(i, i + 1)
        sub = g.induced_subgraph([0, 1, 2])
        fresh = sub.add_edge(0, 2)
        assert fresh not in g.edges()

    def test_restore_roundtrip(self):
        g = Graph(4)
        eids = [g.add_edge(i, (i + 1) % 4) for i in range(4)]
        removed = [(e, *g.endpoints(e)) for e in g.incident(0)]
        g.remove_vertex(0)
        g.restore_vertex(0)
        for e, a, b in removed:
            g.restore_edge(e, a, b)
        assert g.edges() == sorted(eids)
        assert g.degree(0) == 2


class TestGirth:
    def test_c5(self):
        assert girth(cycle(5)) == 5

    def test_k4(self):
        assert girth(complete(4)) == 3

    def test_incidence_graph(self):
        g = gen_incidence_pg(3)
        assert girth(g) == 6
        assert girth_oracle(g) == 6

    def test_parallel_pair_is_a_two_cycle(self):
        g = Graph(3)
        g.add_edge(0, 1)
        g.add_edge(0, 1)
        g.add_edge(1, 2)
        assert girth(g) == 2

    def test_forest(self):
        assert girth(path(4)) == math.inf

    def test_matches_oracle_on_random_graphs(self):
        for seed in range(30):
            g = random_graph(8, 10, seed)
            assert girth(g) == girth_oracle(g), f"seed {seed}"


class TestEdgeCut:
    def bridge_fixture(self):
        # two K5-minus-an-edge blocks joined by one bridge at the low-degree ends
        g = Graph(10)
        for base in (0, 5):
            for i in range(5):
                for j in range(i + 1, 5):
                    if (i, j) != (0, 1):
                        g.add_edge(base + i, base + j)
        g.add_edge(0, 5)
        return g

    def test_bridge(self):
        cut = find_edge_cut_at_most(self.bridge_fixture(), 3)
        assert cut is not None and cut.size() == 1
        u, v = self.bridge_fixture().endpoints(cut.cut_edges[0])
        assert {u, v} == {0, 5}

    def test_four_edge_connected_incidence_graph(self):
        g = gen_incidence_pg(3)
        assert find_edge_cut_at_most(g, 3) is None
        nx = pytest.importorskip("networkx")
        h = nx.Graph()
        for e in g.edges():
            h.add_edge(*g.endpoints(e))
        assert nx.edge_connectivity(h) == 4

    def test_c5_cut(self):
        cut = find_edge_cut_at_most(cycle(5), 3)
        assert cut is not None and cut.size() == 2

    def test_disconnected_raises(self):
        g = Graph(4)
        g.add_edge(0, 1)
        g.add_edge(2, 3)
        with pytest.raises(ValueError):
            find_edge_cut_at_most(g, 3)

    def test_minimum_against_bipartition_oracle(self):
        for seed in range(40):
            g = random_graph(7, 9 + seed % 4, seed)
            if not g.is_connected():
                continue
            expected = brute_min_cut(g)
            cut = find_edge_cut_at_most(g, g.num_edges())
            assert cut is not None and cut.size() == expected, f"seed {seed}"
            # returned edge set really disconnects the sides
            h = g.copy()
            for e in cut.cut_edges:
                h.remove_edge(e)
            assert not h.is_connected()


class TestConfigurations:
    def test_k23_identity(self):
        g = complete_bipartite(2, 3)
        conf = find_configuration(g, K23)
        assert conf is not None
        three, two = conf.vertices[:3], conf.vertices[3:]
        assert sorted(three) == [2, 3, 4] and sorted(two) == [0, 1]

    def test_c5_has_no_triangle(self):
        assert find_configuration(cycle(5), TRIANGLE) is None

    def test_petersen_five_cycle(self):
        conf = find_configuration(petersen(), C5)
        assert conf is not None
        g = petersen()
        vs = conf.vertices
        assert len(set(vs)) == 5
        assert all(g.adjacent(vs[i], vs[(i + 1) % 5]) for i in range(5))

    def test_multi_edge(self):
        g = Graph(3)
        g.add_edge(0, 1)
        g.add_edge(1, 2)
        assert find_configuration(g, MULTI_EDGE) is None
        g.add_edge(1, 2)
        conf = find_configuration(g, MULTI_EDGE)
        assert conf is not None and conf.vertices == [1, 2]

    def test_embeddings_are_genuine(self):
        g = circulant(11, (1, 3))
        for kind in (TRIANGLE, K33, K24, K23, C4, C5):
            conf = find_configuration(g, kind)
            if conf is None:
                continue
            vs = conf.vertices
            assert len(set(vs)) == len(vs)
            if kind == K23:
                assert all(g.adjacent(a, b) for a in vs[:3] for b in vs[3:])
            if kind == C4:
                assert all(g.adjacent(vs[i], vs[(i + 1) % 4]) for i in range(4))

    def test_presence_matches_oracle_on_random_graphs(self):
        for seed in range(40):
            g = random_graph_max_deg(8, 12, 4, seed)
            for kind in CONFIGURATION_KINDS:
                found = find_configuration(g, kind) is not None
                assert found == brute_has_configuration(g, kind), (seed, kind)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            find_configuration(cycle(5), "heptagon")


class TestGenerators:
    def test_blowup_t1_is_c5(self):
        g = gen_blowup_c5(1)
        assert g.num_vertices() == 5 and g.num_edges() == 5
        assert girth(g) == 5

    def test_blowup_t2(self):
        g = gen_blowup_c5(2)
        assert g.num_vertices() == 10 and g.num_edges() == 20
        assert all(g.degree(v) == 4 for v in g.vertices())
        assert is_2k2_free(g)

    def test_blowup_t3_edge_count(self):
        g = gen_blowup_c5(3)
        assert g.num_vertices() == 15 and g.num_edges() == 45
        assert all(g.degree(v) == 6 for v in g.vertices())

    def test_blowup_girth_drops_to_four(self):
        # two vertices in one part and two in the next span a 4-cycle
        assert girth(gen_blowup_c5(2)) == 4
        assert girth(gen_blowup_c5(3)) == 4

    def test_incidence_pg2_is_heawood(self):
        g = gen_incidence_pg(2)
        assert g.num_vertices() == 14 and g.num_edges() == 21
        assert all(g.degree(v) == 3 for v in g.vertices())
        assert girth(g) == 6

    def test_incidence_pg3(self):
        g = gen_incidence_pg(3)
        assert g.num_vertices() == 26 and g.num_edges() == 52
        assert all(g.degree(v) == 4 for v in g.vertices())
        assert girth(g) == 6

    def test_incidence_unsupported_order(self):
        with pytest.raises(ValueError):
            gen_incidence_pg(5)

    def test_random_regular_basic(self):
        g = gen_random_regular(4, 10, 7)
        assert g.num_edges() == 20
        assert all(g.degree(v) == 4 for v in g.vertices())
        assert find_configuration(g, MULTI_EDGE) is None

    def test_random_regular_k4(self):
        g = gen_random_regular(3, 4, 1)
        assert g.num_edges() == 6
        assert all(g.adjacent(i, j) for i in range(4) for j in range(i + 1, 4))

    def test_random_regular_degree_sequence(self):
        g = gen_random_regular(4, 9, 0)
        assert g.num_edges() == 18
        assert all(g.degree(v) == 4 for v in g.vertices())

    def test_random_regular_deterministic(self):
        a = gen_random_regular(4, 12, 5)
        b = gen_random_regular(4, 12, 5)
        assert [a.endpoints(e) for e in a.edges()] == [b.endpoints(e) for e in b.edges()]

    def test_random_regular_parity_error(self):
        with pytest.raises(ValueError):
            gen_random_regular(3, 5, 0)

    def test_random_regular_retry_exhaustion(self):
        with pytest.raises(RuntimeError, match="after 0 tries"):
            gen_random_regular(4, 10, 0, max_tries=0)

    def test_regularity_property_sweep(self):
        for seed, (d, n) in enumerate([(3, 8), (4, 10), (4, 13), (2, 9)]):
            g = gen_random_regular(d, n, seed)
            assert all(g.degree(v) == d for v in g.vertices())


class TestTwoKTwoFree:
    def test_c5(self):
        assert is_2k2_free(cycle(5))

    def test_blowup(self):
        assert is_2k2_free(gen_blowup_c5(2))

    def test_long_path(self):
        assert not is_2k2_free(path(5))


class TestFormats:
    def test_edge_list_roundtrip(self):
        g = gen_blowup_c5(2)
        text = format_edge_list(g)
        h = parse_edge_list(text)
        assert h.num_vertices() == g.num_vertices()
        assert sorted(h.endpoints(e) for e in h.edges()) == \
            sorted(g.endpoints(e) for e in g.edges())

    def test_edge_list_parallel_edges(self):
        text = "p 2 2\ne 0 1\ne 0 1\n"
        g = parse_edge_list(text)
        assert g.num_edges() == 2
        assert len(g.edges_between(0, 1)) == 2

    def test_edge_list_errors(self):
        with pytest.raises(ValueError):
            parse_edge_list("e 0 1\n")
        with pytest.raises(ValueError):
            parse_edge_list("p 2 2\ne 0 1\n")
        with pytest.raises(ValueError):
            parse_edge_list("p 2 1\nq 0 1\n")

    def test_json_roundtrip(self):
        g = gen_incidence_pg(2)
        h = graph_from_json(graph_to_json(g))
        assert h.num_vertices() == g.num_vertices()
        assert sorted(h.endpoints(e) for e in h.edges()) == \
            sorted(g.endpoints(e) for e in g.edges())
