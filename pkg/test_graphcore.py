"""
Test Graph Core - graphs, trigraphs, graph6, clique counting and saturation predicates
"""

from collections import Counter
from itertools import combinations

import networkx as nx
import numpy as np
import pytest

from models import (ColorConflictError, Graph, GraphError, OrderTooSmallError, Pair, PairColor,
                    Trigraph, VertexSet, bits_of, mask_of)
from services.atlas_service import cycle_graph, ehm_graph, petersen_graph, star_graph
from services.clique_service import (clique_number, completion_count, count_r_cliques,
                                     kr_completions, maximal_cliques, maximum_clique)
from services.graph6_service import (Graph6FormatError, graph6_decode, graph6_encode,
                                     read_graph6_lines, strip_graph6_header)
from services.saturation_service import (NotDominatingError, delete_dominating_vertex,
                                         dominating_vertices, is_r_primitive,
                                         is_uniquely_kr_saturated, saturation_verdict,
                                         strip_dominating_vertices)


def brute_clique_count(graph, k):
    return sum(1 for combo in combinations(range(graph.n), k)
               if all(graph.has_edge(a, b) for a, b in combinations(combo, 2)))


def random_graph(rng, n, p=0.5):
    edges = [(a, b) for a, b in combinations(range(n), 2) if rng.random() < p]
    return Graph.from_edges(n, edges)


def random_trigraph(rng, n):
    colors = rng.integers(0, 3, size=n * (n - 1) // 2)
    pairs = [Pair(a, b) for a, b in combinations(range(n), 2)]
    black = [p for p, c in zip(pairs, colors) if c == 0]
    white = [p for p, c in zip(pairs, colors) if c == 1]
    return Trigraph.all_gray(n).assign(black=black, white=white)


# 1. Value types

def test_bits_and_masks():
    assert list(bits_of(0b101001)) == [0, 3, 5]
    assert mask_of([0, 3, 5]) == 0b101001
    assert list(bits_of(0)) == []


def test_pair_is_normalized():
    assert Pair.of(5, 2) == Pair(2, 5)
    assert str(Pair.of(5, 2)) == '{2,5}'
    assert Pair(2, 5).token() == '2-5'
    with pytest.raises(GraphError):
        Pair(3, 3)
    with pytest.raises(GraphError):
        Pair(4, 1)


def test_vertex_set_members():
    s = VertexSet.of([4, 1, 7])
    assert s.members() == (1, 4, 7)
    assert len(s) == 3
    assert 4 in s and 2 not in s


def test_graph_rejects_bad_rows():
    with pytest.raises(GraphError):
        Graph(3, (0b010, 0b000, 0b000))
    with pytest.raises(GraphError):
        Graph(2, (0b01, 0b00))
    with pytest.raises(GraphError):
        Graph(0, ())
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(0, 3)])


def test_graph_basics():
    c5 = cycle_graph(5)
    assert c5.edge_count() == 5
    assert c5.is_regular()
    assert c5.degree_multiset() == Counter({2: 5})
    assert len(c5.non_edges()) == 5
    assert c5.complement().edge_count() == 5
    assert c5.add_edge(0, 2).has_edge(2, 0)


def test_relabel_and_delete_vertex():
    path = Graph.from_edges(3, [(0, 1), (1, 2)])
    relabeled = path.relabel([1, 0, 2])
    assert relabeled.has_edge(1, 0) and relabeled.has_edge(0, 2)
    assert not relabeled.has_edge(1, 2)
    smaller = path.delete_vertex(1)
    assert smaller.n == 2 and smaller.edge_count() == 0
    with pytest.raises(GraphError):
        path.relabel([0, 0, 1])


def test_adjacency_text_and_numpy():
    g = petersen_graph()
    text = g.to_adjacency_text()
    assert text.splitlines()[0] == '10'
    assert Graph.from_adjacency_text(text) == g
    matrix = g.to_numpy()
    assert matrix.shape == (10, 10)
    assert np.array_equal(matrix, matrix.T)
    assert Graph.from_numpy(matrix) == g
    with pytest.raises(GraphError):
        Graph.from_adjacency_text("3\n0 1\n1 0\n")


def test_to_networkx_matches_petersen():
    assert nx.is_isomorphic(petersen_graph().to_networkx(), nx.petersen_graph())


def test_trigraph_assign_and_colors():
    t = Trigraph.all_gray(4).assign(black=[Pair(0, 1)], white=[Pair(2, 3)])
    assert t.color(1, 0) is PairColor.BLACK
    assert t.color(2, 3) is PairColor.WHITE
    assert t.color(0, 2) is PairColor.GRAY
    assert t.gray_count() == 4
    assert t.touched_mask() == 0b1111
    with pytest.raises(ColorConflictError):
        t.assign(white=[Pair(0, 1)])
    with pytest.raises(ColorConflictError):
        t.assign(black=[Pair(2, 3)])
    with pytest.raises(GraphError):
        t.to_graph()


def test_trigraph_from_graph_is_complete():
    t = Trigraph.from_graph(cycle_graph(5))
    assert t.is_complete()
    assert t.to_graph() == cycle_graph(5)


# 2. graph6

def test_graph6_known_strings():
    assert graph6_encode(cycle_graph(5)) == 'Dhc'
    expected = nx.to_graph6_bytes(nx.petersen_graph(), header=False).decode().strip()
    assert graph6_encode(petersen_graph()) == expected


def test_graph6_decode_round_trip():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        n = int(rng.integers(1, 65))
        upper = np.triu(rng.random((n, n)) < rng.random(), 1)
        g = Graph.from_numpy((upper | upper.T).astype(np.uint8))
        assert graph6_decode(graph6_encode(g)) == g
    big = random_graph(rng, 70)
    assert graph6_decode(graph6_encode(big)) == big


def test_graph6_header_and_lines():
    assert strip_graph6_header('>>graph6<<Dhc') == 'Dhc'
    graphs = read_graph6_lines(['Dhc\n', '\n', 'C~\n'])
    assert [g.n for g in graphs] == [5, 4]
    assert graphs[1] == Graph.complete(4)


def test_graph6_rejects_garbage():
    with pytest.raises(Graph6FormatError):
        graph6_decode('')
    with pytest.raises(Graph6FormatError):
        graph6_decode('D h')
    with pytest.raises(Graph6FormatError):
        graph6_decode('D')


# 3. Cliques

def test_clique_counts_match_brute_force():
    rng = np.random.default_rng(11)
    for _ in range(20):
        g = random_graph(rng, 11, 0.6)
        for k in (2, 3, 4, 5):
            assert count_r_cliques(g, k) == brute_clique_count(g, k)


def test_clique_counts_match_independent_sets_of_complement():
    rng = np.random.default_rng(13)
    for _ in range(30):
        g = random_graph(rng, int(rng.integers(2, 11)), rng.random())
        h = g.complement()
        for k in range(1, g.n + 1):
            independent = sum(1 for combo in combinations(range(h.n), k)
                              if not any(h.has_edge(a, b) for a, b in combinations(combo, 2)))
            assert count_r_cliques(g, k) == independent


def test_clique_count_cap_and_edges():
    k6 = Graph.complete(6)
    assert count_r_cliques(k6, 3) == 20
    assert count_r_cliques(k6, 3, cap=2) == 2
    assert count_r_cliques(k6, 7) == 0
    assert count_r_cliques(k6, 0) == 1


def test_completion_count_and_kr_completions():
    g = star_graph(4)
    assert completion_count(g.adj, 1, 2, 3) == 1
    t = Trigraph.from_graph(g)
    assert kr_completions(t, Pair(1, 2), 3) == [VertexSet.of([0])]
    assert kr_completions(t, Pair(0, 1), 3) == []


def test_kr_completions_match_brute_force():
    rng = np.random.default_rng(19)
    for _ in range(40):
        n = int(rng.integers(4, 13))
        t = random_trigraph(rng, n)
        r = int(rng.integers(3, min(6, n + 1)))
        u, v = sorted(int(x) for x in rng.choice(n, size=2, replace=False))
        others = [w for w in range(n) if w not in (u, v)]
        expected = []
        for combo in combinations(others, r - 2):
            pairs = [(a, b) for a, b in combinations(sorted(combo + (u, v)), 2) if (a, b) != (u, v)]
            if all(t.color(a, b) is PairColor.BLACK for a, b in pairs):
                expected.append(combo)
        found = sorted(s.members() for s in kr_completions(t, Pair(u, v), r))
        assert found == sorted(expected)


def test_clique_number_and_maximum_clique():
    rng = np.random.default_rng(3)
    for _ in range(10):
        g = random_graph(rng, 14, 0.5)
        expected = max(len(c) for c in nx.find_cliques(g.to_networkx()))
        assert clique_number(g) == expected
        clique = maximum_clique(g).members()
        assert all(g.has_edge(a, b) for a, b in combinations(clique, 2))


def test_maximal_cliques_match_networkx():
    rng = np.random.default_rng(5)
    g = random_graph(rng, 12, 0.5)
    ours = sorted(tuple(c.members()) for c in maximal_cliques(g))
    theirs = sorted(tuple(sorted(c)) for c in nx.find_cliques(g.to_networkx()))
    assert ours == theirs
    assert all(0 in c for c in maximal_cliques(g, containing=0))


# 4. Saturation

def test_verdicts_on_small_graphs():
    assert saturation_verdict(cycle_graph(5), 3).line() == 'YES'
    assert saturation_verdict(cycle_graph(6), 3).line() == 'NO non-edge {0,3} has 0 completions'
    assert saturation_verdict(Graph.complete(4), 4).line() == 'NO contains K_4'
    two_paths = Graph.from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3)])
    assert saturation_verdict(two_paths, 3).line() == 'NO non-edge {0,1} has >=2 completions'


def brute_uniquely_saturated(graph, r):
    if brute_clique_count(graph, r):
        return False
    for a, b in combinations(range(graph.n), 2):
        if graph.has_edge(a, b):
            continue
        common = [w for w in range(graph.n) if graph.has_edge(a, w) and graph.has_edge(b, w)]
        if sum(1 for combo in combinations(common, r - 2)
               if all(graph.has_edge(x, y) for x, y in combinations(combo, 2))) != 1:
            return False
    return True


def test_saturation_predicate_matches_definition():
    rng = np.random.default_rng(23)
    graphs = [random_graph(rng, int(rng.integers(3, 9)), rng.random()) for _ in range(150)]
    graphs += [cycle_graph(5), petersen_graph().delete_vertex(0), star_graph(4), ehm_graph(4, 3),
               cycle_graph(7).complement()]
    positives = 0
    for g in graphs:
        for r in range(3, min(g.n, 5) + 1):
            expected = brute_uniquely_saturated(g, r)
            assert is_uniquely_kr_saturated(g, r) == expected
            positives += expected
    assert positives >= 4


def test_star_is_saturated_but_not_primitive():
    star = star_graph(5)
    assert is_uniquely_kr_saturated(star, 3)
    assert not is_r_primitive(star, 3)
    assert saturation_verdict(star, 3, primitive=True).line() == 'NO dominating vertex 0'


def test_order_too_small():
    with pytest.raises(OrderTooSmallError):
        is_uniquely_kr_saturated(cycle_graph(5), 6)
    with pytest.raises(GraphError):
        saturation_verdict(cycle_graph(5), 1)


def test_odd_cycle_complements_are_primitive():
    for r in (3, 4, 5, 6):
        g = cycle_graph(2 * r - 1).complement()
        assert is_r_primitive(g, r)
        assert not is_uniquely_kr_saturated(g, r + 1)


def test_complete_graph_minus_edge():
    g = Graph.complete(5).complement().add_edge(0, 1).complement()
    assert is_uniquely_kr_saturated(g, 5)
    assert dominating_vertices(g) == [2, 3, 4]


def test_dominating_vertex_reduction():
    g = ehm_graph(4, 5)
    assert is_uniquely_kr_saturated(g, 4)
    reduced = delete_dominating_vertex(g, 0)
    assert reduced.n == 6 and is_uniquely_kr_saturated(reduced, 3)
    with pytest.raises(NotDominatingError):
        delete_dominating_vertex(g, 4)
    core, r = strip_dominating_vertices(g, 4)
    assert (core, r) == (Graph.empty(5), 2)
    assert strip_dominating_vertices(petersen_graph(), 3) == (petersen_graph(), 3)
