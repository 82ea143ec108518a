import random
from fractions import Fraction

import pytest

from damkit import (Graph, InputError, PreconditionError, generate_grid,
                    normalize_and_perturb, perturb, random_connected_graph,
                    shortest_path, sssp_distances)
from damkit.graph import Path, normalize_weights

from conftest import brute_min_distance, exhaustive_simple_paths


def test_perturb_assigns_descending_tiebreak_bits():
    # path a-b-c with unit weights: first edge gets bit 2^2, second 2^1
    g = perturb(Graph(3, [(0, 1, 1), (1, 2, 1)]))
    assert g.ties == [4, 2]
    p = shortest_path(g, 0, 2)
    assert p.weight.base == 2 and p.weight.tie == 6


def test_disjoint_equal_length_paths_get_distinct_weights():
    # two vertex-disjoint 0->3 paths of equal base length
    g = perturb(Graph(4, [(0, 1, 1), (1, 3, 1), (0, 2, 1), (2, 3, 1)]))
    upper = Path.from_vertices(g, [0, 1, 3]).weight
    lower = Path.from_vertices(g, [0, 2, 3]).weight
    assert upper.base == lower.base and upper != lower


def test_base_weight_dominates_tiebreak():
    # unit triangle: the direct edge beats any two-edge path regardless of ties
    g = perturb(Graph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)]))
    p = shortest_path(g, 0, 1)
    assert p.vertices == (0, 1)


def test_normalize_rescales_min_weight_to_one():
    raw = [(0, 1, Fraction(3, 2)), (1, 2, Fraction(1, 2))]
    g = normalize_weights(3, raw)
    assert min(w for (_, _, w) in g.edges) == g.scale
    assert [Fraction(w, g.scale) for (_, _, w) in g.edges] == [Fraction(3), Fraction(1)]


def test_nonpositive_weight_rejected():
    with pytest.raises(InputError):
        normalize_weights(2, [(0, 1, Fraction(0))])
    with pytest.raises(InputError):
        Graph(2, [(0, 1, -3)])


def test_duplicate_edge_and_self_loop_rejected():
    with pytest.raises(InputError):
        Graph(3, [(0, 1, 1), (1, 0, 2)])
    with pytest.raises(InputError):
        Graph(3, [(1, 1, 1)])


def test_shortest_path_k2_and_identity():
    g = perturb(Graph(2, [(0, 1, 5)]))
    p = shortest_path(g, 0, 1, {0, 1})
    assert p.vertices == (0, 1) and p.base == 5
    same = shortest_path(g, 1, 1)
    assert same.vertices == (1,) and same.base == 0 and same.num_edges == 0


def test_shortest_path_outside_allowed_rejected():
    g = perturb(Graph(3, [(0, 1, 1), (1, 2, 1)]))
    with pytest.raises(PreconditionError):
        shortest_path(g, 0, 2, {0, 1})


def test_grid_corner_distance_matches_enumeration():
    g = perturb(generate_grid(3, 3))
    assert shortest_path(g, 0, 8).base == brute_min_distance(g, 0, 8) == 4


def test_sssp_star_and_singleton_domain():
    g = perturb(Graph(4, [(0, 1, 1), (0, 2, 1), (0, 3, 1)]))
    d = sssp_distances(g, 0)
    assert all(d[v].base == 1 for v in (1, 2, 3))
    only = sssp_distances(g, 0, {0})
    assert set(only) == {0} and only[0].base == 0


def test_sssp_grid_from_corner_is_manhattan():
    g = perturb(generate_grid(3, 3))
    d = sssp_distances(g, 0)
    for row in range(3):
        for col in range(3):
            assert d[row * 3 + col].base == row + col


def test_sssp_disconnected_vertices_absent():
    g = perturb(Graph(4, [(0, 1, 1), (2, 3, 1)]))
    d = sssp_distances(g, 0)
    assert set(d) == {0, 1}


def test_triangle_inequality_under_perturbed_weights():
    rng = random.Random(0)
    for seed in range(5):
        g = perturb(random_connected_graph(18, 8, seed))
        maps = {v: sssp_distances(g, v) for v in range(g.n)}
        for _ in range(200):
            u, v, w = (rng.randrange(g.n) for _ in range(3))
            duw, duv, dvw = maps[u][w], maps[u][v], maps[v][w]
            assert duw <= duv + dvw


def test_restriction_monotonicity():
    rng = random.Random(1)
    g = perturb(generate_grid(4, 4, "random", seed=2))
    full = frozenset(range(g.n))
    for _ in range(50):
        sub = frozenset(rng.sample(range(g.n), 12))
        pairs = [(u, v) for u in sub for v in sub if u < v]
        rng.shuffle(pairs)
        for (u, v) in pairs[:10]:
            restricted = sssp_distances(g, u, sub).get(v)
            if restricted is not None:
                assert sssp_distances(g, u, full)[v] <= restricted


def test_base_agreement_with_scipy_oracle():
    import numpy as np
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import dijkstra as scipy_dijkstra

    g = perturb(generate_grid(5, 5, "random", seed=6))
    rows, cols, vals = [], [], []
    for (u, v, w) in g.edges:
        rows += [u, v]
        cols += [v, u]
        vals += [w, w]
    mat = csr_matrix((vals, (rows, cols)), shape=(g.n, g.n))
    oracle = scipy_dijkstra(mat, indices=0)
    mine = sssp_distances(g, 0)
    for v in range(g.n):
        assert float(mine[v].base) == oracle[v]


def test_unique_path_lengths_on_random_graphs():
    # small-scale version of the acceptance property: every simple path
    # weight appears exactly once
    for seed in range(10):
        g = perturb(random_connected_graph(7, 3, seed))
        for s in range(g.n):
            for t in range(s + 1, g.n):
                weights = [Path.from_vertices(g, p).weight
                           for p in exhaustive_simple_paths(g, s, t)]
                assert len(weights) == len(set(weights))


def test_unique_minimum_across_random_pairs():
    rng = random.Random(3)
    checked = 0
    seed = 0
    while checked < 1000:
        seed += 1
        g = perturb(random_connected_graph(rng.randint(4, 10), rng.randint(0, 4), seed))
        for _ in range(10):
            s, t = rng.randrange(g.n), rng.randrange(g.n)
            if s == t:
                continue
            paths = exhaustive_simple_paths(g, s, t)
            if not paths:
                continue
            weights = sorted(Path.from_vertices(g, p).weight for p in paths)
            if len(weights) > 1:
                assert weights[0] != weights[1]
            assert shortest_path(g, s, t).weight == weights[0]
            checked += 1
