import math
import random
from fractions import Fraction

from damkit import (Graph, build_hierarchy, build_portals, count_splitting_points,
                    detour_path, generate_badgrid, generate_grid, perturb,
                    rel_pairs, threatens)
from damkit.canonical import CanonicalPair, pair_is_valid, pair_order_leq
from damkit.dam import BuildContext
from damkit.detour import SAFE_EDGE, SAFE_SUBPATH, UNSAFE_SUBPATH
from damkit.distances import arc_domain, region_domain
from damkit.generators import badgrid_hierarchy
from damkit.graph import Path


def all_reachable_pairs(idx, terminals):
    seen = {}
    for t in terminals:
        for pair in rel_pairs(idx, t):
            seen.setdefault(pair.key, pair)
    return list(seen.values())


def check_decomposition(idx, result):
    """Tag-specific validation plus edge-for-edge reassembly."""
    g, h, dc = idx.g, idx.h, idx.dc
    pair = result.pair
    rejoined = list(result.pieces[0][1].vertices) if result.pieces else [pair.a]
    for tag, piece in result.pieces[1:]:
        assert piece.vertices[0] == rejoined[-1]
        rejoined.extend(piece.vertices[1:])
    assert tuple(rejoined) == result.path.vertices
    assert len(result.pieces) <= 7 * result.iterations + 3
    region_set = h.regions[pair.region].vertices
    for tag, piece in result.pieces:
        if tag == SAFE_EDGE:
            assert piece.num_edges == 1
        elif tag == SAFE_SUBPATH:
            assert all(v in region_set for v in piece.vertices)
            best = dc.dist(piece.start, piece.end, region_domain(pair.region))
            assert best == piece.weight
        else:
            assert tag == UNSAFE_SUBPATH
            owner = h.owner[piece.start]
            assert owner in h.external_separators(pair.region)
            assert all(h.owner[v] == owner for v in piece.vertices)


def test_root_region_pair_needs_no_detour(grid8_idx):
    idx = grid8_idx
    root = idx.h.root_id
    sep = idx.h.regions[root].separator
    pair = CanonicalPair(sep[0], sep[2], idx.tau_of(sep[2]) or 1, root, root)
    if not pair_is_valid(idx, pair):
        pair = CanonicalPair(sep[0], sep[1], min(idx.tau_of(sep[0]), idx.tau_of(sep[1])),
                             root, root)
    result = detour_path(idx, pair)
    assert result.spliced == 0 and result.iterations == 0
    assert len(result.pieces) == 1 and result.pieces[0][0] == SAFE_SUBPATH
    assert result.path.weight == idx.dc.dist(pair.a, pair.b, pair.domain())


def test_short_pairs_skip_the_scale_sweep(grid8_idx):
    # eps * |P0| < 1: no scale is processed and the exact path is returned
    # (running scale 0 would violate the iteration stretch bound; see ledger)
    idx = grid8_idx
    child = idx.h.regions[idx.h.root_id].children[0]
    found = None
    for v in range(64):
        for pair in rel_pairs(idx, v):
            base = idx.dc.dist_base(pair.a, pair.b, pair.domain())
            if base and idx.eps * base < 1 and pair.region != idx.h.root_id:
                found = pair
                break
        if found:
            break
    assert found is not None
    result = detour_path(idx, found)
    assert result.iterations == 0 and result.spliced == 0
    assert result.path.weight == idx.dc.dist(found.a, found.b, found.domain())


def test_detour_memoization_returns_identical_object(grid8_idx):
    idx = grid8_idx
    pair = all_reachable_pairs(idx, [0, 63])[0]
    assert detour_path(idx, pair) is detour_path(idx, pair)


def test_decomposition_validates_for_all_reachable_pairs(grid8_idx):
    idx = grid8_idx
    pairs = all_reachable_pairs(idx, [0, 7, 56, 63, 27])
    assert pairs
    for pair in pairs:
        check_decomposition(idx, detour_path(idx, pair))


def test_stretch_bound_with_iteration_count(grid8_idx):
    idx = grid8_idx
    eps = float(idx.eps)
    for pair in all_reachable_pairs(idx, [0, 7, 56, 63, 27]):
        result = detour_path(idx, pair)
        base = idx.dc.dist_base(pair.a, pair.b, pair.domain())
        assert result.path.base <= (1 + 4 * result.iterations * eps) * base


def test_long_badgrid_pair_detours_onto_external_separator():
    k = 4
    g, terminals = generate_badgrid(k)
    ctx = BuildContext(g)
    ctx.use_hierarchy(0, badgrid_hierarchy(ctx.local_graph(0)[0], k))
    idx = ctx.portal_index(0, Fraction(1, 3))
    h = idx.h
    width = 4 * k * k
    # a long pair on one of the middle-band separators
    long_pairs = []
    for t in terminals:
        for pair in rel_pairs(idx, t):
            base = idx.dc.dist_base(pair.a, pair.b, pair.domain())
            if base is not None and base >= width // 2 and \
                    h.regions[pair.region].depth >= 2:
                long_pairs.append(pair)
    assert long_pairs
    rode_separator = 0
    for pair in long_pairs:
        result = detour_path(idx, pair)
        if any(tag == UNSAFE_SUBPATH for tag, _ in result.pieces):
            rode_separator += 1
        # splitting points against the undetoured shortest path drop
        naive = idx.dc.path(pair.a, pair.b, pair.domain())
        assert result.spliced >= 1
    assert rode_separator > 0


def test_threatens_examples(grid8_idx):
    idx = grid8_idx
    h = idx.h
    root = h.root_id
    sep = h.regions[root].separator
    pair = CanonicalPair(sep[0], sep[1], 1, root, root)
    touching = Path.from_vertices(idx.g, sep[:2])
    assert threatens(idx, touching, pair)  # contains the first portal
    kids = h.regions[root].children
    if len(kids) >= 2:
        child = h.regions[kids[0]]
        csep = child.separator
        cpair = CanonicalPair(csep[0], csep[-1], 4, child.id, child.id)
        other = h.regions[kids[1]]
        far = sorted(other.vertices)[:2]
        if idx.g.has_edge(far[0], far[1]):
            sibling_path = Path.from_vertices(idx.g, far)
            assert not threatens(idx, sibling_path, cpair)


def test_splitting_point_examples():
    g = perturb(generate_grid(3, 3))
    p = Path.from_vertices(g, [0, 1, 2])
    assert count_splitting_points(p, p) == 0
    crossing = Path.from_vertices(g, [1, 4, 7])
    horiz = Path.from_vertices(g, [3, 4, 5])
    assert count_splitting_points(crossing, horiz) == 1
    # X-pattern: two corner-to-corner L-paths through the center
    l1 = Path.from_vertices(g, [0, 1, 4, 7, 8])
    l2 = Path.from_vertices(g, [6, 3, 4, 5, 2])
    assert count_splitting_points(l1, l2) == 1


def test_domain_replacement_keeps_iteration_bound(grid8_idx):
    from damkit import domain_replacement
    idx = grid8_idx
    rng = random.Random(3)
    eps = float(idx.eps)
    for pair in all_reachable_pairs(idx, [0, 63, 36]):
        result = detour_path(idx, pair)
        base = idx.dc.dist_base(pair.a, pair.b, pair.domain())
        nv = len(result.path.vertices)
        if nv < 4:
            continue
        for _ in range(5):
            i = rng.randrange(0, nv - 1)
            j = rng.randrange(i + 1, nv)
            replaced = domain_replacement(idx, result.path, [(i, j)], pair.region)
            assert replaced.base <= (1 + 4 * result.iterations * eps) * base


def test_safe_subpaths_rarely_close_to_a_separator(grid8_idx):
    # at most one vertex of a multi-edge safe subpath sits within
    # eps * len / 2 of any external separator
    idx = grid8_idx
    for pair in all_reachable_pairs(idx, [0, 7, 56, 63]):
        result = detour_path(idx, pair)
        for tag, piece in result.pieces:
            if tag != SAFE_SUBPATH or piece.num_edges <= 1:
                continue
            for srid in idx.h.external_separators(pair.region):
                dist, _, _ = idx.dc.separator_sweep(pair.region, srid)
                threshold = idx.eps * piece.base / 2
                close = [v for v in piece.vertices
                         if v in dist and Fraction(dist[v][0]) <= threshold]
                assert len(close) <= 1


def test_splits_against_ancestor_shortest_paths_bounded(grid8_idx):
    # recorded corpus constant C = 4 for splits <= C / eps * log n
    idx = grid8_idx
    rng = random.Random(7)
    budget = 4 / float(idx.eps) * math.log2(idx.g.n)
    pairs = all_reachable_pairs(idx, [0, 7, 56, 63])
    count = 0
    for pair in pairs:
        result = detour_path(idx, pair)
        safe = [p for tag, p in result.pieces if tag == SAFE_SUBPATH]
        for rid in idx.h.ancestors[pair.region]:
            verts = sorted(idx.h.regions[rid].vertices)
            for _ in range(3):
                a, b = rng.choice(verts), rng.choice(verts)
                ext = idx.dc.path(a, b, region_domain(rid))
                if ext is None:
                    continue
                for piece in safe:
                    assert count_splitting_points(piece, ext) <= budget
                    count += 1
    assert count > 100
