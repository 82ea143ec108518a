import math
import random
from fractions import Fraction

from damkit import detour_path, find_proxy_pairs, rel_pairs
from damkit.canonical import CanonicalPair, pair_is_valid
from damkit.detour import UNSAFE_SUBPATH
from damkit.proxy import proxy_safe_union


def gather_pairs(idx, terminals):
    seen = {}
    for t in terminals:
        for pair in rel_pairs(idx, t):
            seen.setdefault(pair.key, pair)
    return list(seen.values())


def test_root_region_pair_is_its_own_proxy(grid8_idx):
    idx = grid8_idx
    root = idx.h.root_id
    sep = idx.h.regions[root].separator
    pair = CanonicalPair(sep[0], sep[1], 1, root, root)
    assert pair_is_valid(idx, pair)
    result = find_proxy_pairs(idx, pair)
    assert result.proxy == (pair,)
    assert result.path.vertices == detour_path(idx, pair).path.vertices


def test_untouched_levels_leave_the_path_alone(grid8_idx):
    idx = grid8_idx
    pairs = gather_pairs(idx, [0, 63, 36])
    skipped = 0
    for pair in pairs:
        base = detour_path(idx, pair)
        result = find_proxy_pairs(idx, pair)
        touched_rids = {idx.h.owner[v] for v in base.path.vertices}
        for rid in idx.h.external_separators(pair.region):
            if rid not in touched_rids:
                skipped += 1
                # no proxy member was generated on that untouched separator
                assert all(m.region != rid or m is pair for m in result.proxy)
    assert skipped > 0


def test_self_membership_always(grid8_idx):
    # pair identity excludes the scale (detours never read it), so
    # membership is by endpoint/region key
    idx = grid8_idx
    for pair in gather_pairs(idx, [0, 7, 56, 63]):
        assert pair.key in {m.key for m in find_proxy_pairs(idx, pair).proxy}


def test_witness_edges_contained_in_safe_union(grid8_idx):
    idx = grid8_idx
    pairs = gather_pairs(idx, [0, 7, 56, 63, 27, 36])
    assert pairs
    for pair in pairs:
        result = find_proxy_pairs(idx, pair)
        union = proxy_safe_union(idx, pair)
        for u, v in result.path.edge_pairs():
            key = (u, v) if u < v else (v, u)
            assert key in union
        # in particular the witness never rides a separator piece
        assert result.path.vertices[0] == pair.a
        assert result.path.vertices[-1] == pair.b


def test_witness_stretch_within_logged_constant(grid8_idx):
    # |witness| <= (1 + c log^2 n log D eps) * d with recorded c = 2
    idx = grid8_idx
    n, D, eps = idx.g.n, idx.D, float(idx.eps)
    budget = 1 + 2 * (math.log2(n) ** 2) * math.log2(D) * eps
    for pair in gather_pairs(idx, [0, 7, 56, 63]):
        result = find_proxy_pairs(idx, pair)
        base = idx.dc.dist_base(pair.a, pair.b, pair.domain())
        assert result.path.base <= budget * base


def test_level_lengths_telescope(grid8_idx):
    # each climb level adds at most 2 * beta * eps * d, with beta the
    # measured detour stretch constant of the corpus
    idx = grid8_idx
    eps = float(idx.eps)
    pairs = gather_pairs(idx, [0, 7, 56, 63])
    beta = 1.0
    for pair in pairs:
        d = detour_path(idx, pair)
        base = idx.dc.dist_base(pair.a, pair.b, pair.domain())
        if base:
            beta = max(beta, (d.path.base / base - 1) / eps if eps else 1.0)
    for pair in pairs:
        result = find_proxy_pairs(idx, pair)
        base = idx.dc.dist_base(pair.a, pair.b, pair.domain())
        for k, length in enumerate(result.level_lengths):
            assert length <= (1 + 2 * (k + 1) * max(beta, 1.0) * eps) * base + 1e-9


def test_proxy_size_bounded(grid8_idx):
    idx = grid8_idx
    budget = 1 + 4 * idx.h.height * math.log2(max(idx.D, 2))
    for pair in gather_pairs(idx, [0, 7, 56, 63]):
        assert len(find_proxy_pairs(idx, pair).proxy) <= budget


def test_proxy_members_are_valid_pairs(grid8_idx):
    idx = grid8_idx
    for pair in gather_pairs(idx, [0, 63]):
        for member in find_proxy_pairs(idx, pair).proxy:
            assert pair_is_valid(idx, member)
