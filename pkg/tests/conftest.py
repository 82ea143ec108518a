import random
from fractions import Fraction

import pytest

from damkit import generate_grid, perturb
from damkit.dam import BuildContext


@pytest.fixture(scope="session")
def grid8_ctx():
    return BuildContext(generate_grid(8, 8))


@pytest.fixture(scope="session")
def grid8_idx(grid8_ctx):
    return grid8_ctx.portal_index(0, Fraction(1, 4))


@pytest.fixture(scope="session")
def grid8_random_ctx():
    return BuildContext(generate_grid(8, 8, "random", seed=17))


def exhaustive_simple_paths(g, source, target):
    """All simple paths source->target by DFS; the brute-force path oracle."""
    paths = []
    stack = [(source, (source,))]
    while stack:
        v, path = stack.pop()
        if v == target:
            paths.append(path)
            continue
        for (w, _) in g.adj[v]:
            if w not in path:
                stack.append((w, path + (w,)))
    return paths


def brute_min_distance(g, source, target):
    """Exact base-weight distance by exhaustive enumeration (None if none)."""
    best = None
    for path in exhaustive_simple_paths(g, source, target):
        total = sum(g.edges[g.edge_id(a, b)][2] for a, b in zip(path, path[1:]))
        if best is None or total < best:
            best = total
    return best


def random_terminals(n, k, seed):
    rng = random.Random(seed)
    return sorted(rng.sample(range(n), min(k, n)))
