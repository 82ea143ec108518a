"""Instance generators: grids, the adversarial long-grid family, random graphs."""

from __future__ import annotations

import random
from typing import List, Tuple

from .config import GRID_CELL_CAP
from .errors import InputError, PreconditionError
from .graph import Graph, connected_components


def generate_grid(width: int, height: int, weight_mode: str = "unit",
                  seed: int = 0, max_weight: int = 8) -> Graph:
    """A width x height grid with 4-neighbor adjacency.

    weight_mode "unit" gives all-1 weights; "random" draws integers in
    1..max_weight from the given seed. Vertex ids are row-major.
    """
    if width < 1 or height < 1:
        raise PreconditionError("grid dimensions must be >= 1")
    if width * height > GRID_CELL_CAP:
        raise InputError(f"grid has {width * height} cells, above the cap {GRID_CELL_CAP}")
    if weight_mode not in ("unit", "random"):
        raise PreconditionError(f"unknown weight mode {weight_mode!r}")
    rng = random.Random(seed)

    def vid(row: int, col: int) -> int:
        return row * width + col

    def w() -> int:
        return 1 if weight_mode == "unit" else rng.randint(1, max_weight)

    edges = []
    for row in range(height):
        for col in range(width):
            if col + 1 < width:
                edges.append((vid(row, col), vid(row, col + 1), w()))
            if row + 1 < height:
                edges.append((vid(row, col), vid(row + 1, col), w()))
    return Graph(width * height, edges)


def generate_badgrid(k: int) -> Tuple[Graph, List[int]]:
    """The long-grid family that defeats naive path overlays.

    A 4k^2-wide, (k+2)-tall unit grid with 4k terminals:
      * k on the top row (columns spread evenly),
      * k on the bottom row at the same columns, so their vertical
        connectors cross every row in between,
      * one long pair per row 1..k at the leftmost and rightmost columns.
    Every long horizontal path crosses every vertical one; a naive overlay
    keeps all those crossings, while detoured paths collapse onto the two
    terminal rows. Vertex ids are row-major (row * width + col).
    """
    if k < 2:
        raise PreconditionError("k must be >= 2")
    width = 4 * k * k
    height = k + 2
    g = generate_grid(width, height, "unit")

    def vid(row: int, col: int) -> int:
        return row * width + col

    cols = [((i + 1) * width) // (k + 1) for i in range(k)]
    if len(set(cols)) != k:
        raise InputError("terminal columns collide; k too large for layout")
    terminals = []
    for c in cols:
        terminals.append(vid(0, c))
    for c in cols:
        terminals.append(vid(height - 1, c))
    for i in range(k):
        row = 1 + i
        terminals.append(vid(row, 0))
        terminals.append(vid(row, width - 1))
    return g, terminals


def badgrid_regions(k: int):
    """Row-structured hierarchy for the badgrid: the top terminal row is the
    root separator, the bottom terminal row splits next, and the long-pair
    band in between bisects until each row is its own separator. Returns the
    region rows as (id, parent, separator_row, band) tuples."""
    width = 4 * k * k
    height = k + 2
    rows: List[Tuple[int, int, int, Tuple[int, int]]] = []

    def add(parent: int, sep_row: int, band: Tuple[int, int]) -> int:
        rid = len(rows)
        rows.append((rid, parent, sep_row, band))
        return rid

    def bisect(parent: int, lo: int, hi: int):
        if lo > hi:
            return
        mid = (lo + hi) // 2
        rid = add(parent, mid, (lo, hi))
        bisect(rid, lo, mid - 1)
        bisect(rid, mid + 1, hi)

    root = add(-1, 0, (0, height - 1))
    below = add(root, height - 1, (1, height - 1))
    bisect(below, 1, height - 2)
    return width, height, rows


def badgrid_hierarchy(g: Graph, k: int):
    """Materialize badgrid_regions as a SeparatorHierarchy over g (which must
    be the perturbed badgrid graph for the same k)."""
    from .hierarchy import Region, SeparatorHierarchy

    width, height, rows = badgrid_regions(k)
    if g.n != width * height:
        raise PreconditionError("graph does not match the badgrid layout")
    depth_of = {}
    regions = []
    for (rid, parent, sep_row, (lo, hi)) in rows:
        depth = 0 if parent == -1 else depth_of[parent] + 1
        depth_of[rid] = depth
        verts = frozenset(r * width + c for r in range(lo, hi + 1) for c in range(width))
        sep = tuple(sep_row * width + c for c in range(width))
        regions.append(Region(id=rid, parent=None if parent == -1 else parent,
                              depth=depth, vertices=verts, separator=sep))
    for r in regions:
        if r.parent is not None:
            regions[r.parent].children.append(r.id)
    return SeparatorHierarchy(g, regions, 0)


def random_connected_graph(n: int, extra_edges: int, seed: int,
                           max_weight: int = 5) -> Graph:
    """Random spanning tree plus `extra_edges` random chords; always connected."""
    if n < 1:
        raise PreconditionError("n must be >= 1")
    rng = random.Random(seed)
    edges = []
    present = set()
    order = list(range(n))
    rng.shuffle(order)
    for i in range(1, n):
        u = order[i]
        v = order[rng.randrange(i)]
        key = (min(u, v), max(u, v))
        present.add(key)
        edges.append((key[0], key[1], rng.randint(1, max_weight)))
    attempts = 0
    while extra_edges > 0 and attempts < 50 * (extra_edges + 1):
        attempts += 1
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v:
            continue
        key = (min(u, v), max(u, v))
        if key in present:
            continue
        present.add(key)
        edges.append((key[0], key[1], rng.randint(1, max_weight)))
        extra_edges -= 1
    return Graph(n, edges)


def subsampled_grid(width: int, height: int, drop_fraction: float, seed: int,
                    weight_mode: str = "random", max_weight: int = 8) -> Graph:
    """Randomly weighted grid with a fraction of edges removed while keeping
    the graph connected (stays planar: subgraph of a grid)."""
    g = generate_grid(width, height, weight_mode, seed, max_weight)
    rng = random.Random(seed + 1)
    order = list(range(g.m))
    rng.shuffle(order)
    to_drop = int(drop_fraction * g.m)
    kept = set(range(g.m))
    for eid in order:
        if to_drop <= 0:
            break
        trial = kept - {eid}
        sub = Graph(g.n, [g.edges[e] for e in sorted(trial)])
        if len(connected_components(sub)) == 1:
            kept = trial
            to_drop -= 1
    return Graph(g.n, [g.edges[e] for e in sorted(kept)])
