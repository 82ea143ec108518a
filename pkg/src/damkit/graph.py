"""Undirected weighted graphs and exact shortest paths on vertex subsets.

Vertices are dense ints 0..n-1. Edge weights are scaled integers: the true
weight of edge e is ``weight[e] / scale``. After :func:`normalize_and_perturb`
every edge also carries its tiebreak bit (edge i of m gets ``2**(m - i)``), so
every pair of simple paths with different edge sets has distinct total weight
and all shortest paths below are unique.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from heapq import heappop, heappush
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import InputError, PreconditionError
from .weights import ZERO, PerturbedWeight


class Graph:
    """Immutable undirected graph with scaled-integer weights.

    No self-loops, no parallel edges. ``ties`` is empty until the graph has
    been through :func:`normalize_and_perturb`.
    """

    __slots__ = ("n", "edges", "scale", "ties", "adj", "_eid", "_adj_flat")

    def __init__(self, n: int, edges: Sequence[Tuple[int, int, int]], scale: int = 1,
                 ties: Optional[Sequence[int]] = None):
        if n < 0:
            raise InputError("vertex count must be nonnegative")
        if scale < 1:
            raise InputError("scale must be a positive integer")
        self.n = n
        self.scale = scale
        self.edges: List[Tuple[int, int, int]] = []
        self.adj: List[List[Tuple[int, int]]] = [[] for _ in range(n)]
        self._eid: Dict[Tuple[int, int], int] = {}
        for (u, v, w) in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u},{v}) has endpoint outside 0..{n - 1}")
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            if w <= 0:
                raise InputError(f"edge ({u},{v}) has nonpositive weight")
            key = (u, v) if u < v else (v, u)
            if key in self._eid:
                raise InputError(f"duplicate edge ({u},{v})")
            eid = len(self.edges)
            self._eid[key] = eid
            self.edges.append((key[0], key[1], w))
            self.adj[u].append((v, eid))
            self.adj[v].append((u, eid))
        if ties is None:
            self.ties: List[int] = []
        else:
            if len(ties) != len(self.edges):
                raise InputError("tiebreak list length must match edge count")
            self.ties = list(ties)
        self._adj_flat: Optional[List[List[Tuple[int, int, int]]]] = None

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def is_perturbed(self) -> bool:
        return bool(self.ties) or not self.edges

    def edge_id(self, u: int, v: int) -> Optional[int]:
        return self._eid.get((u, v) if u < v else (v, u))

    def has_edge(self, u: int, v: int) -> bool:
        return self.edge_id(u, v) is not None

    def weight(self, eid: int) -> PerturbedWeight:
        tie = self.ties[eid] if self.ties else 0
        return PerturbedWeight(self.edges[eid][2], tie)

    def adj_flat(self) -> List[List[Tuple[int, int, int]]]:
        """Adjacency as (neighbor, base, tie) triples; built once, reused by Dijkstra."""
        if self._adj_flat is None:
            ties = self.ties
            flat: List[List[Tuple[int, int, int]]] = []
            for u in range(self.n):
                row = []
                for (v, eid) in self.adj[u]:
                    row.append((v, self.edges[eid][2], ties[eid] if ties else 0))
                flat.append(row)
            self._adj_flat = flat
        return self._adj_flat

    def true_weight(self, eid: int) -> Fraction:
        return Fraction(self.edges[eid][2], self.scale)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m}, scale={self.scale})"


@dataclass(frozen=True)
class Path:
    """A walk given by its vertex sequence; may repeat vertices."""

    vertices: Tuple[int, ...]
    weight: PerturbedWeight

    @staticmethod
    def from_vertices(g: Graph, vertices: Sequence[int]) -> "Path":
        base = 0
        tie = 0
        for a, b in zip(vertices, vertices[1:]):
            eid = g.edge_id(a, b)
            if eid is None:
                raise PreconditionError(f"vertices {a},{b} are not adjacent")
            base += g.edges[eid][2]
            if g.ties:
                tie += g.ties[eid]
        return Path(tuple(vertices), PerturbedWeight(base, tie))

    @property
    def base(self) -> int:
        return self.weight.base

    @property
    def num_edges(self) -> int:
        return len(self.vertices) - 1

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    def edge_pairs(self) -> Iterable[Tuple[int, int]]:
        return zip(self.vertices, self.vertices[1:])

    def reverse(self) -> "Path":
        return Path(tuple(reversed(self.vertices)), self.weight)

    def concat(self, g: Graph, other: "Path") -> "Path":
        if self.end != other.start:
            raise PreconditionError("paths do not share an endpoint")
        return Path(self.vertices + other.vertices[1:], self.weight + other.weight)

    def subpath(self, g: Graph, i: int, j: int) -> "Path":
        """Subpath between vertex indexes i <= j (indexes, not vertex ids)."""
        if not (0 <= i <= j < len(self.vertices)):
            raise PreconditionError("bad subpath indexes")
        return Path.from_vertices(g, self.vertices[i:j + 1])


# ---------------------------------------------------------------------------
# normalization and perturbation

def normalize_weights(n: int, raw_edges: Sequence[Tuple[int, int, Fraction]]) -> Graph:
    """Rescale rational weights so the smallest is exactly 1, as scaled integers."""
    for (u, v, w) in raw_edges:
        if w <= 0:
            raise InputError(f"edge ({u},{v}) has nonpositive weight {w}")
    if not raw_edges:
        return Graph(n, [])
    wmin = min(w for (_, _, w) in raw_edges)
    rescaled = [w / wmin for (_, _, w) in raw_edges]
    denom_lcm = 1
    for w in rescaled:
        denom_lcm = denom_lcm * w.denominator // math.gcd(denom_lcm, w.denominator)
    edges = [(u, v, int(w * denom_lcm))
             for (u, v, _), w in zip(raw_edges, rescaled)]
    return Graph(n, edges, scale=denom_lcm)


def perturb(g: Graph) -> Graph:
    """Attach tiebreak bits without touching weights or scale.

    Edge i (0-based, input order) gets tiebreak ``2**(m - i)``; path weights
    then encode their edge set in the tie component, so distinct simple paths
    never compare equal.
    """
    m = g.m
    ties = [1 << (m - i) for i in range(m)]
    return Graph(g.n, g.edges, scale=g.scale, ties=ties)


def normalize_and_perturb(g: Graph) -> Graph:
    """Rescale so the minimum true weight is exactly 1 (pure representation
    change: true distances are untouched), then attach tiebreak bits."""
    raw = [(u, v, Fraction(w, g.scale)) for (u, v, w) in g.edges]
    return perturb(normalize_weights(g.n, raw))


# ---------------------------------------------------------------------------
# shortest paths

def _check_allowed(allowed, *vertices):
    if allowed is not None:
        for v in vertices:
            if v not in allowed:
                raise PreconditionError(f"vertex {v} is outside the allowed set")


def multi_source_dijkstra(g: Graph, sources: Sequence[int], allowed=None):
    """Exact Dijkstra from a set of sources restricted to `allowed` vertices.

    Returns (dist, parent, label): dist maps v -> (base, tie), parent maps
    v -> predecessor (or -1 at a source), label maps v -> the source that
    realizes dist[v]. All shortest paths are unique under perturbed weights.
    """
    _check_allowed(allowed, *sources)
    flat = g.adj_flat()
    dist: Dict[int, Tuple[int, int]] = {}
    parent: Dict[int, int] = {}
    label: Dict[int, int] = {}
    heap: List[Tuple[int, int, int, int, int]] = []
    for s in sources:
        heappush(heap, (0, 0, s, s, -1))
    while heap:
        b, t, v, src, par = heappop(heap)
        if v in dist:
            continue
        dist[v] = (b, t)
        parent[v] = par
        label[v] = src
        for (w, wb, wt) in flat[v]:
            if w in dist:
                continue
            if allowed is not None and w not in allowed:
                continue
            heappush(heap, (b + wb, t + wt, w, src, v))
    return dist, parent, label


def sssp_raw(g: Graph, source: int, allowed=None):
    """Single-source variant; returns (dist, parent) with raw (base, tie) values."""
    dist, parent, _ = multi_source_dijkstra(g, (source,), allowed)
    return dist, parent


def sssp_distances(g: Graph, source: int, allowed=None) -> Dict[int, PerturbedWeight]:
    """Exact distances from `source` inside the induced subgraph on `allowed`.

    Unreachable vertices are simply absent from the result.
    """
    dist, _ = sssp_raw(g, source, allowed)
    return {v: PerturbedWeight(b, t) for v, (b, t) in dist.items()}


def extract_path(g: Graph, parent: Dict[int, int], target: int) -> Path:
    chain = [target]
    v = target
    while parent[v] != -1:
        v = parent[v]
        chain.append(v)
    chain.reverse()
    return Path.from_vertices(g, chain)


def shortest_path(g: Graph, source: int, target: int, allowed=None) -> Optional[Path]:
    """The unique minimum-weight path from source to target within `allowed`,
    or None if they are disconnected there."""
    _check_allowed(allowed, source, target)
    if source == target:
        return Path((source,), ZERO)
    dist, parent = sssp_raw(g, source, allowed)
    if target not in dist:
        return None
    return extract_path(g, parent, target)


def int_dijkstra(n: int, adj: Sequence[Sequence[Tuple[int, int]]], source: int) -> Dict[int, int]:
    """Plain base-weight Dijkstra over an (neighbor, weight) adjacency list.

    Independent of the perturbed machinery; used as the brute-force oracle and
    for distances in minors/emulators.
    """
    dist: Dict[int, int] = {}
    heap = [(0, source)]
    while heap:
        d, v = heappop(heap)
        if v in dist:
            continue
        dist[v] = d
        for (w, wt) in adj[v]:
            if w not in dist:
                heappush(heap, (d + wt, w))
    return dist


def connected_components(g: Graph, vertices: Optional[Iterable[int]] = None) -> List[frozenset]:
    """Components of the induced subgraph, ordered by smallest member."""
    universe = set(range(g.n)) if vertices is None else set(vertices)
    comps = []
    seen = set()
    for start in sorted(universe):
        if start in seen:
            continue
        stack = [start]
        comp = {start}
        seen.add(start)
        while stack:
            u = stack.pop()
            for (v, _) in g.adj[u]:
                if v in universe and v not in comp:
                    comp.add(v)
                    seen.add(v)
                    stack.append(v)
        comps.append(frozenset(comp))
    return comps
