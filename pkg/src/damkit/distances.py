"""Memoized exact shortest-path queries over hierarchy-derived vertex domains.

Domains recur constantly (region interiors, region-plus-one-separator arcs,
the whole graph), so single-source runs are cached per (domain, source) with
their parent trees kept for path extraction. Multi-source sweeps from a
separator into an arc are cached per (region, separator).
"""

from __future__ import annotations

from typing import Dict, Optional, Tuple

from .graph import Graph, Path, extract_path, multi_source_dijkstra
from .hierarchy import SeparatorHierarchy
from .weights import PerturbedWeight

GRAPH_DOMAIN = ("g",)


def region_domain(rid: int) -> Tuple:
    return ("r", rid)


def arc_domain(rid: int, sep_rid: int) -> Tuple:
    return ("r", rid) if sep_rid == rid else ("rs", rid, sep_rid)


class DistanceCache:
    def __init__(self, g: Graph, hierarchy: SeparatorHierarchy):
        self.g = g
        self.h = hierarchy
        self._sssp: Dict[Tuple, Tuple[dict, dict]] = {}
        self._multi: Dict[Tuple[int, int], Tuple[dict, dict, dict]] = {}

    def allowed(self, domain: Tuple):
        if domain[0] == "g":
            return None
        if domain[0] == "r":
            return self.h.regions[domain[1]].vertices
        return self.h.arc_vertices(domain[1], domain[2])

    def sssp(self, source: int, domain: Tuple = GRAPH_DOMAIN) -> Tuple[dict, dict]:
        key = (domain, source)
        hit = self._sssp.get(key)
        if hit is None:
            dist, parent, _ = multi_source_dijkstra(self.g, (source,), self.allowed(domain))
            hit = (dist, parent)
            self._sssp[key] = hit
        return hit

    def dist(self, source: int, target: int, domain: Tuple = GRAPH_DOMAIN) -> Optional[PerturbedWeight]:
        raw = self.sssp(source, domain)[0].get(target)
        return None if raw is None else PerturbedWeight(*raw)

    def dist_base(self, source: int, target: int, domain: Tuple = GRAPH_DOMAIN) -> Optional[int]:
        raw = self.sssp(source, domain)[0].get(target)
        return None if raw is None else raw[0]

    def path(self, source: int, target: int, domain: Tuple = GRAPH_DOMAIN) -> Optional[Path]:
        dist, parent = self.sssp(source, domain)
        if target not in dist:
            return None
        return extract_path(self.g, parent, target)

    def separator_sweep(self, rid: int, sep_rid: int):
        """Distances from the whole separator of `sep_rid` inside the arc
        region(rid) + that separator: (dist, parent, nearest-source label)."""
        key = (rid, sep_rid)
        hit = self._multi.get(key)
        if hit is None:
            sources = self.h.regions[sep_rid].separator
            allowed = self.h.arc_vertices(rid, sep_rid)
            hit = multi_source_dijkstra(self.g, sources, allowed)
            self._multi[key] = hit
        return hit

    def path_to_separator(self, rid: int, sep_rid: int, v: int) -> Path:
        """Unique shortest path from v to its nearest separator vertex in the arc."""
        dist, parent, _ = self.separator_sweep(rid, sep_rid)
        chain = [v]
        u = v
        while parent[u] != -1:
            u = parent[u]
            chain.append(u)
        return Path.from_vertices(self.g, chain)
