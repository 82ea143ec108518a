"""Nested multi-scale portal sets along every internal separator.

For each region and each scale i, the scale-i portals are a subset of the
separator's vertices that covers it within eps*2^i (along the separator) and
is (eps/2)*2^i-packed. Scales 0 and 1 are all separator vertices; higher
scales are produced by a greedy sweep from the separator's first endpoint.
All threshold tests use base weights; Fraction cross-multiplication keeps
them exact.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .distances import DistanceCache, region_domain
from .errors import PreconditionError
from .graph import Graph
from .hierarchy import SeparatorHierarchy
from .weights import ceil_log2


class PortalIndex:
    """Per-region, per-scale portal positions plus separator prefix sums.

    Also owns the shared distance cache and the memo tables used by the
    detour/proxy/relevant-pairs machinery (compute-once per key).
    """

    def __init__(self, g: Graph, h: SeparatorHierarchy, eps: Fraction, D: int,
                 dcache: Optional[DistanceCache] = None):
        if not (0 < eps < 1):
            raise PreconditionError("eps must lie in (0, 1)")
        self.g = g
        self.h = h
        self.eps = eps
        self.D = D
        # the sequence finder buckets lengths at floor(log2 L) + 2, so keep
        # two scales of headroom above ceil(log2 D)
        self.max_scale = ceil_log2(max(D, 1)) + 2
        self.dc = dcache if dcache is not None else DistanceCache(g, h)
        self.prefix_base: List[List[int]] = []
        self.prefix_tie: List[List[int]] = []
        self.portals: List[List[List[int]]] = []    # [rid][scale] -> positions
        self.portal_sets: List[List[frozenset]] = []
        self.tau: List[List[int]] = []              # [rid][pos] -> largest scale
        self._build()
        self.detour_memo: Dict[Tuple, object] = {}
        self.proxy_memo: Dict[Tuple, object] = {}
        self.relpairs_memo: Dict[int, tuple] = {}
        self.xset_memo: Dict[int, dict] = {}
        self.memo_lock = threading.Lock()

    def _build(self):
        g, h = self.g, self.h
        half_num = self.eps.numerator
        half_den = self.eps.denominator * 2   # threshold = (eps/2) * 2^i
        for r in h.regions:
            sep = r.separator
            pb = [0] * len(sep)
            pt = [0] * len(sep)
            for i in range(1, len(sep)):
                eid = g.edge_id(sep[i - 1], sep[i])
                pb[i] = pb[i - 1] + g.edges[eid][2]
                pt[i] = pt[i - 1] + (g.ties[eid] if g.ties else 0)
            self.prefix_base.append(pb)
            self.prefix_tie.append(pt)
            all_pos = list(range(len(sep)))
            scales = [all_pos, all_pos]           # scales 0 and 1
            prev = all_pos
            for i in range(2, self.max_scale + 1):
                kept = []
                # keep a surviving portal iff it sits >= (eps/2)*2^i along the
                # separator from the previously kept one
                threshold_num = half_num << i
                last_b = None
                for pos in prev:
                    if last_b is None:
                        kept.append(pos)
                        last_b = pb[pos]
                    elif (pb[pos] - last_b) * half_den >= threshold_num:
                        kept.append(pos)
                        last_b = pb[pos]
                scales.append(kept)
                prev = kept
            self.portals.append(scales)
            self.portal_sets.append([frozenset(s) for s in scales])
            tau_row = [0] * len(sep)
            for i, kept in enumerate(scales):
                for pos in kept:
                    tau_row[pos] = i
            self.tau.append(tau_row)

    # -- separator-local queries ---------------------------------------------

    def sep_dist_base(self, rid: int, pos_a: int, pos_b: int) -> int:
        pb = self.prefix_base[rid]
        return abs(pb[pos_a] - pb[pos_b])

    def sep_dist(self, rid: int, pos_a: int, pos_b: int) -> Tuple[int, int]:
        lo, hi = (pos_a, pos_b) if pos_a <= pos_b else (pos_b, pos_a)
        return (self.prefix_base[rid][hi] - self.prefix_base[rid][lo],
                self.prefix_tie[rid][hi] - self.prefix_tie[rid][lo])

    def tau_of(self, v: int) -> int:
        return self.tau[self.h.owner[v]][self.h.sep_pos[v]]

    def is_portal(self, v: int, scale: int, rid: int) -> bool:
        if self.h.owner[v] != rid:
            return False
        return self.h.sep_pos[v] in self.portal_sets[rid][min(scale, self.max_scale)]

    def portal_vertices(self, rid: int, scale: int) -> List[int]:
        sep = self.h.regions[rid].separator
        return [sep[pos] for pos in self.portals[rid][min(scale, self.max_scale)]]

    def nearest_portal_along(self, rid: int, v: int, scale: int) -> int:
        """The scale-`scale` portal of region rid nearest to v along the
        separator; ties break by tiebreak component then position."""
        if self.h.owner[v] != rid:
            raise PreconditionError(f"vertex {v} is not on region {rid}'s separator")
        pos = self.h.sep_pos[v]
        best = None
        for cand in self.portals[rid][min(scale, self.max_scale)]:
            key = (self.sep_dist(rid, pos, cand), cand)
            if best is None or key < best:
                best = key
        sep = self.h.regions[rid].separator
        return sep[best[1]]


def build_portals(g: Graph, h: SeparatorHierarchy, eps: Fraction,
                  D: Optional[int] = None, dcache: Optional[DistanceCache] = None) -> PortalIndex:
    """Construct the portal index; D (an upper bound on the base diameter) is
    estimated as twice the eccentricity of vertex 0 when not supplied."""
    dc = dcache if dcache is not None else DistanceCache(g, h)
    if D is None:
        dist, _ = dc.sssp(min(h.regions[h.root_id].vertices))
        D = 2 * max(b for (b, _) in dist.values()) if dist else 1
    eps = Fraction(eps)
    return PortalIndex(g, h, eps, max(D, 1), dc)


def portals_near(idx: PortalIndex, v: int, rid: int, scale: int, radius_base: int) -> List[int]:
    """Exactly the scale-`scale` portals of region rid within region-restricted
    base distance `radius_base` of v."""
    if not idx.h.contains(rid, v):
        raise PreconditionError(f"vertex {v} is not in region {rid}")
    dist, _ = idx.dc.sssp(v, region_domain(rid))
    out = []
    for p in idx.portal_vertices(rid, scale):
        d = dist.get(p)
        if d is not None and d[0] <= radius_base:
            out.append(p)
    return out
