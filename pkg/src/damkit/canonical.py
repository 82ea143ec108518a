"""Canonical portal pairs, the containment/scale partial order, per-vertex
relevant sets, and the constructive canonical-sequence finders.

A canonical pair <a, b> at scale i in region R has `a` a scale-i portal on
R's internal separator, `b` a scale-i portal on an internal or external
separator S of R, and base distance at most 2^i inside R extended by S (the
pair's "arc subgraph"). Sequence step distances are always measured in the
emitting pair's arc subgraph.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .distances import arc_domain, region_domain
from .errors import InvariantViolation, PreconditionError
from .portals import PortalIndex
from .weights import ZERO, PerturbedWeight, ceil_log2, floor_log2


@dataclass(frozen=True)
class CanonicalPair:
    a: int
    b: int
    scale: int
    region: int       # region whose internal separator holds a
    sep_region: int   # region whose internal separator holds b

    @property
    def key(self) -> Tuple[int, int, int, int]:
        # DetourPath / proxy search never read the scale, so memo identity
        # excludes it
        return (self.a, self.b, self.region, self.sep_region)

    def domain(self) -> Tuple:
        return arc_domain(self.region, self.sep_region)


@dataclass(frozen=True)
class SequenceStep:
    pair: CanonicalPair
    flipped: bool              # step runs b -> a of `pair`
    dist: PerturbedWeight      # measured in pair's arc subgraph


@dataclass(frozen=True)
class CanonicalSequence:
    vertices: Tuple[int, ...]
    steps: Tuple[SequenceStep, ...]

    @property
    def total(self) -> PerturbedWeight:
        out = ZERO
        for s in self.steps:
            out = out + s.dist
        return out

    @property
    def total_base(self) -> int:
        return sum(s.dist.base for s in self.steps)


def pair_is_valid(idx: PortalIndex, pair: CanonicalPair) -> bool:
    h = idx.h
    if h.owner[pair.a] != pair.region:
        return False
    if h.owner[pair.b] != pair.sep_region:
        return False
    if not h.is_ancestor(pair.sep_region, pair.region):
        return False
    if pair.scale > idx.tau_of(pair.a) or pair.scale > idx.tau_of(pair.b):
        return False
    d = idx.dc.dist_base(pair.a, pair.b, pair.domain())
    return d is not None and d <= (1 << pair.scale)


def pair_order_leq(idx: PortalIndex, p1: CanonicalPair, p2: CanonicalPair) -> bool:
    """Partial order: containment of regions first, then scale within a region."""
    if p1.region == p2.region:
        return p1.scale <= p2.scale
    return idx.h.is_ancestor(p2.region, p1.region) and p2.region != p1.region


# ---------------------------------------------------------------------------
# relevant portals / relevant pairs

def relevant_portals(idx: PortalIndex, v: int) -> Dict[int, int]:
    """X_v as {portal vertex -> owning region}: p qualifies via region R
    containing v when the R-restricted distance is at most 2^tau(p)."""
    cached = idx.xset_memo.get(v)
    if cached is not None:
        return cached
    h = idx.h
    out: Dict[int, int] = {}
    for rid in h.regions_containing(v):
        dist, _ = idx.dc.sssp(v, region_domain(rid))
        for p in h.regions[rid].separator:
            d = dist.get(p)
            if d is not None and d[0] <= (1 << idx.tau[rid][h.sep_pos[p]]):
                out[p] = rid
    with idx.memo_lock:
        idx.xset_memo[v] = out
    return out


def rel_pairs(idx: PortalIndex, v: int) -> Tuple[CanonicalPair, ...]:
    """All canonical pairs with both endpoints in X_v, one pair per ordered
    endpoint pair, materialized at its smallest valid scale."""
    cached = idx.relpairs_memo.get(v)
    if cached is not None:
        return cached
    h = idx.h
    xv = relevant_portals(idx, v)
    pairs: List[CanonicalPair] = []
    members = sorted(xv)
    for a in members:
        ra = xv[a]
        tau_a = idx.tau_of(a)
        for b in members:
            if a == b:
                continue
            rb = xv[b]
            if not h.is_ancestor(rb, ra):
                continue
            hi = min(tau_a, idx.tau_of(b))
            d = idx.dc.dist_base(a, b, arc_domain(ra, rb))
            if d is None or d > (1 << hi):
                continue
            lo = 0 if d <= 1 else ceil_log2(d)
            pairs.append(CanonicalPair(a, b, lo, ra, rb))
    result = tuple(pairs)
    with idx.memo_lock:
        idx.relpairs_memo[v] = result
    return result


def pair_in_relpairs(idx: PortalIndex, pair: CanonicalPair, v: int) -> bool:
    """Membership test: both endpoints relevant to v and the pair valid at
    its own scale (scales are interchangeable within validity)."""
    xv = relevant_portals(idx, v)
    return pair.a in xv and pair.b in xv and pair_is_valid(idx, pair)


# ---------------------------------------------------------------------------
# exact sequences along one separator

def _scan_next(idx: PortalIndex, rid: int, pos: int, target: int) -> int:
    """First position strictly between pos and target (inclusive of target,
    moving toward it) whose tau exceeds tau(pos); target always qualifies."""
    tau = idx.tau[rid]
    want = tau[pos] + 1
    step = 1 if target > pos else -1
    q = pos + step
    while q != target and tau[q] < want:
        q += step
    return q


def _nearest_with_tau(idx: PortalIndex, rid: int, pos: int, want: int) -> Optional[int]:
    """Nearest position (by along-separator distance, tie to smaller index)
    with tau at least `want`; None if no such portal exists."""
    best = None
    for q in idx.portals[rid][min(want, idx.max_scale)]:
        if q == pos:
            continue
        key = (idx.sep_dist_base(rid, pos, q), q)
        if best is None or key < best:
            best = key
    return None if best is None else best[1]


def _tau_walk(idx: PortalIndex, rid: int, start_pos: int, target_pos: int
              ) -> List[Tuple[int, int, int]]:
    """Scale-escalating walk along the separator toward target.

    Returns hops (from_pos, to_pos, scale), each certifiable as a canonical
    pair. Normally the walk jumps to the first strictly-higher-tau vertex in
    the target's direction; when a heavy separator edge puts that vertex out
    of the current scale's reach, it instead steps to the nearest covering
    portal (usually just behind), which costs at most an eps fraction of the
    current scale and keeps the escalation going.
    """
    tau = idx.tau[rid]
    hops: List[Tuple[int, int, int]] = []
    pos = start_pos
    while pos != target_pos:
        if tau[pos] >= tau[target_pos]:
            nxt = target_pos
            scale = tau[target_pos]
        else:
            want = tau[pos] + 1
            nxt = _scan_next(idx, rid, pos, target_pos)
            scale = min(tau[pos], tau[nxt])
            if idx.sep_dist_base(rid, pos, nxt) > (1 << scale):
                nxt = _nearest_with_tau(idx, rid, pos, want)
                scale = tau[pos] if nxt is not None else scale
        d = idx.sep_dist_base(rid, pos, nxt) if nxt is not None else None
        if nxt is None or d > (1 << scale):
            raise InvariantViolation(
                f"separator walk stuck at region {rid} position {pos}: no "
                f"portal of the next scale within reach")
        hops.append((pos, nxt, scale))
        pos = nxt
    return hops


def _meeting_portal(idx: PortalIndex, rid: int, pos_a: int, pos_b: int) -> int:
    """Highest-tau position on the separator segment between the endpoints,
    tie-broken toward the segment midpoint then smaller position."""
    lo, hi = (pos_a, pos_b) if pos_a <= pos_b else (pos_b, pos_a)
    tau = idx.tau[rid]
    pb = idx.prefix_base[rid]
    mid2 = pb[lo] + pb[hi]     # 2 * midpoint offset
    best = None
    for q in range(lo, hi + 1):
        key = (-tau[q], abs(2 * pb[q] - mid2), q)
        if best is None or key < best:
            best = key
    return best[2]


def canonical_sequence_on_separator(idx: PortalIndex, a: int, b: int) -> CanonicalSequence:
    """Exact sequence between two vertices of one internal separator: hops sum
    to the along-separator distance exactly, every hop is a canonical pair,
    and the hop count is bounded by the number of scales."""
    h = idx.h
    rid = h.owner[a]
    if h.owner[b] != rid:
        raise PreconditionError("vertices lie on different separators")
    if a == b:
        return CanonicalSequence((a,), ())
    pos_a, pos_b = h.sep_pos[a], h.sep_pos[b]
    meet = _meeting_portal(idx, rid, pos_a, pos_b)
    fwd = _tau_walk(idx, rid, pos_a, meet)
    bwd = _tau_walk(idx, rid, pos_b, meet)
    sep = h.regions[rid].separator
    verts: List[int] = [a]
    steps: List[SequenceStep] = []
    for (p, q, scale) in fwd:
        pair = CanonicalPair(sep[p], sep[q], scale, rid, rid)
        steps.append(SequenceStep(pair, False, PerturbedWeight(*idx.sep_dist(rid, p, q))))
        verts.append(sep[q])
    for (p, q, scale) in reversed(bwd):
        # both endpoints sit on the same internal separator, so the pair can
        # be emitted forward in sequence order
        pair = CanonicalPair(sep[q], sep[p], scale, rid, rid)
        steps.append(SequenceStep(pair, False, PerturbedWeight(*idx.sep_dist(rid, p, q))))
        verts.append(sep[p])
    return CanonicalSequence(tuple(verts), tuple(steps))


# ---------------------------------------------------------------------------
# general sequences between arbitrary vertices

def _half_sequence(idx: PortalIndex, endpoint: int, meet_portal: int, meet_region: int,
                   scale: int) -> Tuple[List[int], List[SequenceStep]]:
    """Sequence from `endpoint` to the meeting portal: an exact walk along the
    endpoint's own separator to a nearby scale-`scale` portal, then a
    region-ascending chain of scale-`scale` portals."""
    h = idx.h
    r1 = h.owner[endpoint]
    x1 = idx.nearest_portal_along(r1, endpoint, scale)
    verts: List[int] = [endpoint]
    steps: List[SequenceStep] = []
    if x1 != endpoint:
        along = canonical_sequence_on_separator(idx, endpoint, x1)
        verts.extend(along.vertices[1:])
        steps.extend(along.steps)
    if x1 == meet_portal:
        return verts, steps
    guide = idx.dc.path(x1, meet_portal, region_domain(meet_region))
    if guide is None:
        raise InvariantViolation("meeting portal unreachable inside its region")
    cur_region, cur_portal = r1, x1
    i = 0
    gverts = guide.vertices
    while True:
        j = None
        for k in range(i + 1, len(gverts)):
            if not h.contains(cur_region, gverts[k]):
                j = k
                break
        if j is None:
            if cur_portal != meet_portal:
                pair = CanonicalPair(cur_portal, meet_portal, scale, cur_region, meet_region)
                d = idx.dc.dist(cur_portal, meet_portal, pair.domain())
                steps.append(SequenceStep(pair, False, d))
                verts.append(meet_portal)
            break
        w = gverts[j]
        nxt_region = h.owner[w]
        nxt_portal = idx.nearest_portal_along(nxt_region, w, scale)
        if nxt_portal != cur_portal:
            pair = CanonicalPair(cur_portal, nxt_portal, scale, cur_region, nxt_region)
            d = idx.dc.dist(cur_portal, nxt_portal, pair.domain())
            if d is None:
                raise InvariantViolation("ascending walk hop disconnected in its arc")
            steps.append(SequenceStep(pair, False, d))
            verts.append(nxt_portal)
        cur_region, cur_portal = nxt_region, nxt_portal
        i = j
    return verts, steps


def find_canonical_sequence(idx: PortalIndex, a: int, b: int) -> CanonicalSequence:
    """Sequence between arbitrary connected vertices whose pairs draw from the
    relevant sets of the endpoints; total hop distance tracks the true
    distance up to an O(log n)*eps factor."""
    if a == b:
        return CanonicalSequence((a,), ())
    h = idx.h
    guide = idx.dc.path(a, b)
    if guide is None:
        raise PreconditionError(f"vertices {a} and {b} are disconnected")
    from .hierarchy import lowest_region_containing_all
    region = lowest_region_containing_all(h, guide.vertices)
    on_sep = next(v for v in guide.vertices if h.owner[v] == region.id)
    scale = floor_log2(max(1, guide.base)) + 2
    meet = idx.nearest_portal_along(region.id, on_sep, scale)
    va, sa = _half_sequence(idx, a, meet, region.id, scale)
    vb, sb = _half_sequence(idx, b, meet, region.id, scale)
    verts = va + [x for x in reversed(vb[:-1])]
    steps = sa + [SequenceStep(s.pair, not s.flipped, s.dist) for s in reversed(sb)]
    return CanonicalSequence(tuple(verts), tuple(steps))
