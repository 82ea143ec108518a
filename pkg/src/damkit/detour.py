"""Detour paths: approximate shortest paths for canonical pairs that hug
nearby external separators instead of crossing them repeatedly.

Starting from the exact shortest path of the pair, the procedure sweeps
geometrically shrinking thresholds; whenever the current path comes within
2^i of an external separator it is rerouted to travel along that separator.
The result decomposes into safe edges (single crossing edges), safe subpaths
(shortest paths inside the pair's region) and unsafe subpaths (pieces of
external separators), maintained incrementally through every splice.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .canonical import CanonicalPair, pair_is_valid
from .distances import region_domain
from .errors import InvariantViolation, PreconditionError
from .graph import Graph, Path
from .portals import PortalIndex
from .weights import ceil_log2_fraction

SAFE_EDGE = "safe-edge"
SAFE_SUBPATH = "safe-subpath"
UNSAFE_SUBPATH = "unsafe-subpath"


@dataclass(frozen=True)
class DetourResult:
    pair: CanonicalPair
    path: Path
    pieces: Tuple[Tuple[str, Path], ...]   # ordered, concatenates back to path
    iterations: int                         # every (scale, separator) visit
    spliced: int                            # iterations that changed the path

    def safe(self) -> Tuple[Path, ...]:
        return tuple(p for tag, p in self.pieces if tag != UNSAFE_SUBPATH)

    def unsafe(self) -> Tuple[Path, ...]:
        return tuple(p for tag, p in self.pieces if tag == UNSAFE_SUBPATH)

    def dump(self) -> str:
        lines = [f"detour <{self.pair.a},{self.pair.b}> scale={self.pair.scale} "
                 f"region={self.pair.region} k={self.iterations}"]
        for tag, p in self.pieces:
            lines.append(f"  [{tag}] " + " ".join(str(v) for v in p.vertices))
        return "\n".join(lines)


def _split_piece(g: Graph, tag: str, verts: Tuple[int, ...], cut: int):
    """Split a piece's vertex list at local edge index `cut`; empty sides drop."""
    left = verts[:cut + 1] if cut > 0 else None
    right = verts[cut:] if cut < len(verts) - 1 else None
    out = []
    if left is not None:
        out.append((tag, left))
    if right is not None:
        out.append((tag, right))
    return out


class _Decomposition:
    """Piece list over the working path; pieces partition its edges in order."""

    def __init__(self):
        self.items: List[Tuple[str, Tuple[int, ...]]] = []

    def append(self, tag: str, verts: Sequence[int]):
        if len(verts) >= 2:
            self.items.append((tag, tuple(verts)))

    def splice(self, g: Graph, prefix_edges: int, suffix_start: int,
               middle: List[Tuple[str, Tuple[int, ...]]]):
        """Keep pieces covering edges [0, prefix_edges) and [suffix_start, end),
        insert `middle` between. Straddling pieces are cut, keeping their tag
        (safe subpaths stay shortest paths; separator pieces stay on their
        separator; single edges cannot straddle)."""
        new_items: List[Tuple[str, Tuple[int, ...]]] = []
        offset = 0
        tail_items: List[Tuple[str, Tuple[int, ...]]] = []
        for tag, verts in self.items:
            span = len(verts) - 1
            lo, hi = offset, offset + span
            if hi <= prefix_edges:
                new_items.append((tag, verts))
            elif lo < prefix_edges < hi:
                cut = prefix_edges - lo
                if tag == SAFE_EDGE:
                    raise InvariantViolation("a single-edge piece cannot straddle a cut")
                new_items.append((tag, verts[:cut + 1]))
            if lo >= suffix_start:
                tail_items.append((tag, verts))
            elif lo < suffix_start < hi:
                cut = suffix_start - lo
                if tag == SAFE_EDGE:
                    raise InvariantViolation("a single-edge piece cannot straddle a cut")
                tail_items.append((tag, verts[cut:]))
            offset = hi
        new_items.extend(middle)
        new_items.extend(tail_items)
        self.items = new_items

    def finish(self, g: Graph) -> Tuple[Tuple[str, Path], ...]:
        return tuple((tag, Path.from_vertices(g, verts)) for tag, verts in self.items)


def detour_path(idx: PortalIndex, pair: CanonicalPair) -> DetourResult:
    cached = idx.detour_memo.get(pair.key)
    if cached is not None:
        return cached
    result = _detour_path(idx, pair)
    with idx.memo_lock:
        return idx.detour_memo.setdefault(pair.key, result)


def _detour_path(idx: PortalIndex, pair: CanonicalPair) -> DetourResult:
    g, h, dc = idx.g, idx.h, idx.dc
    if not pair_is_valid(idx, pair):
        raise PreconditionError(f"invalid canonical pair {pair}")
    a, b = pair.a, pair.b
    rid = pair.region
    region_set = h.regions[rid].vertices
    base_path = dc.path(a, b, pair.domain())
    if base_path is None:
        raise PreconditionError("pair endpoints disconnected in their arc subgraph")

    decomp = _Decomposition()
    if pair.sep_region == rid or a == b:
        decomp.append(SAFE_SUBPATH, base_path.vertices)
    else:
        sep_b = h.sep_sets[pair.sep_region]
        first_on = next(i for i, v in enumerate(base_path.vertices) if v in sep_b)
        if any(v not in sep_b for v in base_path.vertices[first_on:]):
            raise InvariantViolation("shortest path re-enters the region after "
                                     "reaching the target separator")
        verts = base_path.vertices
        decomp.append(SAFE_SUBPATH, verts[:first_on])
        decomp.append(SAFE_EDGE, verts[first_on - 1:first_on + 1])
        decomp.append(UNSAFE_SUBPATH, verts[first_on:])

    cur: List[int] = list(base_path.vertices)
    eps_len = idx.eps * base_path.base
    # scales sweep ceil(log2(eps*|P0|)) down to 0; when eps*|P0| < 1 the sweep
    # is empty (a detour at scale 0 could add +4 to a path much shorter than
    # 4*eps*|P0|, breaking the iteration stretch bound)
    top_scale = ceil_log2_fraction(eps_len) if eps_len >= 1 else -1
    iterations = 0
    spliced = 0
    externals = h.external_separators(rid)
    for i in range(top_scale, -1, -1):
        limit = 1 << i
        for srid in externals:
            iterations += 1
            dist, parent, label = dc.separator_sweep(rid, srid)
            idx_s = None
            idx_t = None
            for pos, v in enumerate(cur):
                if v in region_set:
                    d = dist.get(v)
                    if d is not None and d[0] <= limit:
                        if idx_s is None:
                            idx_s = pos
                        idx_t = pos
            if idx_s is None:
                continue
            s, t = cur[idx_s], cur[idx_t]
            path_s = dc.path_to_separator(rid, srid, s)       # s -> s'
            path_t = dc.path_to_separator(rid, srid, t)       # t -> t'
            s_proj, t_proj = label[s], label[t]
            sep = h.regions[srid].separator
            ps, pt = h.sep_pos[s_proj], h.sep_pos[t_proj]
            if ps <= pt:
                along = sep[ps:pt + 1]
            else:
                along = tuple(reversed(sep[pt:ps + 1]))
            middle: List[Tuple[str, Tuple[int, ...]]] = []
            sv = path_s.vertices
            if len(sv) > 2:
                middle.append((SAFE_SUBPATH, sv[:-1]))
            if len(sv) >= 2:
                middle.append((SAFE_EDGE, sv[-2:]))
            if len(along) >= 2:
                middle.append((UNSAFE_SUBPATH, along))
            tv = tuple(reversed(path_t.vertices))             # t' -> t
            if len(tv) >= 2:
                middle.append((SAFE_EDGE, tv[:2]))
            if len(tv) > 2:
                middle.append((SAFE_SUBPATH, tv[1:]))
            decomp.splice(g, idx_s, idx_t, middle)
            new_cur = cur[:idx_s + 1]
            new_cur.extend(sv[1:])
            new_cur.extend(along[1:])
            new_cur.extend(tv[1:])
            new_cur.extend(cur[idx_t + 1:])
            cur = new_cur
            spliced += 1

    final = Path.from_vertices(g, cur)
    pieces = decomp.finish(g)
    joined: List[int] = list(pieces[0][1].vertices) if pieces else [a]
    for _, p in pieces[1:]:
        joined.extend(p.vertices[1:])
    if tuple(joined) != final.vertices:
        raise InvariantViolation("piece decomposition does not reproduce the detour path")
    return DetourResult(pair, final, pieces, iterations, spliced)


def safe_paths(idx: PortalIndex, pair: CanonicalPair) -> Tuple[Path, ...]:
    return detour_path(idx, pair).safe()


def threatens(idx: PortalIndex, path: Path, pair: CanonicalPair) -> bool:
    """True iff the path comes within 2*2^scale of the pair's first portal
    inside the pair's region. Paths not contained in that region never
    threaten (by convention)."""
    region_set = idx.h.regions[pair.region].vertices
    if any(v not in region_set for v in path.vertices):
        return False
    dist, _ = idx.dc.sssp(pair.a, region_domain(pair.region))
    limit = 2 << pair.scale
    for v in path.vertices:
        d = dist.get(v)
        if d is not None and d[0] <= limit:
            return True
    return False


def count_splitting_points(p1: Path, p2: Path) -> int:
    """Vertices of degree > 2 in the union of the two paths' edge sets."""
    adj: Dict[int, set] = {}
    for path in (p1, p2):
        for u, v in path.edge_pairs():
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
    return sum(1 for nbrs in adj.values() if len(nbrs) > 2)
