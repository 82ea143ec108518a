"""Shortest-path separator hierarchy and r-divisions.

Each hierarchy node is a region (an induced subgraph given by its vertex set)
together with one internal separator: a shortest path within that region.
Children are the connected components left after removing the separator, so
every vertex of the graph ends up on exactly one internal separator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .errors import InputError, InvariantViolation, PreconditionError
from .graph import Graph, Path, connected_components, shortest_path, sssp_raw


@dataclass
class Region:
    id: int
    parent: Optional[int]
    depth: int
    vertices: FrozenSet[int]
    separator: Tuple[int, ...]
    children: List[int] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return not self.children


class SeparatorHierarchy:
    """Tree of regions plus per-vertex owner maps and ancestor tables."""

    def __init__(self, g: Graph, regions: List[Region], root_id: int):
        self.g = g
        self.regions = regions
        self.root_id = root_id
        self.owner = [-1] * g.n          # vertex -> region whose separator holds it
        self.sep_pos = [-1] * g.n        # vertex -> index along that separator
        for r in regions:
            for i, v in enumerate(r.separator):
                if self.owner[v] != -1:
                    raise InvariantViolation(f"vertex {v} lies on two separators")
                self.owner[v] = r.id
                self.sep_pos[v] = i
        for v in range(g.n):
            if self.owner[v] == -1:
                raise InvariantViolation(f"vertex {v} lies on no separator")
        # ancestors root-down, inclusive
        self.ancestors: List[Tuple[int, ...]] = [()] * len(regions)
        for r in sorted(regions, key=lambda r: r.depth):
            if r.parent is None:
                self.ancestors[r.id] = (r.id,)
            else:
                self.ancestors[r.id] = self.ancestors[r.parent] + (r.id,)
        self.sep_sets: List[FrozenSet[int]] = [frozenset(r.separator) for r in regions]
        self.height = 1 + max(r.depth for r in regions)
        self._arc_cache: Dict[Tuple[int, int], FrozenSet[int]] = {}

    # -- queries ------------------------------------------------------------

    def region(self, rid: int) -> Region:
        return self.regions[rid]

    def is_ancestor(self, anc: int, rid: int) -> bool:
        """True iff `anc` is an ancestor of `rid`, inclusive."""
        chain = self.ancestors[rid]
        d = self.regions[anc].depth
        return d < len(chain) and chain[d] == anc

    def contains(self, rid: int, v: int) -> bool:
        """Vertex v belongs to region rid's vertex set."""
        return self.is_ancestor(rid, self.owner[v])

    def regions_containing(self, v: int) -> Tuple[int, ...]:
        """Root-down chain of regions whose vertex sets include v."""
        return self.ancestors[self.owner[v]]

    def external_separators(self, rid: int) -> Tuple[int, ...]:
        """Proper ancestors of rid, root-down; their separators are external."""
        return self.ancestors[rid][:-1]

    def arc_vertices(self, rid: int, sep_rid: int) -> FrozenSet[int]:
        """Vertex set of region `rid` extended by the separator of `sep_rid`."""
        if sep_rid == rid:
            return self.regions[rid].vertices
        key = (rid, sep_rid)
        cached = self._arc_cache.get(key)
        if cached is None:
            cached = self.regions[rid].vertices | self.sep_sets[sep_rid]
            self._arc_cache[key] = cached
        return cached

    def separator_path(self, rid: int) -> Path:
        return Path.from_vertices(self.g, self.regions[rid].separator)


def lowest_common_region(h: SeparatorHierarchy, u: int, v: int) -> Region:
    """Deepest region whose vertex set contains both u and v."""
    a, b = h.ancestors[h.owner[u]], h.ancestors[h.owner[v]]
    deepest = a[0]
    for x, y in zip(a, b):
        if x != y:
            break
        deepest = x
    return h.regions[deepest]


def lowest_region_containing_all(h: SeparatorHierarchy, vertices: Sequence[int]) -> Region:
    it = iter(vertices)
    first = next(it)
    chain = h.ancestors[h.owner[first]]
    depth = len(chain) - 1
    for v in it:
        other = h.ancestors[h.owner[v]]
        d = -1
        for x, y in zip(chain, other):
            if x != y:
                break
            d += 1
        depth = min(depth, d)
    return h.regions[chain[depth]]


# ---------------------------------------------------------------------------
# construction

def _choose_separator(g: Graph, vset: FrozenSet[int]) -> List[int]:
    """Pick the root-to-vertex shortest-path-tree path that minimizes the
    largest remaining component. Exhaustive over all targets; ties break to
    the smallest target id."""
    root = min(vset)
    if len(vset) == 1:
        return [root]
    dist, parent = sssp_raw(g, root, vset)
    if len(dist) != len(vset):
        raise PreconditionError("region is not connected")
    adj = g.adj
    best_score = None
    best_target = None
    on_path = [0] * g.n
    seen = [0] * g.n
    epoch = 0
    for target in sorted(vset):
        epoch += 1
        chain = []
        v = target
        while v != -1:
            chain.append(v)
            on_path[v] = epoch
            v = parent[v]
        # largest component of vset minus the path
        largest = 0
        for s in vset:
            if on_path[s] == epoch or seen[s] == epoch:
                continue
            size = 0
            stack = [s]
            seen[s] = epoch
            while stack:
                u = stack.pop()
                size += 1
                for (w, _) in adj[u]:
                    if w in vset and seen[w] != epoch and on_path[w] != epoch:
                        seen[w] = epoch
                        stack.append(w)
            if size > largest:
                largest = size
        if best_score is None or largest < best_score:
            best_score = largest
            best_target = target
            if largest == 0:
                break
    chain = []
    v = best_target
    while v != -1:
        chain.append(v)
        v = parent[v]
    chain.reverse()
    return chain


def build_hierarchy(g: Graph, vertices: Optional[FrozenSet[int]] = None) -> SeparatorHierarchy:
    """Build a separator hierarchy for a connected (sub)graph.

    Balance is best effort (the stretch machinery depends only on the
    hierarchy axioms); the achieved height is available as `.height`.
    """
    if not g.is_perturbed:
        raise PreconditionError("build_hierarchy requires perturbed weights")
    universe = frozenset(range(g.n)) if vertices is None else frozenset(vertices)
    if not universe:
        raise PreconditionError("empty vertex set")
    comps = connected_components(g, universe)
    if len(comps) != 1:
        raise PreconditionError("build_hierarchy requires a connected graph")
    regions: List[Region] = []
    stack: List[Tuple[FrozenSet[int], Optional[int], int]] = [(universe, None, 0)]
    while stack:
        vset, parent_id, depth = stack.pop()
        sep = _choose_separator(g, vset)
        rid = len(regions)
        region = Region(id=rid, parent=parent_id, depth=depth,
                        vertices=vset, separator=tuple(sep))
        regions.append(region)
        if parent_id is not None:
            regions[parent_id].children.append(rid)
        remaining = vset - set(sep)
        for comp in sorted(connected_components(g, remaining), key=min, reverse=True):
            stack.append((comp, rid, depth + 1))
    return SeparatorHierarchy(g, regions, 0)


def validate_hierarchy(h: SeparatorHierarchy, check_edges: bool = True) -> List[str]:
    """Re-check every structural requirement; returns a list of problems."""
    g = h.g
    problems: List[str] = []
    for r in h.regions:
        if not set(r.separator) <= r.vertices:
            problems.append(f"region {r.id}: separator leaves its vertex set")
            continue
        sp = shortest_path(g, r.separator[0], r.separator[-1], r.vertices)
        if sp is None or sp.vertices != r.separator:
            problems.append(f"region {r.id}: separator is not the shortest path "
                            f"between its endpoints inside the region")
        remaining = r.vertices - set(r.separator)
        comps = {frozenset(c) for c in connected_components(g, remaining)}
        child_sets = {h.regions[c].vertices for c in r.children}
        if comps != child_sets:
            problems.append(f"region {r.id}: children do not match the components "
                            f"left by separator removal")
        for c in r.children:
            if not h.regions[c].vertices < r.vertices:
                problems.append(f"region {c}: vertex set not nested in parent")
    owned = [0] * g.n
    for r in h.regions:
        for v in r.separator:
            owned[v] += 1
    for v, cnt in enumerate(owned):
        if cnt != 1:
            problems.append(f"vertex {v} lies on {cnt} separators")
    if check_edges:
        for r in h.regions:
            ext = set()
            for rid in h.external_separators(r.id):
                ext |= h.sep_sets[rid]
            for v in r.vertices:
                for (w, _) in g.adj[v]:
                    if w not in r.vertices and w not in ext:
                        problems.append(f"edge ({v},{w}) leaves region {r.id} but "
                                        f"does not land on an external separator")
    return problems


# ---------------------------------------------------------------------------
# dump / load

def dump_hierarchy(h: SeparatorHierarchy) -> str:
    """One line per region: 'id parent sep... | members...' (parent -1 at root)."""
    lines = []
    for r in h.regions:
        parent = -1 if r.parent is None else r.parent
        sep = " ".join(str(v) for v in r.separator)
        members = " ".join(str(v) for v in sorted(r.vertices))
        lines.append(f"{r.id} {parent} {sep} | {members}")
    return "\n".join(lines) + "\n"


def load_hierarchy(g: Graph, text: str) -> SeparatorHierarchy:
    """Parse and fully re-validate an externally supplied hierarchy."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, sep_bar, tail = line.partition("|")
        if not sep_bar:
            raise InputError(f"line {lineno}: missing '|' member separator")
        head_parts = head.split()
        if len(head_parts) < 3:
            raise InputError(f"line {lineno}: need 'id parent sep...'")
        rid, parent = int(head_parts[0]), int(head_parts[1])
        sep = tuple(int(x) for x in head_parts[2:])
        members = frozenset(int(x) for x in tail.split())
        rows.append((lineno, rid, parent, sep, members))
    if not rows:
        raise InputError("empty hierarchy file")
    regions: List[Optional[Region]] = [None] * len(rows)
    for lineno, rid, parent, sep, members in rows:
        if not (0 <= rid < len(rows)) or regions[rid] is not None:
            raise InputError(f"line {lineno}: bad or duplicate region id {rid}")
        regions[rid] = Region(id=rid, parent=None if parent == -1 else parent,
                              depth=0, vertices=members, separator=sep)
    roots = [r for r in regions if r.parent is None]
    if len(roots) != 1:
        raise InputError("hierarchy must have exactly one root")
    # fill depth/children by walking down
    by_parent: Dict[int, List[int]] = {}
    for r in regions:
        if r.parent is not None:
            if not (0 <= r.parent < len(regions)):
                raise InputError(f"region {r.id}: parent {r.parent} does not exist")
            by_parent.setdefault(r.parent, []).append(r.id)
    stack = [(roots[0].id, 0)]
    seen = 0
    while stack:
        rid, depth = stack.pop()
        regions[rid].depth = depth
        regions[rid].children = sorted(by_parent.get(rid, []))
        seen += 1
        for c in regions[rid].children:
            stack.append((c, depth + 1))
    if seen != len(regions):
        raise InputError("hierarchy contains unreachable regions")
    try:
        h = SeparatorHierarchy(g, regions, roots[0].id)
    except InvariantViolation as exc:
        raise InputError(f"invalid hierarchy: {exc}") from exc
    problems = validate_hierarchy(h)
    if problems:
        raise InputError("invalid hierarchy: " + "; ".join(problems[:5]))
    return h


# ---------------------------------------------------------------------------
# r-division

@dataclass
class RDivision:
    """Edge partition into regions of at most r vertices each."""

    pieces: List[List[int]]                  # edge ids per piece
    piece_vertices: List[FrozenSet[int]]
    boundaries: List[FrozenSet[int]]
    r: int
    max_boundary: int
    regions_per_n_over_r: float              # recorded constant c with #pieces <= c*n/r


def _piece_components(g: Graph, eids: Sequence[int], vset) -> List[frozenset]:
    adj: Dict[int, List[int]] = {v: [] for v in vset}
    for eid in eids:
        u, v, _ = g.edges[eid]
        if u in adj and v in adj:
            adj[u].append(v)
            adj[v].append(u)
    comps = []
    seen = set()
    for s in sorted(vset):
        if s in seen:
            continue
        comp = {s}
        seen.add(s)
        stack = [s]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in comp:
                    comp.add(w)
                    seen.add(w)
                    stack.append(w)
        comps.append(frozenset(comp))
    return comps


def _piece_separator(g: Graph, eids: Sequence[int], vset: FrozenSet[int]) -> List[int]:
    """Best single shortest path w.r.t. the piece's edge subgraph."""
    sub = Graph(g.n, [g.edges[e] for e in eids], scale=g.scale,
                ties=[g.ties[e] for e in eids] if g.ties else None)
    return _choose_separator(sub, vset)


def build_r_division(g: Graph, r: int) -> RDivision:
    """Partition E(G) into pieces of <= r vertices by recursive separator
    splits (falling back to edge bisection when a split makes no progress)."""
    if r < 2:
        raise PreconditionError("r must be >= 2")
    if not g.is_perturbed:
        raise PreconditionError("build_r_division requires perturbed weights")
    final: List[List[int]] = []
    stack: List[List[int]] = [list(range(g.m))] if g.m else []
    while stack:
        eids = stack.pop()
        vset = frozenset(v for e in eids for v in g.edges[e][:2])
        if len(vset) <= r:
            final.append(sorted(eids))
            continue
        children: List[List[int]] = []
        comps = _piece_components(g, eids, vset)
        if len(comps) > 1:
            groups: Dict[int, List[int]] = {}
            comp_of = {}
            for i, comp in enumerate(comps):
                for v in comp:
                    comp_of[v] = i
            for eid in eids:
                groups.setdefault(comp_of[g.edges[eid][0]], []).append(eid)
            children = list(groups.values())
        else:
            sep = _piece_separator(g, eids, vset)
            sep_set = set(sep)
            comp_of = {}
            for i, comp in enumerate(_piece_components(
                    g, [e for e in eids
                        if g.edges[e][0] not in sep_set and g.edges[e][1] not in sep_set],
                    vset - sep_set)):
                for v in comp:
                    comp_of[v] = i
            buckets: Dict[int, List[int]] = {}
            sep_bucket: List[int] = []
            for eid in eids:
                u, v, _ = g.edges[eid]
                cu, cv = comp_of.get(u), comp_of.get(v)
                target = cu if cu is not None else cv
                if target is None:
                    sep_bucket.append(eid)
                else:
                    buckets.setdefault(target, []).append(eid)
            if buckets and sep_bucket:
                # attach separator-only edges to buckets that already hold
                # their endpoints, rather than spawning path-shaped pieces
                touch: Dict[int, set] = {i: set() for i in buckets}
                for i, bucket in buckets.items():
                    for eid in bucket:
                        touch[i].update(g.edges[eid][:2])
                for eid in sep_bucket:
                    u, v, _ = g.edges[eid]
                    best = max(buckets,
                               key=lambda i: (len({u, v} & touch[i]), -len(buckets[i])))
                    buckets[best].append(eid)
                    touch[best].update((u, v))
                sep_bucket = []
            children = list(buckets.values())
            if sep_bucket:
                children.append(sep_bucket)
            # consolidate crumbs: merge the smallest children while the union
            # stays a strict subset of the piece (recursion re-splits anything
            # still above r, so only the progress guarantee matters here)
            while len(children) > 2:
                children.sort(key=len)
                union = children[0] + children[1]
                uverts = frozenset(v for e in union for v in g.edges[e][:2])
                if len(uverts) >= len(vset):
                    break
                children = [union] + children[2:]
            progress = all(
                len(frozenset(v for e in ch for v in g.edges[e][:2])) < len(vset)
                for ch in children) and len(children) > 1
            if not progress:
                children = _bfs_halves(g, eids, vset)
        for ch in children:
            if ch:
                stack.append(ch)
    final = _merge_small_pieces(g, final, r)
    piece_vertices = [frozenset(v for e in p for v in g.edges[e][:2]) for p in final]
    count = [0] * g.n
    for pv in piece_vertices:
        for v in pv:
            count[v] += 1
    boundaries = [frozenset(v for v in pv if count[v] >= 2) for pv in piece_vertices]
    max_boundary = max((len(b) for b in boundaries), default=0)
    c = len(final) * r / g.n if g.n else 0.0
    return RDivision(final, piece_vertices, boundaries, r, max_boundary, c)


def _bfs_halves(g: Graph, eids: Sequence[int], vset) -> List[List[int]]:
    """Fallback split when the separator makes no progress: cut the piece at
    the median BFS layer; degenerates to plain edge halving if even that
    cannot shrink both sides."""
    esel = set(eids)
    order = []
    seen = set()
    for start in sorted(vset):
        if start in seen:
            continue
        queue = [start]
        seen.add(start)
        while queue:
            u = queue.pop(0)
            order.append(u)
            for (w, eid) in g.adj[u]:
                if eid in esel and w not in seen:
                    seen.add(w)
                    queue.append(w)
    half = set(order[:len(order) // 2])
    first = [e for e in eids if g.edges[e][0] in half and g.edges[e][1] in half]
    second = [e for e in eids if e not in set(first)]
    ok = first and second and all(
        len(frozenset(v for e in ch for v in g.edges[e][:2])) < len(vset)
        for ch in (first, second))
    if not ok:
        ordered = sorted(eids)
        mid = len(ordered) // 2
        return [ordered[:mid], ordered[mid:]]
    return [first, second]


def _merge_small_pieces(g: Graph, pieces: List[List[int]], r: int) -> List[List[int]]:
    """Greedily merge pieces sharing vertices while the union stays within r;
    counters the fragmentation of multi-component separator splits."""
    vsets = [set(v for e in p for v in g.edges[e][:2]) for p in pieces]
    alive = list(range(len(pieces)))
    changed = True
    while changed:
        changed = False
        alive.sort(key=lambda i: len(vsets[i]))
        for i in alive:
            if not pieces[i]:
                continue
            best = None
            for j in alive:
                if j == i or not pieces[j]:
                    continue
                if vsets[i] & vsets[j]:
                    union = len(vsets[i] | vsets[j])
                    if union <= r and (best is None or union < best[0]):
                        best = (union, j)
            if best is not None:
                j = best[1]
                pieces[j] = sorted(pieces[i] + pieces[j])
                vsets[j] |= vsets[i]
                pieces[i] = []
                vsets[i] = set()
                changed = True
    return [p for p in pieces if p]
