"""Brute-force oracles, stretch measurement, domain replacement, and minor
validation. Everything here stays independent of the construction path it
checks: distances use a plain integer Dijkstra over base weights only.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .config import worker_count
from .dam import Dam, contract_degree2
from .distances import region_domain
from .errors import PreconditionError
from .graph import Graph, Path, int_dijkstra
from .hierarchy import SeparatorHierarchy
from .portals import PortalIndex


def brute_force_distances(g: Graph, terminals: Sequence[int]
                          ) -> Dict[Tuple[int, int], Optional[int]]:
    """Exact base-weight distances for every terminal pair; None when
    disconnected. Repeated single-source runs, parallelizable via
    DAMKIT_THREADS (pure function of the graph)."""
    adj = [[(v, g.edges[eid][2]) for (v, eid) in g.adj[u]] for u in range(g.n)]
    terminals = list(terminals)

    def one_source(s: int) -> Dict[int, int]:
        return int_dijkstra(g.n, adj, s)

    workers = worker_count()
    if workers > 1 and len(terminals) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            maps = list(pool.map(one_source, terminals))
    else:
        maps = [one_source(s) for s in terminals]
    out: Dict[Tuple[int, int], Optional[int]] = {}
    for i, s in enumerate(terminals):
        for t in terminals[i + 1:]:
            out[(s, t)] = maps[i].get(t)
    return out


@dataclass
class StretchReport:
    pairs: List[Tuple[int, int, Optional[int], Optional[int], Optional[Fraction]]]
    max_ratio: Optional[Fraction]
    violations: List[str] = field(default_factory=list)
    size_metrics: Dict[str, int] = field(default_factory=dict)

    @property
    def hard_fail(self) -> bool:
        return bool(self.violations)

    def to_csv(self) -> str:
        lines = ["# stretch-report v1", "t1,t2,d_graph,d_sketch,ratio"]
        for (a, b, dg, dh, ratio) in self.pairs:
            r = "" if ratio is None else f"{float(ratio):.6f}"
            lines.append(f"{a},{b},{'' if dg is None else dg},"
                         f"{'' if dh is None else dh},{r}")
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        lines = []
        mr = "n/a" if self.max_ratio is None else f"{float(self.max_ratio):.6f}"
        lines.append(f"pairs checked: {len(self.pairs)}  max ratio: {mr}")
        for k, v in sorted(self.size_metrics.items()):
            lines.append(f"  {k}: {v}")
        if self.violations:
            lines.append("HARD FAILURES:")
            lines.extend(f"  {v}" for v in self.violations)
        else:
            lines.append("no hard failures")
        return "\n".join(lines) + "\n"


def measure_stretch(sketch: Dict[Tuple[int, int], Optional[int]],
                    oracle: Dict[Tuple[int, int], Optional[int]],
                    size_metrics: Optional[Dict[str, int]] = None) -> StretchReport:
    """Per-pair ratios sketch/oracle; hard-fails on any ratio below 1 and on
    pairs the sketch disconnects but the graph does not."""
    if set(sketch) != set(oracle):
        raise PreconditionError("sketch and oracle cover different terminal pairs")
    pairs = []
    violations = []
    max_ratio: Optional[Fraction] = None
    for key in sorted(oracle):
        dg, dh = oracle[key], sketch[key]
        ratio: Optional[Fraction] = None
        if dg is None:
            if dh is not None:
                violations.append(f"pair {key}: sketch connects a pair the graph does not")
        elif dh is None:
            violations.append(f"pair {key}: sketch disconnects a connected pair")
        elif dg == 0:
            if dh != 0:
                violations.append(f"pair {key}: zero distance inflated")
        else:
            ratio = Fraction(dh, dg)
            if ratio < 1:
                violations.append(f"pair {key}: ratio {float(ratio):.6f} < 1")
            if max_ratio is None or ratio > max_ratio:
                max_ratio = ratio
        pairs.append((key[0], key[1], dg, dh, ratio))
    return StretchReport(pairs, max_ratio, violations, dict(size_metrics or {}))


def domain_replacement(idx: PortalIndex, path: Path,
                       spans: Sequence[Tuple[int, int]], rid: int) -> Path:
    """Replace each subpath (given as vertex-index span of `path`) by the
    shortest path, between its endpoints, in the lowest region that contains
    both endpoints and is an ancestor of region `rid`."""
    h = idx.h
    spans = sorted(spans)
    for (i, j) in spans:
        if not (0 <= i < j < len(path.vertices)):
            raise PreconditionError(f"bad subpath span ({i},{j})")
    for (_, j), (i2, _) in zip(spans, spans[1:]):
        if i2 < j:
            raise PreconditionError("subpaths overlap")
    g = idx.g
    verts: List[int] = []
    cursor = 0
    anc_chain = h.ancestors[rid]
    for (i, j) in spans:
        verts.extend(path.vertices[cursor:i])
        u, v = path.vertices[i], path.vertices[j]
        dom = None
        for cand in reversed(anc_chain):
            if h.contains(cand, u) and h.contains(cand, v):
                dom = cand
                break
        if dom is None:
            raise PreconditionError(f"no ancestor region contains both {u} and {v}")
        repl = idx.dc.path(u, v, region_domain(dom))
        if repl is None:
            raise PreconditionError(f"span endpoints {u},{v} disconnected in region {dom}")
        verts.extend(repl.vertices[:-1])
        cursor = j
    verts.extend(path.vertices[cursor:])
    return Path.from_vertices(g, verts)


@dataclass
class MinorReport:
    ok: bool
    problems: List[str]

    def to_text(self) -> str:
        return "minor: valid\n" if self.ok else \
            "minor: INVALID\n" + "".join(f"  {p}\n" for p in self.problems)


def verify_minor(dam: Dam, g: Graph) -> MinorReport:
    """Structural validation: edges live in G, certificate round-trips through
    contraction, weights equal chain lengths, no non-terminal degree-2
    vertices, terminals present."""
    problems: List[str] = []
    tset = set(dam.terminals)
    for (u, v) in sorted(dam.m_edges):
        if not g.has_edge(u, v):
            problems.append(f"overlay edge ({u},{v}) is not an edge of the graph")
    for t in dam.terminals:
        if t not in dam.minor_vertices:
            problems.append(f"terminal {t} missing from the minor")
    deg: Dict[int, int] = {v: 0 for v in dam.minor_vertices}
    for (u, v, _) in dam.minor_edges:
        deg[u] += 1
        deg[v] += 1
    for v, d in deg.items():
        if d == 2 and v not in tset:
            problems.append(f"non-terminal vertex {v} has degree 2 in the minor")
    seen_chain_edges = set()
    for (u, v, w) in dam.minor_edges:
        chain = dam.certificate.get((u, v))
        if chain is None:
            problems.append(f"minor edge ({u},{v}) has no certificate chain")
            continue
        if chain[0] != u or chain[-1] != v:
            problems.append(f"certificate for ({u},{v}) has wrong endpoints")
        length = 0
        good = True
        for a, b in zip(chain, chain[1:]):
            eid = g.edge_id(a, b)
            if eid is None:
                problems.append(f"certificate for ({u},{v}) uses non-edge ({a},{b})")
                good = False
                break
            length += g.edges[eid][2]
            seen_chain_edges.add((a, b) if a < b else (b, a))
        if good and length != w:
            problems.append(f"minor edge ({u},{v}) weight {w} != chain length {length}")
    if not problems:
        # round-trip: expanding every chain and re-contracting must reproduce
        # the minor exactly
        expand_vertices = set(dam.terminals)
        expand_edges = []
        for chain in dam.certificate.values():
            for a, b in zip(chain, chain[1:]):
                key = (a, b) if a < b else (b, a)
                expand_vertices.update(key)
            expand_edges.extend((min(a, b), max(a, b)) for a, b in zip(chain, chain[1:]))
        uniq = sorted(set(expand_edges))
        weights = []
        for (a, b) in uniq:
            eid = g.edge_id(a, b)
            weights.append((a, b, g.edges[eid][2]))
        rv, re_, rc = contract_degree2(sorted(expand_vertices), weights, dam.terminals)
        if rv != tuple(dam.minor_vertices):
            problems.append("round-trip contraction changes the vertex set")
        if re_ != tuple(dam.minor_edges):
            problems.append("round-trip contraction changes the edge set")
    return MinorReport(not problems, problems)
