"""Proxy pairs: replace a detour path's separator-riding pieces by climbing
the hierarchy and re-detouring along each ancestor separator.

Each level finds the first/last touch of the parent's separator on the
current witness path, bridges them with an exact portal sequence along that
separator, and substitutes detour paths for every hop. Levels whose separator
the path never touches are skipped unchanged (no separator-riding piece can
lie on an untouched separator).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

from .canonical import CanonicalPair, canonical_sequence_on_separator
from .detour import detour_path
from .errors import PreconditionError
from .graph import Path
from .portals import PortalIndex


@dataclass(frozen=True)
class ProxyResult:
    pair: CanonicalPair
    proxy: Tuple[CanonicalPair, ...]    # contains `pair` itself
    path: Path                          # witness path from a to b
    level_lengths: Tuple[int, ...]      # base length after each climb level


def find_proxy_pairs(idx: PortalIndex, pair: CanonicalPair) -> ProxyResult:
    cached = idx.proxy_memo.get(pair.key)
    if cached is not None:
        return cached
    result = _find_proxy_pairs(idx, pair)
    with idx.memo_lock:
        return idx.proxy_memo.setdefault(pair.key, result)


def _find_proxy_pairs(idx: PortalIndex, pair: CanonicalPair) -> ProxyResult:
    g, h = idx.g, idx.h
    base = detour_path(idx, pair)
    witness = list(base.path.vertices)
    proxy: List[CanonicalPair] = [pair]
    seen_keys = {pair.key}
    lengths = [base.path.base]

    rid = pair.region
    while h.regions[rid].parent is not None:
        parent = h.regions[rid].parent
        sep_set = h.sep_sets[parent]
        first = None
        last = None
        for pos, v in enumerate(witness):
            if v in sep_set:
                if first is None:
                    first = pos
                last = pos
        if first is not None:
            s, t = witness[first], witness[last]
            seq = canonical_sequence_on_separator(idx, s, t)
            rebuilt = witness[:first + 1]
            for step in seq.steps:
                hop = detour_path(idx, step.pair)
                hop_verts = hop.path.vertices if not step.flipped \
                    else tuple(reversed(hop.path.vertices))
                if hop_verts[0] != rebuilt[-1]:
                    raise PreconditionError("separator sequence does not chain")
                rebuilt.extend(hop_verts[1:])
                if step.pair.key not in seen_keys:
                    seen_keys.add(step.pair.key)
                    proxy.append(step.pair)
            rebuilt.extend(witness[last + 1:])
            witness = rebuilt
        rid = parent
        lengths.append(Path.from_vertices(g, witness).base)

    return ProxyResult(pair, tuple(proxy), Path.from_vertices(g, witness),
                       tuple(lengths))


def proxy_safe_union(idx: PortalIndex, pair: CanonicalPair):
    """Edge set (normalized pairs) of the safe paths across the proxy set."""
    edges = set()
    for member in find_proxy_pairs(idx, pair).proxy:
        for piece in detour_path(idx, member).safe():
            for u, v in piece.edge_pairs():
                edges.add((u, v) if u < v else (v, u))
    return edges
