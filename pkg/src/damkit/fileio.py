"""Text formats: edge lists, terminal lists, minor output files.

Grammar (exact):
  graph:      header line "n m", then m lines "u v w" where u,v are vertex ids
              in 0..n-1 and w is a positive decimal number. Blank lines and
              lines starting with '#' are ignored on input, never written.
              Duplicate edges and self-loops are rejected.
  terminals:  one vertex id per line (same comment/blank rules).
  minor:      three files --
              minor.edges   "u v w" over remapped ids 0..k-1, w an exact decimal
              minor.map     "minor_id original_id"
              minor.cert    "u v : g0 g1 ... gj" mapping each minor edge to the
                            original-vertex chain it contracts (endpoints
                            included, original ids)
Weights serialize as exact decimals of the base component; tiebreaks are never
serialized.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .errors import InputError
from .graph import Graph, normalize_weights

_DECIMAL_RE = re.compile(r"^\d+(\.\d+)?$")


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def parse_decimal(token: str, lineno: int = 0) -> Fraction:
    if not _DECIMAL_RE.match(token):
        raise InputError(f"line {lineno}: weight {token!r} is not a positive decimal")
    return Fraction(token)


def format_weight(base: int, scale: int) -> str:
    """Exact decimal for base/scale; scale must be of the form 2^a * 5^b."""
    q = Fraction(base, scale)
    den = q.denominator
    k = 0
    while den % 2 == 0:
        den //= 2
        k += 1
    b = 0
    while den % 5 == 0:
        den //= 5
        b += 1
    if den != 1:
        raise InputError(f"weight {base}/{scale} has no finite decimal form")
    k = max(k, b)
    digits = q.numerator * 10 ** k // q.denominator
    if k == 0:
        return str(digits)
    s = str(digits).rjust(k + 1, "0")
    whole, frac = s[:-k], s[-k:]
    frac = frac.rstrip("0")
    return whole if not frac else f"{whole}.{frac}"


def parse_edgelist(text: str) -> Graph:
    lines = list(_content_lines(text))
    if not lines:
        raise InputError("empty graph file")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 2:
        raise InputError(f"line {lineno}: header must be 'n m'")
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise InputError(f"line {lineno}: header must be two integers") from None
    body = lines[1:]
    if len(body) != m:
        raise InputError(f"expected {m} edge lines, found {len(body)}")
    raw_edges: List[Tuple[int, int, Fraction]] = []
    for lineno, line in body:
        parts = line.split()
        if len(parts) != 3:
            raise InputError(f"line {lineno}: edge line must be 'u v w'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise InputError(f"line {lineno}: endpoints must be integers") from None
        w = parse_decimal(parts[2], lineno)
        if w <= 0:
            raise InputError(f"line {lineno}: weight must be positive")
        raw_edges.append((u, v, w))
    return normalize_weights(n, raw_edges)


def write_edgelist(g: Graph) -> str:
    out = [f"{g.n} {g.m}"]
    for (u, v, w) in g.edges:
        out.append(f"{u} {v} {format_weight(w, g.scale)}")
    return "\n".join(out) + "\n"


def parse_terminals(text: str, n: int) -> List[int]:
    terminals: List[int] = []
    seen = set()
    for lineno, line in _content_lines(text):
        try:
            t = int(line)
        except ValueError:
            raise InputError(f"line {lineno}: terminal must be an integer id") from None
        if not (0 <= t < n):
            raise InputError(f"line {lineno}: terminal {t} outside 0..{n - 1}")
        if t in seen:
            raise InputError(f"line {lineno}: duplicate terminal {t}")
        seen.add(t)
        terminals.append(t)
    return terminals


def write_terminals(terminals: Sequence[int]) -> str:
    return "".join(f"{t}\n" for t in terminals)


# ---------------------------------------------------------------------------
# minor output files

def write_minor_files(minor_vertices: Sequence[int],
                      minor_edges: Sequence[Tuple[int, int, int]],
                      certificate: Dict[Tuple[int, int], Tuple[int, ...]],
                      scale: int) -> Dict[str, str]:
    """Serialize a contracted minor as the three documented files.

    Vertices are remapped to dense ids in sorted original-id order.
    """
    order = sorted(minor_vertices)
    remap = {orig: i for i, orig in enumerate(order)}
    edge_lines = [f"{len(order)} {len(minor_edges)}"]
    cert_lines = []
    for (u, v, w) in sorted(minor_edges):
        mu, mv = remap[u], remap[v]
        edge_lines.append(f"{mu} {mv} {format_weight(w, scale)}")
        chain = certificate[(u, v) if u < v else (v, u)]
        cert_lines.append(f"{mu} {mv} : " + " ".join(str(x) for x in chain))
    map_lines = [f"{i} {orig}" for orig, i in sorted(remap.items(), key=lambda kv: kv[1])]
    return {
        "minor.edges": "\n".join(edge_lines) + "\n",
        "minor.map": "\n".join(map_lines) + "\n" if map_lines else "",
        "minor.cert": "\n".join(cert_lines) + "\n" if cert_lines else "",
    }


def parse_minor_files(edges_text: str, map_text: str, cert_text: str):
    """Inverse of write_minor_files: returns (vertices, edges, certificate)
    in original-vertex ids."""
    orig_of: Dict[int, int] = {}
    for lineno, line in _content_lines(map_text):
        parts = line.split()
        if len(parts) != 2:
            raise InputError(f"minor.map line {lineno}: expected 'minor_id original_id'")
        orig_of[int(parts[0])] = int(parts[1])
    lines = list(_content_lines(edges_text))
    if not lines:
        raise InputError("empty minor.edges file")
    _, header = lines[0]
    k, m = (int(x) for x in header.split())
    if len(orig_of) != k:
        raise InputError("minor.map size disagrees with minor.edges header")
    edges = []
    for lineno, line in lines[1:]:
        parts = line.split()
        if len(parts) != 3:
            raise InputError(f"minor.edges line {lineno}: expected 'u v w'")
        u, v = orig_of[int(parts[0])], orig_of[int(parts[1])]
        edges.append((u, v, parse_decimal(parts[2], lineno)))
    if len(edges) != m:
        raise InputError("minor.edges line count disagrees with header")
    certificate: Dict[Tuple[int, int], Tuple[int, ...]] = {}
    for lineno, line in _content_lines(cert_text):
        head, _, tail = line.partition(":")
        mu, mv = (int(x) for x in head.split())
        chain = tuple(int(x) for x in tail.split())
        u, v = orig_of[mu], orig_of[mv]
        certificate[(u, v) if u < v else (v, u)] = chain
    vertices = sorted(orig_of.values())
    return vertices, edges, certificate
