"""Command-line entry points.

Subcommands: gen-grid, gen-badgrid, build-dam, build-dam-fast, build-emulator,
build-overlay, verify, bench. All outputs land in --out as text files; runs
are deterministic for a fixed config and seed.
"""

from __future__ import annotations

import argparse
import csv
import io
import random
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path as FsPath
from typing import List, Optional, Sequence

from .config import C_SCALE_DEFAULT, KAPPA_DEFAULT
from .dam import BuildContext, Dam, build_dam, build_dam_fast, build_emulator, \
    build_overlay_baseline
from .errors import DamkitError, InputError
from .fileio import parse_edgelist, parse_terminals, write_edgelist, \
    write_minor_files, write_terminals, format_weight
from .generators import generate_badgrid, generate_grid
from .verify import brute_force_distances, measure_stretch, verify_minor


@dataclass
class RunConfig:
    subcommand: str
    graph_path: Optional[str] = None
    terminals_path: Optional[str] = None
    out_dir: str = "."
    epsilon: Fraction = Fraction(1, 2)
    c_scale: Fraction = C_SCALE_DEFAULT
    r: Optional[int] = None
    seed: int = 0
    width: int = 8
    height: int = 8
    weight_mode: str = "unit"
    k: int = 4
    sizes: Sequence[int] = (8, 12, 16)
    num_terminals: int = 0
    fmt: str = "edgelist"


def _epsilon_arg(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"epsilon {text!r} is not a number") from None
    if not (0 < value < 1):
        raise argparse.ArgumentTypeError("epsilon must lie strictly between 0 and 1")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="damkit",
                                     description="distance-approximating minors toolkit")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, graph=True):
        if graph:
            p.add_argument("--graph", required=True, help="edge-list file")
            p.add_argument("--terminals", required=True, help="terminal id file")
            p.add_argument("--format", default="edgelist", choices=["edgelist"])
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("gen-grid", help="generate a grid instance")
    p.add_argument("--width", type=_positive_int, required=True)
    p.add_argument("--height", type=_positive_int, required=True)
    p.add_argument("--weight-mode", default="unit", choices=["unit", "random"])
    p.add_argument("--num-terminals", type=int, default=0,
                   help="also emit this many random terminals")
    common(p, graph=False)

    p = sub.add_parser("gen-badgrid", help="generate the adversarial long-grid family")
    p.add_argument("--k", type=_positive_int, required=True)
    common(p, graph=False)

    for name in ("build-dam", "build-dam-fast", "build-emulator", "build-overlay"):
        p = sub.add_parser(name)
        common(p)
        p.add_argument("--epsilon", type=_epsilon_arg, default="0.5")
        p.add_argument("--c-scale", type=Fraction, default=C_SCALE_DEFAULT)
        p.add_argument("--hierarchy", default=None,
                       help="externally supplied separator hierarchy file "
                            "(validated; connected graphs only)")
        if name == "build-dam-fast":
            p.add_argument("--r", type=_positive_int, default=None)

    p = sub.add_parser("verify", help="check a previously built minor")
    common(p)
    p.add_argument("--dam", required=True, help="directory holding minor.* files")

    p = sub.add_parser("bench", help="grid benchmark across builders")
    common(p, graph=False)
    p.add_argument("--sizes", default="8,12,16",
                   help="comma-separated square grid sides")
    p.add_argument("--epsilon", type=_epsilon_arg, default="0.5")
    p.add_argument("--c-scale", type=Fraction, default=C_SCALE_DEFAULT)
    return parser


def _load_instance(args):
    g = parse_edgelist(FsPath(args.graph).read_text())
    terminals = parse_terminals(FsPath(args.terminals).read_text(), g.n)
    return g, terminals


def _context_with_hierarchy(g, hierarchy_path: Optional[str]) -> BuildContext:
    ctx = BuildContext(g)
    if hierarchy_path:
        from .hierarchy import load_hierarchy
        if len(ctx.components) != 1:
            raise InputError("--hierarchy requires a connected graph")
        local, _, _ = ctx.local_graph(0)
        ctx.use_hierarchy(0, load_hierarchy(local, FsPath(hierarchy_path).read_text()))
    return ctx


def _emit_dam(out: FsPath, dam: Dam, g, terminals):
    files = write_minor_files(dam.minor_vertices, dam.minor_edges,
                              dam.certificate, dam.scale)
    for name, text in files.items():
        (out / name).write_text(text)
    oracle = brute_force_distances(g, terminals)
    report = measure_stretch(dam.terminal_distances(), oracle, size_metrics={
        "minor_vertices": len(dam.minor_vertices),
        "minor_edges": len(dam.minor_edges),
        "overlay_vertices": len(dam.m_vertices),
        "overlay_edges": len(dam.m_edges),
    })
    (out / "stretch.csv").write_text(report.to_csv())
    (out / "report.txt").write_text(report.to_text())
    return report


def run(config: argparse.Namespace) -> int:
    out = FsPath(config.out)
    out.mkdir(parents=True, exist_ok=True)
    cmd = config.subcommand

    if cmd == "gen-grid":
        g = generate_grid(config.width, config.height, config.weight_mode, config.seed)
        (out / "graph.edgelist").write_text(write_edgelist(g))
        if config.num_terminals:
            rng = random.Random(config.seed)
            terms = sorted(rng.sample(range(g.n), min(config.num_terminals, g.n)))
            (out / "terminals.txt").write_text(write_terminals(terms))
        return 0

    if cmd == "gen-badgrid":
        from .generators import badgrid_hierarchy
        from .hierarchy import dump_hierarchy
        from .graph import perturb
        g, terms = generate_badgrid(config.k)
        (out / "graph.edgelist").write_text(write_edgelist(g))
        (out / "terminals.txt").write_text(write_terminals(terms))
        (out / "hierarchy.txt").write_text(
            dump_hierarchy(badgrid_hierarchy(perturb(g), config.k)))
        return 0

    if cmd in ("build-dam", "build-dam-fast", "build-overlay"):
        g, terminals = _load_instance(config)
        ctx = _context_with_hierarchy(g, getattr(config, "hierarchy", None))
        if cmd == "build-dam":
            dam = build_dam(g, terminals, config.epsilon, c_scale=config.c_scale,
                            context=ctx)
        elif cmd == "build-dam-fast":
            dam = build_dam_fast(g, terminals, config.epsilon, r=config.r,
                                 c_scale=config.c_scale)
        else:
            dam = build_overlay_baseline(g, terminals, config.epsilon,
                                         c_scale=config.c_scale, context=ctx)
        report = _emit_dam(out, dam, g, terminals)
        problems = verify_minor(dam, g)
        (out / "minor_check.txt").write_text(problems.to_text())
        return 1 if (report.hard_fail or not problems.ok) else 0

    if cmd == "build-emulator":
        g, terminals = _load_instance(config)
        ctx = _context_with_hierarchy(g, getattr(config, "hierarchy", None))
        emu = build_emulator(g, terminals, config.epsilon, c_scale=config.c_scale,
                             context=ctx)
        lines = [f"{len(emu.vertices)} {len(emu.edges)}"]
        remap = {v: i for i, v in enumerate(emu.vertices)}
        for (u, v, w) in emu.edges:
            lines.append(f"{remap[u]} {remap[v]} {format_weight(w, emu.scale)}")
        (out / "emulator.edges").write_text("\n".join(lines) + "\n")
        (out / "emulator.map").write_text(
            "".join(f"{i} {v}\n" for v, i in sorted(remap.items(), key=lambda kv: kv[1])))
        oracle = brute_force_distances(g, terminals)
        report = measure_stretch(emu.terminal_distances(), oracle, size_metrics={
            "emulator_vertices": len(emu.vertices),
            "emulator_edges": len(emu.edges),
        })
        (out / "stretch.csv").write_text(report.to_csv())
        (out / "report.txt").write_text(report.to_text())
        return 1 if report.hard_fail else 0

    if cmd == "verify":
        from .fileio import parse_minor_files
        g, terminals = _load_instance(config)
        dam_dir = FsPath(config.dam)
        vertices, edges, certificate = parse_minor_files(
            (dam_dir / "minor.edges").read_text(),
            (dam_dir / "minor.map").read_text(),
            (dam_dir / "minor.cert").read_text())
        m_edges = set()
        for chain in certificate.values():
            for a, b in zip(chain, chain[1:]):
                m_edges.add((a, b) if a < b else (b, a))
        int_edges = tuple(sorted(
            (u, v, int(w * g.scale)) for (u, v, w) in edges))
        dam = Dam(terminals=tuple(terminals),
                  m_vertices=frozenset(v for e in m_edges for v in e) | set(terminals),
                  m_edges=frozenset(m_edges),
                  minor_vertices=tuple(vertices),
                  minor_edges=int_edges,
                  certificate=certificate,
                  eps0=Fraction(1, 2), eps=Fraction(0), scale=g.scale)
        problems = verify_minor(dam, g)
        oracle = brute_force_distances(g, terminals)
        report = measure_stretch(dam.terminal_distances(), oracle)
        (out / "minor_check.txt").write_text(problems.to_text())
        (out / "report.txt").write_text(report.to_text())
        return 1 if (not problems.ok or report.hard_fail) else 0

    if cmd == "bench":
        sizes = [int(s) for s in str(config.sizes).split(",") if s]
        rows = []
        for side in sizes:
            g = generate_grid(side, side, "unit")
            rng = random.Random(config.seed + side)
            terminals = sorted(rng.sample(range(g.n), min(8, g.n)))
            oracle = brute_force_distances(g, terminals)
            ctx = BuildContext(g)
            builders = [
                ("dam", lambda: build_dam(g, terminals, config.epsilon,
                                          c_scale=config.c_scale, context=ctx)),
                ("dam-fast", lambda: build_dam_fast(g, terminals, config.epsilon,
                                                    c_scale=config.c_scale)),
                ("overlay", lambda: build_overlay_baseline(
                    g, terminals, config.epsilon, c_scale=config.c_scale, context=ctx)),
                ("emulator", lambda: build_emulator(g, terminals, config.epsilon,
                                                    c_scale=config.c_scale, context=ctx)),
            ]
            for name, fn in builders:
                t0 = time.perf_counter()
                sketch = fn()
                elapsed = time.perf_counter() - t0
                report = measure_stretch(sketch.terminal_distances(), oracle)
                size = len(sketch.minor_vertices) if isinstance(sketch, Dam) \
                    else len(sketch.vertices)
                rows.append({
                    "instance": f"grid{side}x{side}",
                    "builder": name,
                    "n": g.n,
                    "terminals": len(terminals),
                    "size_vertices": size,
                    "max_stretch": "" if report.max_ratio is None
                    else f"{float(report.max_ratio):.6f}",
                    "wall_seconds": f"{elapsed:.3f}",
                })
        buf = io.StringIO()
        buf.write("# damkit-bench v1\n")
        writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)
        (out / "bench.csv").write_text(buf.getvalue())
        return 0

    raise InputError(f"unknown subcommand {cmd}")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return run(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DamkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
