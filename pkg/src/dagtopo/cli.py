"""``dagtopo`` command line: build, inspect and measure typed graphs.

Exit codes: 0 success, 1 usage error, 2 input/format error, 3 domain error.
Graph arguments accept a ``.dtp`` binary file or a directory holding
``nodes.txt`` / ``edges.txt`` (optionally gzipped).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__, generators, io_formats, layers, metrics_cc, metrics_degree, metrics_paths, stats_fit
from ._parallel import THREADS_ENV, resolve_threads
from .errors import DagTopoError
from .graph_core import DEFAULT_ALLOWED, NodeType, build, from_arrays
from .manifest import RunManifest
from .plotting import parse_scales

log = logging.getLogger("dagtopo")

NODE_ROWS = {
    NodeType.ORIGIN: "origins (ori)",
    NodeType.SNAPSHOT: "snapshots (snp)",
    NodeType.RELEASE: "releases (rel)",
    NodeType.COMMIT: "commits (cmt)",
    NodeType.DIRECTORY: "directories (dir)",
    NodeType.CONTENT: "files (cnt)",
}
EDGE_ROWS = [
    (NodeType.ORIGIN, NodeType.SNAPSHOT),
    (NodeType.SNAPSHOT, NodeType.RELEASE),
    (NodeType.SNAPSHOT, NodeType.COMMIT),
    (NodeType.RELEASE, NodeType.COMMIT),
    (NodeType.COMMIT, NodeType.COMMIT),
    (NodeType.COMMIT, NodeType.DIRECTORY),
    (NodeType.DIRECTORY, NodeType.DIRECTORY),
    (NodeType.DIRECTORY, NodeType.CONTENT),
]
assert set(EDGE_ROWS) == DEFAULT_ALLOWED


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def human(n: int) -> str:
    for unit, scale in (("B", 10**9), ("M", 10**6), ("K", 10**3)):
        if n >= scale:
            value = n / scale
            return f"{value:.1f} {unit}" if value < 10 else f"{value:.0f} {unit}"
    return str(n)


def find_dataset(directory: Path):
    found = []
    for stem in ("nodes", "edges"):
        for suffix in (".txt", ".txt.gz", ".csv", ".csv.gz"):
            p = directory / f"{stem}{suffix}"
            if p.exists():
                found.append(p)
                break
        else:
            raise UsageError(f"{directory}: no {stem}.txt[.gz] found")
    return found


def load_graph(path, args, manifest=None):
    path = Path(path)
    if path.is_dir():
        nodes_path, edges_path = find_dataset(path)
        if manifest is not None:
            manifest.add_input(nodes_path)
            manifest.add_input(edges_path)
        nodes, edges = io_formats.parse_dataset(nodes_path, edges_path)
        g = build(nodes, edges, validation=getattr(args, "validation", "strict"))
    else:
        if manifest is not None:
            manifest.add_input(path)
        g = io_formats.load(path)
    spec = getattr(args, "layer", None), getattr(args, "types", None)
    if spec != (None, None):
        g, _ = layers.induce(g, layers.layer_spec(*spec))
    return g


def _manifest(args, name):
    params = {k: v for k, v in vars(args).items() if k != "func"}
    params = {k: str(v) if isinstance(v, Path) else v for k, v in params.items()}
    params["threads"] = resolve_threads(getattr(args, "threads", None))
    return RunManifest(command=name, parameters=params)


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _emit_hist(h, out, stem, manifest, args, xlabel="value"):
    manifest.add_output(stats_fit.emit(h, out / f"{stem}.csv"))
    if getattr(args, "plot", False):
        xs, ys = parse_scales(args.scale)
        manifest.add_output(stats_fit.emit(h, out / f"{stem}.svg", "svg", xscale=xs, yscale=ys, title=stem, xlabel=xlabel))


def cmd_build(args):
    m = _manifest(args, "build")
    m.add_input(args.nodes)
    m.add_input(args.edges)
    nodes, edges = io_formats.parse_dataset(args.nodes, args.edges)
    g = build(nodes, edges, validation=args.validation)
    io_formats.save(g, args.out)
    m.add_output(args.out)
    m.add_output(io_formats.sidecar_path(args.out))
    m.parameters["build_stats"] = {
        "self_loops_dropped": g.stats.self_loops_dropped,
        "duplicates_collapsed": g.stats.duplicates_collapsed,
        "rule_violations": {f"{s.abbrev}->{d.abbrev}": c for (s, d), c in g.stats.rule_violations.items()},
    }
    m.finish(str(args.out) + ".manifest.json")
    print(f"built {g.node_count} nodes, {g.edge_count} edges -> {args.out}")


def stats_rows(g):
    tc = g.type_counts()
    ec = g.edge_type_counts()
    node_rows = [(NODE_ROWS[t], tc[t]) for t in NodeType]
    edge_rows = [(f"{s.abbrev}->{d.abbrev}", ec.get((s, d), 0)) for s, d in EDGE_ROWS]
    edge_rows += [(f"{s.abbrev}->{d.abbrev}", c) for (s, d), c in sorted(ec.items()) if (s, d) not in DEFAULT_ALLOWED]
    return node_rows, edge_rows


def cmd_stats(args):
    m = _manifest(args, "stats")
    g = load_graph(args.graph, args, m)
    node_rows, edge_rows = stats_rows(g)
    fmt = human if args.human else str
    lines = ["Nodes"]
    lines += [f"{label:<18}{fmt(c):>14}" for label, c in node_rows]
    lines.append(f"{'total':<18}{fmt(g.node_count):>14}")
    lines.append("Edges")
    lines += [f"{label:<18}{fmt(c):>14}" for label, c in edge_rows]
    lines.append(f"{'total':<18}{fmt(g.edge_count):>14}")
    print("\n".join(lines))
    if args.out:
        stats_fit.write_json(
            {"nodes": dict(node_rows), "edges": dict(edge_rows), "node_count": g.node_count, "edge_count": g.edge_count},
            args.out,
        )
        m.add_output(args.out)
        m.finish(str(args.out) + ".manifest.json")


def cmd_layer(args):
    if args.layer is None and args.types is None:
        raise UsageError("layer needs --layer or --types")
    m = _manifest(args, "layer")
    g = load_graph(args.graph, args, m)
    io_formats.save(g, args.out)
    m.add_output(args.out)
    m.finish(str(args.out) + ".manifest.json")
    print(f"layer: {g.node_count} nodes, {g.edge_count} edges -> {args.out}")


def cmd_degrees(args):
    m = _manifest(args, "degrees")
    g = load_graph(args.graph, args, m)
    out = _outdir(args)
    directions = ["in", "out"] if args.direction == "both" else [args.direction]
    summary = {}
    for direction in directions:
        rep = metrics_degree.degrees(g, direction)
        stem = f"{direction}degree"
        _emit_hist(rep.histogram, out, stem, m, args, xlabel=stem)
        for t, h in rep.per_type.items():
            m.add_output(stats_fit.emit(h, out / f"{stem}_{t.abbrev}.csv"))
        summary[direction] = {"min": rep.minimum, "max": rep.maximum, "mean": rep.mean}
    stats_fit.write_json(summary, out / "degrees.json")
    m.add_output(out / "degrees.json")
    m.finish(out / "degrees.manifest.json")


def cmd_clustering(args):
    m = _manifest(args, "clustering")
    g = load_graph(args.graph, args, m)
    out = _outdir(args)
    rep = metrics_degree.local_clustering(g, threads=args.threads)
    _emit_hist(rep.histogram, out, "clustering", m, args, xlabel="edges among neighbors")
    m.finish(out / "clustering.manifest.json")


def cmd_cc(args):
    m = _manifest(args, "cc")
    g = load_graph(args.graph, args, m)
    out = _outdir(args)
    rep = metrics_cc.connected_components(g)
    _emit_hist(rep.size_histogram, out, "cc_sizes", m, args, xlabel="component size")
    weighted = metrics_cc.origin_weighted_size_distribution(rep, args.require_commit, g)
    m.add_output(stats_fit.emit(weighted, out / "cc_origin_weighted.csv"))
    stats_fit.write_json(metrics_cc.summary(rep), out / "cc_summary.json")
    m.add_output(out / "cc_summary.json")
    if args.membership:
        metrics_cc.write_membership_csv(rep, out / "cc_membership.csv")
        m.add_output(out / "cc_membership.csv")
    if args.cumulative:
        m.add_output(write_cumulative(g, out, args.require_commit))
    m.finish(out / "cc.manifest.json")
    s = metrics_cc.summary(rep)
    print(
        f"components={s['component_count']} largest={s['largest_size']} "
        f"isolated_origins={s['isolated_origin_count']}"
    )


def write_cumulative(g, out: Path, require_commit: bool) -> Path:
    """Per cumulative type stage: CC summary plus KS distance of the
    origin-weighted size distribution to the previous stage."""
    path = out / "cc_stages.csv"
    prev = None
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("stage,nodes,edges,components,largest_size,isolated_origins,ks_to_previous\n")
        for spec in layers.cumulative_specs():
            sub, _ = layers.induce(g, spec)
            rep = metrics_cc.connected_components(sub)
            weighted = metrics_cc.origin_weighted_size_distribution(rep, require_commit, sub)
            ks = ""
            if prev is not None and prev.total and weighted.total:
                ks = repr(stats_fit.ks_distance(prev, weighted).statistic)
            stats_fit.emit(weighted, out / f"cc_stage_{spec.name.replace('+', '_')}.csv")
            fh.write(
                f"{spec.name},{sub.node_count},{sub.edge_count},{rep.component_count},"
                f"{rep.largest_size},{rep.isolated_origin_count},{ks}\n"
            )
            prev = weighted
    return path


def cmd_paths(args):
    m = _manifest(args, "paths")
    g = load_graph(args.graph, args, m)
    out = _outdir(args)
    sample = None
    if args.sample_roots is not None:
        if args.seed is None:
            raise UsageError("--sample-roots requires --seed")
        sample = (args.sample_roots, args.seed)
    rep = metrics_paths.root_leaf_path_lengths(g, sample=sample, threads=args.threads)
    _emit_hist(rep.histogram, out, "path_lengths", m, args, xlabel="path length")
    metrics_paths.write_root_csv(rep, out / "path_roots.csv")
    m.add_output(out / "path_roots.csv")
    info = {
        "root_count": rep.root_count,
        "leaf_count": rep.leaf_count,
        "roots_processed": len(rep.roots),
        "sampled": rep.sampled,
        "sample_seed": rep.sample_seed,
        "degenerate": rep.degenerate,
        "pairs": rep.histogram.total,
    }
    stats_fit.write_json(info, out / "paths.json")
    m.add_output(out / "paths.json")
    m.finish(out / "paths.manifest.json")
    print(" ".join(f"{v}:{c}" for v, c in rep.histogram.items()))


def cmd_fit(args):
    m = _manifest(args, "fit")
    m.add_input(args.histogram)
    h = stats_fit.read_histogram_csv(args.histogram)
    sweep = stats_fit.alpha_sweep(h, grid=args.grid)
    out = _outdir(args)
    m.add_output(stats_fit.emit(sweep, out / "alpha_sweep.csv"))
    stats_fit.write_json({"decade_amplitude": stats_fit.decade_amplitude(h), "probes": len(sweep)}, out / "fit.json")
    m.add_output(out / "fit.json")
    if args.plot:
        xs, ys = parse_scales(args.scale)
        m.add_output(stats_fit.emit(sweep, out / "alpha_sweep.svg", "svg", xscale=xs, yscale=ys))
    m.finish(out / "fit.manifest.json")


def cmd_ks(args):
    m = _manifest(args, "ks")
    m.add_input(args.a)
    m.add_input(args.b)
    res = stats_fit.ks_distance(stats_fit.read_histogram_csv(args.a), stats_fit.read_histogram_csv(args.b))
    print(f"D={res.statistic!r} support={res.support_size}")
    if args.out:
        out = _outdir(args)
        m.add_output(stats_fit.emit(res, out / "ks.csv"))
        m.finish(out / "ks.manifest.json")


def cmd_plot(args):
    m = _manifest(args, "plot")
    m.add_input(args.csv)
    xs, ys = parse_scales(args.scale)
    if args.kind == "sweep":
        import csv

        with open(args.csv, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        sweep = stats_fit.AlphaSweep(
            tuple(
                stats_fit.AlphaRecord(int(r["dmin"]), float(r["alpha"]) if r["alpha"] else None, int(r["ntail"]))
                for r in rows
            )
        )
        stats_fit.emit(sweep, args.out, "svg", xscale=xs, yscale=ys)
    else:
        stats_fit.emit(stats_fit.read_histogram_csv(args.csv), args.out, "svg", xscale=xs, yscale=ys)
    m.add_output(args.out)
    m.finish(str(args.out) + ".manifest.json")


def cmd_gen(args):
    m = _manifest(args, "gen")
    kind = args.kind
    if kind == "chain":
        arrays = generators.chain(args.n, NodeType.parse(args.type))
    elif kind == "dag":
        arrays = generators.random_dag(args.n, args.edges if args.edges is not None else 2 * args.n, args.seed, NodeType.parse(args.type))
    elif kind == "layered":
        arrays = generators.layered(args.n, args.edges if args.edges is not None else 10 * args.n, args.seed)
    else:
        half = max(args.n // 2, 1)
        arrays = generators.powerlaw_graph(half, args.n - half, args.alpha, args.seed)
    g = from_arrays(*arrays, validation="strict", labels=generators.synthetic_labels(arrays[0], args.seed))
    out = Path(args.out)
    if args.format == "binary":
        io_formats.save(g, out)
        m.add_output(out)
        m.finish(str(out) + ".manifest.json")
    else:
        out.mkdir(parents=True, exist_ok=True)
        io_formats.write_dataset(g, out / "nodes.txt", out / "edges.txt")
        m.add_output(out / "nodes.txt")
        m.add_output(out / "edges.txt")
        m.finish(out / "gen.manifest.json")
    print(f"generated {kind}: {g.node_count} nodes, {g.edge_count} edges -> {out}")


def _add_layer_flags(p):
    p.add_argument("--layer", choices=sorted(layers.LAYERS), help="restrict to a built-in layer")
    p.add_argument("--types", help="restrict to an ad-hoc comma separated type set, e.g. dir,cnt")


def _add_plot_flags(p, default_scale="log-log"):
    p.add_argument("--plot", action="store_true", help="also render an SVG figure")
    p.add_argument("--scale", default=default_scale, help="axis scales, e.g. log-log, lin-log (default %(default)s)")


def make_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=None, help=f"worker cap (default: ${THREADS_ENV} or all cores)")
    common.add_argument("--validation", choices=["strict", "lenient"], default="strict")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="dagtopo", description="Build, inspect and measure typed version-control graphs.")
    parser.add_argument("--version", action="version", version=f"dagtopo {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("build", parents=[common], help="text nodes/edges -> binary graph")
    p.add_argument("--nodes", required=True, type=Path)
    p.add_argument("--edges", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("stats", parents=[common], help="node/edge counts per type")
    p.add_argument("graph", type=Path)
    p.add_argument("--out", type=Path, help="also write JSON")
    p.add_argument("--human", action="store_true", help="print counts as 85 M, 1.1 B, ...")
    _add_layer_flags(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("layer", parents=[common], help="extract a layer subgraph")
    p.add_argument("graph", type=Path)
    p.add_argument("--out", required=True, type=Path)
    _add_layer_flags(p)
    p.set_defaults(func=cmd_layer)

    for name, func, helptext in (
        ("degrees", cmd_degrees, "in/out degree distributions"),
        ("clustering", cmd_clustering, "local clustering distribution"),
        ("cc", cmd_cc, "connected components"),
        ("paths", cmd_paths, "root-to-leaf shortest path lengths"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("graph", type=Path)
        p.add_argument("--out", required=True, type=Path, help="report directory")
        _add_layer_flags(p)
        _add_plot_flags(p)
        p.set_defaults(func=func)
        if name == "degrees":
            p.add_argument("--direction", choices=["in", "out", "both"], default="both")
        elif name == "cc":
            p.add_argument("--require-commit", action="store_true", help="weighted sizes only over components with a commit")
            p.add_argument("--membership", action="store_true", help="dump node_id,component_id CSV")
            p.add_argument("--cumulative", action="store_true", help="per cumulative type stage table with KS distances")
        elif name == "paths":
            p.add_argument("--sample-roots", type=int, default=None, metavar="N")
            p.add_argument("--seed", type=int, default=None, metavar="S")

    p = sub.add_parser("fit", parents=[common], help="tail exponent sweep over a histogram CSV")
    p.add_argument("histogram", type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--grid", choices=["all", "log"], default="log")
    _add_plot_flags(p, default_scale="log-lin")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("ks", parents=[common], help="KS distance between two histogram CSVs")
    p.add_argument("a", type=Path)
    p.add_argument("b", type=Path)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_ks)

    p = sub.add_parser("plot", parents=[common], help="render a histogram or sweep CSV as SVG")
    p.add_argument("csv", type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--kind", choices=["distribution", "sweep"], default="distribution")
    p.add_argument("--scale", default="log-log")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("gen", parents=[common], help="synthetic dataset")
    p.add_argument("--kind", choices=["chain", "dag", "layered", "powerlaw"], required=True)
    p.add_argument("--n", type=int, required=True, help="node count")
    p.add_argument("--edges", type=int, default=None, help="edge draws (dag, layered)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--type", default="cmt", help="node type for chain/dag (default cmt)")
    p.add_argument("--alpha", type=float, default=2.5, help="power-law exponent (powerlaw)")
    p.add_argument("--format", choices=["text", "binary"], default="text")
    p.add_argument("--out", required=True, type=Path)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None):
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.threads is not None and args.threads < 1:
            raise UsageError("--threads must be >= 1")
        args.func(args)
    except UsageError as exc:
        print(f"dagtopo: error: {exc}", file=sys.stderr)
        return 1
    except DagTopoError as exc:
        print(f"dagtopo: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"dagtopo: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"dagtopo: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
