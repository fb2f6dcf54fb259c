"""Desk-scale timing run: ``python -m dagtopo.bench --nodes 10000000 --edges 100000000``.

Prints one JSON object with phase timings, edge counts and peak RSS. Run in
its own process so the memory figure is not inflated by earlier work.
"""

import argparse
import gc
import json
import os
import tempfile
import time

import numpy as np

from . import generators, io_formats, metrics_cc, metrics_degree
from .graph_core import from_arrays
from .manifest import peak_rss_bytes


def run(n_nodes, n_edges, seed=0, workdir=None):
    result = {"nodes_requested": n_nodes, "edges_requested": n_edges, "seed": seed}

    t = time.perf_counter()
    arrays = generators.layered(n_nodes, n_edges, seed)
    result["generate_s"] = time.perf_counter() - t

    t = time.perf_counter()
    g = from_arrays(*arrays, validation="strict")
    result["build_s"] = time.perf_counter() - t
    del arrays
    gc.collect()
    result["build_peak_rss_bytes"] = peak_rss_bytes()
    result["node_count"] = g.node_count
    result["edge_count"] = g.edge_count
    result["duplicates_collapsed"] = g.stats.duplicates_collapsed

    t = time.perf_counter()
    metrics_degree.degrees(g, "in")
    metrics_degree.degrees(g, "out")
    result["degree_s"] = time.perf_counter() - t

    t = time.perf_counter()
    cc = metrics_cc.connected_components(g)
    result["cc_s"] = time.perf_counter() - t
    result["components"] = cc.component_count
    result["largest_cc"] = cc.largest_size
    del cc

    with tempfile.TemporaryDirectory(dir=workdir) as tmp:
        path = os.path.join(tmp, "bench.dtp")
        t = time.perf_counter()
        io_formats.save(g, path)
        result["save_s"] = time.perf_counter() - t
        result["file_bytes"] = os.path.getsize(path)
        t = time.perf_counter()
        back = io_formats.load(path)
        result["load_s"] = time.perf_counter() - t
        result["roundtrip_equal"] = bool(back.structurally_equal(g))
    result["peak_rss_bytes"] = peak_rss_bytes()
    return result


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--nodes", type=int, default=10**7)
    p.add_argument("--edges", type=int, default=10**8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workdir", default=None)
    args = p.parse_args(argv)
    print(json.dumps(run(args.nodes, args.edges, args.seed, args.workdir), sort_keys=True))


if __name__ == "__main__":
    main()
