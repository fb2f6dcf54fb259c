"""Shortest root-to-leaf path lengths by per-root BFS (unit edge weights)."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

import numba
import numpy as np

from ._parallel import map_ranges
from .graph_core import TypedGraph
from .stats_fit import Histogram, merge_all

log = logging.getLogger(__name__)


@dataclass
class PathLengthReport:
    histogram: Histogram
    root_count: int
    leaf_count: int
    sampled: bool = False
    sample_seed: Optional[int] = None
    degenerate: bool = False
    roots: np.ndarray = field(default=None, repr=False)
    reached_leaves: np.ndarray = field(default=None, repr=False)
    mean_length: np.ndarray = field(default=None, repr=False)


@numba.njit(cache=True, nogil=True)
def _bfs_from_roots(fo, ft, roots):
    n = fo.size - 1
    # stamp[v] == k marks v as seen by the k-th root; avoids clearing per root
    stamp = np.full(n, -1, dtype=np.int64)
    dist = np.empty(n, dtype=np.int32)
    queue = np.empty(n, dtype=np.int32)
    hist = np.zeros(n, dtype=np.int64)
    reached = np.zeros(roots.size, dtype=np.int64)
    dsum = np.zeros(roots.size, dtype=np.int64)
    top = 0
    for k in range(roots.size):
        r = roots[k]
        stamp[r] = k
        dist[r] = 0
        queue[0] = r
        head = 0
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[u]
            a = fo[u]
            b = fo[u + 1]
            if a == b:
                if u != r:
                    hist[du] += 1
                    reached[k] += 1
                    dsum[k] += du
                    if du > top:
                        top = du
                continue
            for j in range(a, b):
                v = ft[j]
                if stamp[v] != k:
                    stamp[v] = k
                    dist[v] = du + 1
                    queue[tail] = v
                    tail += 1
    return hist[: top + 1].copy(), reached, dsum


def select_roots(g: TypedGraph, sample=None) -> tuple[np.ndarray, bool, Optional[int]]:
    """Indegree-0 nodes, optionally a seeded uniform subset without replacement."""
    roots = np.flatnonzero(g.indegrees() == 0).astype(np.int32)
    if sample is None:
        return roots, False, None
    count, seed = sample
    if count < 0:
        raise ValueError("sample count must be non-negative")
    rng = np.random.default_rng(seed)
    picked = rng.choice(roots, size=min(count, len(roots)), replace=False) if len(roots) else roots
    return np.sort(picked).astype(np.int32), True, seed


def root_leaf_path_lengths(g: TypedGraph, sample=None, threads=None) -> PathLengthReport:
    """One histogram sample per reachable (root, leaf) pair at their BFS distance.

    ``sample`` is ``(count, seed)``; only roots are sampled, every leaf
    reachable from a chosen root is still counted.
    """
    roots, sampled, seed = select_roots(g, sample)
    leaf_count = int(np.count_nonzero(g.outdegrees() == 0))
    root_count = int(np.count_nonzero(g.indegrees() == 0))
    degenerate = root_count == 0 or leaf_count == 0
    if degenerate and g.node_count:
        log.warning("graph has %d root(s) and %d leaf node(s); path histogram is empty", root_count, leaf_count)

    fo, ft = g.fwd.offsets, g.fwd.targets
    parts = map_ranges(lambda lo, hi: _bfs_from_roots(fo, ft, roots[lo:hi]), len(roots), threads)
    hist = merge_all(Histogram.from_dense(h) for h, _, _ in parts)
    reached = np.concatenate([p[1] for p in parts]) if parts else np.zeros(0, np.int64)
    dsum = np.concatenate([p[2] for p in parts]) if parts else np.zeros(0, np.int64)
    with np.errstate(invalid="ignore", divide="ignore"):
        mean = np.where(reached > 0, dsum / np.maximum(reached, 1), np.nan)
    return PathLengthReport(
        histogram=hist,
        root_count=root_count,
        leaf_count=leaf_count,
        sampled=sampled,
        sample_seed=seed,
        degenerate=degenerate,
        roots=roots,
        reached_leaves=reached,
        mean_length=mean,
    )


def write_root_csv(report: PathLengthReport, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("root_id,reached_leaves,mean_length\n")
        for r, c, m in zip(report.roots.tolist(), report.reached_leaves.tolist(), report.mean_length.tolist()):
            fh.write(f"{r},{c},{'' if c == 0 else repr(m)}\n")
