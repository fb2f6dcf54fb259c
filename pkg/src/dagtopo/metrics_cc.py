"""Weakly connected components and origin-weighted component size statistics."""

from __future__ import annotations

from dataclasses import dataclass, field

import numba
import numpy as np

from .graph_core import NodeType, TypedGraph
from .stats_fit import Histogram


@dataclass
class ComponentReport:
    labels: np.ndarray = field(repr=False)
    sizes: np.ndarray = field(repr=False)
    size_histogram: Histogram
    largest_size: int
    component_count: int
    isolated_origin_count: int
    origin_weight: np.ndarray = field(repr=False)


@numba.njit(cache=True, nogil=True)
def _bfs_components(fo, ft, bo, bt):
    n = fo.size - 1
    visited = np.zeros((n + 7) // 8, dtype=np.uint8)
    comp = np.empty(n, dtype=np.int32)
    queue = np.empty(max(n, 1), dtype=np.int32)
    c = 0
    for seed in range(n):
        if visited[seed >> 3] & (1 << (seed & 7)):
            continue
        visited[seed >> 3] |= 1 << (seed & 7)
        head = 0
        tail = 1
        queue[0] = seed
        while head < tail:
            u = queue[head]
            head += 1
            comp[u] = c
            for side in range(2):
                if side == 0:
                    a = fo[u]
                    b = fo[u + 1]
                else:
                    a = bo[u]
                    b = bo[u + 1]
                for j in range(a, b):
                    v = ft[j] if side == 0 else bt[j]
                    byte = v >> 3
                    bit = np.uint8(1 << (v & 7))
                    if not visited[byte] & bit:
                        visited[byte] |= bit
                        queue[tail] = v
                        tail += 1
        c += 1
    return comp, c


def connected_components(g: TypedGraph) -> ComponentReport:
    """Components of the underlying undirected graph via iterative BFS.

    Seeds are scanned in ascending id order, so component ``k`` is the one
    whose smallest node id is the ``k``-th smallest among component minima.
    """
    comp, count = _bfs_components(g.fwd.offsets, g.fwd.targets, g.bwd.offsets, g.bwd.targets)
    sizes = np.bincount(comp, minlength=count).astype(np.int64)
    is_origin = g.types == NodeType.ORIGIN
    origin_weight = np.bincount(comp[is_origin], minlength=count).astype(np.int64)
    isolated = int(np.count_nonzero(is_origin & (sizes[comp] == 1))) if count else 0
    return ComponentReport(
        labels=comp,
        sizes=sizes,
        size_histogram=Histogram.from_samples(sizes),
        largest_size=int(sizes.max()) if count else 0,
        component_count=int(count),
        isolated_origin_count=isolated,
        origin_weight=origin_weight,
    )


def commit_counts(r: ComponentReport, g: TypedGraph) -> np.ndarray:
    return np.bincount(r.labels[g.types == NodeType.COMMIT], minlength=r.component_count).astype(np.int64)


def origin_weighted_size_distribution(r: ComponentReport, require_commit: bool, g: TypedGraph) -> Histogram:
    """Component size -> summed origin count over components of that size.

    Components without origins carry zero weight and vanish; with
    ``require_commit`` components holding no commit node are dropped too.
    """
    keep = r.origin_weight > 0
    if require_commit:
        keep &= commit_counts(r, g) > 0
    return Histogram.from_arrays(r.sizes[keep], r.origin_weight[keep])


def summary(r: ComponentReport) -> dict:
    return {
        "component_count": r.component_count,
        "largest_size": r.largest_size,
        "isolated_origin_count": r.isolated_origin_count,
        "origin_count": int(r.origin_weight.sum()),
    }


def write_membership_csv(r: ComponentReport, path, chunk=1 << 20):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("node_id,component_id\n")
        n = len(r.labels)
        for lo in range(0, n, chunk):
            hi = min(n, lo + chunk)
            ids = np.arange(lo, hi)
            fh.write("".join(f"{i},{c}\n" for i, c in zip(ids.tolist(), r.labels[lo:hi].tolist())))
