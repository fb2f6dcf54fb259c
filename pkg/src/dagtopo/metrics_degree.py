"""Indegree, outdegree and unnormalized local clustering distributions."""

from __future__ import annotations

from dataclasses import dataclass, field

import numba
import numpy as np

from ._parallel import map_ranges
from .graph_core import NodeType, TypedGraph, undirected_adjacency
from .stats_fit import Histogram


@dataclass
class DegreeReport:
    direction: str
    histogram: Histogram
    per_type: dict = field(default_factory=dict)
    minimum: int | None = None
    maximum: int | None = None
    mean: float | None = None
    values: np.ndarray | None = field(default=None, repr=False)


@dataclass
class ClusteringReport:
    histogram: Histogram
    values: np.ndarray = field(repr=False)


def degrees(g: TypedGraph, direction="out") -> DegreeReport:
    if direction not in ("in", "out"):
        raise ValueError(f"direction must be 'in' or 'out', got {direction!r}")
    deg = g.indegrees() if direction == "in" else g.outdegrees()
    per_type = {}
    for t in NodeType:
        sel = deg[g.types == t]
        if sel.size:
            per_type[t] = Histogram.from_samples(sel)
    if deg.size == 0:
        return DegreeReport(direction, Histogram(), per_type, values=deg)
    return DegreeReport(
        direction,
        Histogram.from_samples(deg),
        per_type,
        minimum=int(deg.min()),
        maximum=int(deg.max()),
        mean=float(deg.mean()),
        values=deg,
    )


@numba.njit(cache=True, nogil=True)
def _clustering_range(uo, ut, lo, hi, out):
    # for v, count pairs x < y in N(v) with y in N(x): walk N(v) past x and
    # merge against N(x) from its first entry above x
    for v in range(lo, hi):
        a = uo[v]
        b = uo[v + 1]
        total = 0
        for i in range(a, b):
            x = ut[i]
            xs = uo[x]
            xe = uo[x + 1]
            q = xs + np.searchsorted(ut[xs:xe], x, side="right")
            p = i + 1
            while p < b and q < xe:
                yv = ut[p]
                yx = ut[q]
                if yv == yx:
                    total += 1
                    p += 1
                    q += 1
                elif yv < yx:
                    p += 1
                else:
                    q += 1
        out[v] = total
    return out


def local_clustering(g: TypedGraph, threads=None) -> ClusteringReport:
    """Per node, the number of undirected edges among its undirected neighbors."""
    und = undirected_adjacency(g)
    out = np.zeros(g.node_count, dtype=np.int64)
    map_ranges(lambda lo, hi: _clustering_range(und.offsets, und.targets, lo, hi, out), g.node_count, threads)
    return ClusteringReport(Histogram.from_samples(out), out)
