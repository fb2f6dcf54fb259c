"""Seeded synthetic graphs: chains, uniform random DAGs, a layered Merkle-like
generator and a discrete power-law degree sampler.

Every generator returns ``(types, src, dst)`` arrays in dense-id space; use
:func:`to_graph` or :func:`synthetic_labels` to turn them into a graph or a
text dataset.
"""

from __future__ import annotations

import numpy as np
from scipy.special import zeta

from .graph_core import ID_DTYPE, NodeType, TypedGraph, from_arrays

T = NodeType

# relative stratum sizes and edge volumes of the public archive, in millions
LAYERED_NODES = {T.ORIGIN: 85, T.SNAPSHOT: 57, T.RELEASE: 9.9, T.COMMIT: 1100, T.DIRECTORY: 4400, T.CONTENT: 5000}
LAYERED_EDGES = {
    (T.ORIGIN, T.SNAPSHOT): 74,
    (T.SNAPSHOT, T.RELEASE): 10,
    (T.SNAPSHOT, T.COMMIT): 616,
    (T.RELEASE, T.COMMIT): 10,
    (T.COMMIT, T.COMMIT): 1200,
    (T.COMMIT, T.DIRECTORY): 1200,
    (T.DIRECTORY, T.DIRECTORY): 49000,
    (T.DIRECTORY, T.CONTENT): 113000,
}


def chain(n, node_type=T.COMMIT):
    types = np.full(n, int(node_type), dtype=np.uint8)
    ids = np.arange(max(n - 1, 0), dtype=ID_DTYPE)
    return types, ids, ids + 1


def random_dag(n, m, seed, node_type=T.COMMIT):
    """``m`` uniformly drawn forward edges ``u -> v`` with ``u < v`` (before dedup)."""
    rng = np.random.default_rng(seed)
    types = np.full(n, int(node_type), dtype=np.uint8)
    if n < 2:
        return types, np.zeros(0, ID_DTYPE), np.zeros(0, ID_DTYPE)
    a = rng.integers(0, n, size=m)
    b = rng.integers(0, n - 1, size=m)
    b = b + (b >= a)
    return types, np.minimum(a, b).astype(ID_DTYPE), np.maximum(a, b).astype(ID_DTYPE)


def powerlaw_samples(size, alpha, d_min, seed, table_max=10**6):
    """Inverse-CDF draws from ``P(d) = d**-alpha / zeta(alpha, d_min)``, ``d >= d_min``.

    The CDF is tabulated up to ``table_max``; draws beyond it (probability
    about ``table_max**(1 - alpha)``) use the continuous tail approximation.
    """
    if alpha <= 1:
        raise ValueError("alpha must exceed 1")
    rng = np.random.default_rng(seed)
    u = rng.random(size)
    d = np.arange(d_min, d_min + table_max, dtype=np.float64)
    cdf = np.cumsum(d**-alpha) / zeta(alpha, d_min)
    idx = np.searchsorted(cdf, u, side="left")
    out = np.empty(size, dtype=np.int64)
    inside = idx < len(d)
    out[inside] = d_min + idx[inside]
    tail = ~inside
    if tail.any():
        top = d_min + table_max
        rest = (1 - u[tail]) / (1 - cdf[-1])
        out[tail] = np.floor(top * rest ** (-1 / (alpha - 1))).astype(np.int64)
    return out


def powerlaw_graph(n_sources, n_targets, alpha, seed, d_min=1):
    """Directories whose outdegrees follow a discrete power law, pointing at contents."""
    rng = np.random.default_rng(seed)
    deg = np.minimum(powerlaw_samples(n_sources, alpha, d_min, rng.integers(2**63)), n_targets)
    types = np.concatenate(
        [np.full(n_sources, int(T.DIRECTORY), np.uint8), np.full(n_targets, int(T.CONTENT), np.uint8)]
    )
    src = np.repeat(np.arange(n_sources, dtype=ID_DTYPE), deg)
    # distinct targets per source: offset a random start by a random stride
    starts = np.repeat(rng.integers(0, n_targets, size=n_sources), deg)
    rank = np.arange(len(src)) - np.repeat(np.cumsum(deg) - deg, deg)
    dst = (n_sources + (starts + rank) % n_targets).astype(ID_DTYPE)
    return types, src, dst


def _strata(n_nodes, rng):
    weights = np.array([LAYERED_NODES[t] for t in NodeType], dtype=np.float64)
    counts = np.floor(weights / weights.sum() * n_nodes).astype(np.int64)
    counts = np.maximum(counts, 1)
    counts[int(T.CONTENT)] += n_nodes - counts.sum()
    starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
    return counts, starts


def layered(n_nodes, n_edges, seed, skew=2.0, chunk=1 << 22):
    """Merkle-like graph with archive-shaped strata.

    Nodes are split into the six types in archive proportions, edge volume
    per allowed type pair likewise. Destinations are skewed towards low ids
    within their stratum (``u**skew``) to mimic content sharing. Same-type
    edges always point from a lower to a higher id, so the result is a DAG
    that passes strict validation.
    """
    rng = np.random.default_rng(seed)
    counts, starts = _strata(n_nodes, rng)
    types = np.repeat(np.arange(len(NodeType), dtype=np.uint8), counts)
    vol = np.array(list(LAYERED_EDGES.values()), dtype=np.float64)
    per_pair = np.floor(vol / vol.sum() * n_edges).astype(np.int64)
    per_pair[-1] += n_edges - per_pair.sum()

    src = np.empty(n_edges, dtype=ID_DTYPE)
    dst = np.empty(n_edges, dtype=ID_DTYPE)
    pos = 0
    for (s, d), m in zip(LAYERED_EDGES, per_pair.tolist()):
        ns, nd = int(counts[s]), int(counts[d])
        for lo in range(0, m, chunk):
            k = min(chunk, m - lo)
            a = rng.integers(0, ns, size=k)
            b = np.floor(nd * rng.random(k) ** skew).astype(np.int64)
            if s == d:
                if ns < 2:
                    a = b = np.zeros(k, np.int64)
                else:
                    b = b % (ns - 1)
                    b = b + (b >= a)
                    a, b = np.minimum(a, b), np.maximum(a, b)
            src[pos : pos + k] = starts[s] + a
            dst[pos : pos + k] = starts[d] + b
            pos += k
    return types, src, dst


def synthetic_labels(types, seed=0) -> list[str]:
    """Deterministic external ids: SWHIDs with index-derived hashes, URLs for origins."""
    labels = []
    for i, t in enumerate(types.tolist()):
        if t == T.ORIGIN:
            labels.append(f"https://synthetic.invalid/{seed}/origin/{i}")
        else:
            labels.append(f"swh:1:{T(t).abbrev}:{seed:08x}{i:032x}")
    return labels


def to_graph(arrays, validation="strict", labels=False, seed=0) -> TypedGraph:
    types, src, dst = arrays
    return from_arrays(
        types, src, dst, validation=validation, labels=synthetic_labels(types, seed) if labels else None
    )


def random_typed(n, m, seed, acyclic=True):
    """Arbitrary typed digraph ignoring edge type rules; build with ``lenient``."""
    rng = np.random.default_rng(seed)
    types = rng.integers(0, len(NodeType), size=n).astype(np.uint8)
    if n == 0:
        return types, np.zeros(0, ID_DTYPE), np.zeros(0, ID_DTYPE)
    a = rng.integers(0, n, size=m)
    b = rng.integers(0, n, size=m)
    if acyclic:
        a, b = np.minimum(a, b), np.maximum(a, b)
    return types, a.astype(ID_DTYPE), b.astype(ID_DTYPE)
