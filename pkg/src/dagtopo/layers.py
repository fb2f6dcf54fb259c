"""Type-induced subgraphs: the named layers and the cumulative type sequence."""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .graph_core import N_TYPES, Adjacency, NodeType, TypedGraph, _transpose

T = NodeType


@dataclass(frozen=True)
class LayerSpec:
    name: str
    types: frozenset

    def __post_init__(self):
        object.__setattr__(self, "types", frozenset(NodeType(t) for t in self.types))

    def mask(self) -> np.ndarray:
        m = np.zeros(N_TYPES, dtype=np.bool_)
        for t in self.types:
            m[int(t)] = True
        return m


LAYERS = {
    "full": LayerSpec("full", frozenset(NodeType)),
    "filesystem": LayerSpec("filesystem", frozenset({T.DIRECTORY, T.CONTENT})),
    "history": LayerSpec("history", frozenset({T.COMMIT, T.RELEASE})),
    "commit": LayerSpec("commit", frozenset({T.COMMIT})),
    "hosting": LayerSpec("hosting", frozenset({T.ORIGIN, T.SNAPSHOT})),
}

CUMULATIVE_ORDER = (T.ORIGIN, T.SNAPSHOT, T.RELEASE, T.COMMIT, T.DIRECTORY, T.CONTENT)


def layer_spec(name=None, types=None) -> LayerSpec:
    """Resolve a built-in layer name or an ad-hoc comma separated type list."""
    if types:
        if isinstance(types, str):
            types = [t for t in types.split(",") if t.strip()]
        parsed = frozenset(NodeType.parse(t) if isinstance(t, str) else NodeType(t) for t in types)
        label = "+".join(t.abbrev for t in sorted(parsed))
        return LayerSpec(name or label, parsed)
    if name is None:
        return LAYERS["full"]
    try:
        return LAYERS[name]
    except KeyError:
        raise ValueError(f"unknown layer {name!r}; expected one of {', '.join(LAYERS)}") from None


@numba.njit(cache=True, nogil=True)
def _induce_fwd(offsets, targets, keep, new_id, kept):
    k = kept.size
    noff = np.zeros(k + 1, dtype=np.int64)
    for i in range(k):
        u = kept[i]
        c = 0
        for j in range(offsets[u], offsets[u + 1]):
            if keep[targets[j]]:
                c += 1
        noff[i + 1] = noff[i] + c
    nt = np.empty(noff[k], dtype=np.int32)
    p = 0
    for i in range(k):
        u = kept[i]
        for j in range(offsets[u], offsets[u + 1]):
            v = targets[j]
            if keep[v]:
                nt[p] = new_id[v]
                p += 1
    return noff, nt


def induce(g: TypedGraph, spec: LayerSpec) -> tuple[TypedGraph, np.ndarray]:
    """Induced subgraph on the nodes whose type is in ``spec.types``.

    Returns ``(subgraph, original_ids)`` where ``original_ids[new] = old``.
    Kept nodes preserve their relative order, so sorted adjacency stays sorted.
    """
    keep = spec.mask()[g.types]
    kept = np.flatnonzero(keep).astype(np.int32)
    new_id = np.cumsum(keep, dtype=np.int64) - 1
    noff, nt = _induce_fwd(g.fwd.offsets, g.fwd.targets, keep, new_id.astype(np.int32), kept)
    boff, bt = _transpose(len(kept), noff, nt)
    labels = None
    if g.labels is not None:
        labels = [g.labels[i] for i in kept.tolist()]
    sub = TypedGraph(g.types[kept], Adjacency(noff, nt), Adjacency(boff, bt), labels)
    return sub, kept


def cumulative_specs() -> list[LayerSpec]:
    return [
        LayerSpec("+".join(t.abbrev for t in CUMULATIVE_ORDER[: i + 1]), frozenset(CUMULATIVE_ORDER[: i + 1]))
        for i in range(len(CUMULATIVE_ORDER))
    ]


def cumulative_sequence(g: TypedGraph) -> list[TypedGraph]:
    """Induced subgraphs for growing type sets, from origins down to contents."""
    return [induce(g, spec)[0] for spec in cumulative_specs()]
