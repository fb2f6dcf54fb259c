"""Compact typed directed graph with forward and transposed CSR adjacency.

Node ids are dense ``0..n-1`` int32 values; offsets are int64 so a single
graph can hold more than 2**31 edges. Successor and predecessor lists are
sorted and duplicate free, which the clustering and encoding kernels rely on.
"""

from __future__ import annotations

import enum
import logging
from array import array
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numba
import numpy as np

from .errors import IngestionError, ValidationError

log = logging.getLogger(__name__)

ID_DTYPE = np.int32
OFFSET_DTYPE = np.int64
MAX_NODES = np.iinfo(ID_DTYPE).max


class NodeType(enum.IntEnum):
    ORIGIN = 0
    SNAPSHOT = 1
    RELEASE = 2
    COMMIT = 3
    DIRECTORY = 4
    CONTENT = 5

    @property
    def abbrev(self) -> str:
        return _ABBREV[self]

    @property
    def long_name(self) -> str:
        return self.name.lower()

    def render(self, short: bool = True) -> str:
        return self.abbrev if short else self.long_name

    @classmethod
    def parse(cls, text: str) -> "NodeType":
        """Parse a long name, an abbreviation, or the ``rev`` alias of commit."""
        try:
            return _PARSE[text.strip().lower()]
        except KeyError:
            raise ValueError(f"unknown node type {text!r}") from None


_ABBREV = {
    NodeType.ORIGIN: "ori",
    NodeType.SNAPSHOT: "snp",
    NodeType.RELEASE: "rel",
    NodeType.COMMIT: "cmt",
    NodeType.DIRECTORY: "dir",
    NodeType.CONTENT: "cnt",
}
_PARSE = {t.abbrev: t for t in NodeType}
_PARSE.update({t.long_name: t for t in NodeType})
_PARSE["rev"] = NodeType.COMMIT
_PARSE["revision"] = NodeType.COMMIT

N_TYPES = len(NodeType)


@dataclass(frozen=True)
class EdgeTypeRule:
    src: NodeType
    dst: NodeType
    allowed: bool


DEFAULT_ALLOWED = frozenset(
    (NodeType[a], NodeType[b])
    for a, b in [
        ("ORIGIN", "SNAPSHOT"),
        ("SNAPSHOT", "RELEASE"),
        ("SNAPSHOT", "COMMIT"),
        ("RELEASE", "COMMIT"),
        ("COMMIT", "COMMIT"),
        ("COMMIT", "DIRECTORY"),
        ("DIRECTORY", "DIRECTORY"),
        ("DIRECTORY", "CONTENT"),
    ]
)


def default_rules() -> list[EdgeTypeRule]:
    return [
        EdgeTypeRule(s, d, (s, d) in DEFAULT_ALLOWED) for s in NodeType for d in NodeType
    ]


def rule_matrix(rules: Optional[Iterable[EdgeTypeRule]] = None) -> np.ndarray:
    """6x6 boolean matrix, ``m[src, dst]`` true when the edge type is allowed."""
    m = np.zeros((N_TYPES, N_TYPES), dtype=np.bool_)
    for r in default_rules() if rules is None else rules:
        m[int(r.src), int(r.dst)] = r.allowed
    return m


class Adjacency:
    """Read-only CSR adjacency: ``targets[offsets[v]:offsets[v + 1]]``."""

    __slots__ = ("offsets", "targets")

    def __init__(self, offsets: np.ndarray, targets: np.ndarray):
        offsets = np.asarray(offsets, dtype=OFFSET_DTYPE)
        targets = np.asarray(targets, dtype=ID_DTYPE)
        offsets.setflags(write=False)
        targets.setflags(write=False)
        self.offsets = offsets
        self.targets = targets

    def __len__(self) -> int:
        return len(self.offsets) - 1

    def __getitem__(self, v: int) -> np.ndarray:
        return self.targets[self.offsets[v] : self.offsets[v + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.offsets)

    def sources(self) -> np.ndarray:
        """Row id of every stored target, aligned with ``targets``."""
        return np.repeat(np.arange(len(self), dtype=ID_DTYPE), self.degrees())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Adjacency):
            return NotImplemented
        return np.array_equal(self.offsets, other.offsets) and np.array_equal(
            self.targets, other.targets
        )

    def __repr__(self) -> str:
        return f"Adjacency(rows={len(self)}, entries={len(self.targets)})"


@dataclass
class BuildStats:
    self_loops_dropped: int = 0
    duplicates_collapsed: int = 0
    rule_violations: dict = field(default_factory=dict)

    @property
    def rule_violation_count(self) -> int:
        return sum(self.rule_violations.values())


class TypedGraph:
    """Immutable typed directed graph.

    ``types[v]`` is the ``NodeType`` ordinal of node ``v``; ``fwd`` and ``bwd``
    are exact transposes of each other. ``labels`` optionally maps dense ids
    back to external identifiers.
    """

    def __init__(self, types, fwd: Adjacency, bwd: Adjacency, labels=None, stats=None):
        types = np.asarray(types, dtype=np.uint8)
        types.setflags(write=False)
        if len(fwd) != len(types) or len(bwd) != len(types):
            raise ValueError("adjacency row count does not match node count")
        self.types = types
        self.fwd = fwd
        self.bwd = bwd
        self.labels = labels
        self.stats = stats if stats is not None else BuildStats()
        self._index = None

    @property
    def node_count(self) -> int:
        return len(self.types)

    @property
    def edge_count(self) -> int:
        return len(self.fwd.targets)

    def successors(self, v: int) -> np.ndarray:
        return self.fwd[v]

    def predecessors(self, v: int) -> np.ndarray:
        return self.bwd[v]

    def outdegrees(self) -> np.ndarray:
        return self.fwd.degrees()

    def indegrees(self) -> np.ndarray:
        return self.bwd.degrees()

    def node_type(self, v: int) -> NodeType:
        return NodeType(int(self.types[v]))

    def type_counts(self) -> dict[NodeType, int]:
        counts = np.bincount(self.types, minlength=N_TYPES)
        return {t: int(counts[t]) for t in NodeType}

    def edge_type_counts(self) -> dict[tuple[NodeType, NodeType], int]:
        m = _edge_type_matrix(self.fwd.offsets, self.fwd.targets, self.types)
        return {
            (s, d): int(m[s, d]) for s in NodeType for d in NodeType if m[s, d]
        }

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Edge list as ``(src, dst)`` arrays in CSR order."""
        return self.fwd.sources(), self.fwd.targets

    def label(self, v: int) -> str:
        if self.labels is None:
            return str(v)
        return self.labels[v]

    def dense_id(self, label: str) -> int:
        if self.labels is None:
            return int(label)
        if self._index is None:
            self._index = {lab: i for i, lab in enumerate(self.labels)}
        return self._index[label]

    def structurally_equal(self, other: "TypedGraph") -> bool:
        return (
            np.array_equal(self.types, other.types)
            and self.fwd == other.fwd
            and self.bwd == other.bwd
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, TypedGraph):
            return NotImplemented
        same_labels = (self.labels is None and other.labels is None) or (
            self.labels is not None
            and other.labels is not None
            and list(self.labels) == list(other.labels)
        )
        return same_labels and self.structurally_equal(other)

    __hash__ = None

    def __repr__(self) -> str:
        return f"TypedGraph(nodes={self.node_count}, edges={self.edge_count})"


@numba.njit(cache=True, nogil=True)
def _csr_from_edges(n, src, dst):
    m = src.size
    offsets = np.zeros(n + 1, dtype=np.int64)
    for i in range(m):
        offsets[src[i] + 1] += 1
    for v in range(n):
        offsets[v + 1] += offsets[v]
    pos = offsets[:-1].copy()
    targets = np.empty(m, dtype=np.int32)
    for i in range(m):
        s = src[i]
        targets[pos[s]] = dst[i]
        pos[s] += 1
    out = 0
    loops = 0
    dups = 0
    new_offsets = np.zeros(n + 1, dtype=np.int64)
    for v in range(n):
        a = offsets[v]
        b = offsets[v + 1]
        if b - a > 1:
            targets[a:b].sort()
        prev = -1
        for j in range(a, b):
            t = targets[j]
            if t == v:
                loops += 1
                continue
            if t == prev:
                dups += 1
                continue
            targets[out] = t
            out += 1
            prev = t
        new_offsets[v + 1] = out
    return new_offsets, targets, out, loops, dups


@numba.njit(cache=True, nogil=True)
def _transpose(n, offsets, targets):
    m = targets.size
    boff = np.zeros(n + 1, dtype=np.int64)
    for j in range(m):
        boff[targets[j] + 1] += 1
    for v in range(n):
        boff[v + 1] += boff[v]
    pos = boff[:-1].copy()
    btargets = np.empty(m, dtype=np.int32)
    for u in range(n):
        for j in range(offsets[u], offsets[u + 1]):
            v = targets[j]
            btargets[pos[v]] = u
            pos[v] += 1
    return boff, btargets


@numba.njit(cache=True, nogil=True)
def _edge_type_matrix(offsets, targets, types):
    m = np.zeros((6, 6), dtype=np.int64)
    for u in range(offsets.size - 1):
        tu = types[u]
        for j in range(offsets[u], offsets[u + 1]):
            m[tu, types[targets[j]]] += 1
    return m


def _as_id_array(a, n):
    a = np.asarray(a)
    if a.size and (a.min() < 0 or a.max() >= n):
        bad = a[(a < 0) | (a >= n)][0]
        raise IngestionError(f"edge endpoint id {int(bad)} out of range 0..{n - 1}")
    return a.astype(ID_DTYPE, copy=False)


def from_arrays(types, src, dst, validation="strict", rules=None, labels=None) -> TypedGraph:
    """Build a graph from dense-id edge arrays.

    Duplicate edges are collapsed and self-loops dropped, both counted in
    ``graph.stats``. In strict mode any edge whose type pair is disallowed by
    ``rules`` raises ``ValidationError``; lenient mode keeps and counts them.
    """
    if validation not in ("strict", "lenient"):
        raise ValueError(f"validation must be 'strict' or 'lenient', got {validation!r}")
    types = np.asarray(types, dtype=np.uint8)
    n = len(types)
    if n > MAX_NODES:
        raise ValueError(f"node count {n} exceeds int32 id space")
    if types.size and types.max() >= N_TYPES:
        raise ValueError("type ordinal out of range")
    src = _as_id_array(src, n)
    dst = _as_id_array(dst, n)
    if src.shape != dst.shape:
        raise ValueError("src and dst must have the same length")

    offsets, targets, m, loops, dups = _csr_from_edges(n, src, dst)
    targets = targets[:m].copy() if m < len(targets) else targets

    stats = BuildStats(self_loops_dropped=int(loops), duplicates_collapsed=int(dups))
    if loops:
        log.warning("dropped %d self-loop edge(s)", loops)

    allowed = rule_matrix(rules)
    counts = _edge_type_matrix(offsets, targets, types)
    bad = counts * ~allowed
    if bad.any():
        pairs = {
            (NodeType(s), NodeType(d)): int(bad[s, d])
            for s, d in zip(*np.nonzero(bad))
        }
        if validation == "strict":
            (s, d), count = next(iter(pairs.items()))
            raise ValidationError(s, d, count)
        stats.rule_violations = pairs
        log.warning("kept %d edge(s) violating edge type rules", sum(pairs.values()))

    boff, btargets = _transpose(n, offsets, targets)
    return TypedGraph(types, Adjacency(offsets, targets), Adjacency(boff, btargets), labels, stats)


def build(nodes, edges, validation="strict", rules=None) -> TypedGraph:
    """Build a graph from ``(external_id, NodeType)`` and ``(src_id, dst_id)`` streams.

    Dense ids follow first-seen order of the node stream. A node id repeated
    with the same type is ignored; with a different type it is an error.
    """
    index: dict[str, int] = {}
    labels: list[str] = []
    types = bytearray()
    for ext, ntype in nodes:
        ntype = NodeType(ntype)
        known = index.get(ext)
        if known is not None:
            if types[known] != ntype:
                raise IngestionError(
                    f"node {ext!r} declared as both {NodeType(types[known]).abbrev} "
                    f"and {ntype.abbrev}"
                )
            continue
        index[ext] = len(labels)
        labels.append(ext)
        types.append(int(ntype))

    # int32 buffers: list-of-int storage costs ~8x more per edge
    src = array("i")
    dst = array("i")
    for s, d in edges:
        try:
            src.append(index[s])
        except KeyError:
            raise IngestionError(f"unknown edge endpoint id {s!r}") from None
        try:
            dst.append(index[d])
        except KeyError:
            raise IngestionError(f"unknown edge endpoint id {d!r}") from None

    return from_arrays(
        np.frombuffer(bytes(types), dtype=np.uint8),
        np.frombuffer(src, dtype=ID_DTYPE) if src else np.zeros(0, ID_DTYPE),
        np.frombuffer(dst, dtype=ID_DTYPE) if dst else np.zeros(0, ID_DTYPE),
        validation=validation,
        rules=rules,
        labels=labels,
    )


def transpose_view(g: TypedGraph) -> Adjacency:
    return g.bwd


def undirected_neighbors(g: TypedGraph, v: int) -> np.ndarray:
    if not 0 <= v < g.node_count:
        raise IndexError(f"node id {v} out of range 0..{g.node_count - 1}")
    nbrs = np.union1d(g.fwd[v], g.bwd[v])
    return nbrs[nbrs != v].astype(ID_DTYPE, copy=False)


@numba.njit(cache=True, nogil=True)
def _undirected_csr(fo, ft, bo, bt):
    n = fo.size - 1
    uoff = np.zeros(n + 1, dtype=np.int64)
    for pass_ in range(2):
        if pass_ == 1:
            for v in range(n):
                uoff[v + 1] += uoff[v]
            ut = np.empty(uoff[n], dtype=np.int32)
        else:
            ut = np.empty(0, dtype=np.int32)
        for v in range(n):
            i = fo[v]
            ie = fo[v + 1]
            j = bo[v]
            je = bo[v + 1]
            k = uoff[v]
            cnt = 0
            prev = -1
            while i < ie or j < je:
                if j >= je or (i < ie and ft[i] <= bt[j]):
                    x = ft[i]
                    i += 1
                else:
                    x = bt[j]
                    j += 1
                if x == prev or x == v:
                    continue
                prev = x
                if pass_ == 1:
                    ut[k + cnt] = x
                cnt += 1
            if pass_ == 0:
                uoff[v + 1] = cnt
    return uoff, ut


def undirected_adjacency(g: TypedGraph) -> Adjacency:
    """Adjacency of the underlying simple undirected graph."""
    uoff, ut = _undirected_csr(g.fwd.offsets, g.fwd.targets, g.bwd.offsets, g.bwd.targets)
    return Adjacency(uoff, ut)
