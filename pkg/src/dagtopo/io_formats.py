"""Text dataset parsing and the ``DTP1`` binary graph format.

Text input follows the public nodes/edges dumps: one node per line, either a
bare SWHID (``swh:1:<type>:<40 hex>``) or a two-column ``<id> <type>`` line
(the form used for origin URLs), and one ``<src> <dst>`` pair per edge line.
Files ending in ``.gz`` are decompressed transparently.

Binary layout, all integers little-endian::

    "DTP1" | version u32 | node_count u64 | edge_count u64
    | types: node_count bytes
    | fwd byte offsets: (node_count + 1) u64 | fwd varint targets
    | bwd byte offsets: (node_count + 1) u64 | bwd varint targets
    | CRC32 u32 of every preceding byte

Each adjacency list is LEB128 encoded: the first target as is, later ones as
``gap - 1``. External identifiers live in a sidecar text file, one per line
in dense-id order, so line number equals dense id.
"""

from __future__ import annotations

import gzip
import os
import re
import struct
import zlib
from pathlib import Path

import numba
import numpy as np

from .errors import CorruptFileError, IngestionError, UnsupportedFormatError, UnsupportedVersionError
from .graph_core import Adjacency, NodeType, TypedGraph

MAGIC = b"DTP1"
VERSION = 1
_HEADER = struct.Struct("<4sIQQ")
SIDECAR_SUFFIX = ".ids"

_SWHID = re.compile(r"^swh:1:(ori|snp|rel|rev|cmt|dir|cnt):[0-9a-f]{40}$")


def _open_text(path):
    path = Path(path)
    try:
        if path.suffix == ".gz":
            return gzip.open(path, "rt", encoding="utf-8", newline="")
        return open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise IngestionError(f"cannot read file: {exc.strerror}", path=path) from exc


def _check_swhid(token, path, lineno):
    m = _SWHID.match(token)
    if m is None:
        raise IngestionError(f"malformed SWHID {token!r}", path=path, line=lineno)
    return NodeType.parse(m.group(1))


def parse_node_line(line, path=None, lineno=None):
    fields = line.split()
    if len(fields) == 1:
        token = fields[0]
        if not token.startswith("swh:"):
            raise IngestionError(
                f"node {token!r} is not a SWHID and has no type column", path=path, line=lineno
            )
        return token, _check_swhid(token, path, lineno)
    if len(fields) == 2:
        token, tag = fields
        try:
            ntype = NodeType.parse(tag)
        except ValueError:
            raise IngestionError(f"unknown type token {tag!r}", path=path, line=lineno) from None
        if token.startswith("swh:"):
            declared = _check_swhid(token, path, lineno)
            if declared != ntype:
                raise IngestionError(
                    f"SWHID type {declared.abbrev} contradicts type column {tag!r}",
                    path=path,
                    line=lineno,
                )
        return token, ntype
    raise IngestionError(f"expected 1 or 2 columns, got {len(fields)}", path=path, line=lineno)


def parse_edge_line(line, path=None, lineno=None):
    fields = line.split()
    if len(fields) != 2:
        raise IngestionError(f"expected 2 columns, got {len(fields)}", path=path, line=lineno)
    for token in fields:
        if token.startswith("swh:"):
            _check_swhid(token, path, lineno)
    return fields[0], fields[1]


def iter_nodes(path):
    with _open_text(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if line.strip():
                yield parse_node_line(line, path, lineno)


def iter_edges(path):
    with _open_text(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if line.strip():
                yield parse_edge_line(line, path, lineno)


def parse_dataset(nodes_path, edges_path):
    """Return lazy ``(nodes, edges)`` streams for :func:`graph_core.build`.

    Both files are checked for readability up front so a missing edges file
    fails before the node file is consumed.
    """
    for p in (nodes_path, edges_path):
        if not os.access(p, os.R_OK):
            raise IngestionError("cannot read file", path=p)
    return iter_nodes(nodes_path), iter_edges(edges_path)


def write_dataset(g: TypedGraph, nodes_path, edges_path):
    """Write ``g`` back out as a text nodes/edges pair."""
    with open(nodes_path, "w", encoding="utf-8") as fh:
        for v in range(g.node_count):
            label = g.label(v)
            if label.startswith("swh:"):
                fh.write(label + "\n")
            else:
                fh.write(f"{label}\t{g.node_type(v).abbrev}\n")
    src, dst = g.edges()
    with open(edges_path, "w", encoding="utf-8") as fh:
        for s, d in zip(src.tolist(), dst.tolist()):
            fh.write(f"{g.label(s)} {g.label(d)}\n")


@numba.njit(cache=True, nogil=True)
def _varint_len(x):
    n = 1
    while x >= 128:
        x >>= 7
        n += 1
    return n


@numba.njit(cache=True, nogil=True)
def _encoded_offsets(offsets, targets):
    n = offsets.size - 1
    boff = np.zeros(n + 1, dtype=np.int64)
    for v in range(n):
        size = 0
        prev = -1
        for j in range(offsets[v], offsets[v + 1]):
            t = np.int64(targets[j])
            size += _varint_len(t - prev - 1)
            prev = t
        boff[v + 1] = boff[v] + size
    return boff


@numba.njit(cache=True, nogil=True)
def _encode(offsets, targets, boff):
    n = offsets.size - 1
    out = np.empty(boff[n], dtype=np.uint8)
    k = 0
    for v in range(n):
        prev = -1
        for j in range(offsets[v], offsets[v + 1]):
            t = np.int64(targets[j])
            x = t - prev - 1
            prev = t
            while x >= 128:
                out[k] = (x & 127) | 128
                x >>= 7
                k += 1
            out[k] = x
            k += 1
    return out


@numba.njit(cache=True, nogil=True)
def _decode(boff, buf, n, m):
    """Decode one adjacency region; returns a nonzero status on corrupt input."""
    offsets = np.zeros(n + 1, dtype=np.int64)
    targets = np.empty(m, dtype=np.int32)
    k = 0
    for v in range(n):
        a = boff[v]
        b = boff[v + 1]
        if b < a or b > buf.size:
            return offsets, targets, 1
        p = a
        prev = np.int64(-1)
        while p < b:
            x = np.int64(0)
            shift = 0
            while True:
                if p >= b or shift > 35:
                    return offsets, targets, 2
                byte = buf[p]
                p += 1
                x |= np.int64(byte & 127) << shift
                shift += 7
                if byte < 128:
                    break
            t = prev + 1 + x
            if t >= n or k >= m:
                return offsets, targets, 3
            targets[k] = t
            k += 1
            prev = t
        offsets[v + 1] = k
    if k != m:
        return offsets, targets, 4
    return offsets, targets, 0


def encode_adjacency(adj: Adjacency) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(byte_offsets, varint_bytes)`` for one adjacency."""
    boff = _encoded_offsets(adj.offsets, adj.targets)
    return boff, _encode(adj.offsets, adj.targets, boff)


def decode_adjacency(boff, buf, n, m) -> Adjacency:
    offsets, targets, status = _decode(np.asarray(boff, dtype=np.int64), buf, n, m)
    if status:
        raise CorruptFileError(f"adjacency region failed to decode (status {status})")
    return Adjacency(offsets, targets)


def sidecar_path(path) -> Path:
    return Path(str(path) + SIDECAR_SUFFIX)


def save(g: TypedGraph, path, write_labels=True):
    """Write ``g`` to ``path``; labels, when present, go to ``path + '.ids'``."""
    path = Path(path)
    n, m = g.node_count, g.edge_count
    crc = 0
    with open(path, "wb") as fh:

        def put(chunk):
            nonlocal crc
            view = memoryview(chunk).cast("B")
            crc = zlib.crc32(view, crc)
            fh.write(view)

        put(_HEADER.pack(MAGIC, VERSION, n, m))
        put(np.ascontiguousarray(g.types, dtype="u1"))
        for adj in (g.fwd, g.bwd):
            boff, data = encode_adjacency(adj)
            put(boff.astype("<u8"))
            put(data)
        fh.write(struct.pack("<I", crc & 0xFFFFFFFF))
    side = sidecar_path(path)
    if write_labels and g.labels is not None:
        with open(side, "w", encoding="utf-8") as fh:
            for label in g.labels:
                fh.write(label + "\n")
    elif side.exists():
        side.unlink()


def load(path, read_labels=True) -> TypedGraph:
    path = Path(path)
    try:
        buf = np.fromfile(path, dtype=np.uint8)
    except OSError as exc:
        raise IngestionError(f"cannot read file: {exc.strerror}", path=path) from exc
    if len(buf) >= 4 and bytes(buf[:4]) != MAGIC:
        raise UnsupportedFormatError(f"{path}: not a DTP graph file (magic {bytes(buf[:4])!r})")
    if len(buf) < _HEADER.size + 4:
        raise CorruptFileError(f"{path}: file truncated ({len(buf)} bytes)")
    _, version, n, m = _HEADER.unpack(bytes(buf[: _HEADER.size]))
    if version != VERSION:
        raise UnsupportedVersionError(f"{path}: unsupported format version {version}")
    (stored,) = struct.unpack("<I", bytes(buf[-4:]))
    if zlib.crc32(memoryview(buf[:-4])) & 0xFFFFFFFF != stored:
        raise CorruptFileError(f"{path}: CRC mismatch")

    body_end = len(buf) - 4
    pos = _HEADER.size

    def take(nbytes):
        nonlocal pos
        if pos + nbytes > body_end:
            raise CorruptFileError(f"{path}: section overruns file")
        chunk = buf[pos : pos + nbytes]
        pos += nbytes
        return chunk

    types = take(n).copy()
    if n and types.max() >= len(NodeType):
        raise CorruptFileError(f"{path}: invalid node type ordinal")
    adjs = []
    for _ in range(2):
        boff = take(8 * (n + 1)).view("<u8").astype(np.int64)
        if boff[0] != 0 or np.any(np.diff(boff) < 0):
            raise CorruptFileError(f"{path}: offsets not monotone")
        region = take(int(boff[-1]))
        try:
            adjs.append(decode_adjacency(boff, region, n, m))
        except CorruptFileError as exc:
            raise CorruptFileError(f"{path}: {exc}") from None
    if pos != body_end:
        raise CorruptFileError(f"{path}: {body_end - pos} trailing bytes")

    labels = None
    side = sidecar_path(path)
    if read_labels and side.exists():
        with open(side, "r", encoding="utf-8") as fh:
            labels = fh.read().splitlines()
        if len(labels) != n:
            raise CorruptFileError(f"{side}: {len(labels)} labels for {n} nodes")
    return TypedGraph(types, adjs[0], adjs[1], labels)
