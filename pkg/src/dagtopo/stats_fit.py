"""Histograms, CCDF views, tail exponent sweeps and weighted KS distance."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Optional, Union

import numpy as np

from .errors import DomainError


class Histogram:
    """Sparse value -> count map over non-negative integers.

    Stored as two parallel sorted arrays; every stored count is positive.
    Instances are treated as immutable values.
    """

    __slots__ = ("values", "counts")

    def __init__(self, mapping: Optional[Mapping[int, int]] = None):
        if mapping:
            items = sorted((int(k), int(c)) for k, c in mapping.items() if c)
            values = np.array([k for k, _ in items], dtype=np.int64)
            counts = np.array([c for _, c in items], dtype=np.int64)
        else:
            values = np.zeros(0, dtype=np.int64)
            counts = np.zeros(0, dtype=np.int64)
        self._set(values, counts)

    def _set(self, values, counts):
        if values.size and values[0] < 0:
            raise ValueError("histogram values must be non-negative")
        if counts.size and counts.min() < 0:
            raise ValueError("histogram counts must be non-negative")
        values.setflags(write=False)
        counts.setflags(write=False)
        self.values = values
        self.counts = counts

    @classmethod
    def from_arrays(cls, values, counts) -> "Histogram":
        """Aggregate arbitrary (possibly repeated, unsorted) value/count pairs."""
        values = np.asarray(values, dtype=np.int64)
        counts = np.asarray(counts, dtype=np.int64)
        h = cls.__new__(cls)
        if values.size == 0:
            h._set(np.zeros(0, np.int64), np.zeros(0, np.int64))
            return h
        uniq, inv = np.unique(values, return_inverse=True)
        summed = np.zeros(len(uniq), dtype=np.int64)
        np.add.at(summed, inv.ravel(), counts)
        nz = summed != 0
        h._set(uniq[nz], summed[nz])
        return h

    @classmethod
    def from_samples(cls, samples) -> "Histogram":
        samples = np.asarray(samples)
        h = cls.__new__(cls)
        if samples.size == 0:
            h._set(np.zeros(0, np.int64), np.zeros(0, np.int64))
            return h
        if samples.min() < 0:
            raise ValueError("histogram values must be non-negative")
        top = int(samples.max())
        if top <= 4 * samples.size + 1024:
            counts = np.bincount(samples.astype(np.int64, copy=False), minlength=top + 1)
            values = np.flatnonzero(counts)
            h._set(values.astype(np.int64), counts[values].astype(np.int64))
        else:
            values, counts = np.unique(samples, return_counts=True)
            h._set(values.astype(np.int64), counts.astype(np.int64))
        return h

    @classmethod
    def from_dense(cls, counts) -> "Histogram":
        """From a dense array where index is the value."""
        counts = np.asarray(counts, dtype=np.int64)
        values = np.flatnonzero(counts)
        h = cls.__new__(cls)
        h._set(values.astype(np.int64), counts[values].copy())
        return h

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def __len__(self) -> int:
        return len(self.values)

    def __bool__(self) -> bool:
        return len(self.values) > 0

    def __iter__(self):
        return iter(self.values.tolist())

    def __contains__(self, value) -> bool:
        i = np.searchsorted(self.values, value)
        return bool(i < len(self.values) and self.values[i] == value)

    def __getitem__(self, value) -> int:
        i = np.searchsorted(self.values, value)
        if i < len(self.values) and self.values[i] == value:
            return int(self.counts[i])
        return 0

    def items(self):
        return zip(self.values.tolist(), self.counts.tolist())

    def to_dict(self) -> dict[int, int]:
        return dict(self.items())

    def merge(self, other: "Histogram") -> "Histogram":
        return Histogram.from_arrays(
            np.concatenate([self.values, other.values]),
            np.concatenate([self.counts, other.counts]),
        )

    __add__ = merge

    def __eq__(self, other) -> bool:
        if isinstance(other, Mapping):
            other = Histogram(other)
        if not isinstance(other, Histogram):
            return NotImplemented
        return np.array_equal(self.values, other.values) and np.array_equal(self.counts, other.counts)

    __hash__ = None

    def min(self) -> Optional[int]:
        return int(self.values[0]) if len(self.values) else None

    def max(self) -> Optional[int]:
        return int(self.values[-1]) if len(self.values) else None

    def mean(self) -> Optional[float]:
        tot = self.total
        if not tot:
            return None
        return float(np.dot(self.values.astype(np.float64), self.counts) / tot)

    def weighted_sum(self) -> int:
        """Sum of value x count."""
        return int(np.dot(self.values, self.counts))

    def __repr__(self) -> str:
        items = list(self.items())
        body = ", ".join(f"{v}: {c}" for v, c in items[:8])
        if len(items) > 8:
            body += ", ..."
        return f"Histogram({{{body}}})"


def merge_all(histograms: Iterable[Histogram]) -> Histogram:
    hs = list(histograms)
    if not hs:
        return Histogram()
    return Histogram.from_arrays(
        np.concatenate([h.values for h in hs]), np.concatenate([h.counts for h in hs])
    )


def ccdf_counts(h: Histogram) -> np.ndarray:
    """Number of samples with value >= each stored value, aligned with ``h.values``."""
    return np.cumsum(h.counts[::-1])[::-1].copy()


def ccdf(h: Histogram) -> list[tuple[int, int]]:
    return list(zip(h.values.tolist(), ccdf_counts(h).tolist()))


@dataclass(frozen=True)
class AlphaRecord:
    d_min: int
    alpha: Optional[float]
    n_tail: int


@dataclass(frozen=True)
class AlphaSweep:
    records: tuple

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)

    def at(self, d_min: int) -> AlphaRecord:
        for r in self.records:
            if r.d_min == d_min:
                return r
        raise KeyError(d_min)


def _log_grid(keys: np.ndarray, per_decade: int = 8) -> np.ndarray:
    """Distinct keys nearest (in log distance) to ``10**(k / per_decade)``."""
    logs = np.log10(keys.astype(np.float64))
    top = int(math.ceil(logs[-1] * per_decade))
    probes = np.arange(top + 1) / per_decade
    idx = np.searchsorted(logs, probes)
    lo = np.clip(idx - 1, 0, len(keys) - 1)
    hi = np.clip(idx, 0, len(keys) - 1)
    pick = np.where(np.abs(logs[lo] - probes) <= np.abs(logs[hi] - probes), lo, hi)
    return np.unique(pick)


def alpha_sweep(h: Histogram, grid: str = "all") -> AlphaSweep:
    """Tail exponent estimate ``1 + n / sum(ln(d / d_min))`` for a range of ``d_min``.

    Computed from counts: the tail sum over ``d > d_min`` is a suffix sum of
    ``count * ln d`` minus ``n_above * ln d_min``. When the whole tail sits at
    ``d_min`` the denominator is zero and ``alpha`` is ``None``.
    """
    if grid not in ("all", "log"):
        raise ValueError(f"grid must be 'all' or 'log', got {grid!r}")
    pos = h.values >= 1
    keys = h.values[pos]
    counts = h.counts[pos]
    if keys.size == 0:
        raise DomainError("histogram has no value >= 1 to fit")

    n_tail = np.cumsum(counts[::-1])[::-1]
    logk = np.log(keys.astype(np.float64))
    clog = counts * logk
    # suffix sums strictly above each key: exact zero for the last key
    above_log = np.concatenate([np.cumsum(clog[::-1])[::-1][1:], [0.0]])
    above_n = np.concatenate([n_tail[1:], [0]])

    picks = np.arange(len(keys)) if grid == "all" else _log_grid(keys)
    records = []
    for i in picks.tolist():
        denom = above_log[i] - above_n[i] * logk[i]
        alpha = None
        if above_n[i] > 0 and denom > 0:
            alpha = 1.0 + float(n_tail[i]) / float(denom)
        records.append(AlphaRecord(int(keys[i]), alpha, int(n_tail[i])))
    return AlphaSweep(tuple(records))


def alpha_mle(samples, d_min) -> Optional[float]:
    """Same estimator on a raw sample array (values may be real)."""
    x = np.asarray(samples, dtype=np.float64)
    x = x[x >= d_min]
    denom = float(np.log(x / d_min).sum())
    if x.size == 0 or denom == 0.0:
        return None
    return 1.0 + x.size / denom


def decade_amplitude(h: Histogram) -> float:
    pos = h.values[h.values >= 1]
    if pos.size == 0:
        raise DomainError("histogram has no positive value")
    return math.log10(pos[-1] / pos[0])


@dataclass(frozen=True)
class WeightedDistribution:
    """Empirical distribution: support points with non-negative weights."""

    values: np.ndarray
    weights: np.ndarray

    @classmethod
    def from_histogram(cls, h: Histogram) -> "WeightedDistribution":
        return cls(h.values.astype(np.float64), h.counts.astype(np.float64))

    @classmethod
    def from_samples(cls, samples, weights=None) -> "WeightedDistribution":
        samples = np.asarray(samples, dtype=np.float64)
        if weights is None:
            weights = np.ones_like(samples)
        return cls(samples, np.asarray(weights, dtype=np.float64))

    @property
    def total(self) -> float:
        return float(np.sum(self.weights))


@dataclass(frozen=True)
class KSResult:
    statistic: float
    support_size: int


def _as_weighted(x) -> WeightedDistribution:
    if isinstance(x, WeightedDistribution):
        return x
    if isinstance(x, Histogram):
        return WeightedDistribution.from_histogram(x)
    if isinstance(x, Mapping):
        return WeightedDistribution.from_histogram(Histogram(x))
    return WeightedDistribution.from_samples(x)


def ks_distance(a, b) -> KSResult:
    """Largest gap between the two weight-normalized CDFs over the union support."""
    a = _as_weighted(a)
    b = _as_weighted(b)
    ta, tb = a.total, b.total
    if not ta > 0 or not tb > 0:
        raise DomainError("KS distance needs positive total weight on both sides")
    support = np.union1d(a.values, b.values)

    def cdf(d, total):
        order = np.argsort(d.values, kind="stable")
        vals = d.values[order]
        cum = np.cumsum(d.weights[order])
        idx = np.searchsorted(vals, support, side="right")
        out = np.zeros(len(support))
        hit = idx > 0
        out[hit] = cum[idx[hit] - 1]
        return out / total

    fa = cdf(a, ta)
    fb = cdf(b, tb)
    return KSResult(float(np.max(np.abs(fa - fb))) if len(support) else 0.0, int(len(support)))


def _fmt_real(x: Optional[float]) -> str:
    return "" if x is None else repr(float(x))


def write_histogram_csv(h: Histogram, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["value", "count", "ccdf"])
        w.writerows(zip(h.values.tolist(), h.counts.tolist(), ccdf_counts(h).tolist()))


def read_histogram_csv(path) -> Histogram:
    """Read any CSV with ``value`` and ``count`` columns."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if rows and not {"value", "count"} <= set(rows[0]):
        raise ValueError(f"{path}: expected 'value' and 'count' columns")
    return Histogram.from_arrays([int(r["value"]) for r in rows], [int(r["count"]) for r in rows])


def write_sweep_csv(sweep: AlphaSweep, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["dmin", "alpha", "ntail"])
        for r in sweep:
            w.writerow([r.d_min, _fmt_real(r.alpha), r.n_tail])


def write_ks_csv(result: KSResult, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["statistic", "support_size"])
        w.writerow([_fmt_real(result.statistic), result.support_size])


def to_jsonable(obj):
    if isinstance(obj, Histogram):
        return {
            "total": obj.total,
            "rows": [[v, c, s] for (v, c), s in zip(obj.items(), ccdf_counts(obj).tolist())],
        }
    if isinstance(obj, AlphaSweep):
        return {"rows": [{"dmin": r.d_min, "alpha": r.alpha, "ntail": r.n_tail} for r in obj]}
    if isinstance(obj, KSResult):
        return {"statistic": obj.statistic, "support_size": obj.support_size}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_json(data, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")


def emit(obj: Union[Histogram, AlphaSweep, KSResult], path, format: str = "csv", **plot_options) -> Path:
    """Write ``obj`` as CSV, JSON or an SVG figure; returns the written path.

    ``plot_options`` (``xscale``, ``yscale``, ``title``) apply to ``svg``.
    """
    path = Path(path)
    try:
        if format == "csv":
            writer = {Histogram: write_histogram_csv, AlphaSweep: write_sweep_csv, KSResult: write_ks_csv}
            writer[type(obj)](obj, path)
        elif format == "json":
            write_json(to_jsonable(obj), path)
        elif format == "svg":
            from . import plotting

            if isinstance(obj, Histogram):
                plotting.plot_distribution(obj, path, **plot_options)
            elif isinstance(obj, AlphaSweep):
                plotting.plot_sweep(obj, path, **plot_options)
            else:
                raise TypeError(f"cannot plot {type(obj).__name__}")
        else:
            raise ValueError(f"unknown format {format!r}")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc
    return path
