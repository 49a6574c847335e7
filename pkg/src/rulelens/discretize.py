"""Supervised discretization of continuous features.

Recursive binary entropy splits, each accepted only when the information gain
clears the minimum-description-length bound, so features that do not help
separate the classes end up with no cuts at all.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import CONTINUOUS, DataTable, DatasetSchema


def _entropy(counts: np.ndarray) -> float:
    total = counts.sum()
    if total == 0:
        return 0.0
    p = counts[counts > 0] / total
    return float(-(p * np.log2(p)).sum())


def _entropy_rows(counts: np.ndarray) -> np.ndarray:
    """Row-wise entropy for a (m, C) count matrix."""
    totals = counts.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = counts / totals
        terms = np.where(counts > 0, p * np.log2(p), 0.0)
    return -terms.sum(axis=1)


def _mdlp_feature(values: np.ndarray, labels: np.ndarray, n_classes: int) -> list[float]:
    order = np.argsort(values, kind="stable")
    v = values[order]
    y = labels[order]
    n = len(v)
    if n < 2:
        return []

    onehot = np.zeros((n, n_classes), dtype=np.int64)
    onehot[np.arange(n), y] = 1
    cum = np.vstack([np.zeros((1, n_classes), dtype=np.int64), np.cumsum(onehot, axis=0)])
    # candidate split positions: p such that v[p-1] != v[p]
    boundaries = np.flatnonzero(v[1:] != v[:-1]) + 1

    cuts: list[float] = []

    def split(lo: int, hi: int) -> None:
        seg = cum[hi] - cum[lo]
        n_s = hi - lo
        ent_s = _entropy(seg)
        if ent_s == 0.0 or n_s < 2:
            return
        cands = boundaries[(boundaries > lo) & (boundaries < hi)]
        if cands.size == 0:
            return
        left = cum[cands] - cum[lo]
        right = seg - left
        n_left = left.sum(axis=1)
        n_right = n_s - n_left
        ent_left = _entropy_rows(left)
        ent_right = _entropy_rows(right)
        weighted = (n_left * ent_left + n_right * ent_right) / n_s
        best = int(np.argmin(weighted))
        gain = ent_s - weighted[best]

        k_s = int(np.count_nonzero(seg))
        k1 = int(np.count_nonzero(left[best]))
        k2 = int(np.count_nonzero(right[best]))
        delta = (np.log2(3.0 ** k_s - 2.0)
                 - k_s * ent_s + k1 * ent_left[best] + k2 * ent_right[best])
        threshold = (np.log2(n_s - 1.0) + delta) / n_s
        if gain <= threshold:
            return
        p = int(cands[best])
        cuts.append(float((v[p - 1] + v[p]) / 2.0))
        split(lo, p)
        split(p, hi)

    split(0, n)
    cuts.sort()
    return cuts


@dataclass(frozen=True)
class Discretization:
    """Per-feature cut points; categorical features map to themselves."""

    schema: DatasetSchema
    cuts: dict[int, tuple[float, ...]]  # continuous feature index -> sorted cuts

    def bin_count(self, feature: int) -> int:
        spec = self.schema.features[feature]
        if spec.kind == CONTINUOUS:
            return len(self.cuts.get(feature, ())) + 1
        return len(spec.categories)

    def bin_of(self, feature: int, values) -> np.ndarray:
        """Map raw values to bin indices; bins partition (-inf, +inf)."""
        spec = self.schema.features[feature]
        arr = np.asarray(values, dtype=np.float64)
        if spec.kind == CONTINUOUS:
            edges = np.asarray(self.cuts.get(feature, ()), dtype=np.float64)
            return np.searchsorted(edges, arr, side="right").astype(np.int64)
        return arr.astype(np.int64)

    def interval(self, feature: int, bin_index: int) -> tuple[float, float]:
        """[lo, hi) bounds of a continuous bin, using +-inf at the ends."""
        edges = self.cuts.get(feature, ())
        lo = edges[bin_index - 1] if bin_index > 0 else -np.inf
        hi = edges[bin_index] if bin_index < len(edges) else np.inf
        return float(lo), float(hi)

    def transform(self, rows: np.ndarray) -> np.ndarray:
        """Raw (N, k) matrix to integer bin codes."""
        rows = np.asarray(rows, dtype=np.float64)
        out = np.zeros(rows.shape, dtype=np.int64)
        for j in range(self.schema.k):
            out[:, j] = self.bin_of(j, rows[:, j])
        return out

    def to_json_dict(self) -> dict:
        return {
            "cuts": {self.schema.features[j].name: list(edges)
                     for j, edges in sorted(self.cuts.items())}
        }

    @classmethod
    def from_json_dict(cls, doc: dict, schema: DatasetSchema) -> "Discretization":
        cuts = {}
        for name, edges in doc["cuts"].items():
            cuts[schema.feature_index(name)] = tuple(float(e) for e in edges)
        return cls(schema=schema, cuts=cuts)


def mdl_discretize(table: DataTable) -> Discretization:
    """Fit cut points per continuous feature from the table's labels."""
    cuts: dict[int, tuple[float, ...]] = {}
    n_classes = table.schema.class_count
    for j in table.schema.continuous_indices():
        if table.n == 0:
            cuts[j] = ()
            continue
        cuts[j] = tuple(_mdlp_feature(table.rows[:, j], table.labels, n_classes))
    return Discretization(schema=table.schema, cuts=cuts)
