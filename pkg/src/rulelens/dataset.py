"""Typed tabular datasets: schema, CSV ingestion, validation, splitting.

A dataset is a pair of files on disk, ``<name>.csv`` plus
``<name>.schema.json``; in memory it is a :class:`DataTable` holding a float
matrix (categorical cells store category indices) and an integer label vector.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateSplit,
    MissingValue,
    NonNumeric,
    NoData,
    SchemaMismatch,
    UnknownCategory,
    UnknownColumn,
)

logger = logging.getLogger(__name__)

CONTINUOUS = "continuous"
CATEGORICAL = "categorical"

NA_STRINGS = frozenset({"", "na", "n/a", "nan", "null", "?"})


@dataclass(frozen=True)
class FeatureSpec:
    """One column: a continuous measurement or a categorical code."""

    name: str
    kind: str
    categories: tuple[str, ...] = ()
    display_range: tuple[float, float] | None = None

    def __post_init__(self):
        if self.kind not in (CONTINUOUS, CATEGORICAL):
            raise ValueError(f"unknown feature kind {self.kind!r}")
        if self.kind == CATEGORICAL:
            if len(self.categories) < 2:
                raise ValueError(f"{self.name}: categorical features need >= 2 categories")
            if len(set(self.categories)) != len(self.categories):
                raise ValueError(f"{self.name}: duplicate categories")
        if self.display_range is not None:
            lo, hi = self.display_range
            if not lo < hi:
                raise ValueError(f"{self.name}: display_range min must be < max")

    @property
    def is_continuous(self) -> bool:
        return self.kind == CONTINUOUS

    def category_index(self, token: str) -> int:
        try:
            return self.categories.index(token)
        except ValueError:
            raise UnknownCategory(f"{self.name}: unknown category {token!r}") from None


@dataclass(frozen=True)
class DatasetSchema:
    """Ordered feature specs plus the categorical class variable."""

    features: tuple[FeatureSpec, ...]
    label: FeatureSpec

    def __post_init__(self):
        names = [f.name for f in self.features]
        if len(set(names)) != len(names):
            raise ValueError("feature names must be unique")
        if self.label.name in names:
            raise ValueError("label name collides with a feature name")
        if self.label.kind != CATEGORICAL:
            raise ValueError("label must be categorical")

    @property
    def k(self) -> int:
        return len(self.features)

    @property
    def class_count(self) -> int:
        return len(self.label.categories)

    @property
    def class_names(self) -> tuple[str, ...]:
        return self.label.categories

    def feature_index(self, name: str) -> int:
        for i, f in enumerate(self.features):
            if f.name == name:
                return i
        raise UnknownColumn(f"no feature named {name!r}")

    def continuous_indices(self) -> list[int]:
        return [i for i, f in enumerate(self.features) if f.is_continuous]

    def categorical_indices(self) -> list[int]:
        return [i for i, f in enumerate(self.features) if not f.is_continuous]

    def to_json_dict(self) -> dict:
        feats = []
        for f in self.features:
            entry: dict = {"name": f.name, "kind": f.kind}
            if f.kind == CATEGORICAL:
                entry["categories"] = list(f.categories)
            elif f.display_range is not None:
                entry["range"] = list(f.display_range)
            feats.append(entry)
        return {
            "features": feats,
            "label": {"name": self.label.name, "kind": CATEGORICAL,
                      "categories": list(self.label.categories)},
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "DatasetSchema":
        feats = []
        for entry in doc["features"]:
            rng = entry.get("range")
            feats.append(FeatureSpec(
                name=entry["name"],
                kind=entry["kind"],
                categories=tuple(entry.get("categories", ())),
                display_range=tuple(rng) if rng else None,
            ))
        lab = doc["label"]
        label = FeatureSpec(name=lab["name"], kind=CATEGORICAL,
                            categories=tuple(lab["categories"]))
        return cls(features=tuple(feats), label=label)

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "DatasetSchema":
        return cls.from_json_dict(json.loads(text))


@dataclass
class IngestOptions:
    """How to treat malformed rows at load time.

    ``missing`` is one of ``drop`` (skip the row, log a count), ``reject``
    (raise :class:`MissingValue`), or ``impute`` (column mean / modal
    category).
    """

    missing: str = "drop"
    na_strings: frozenset[str] = NA_STRINGS


@dataclass(frozen=True)
class DataTable:
    """Immutable validated table: N rows of k features plus class labels."""

    schema: DatasetSchema
    rows: np.ndarray        # (N, k) float64; categorical cells hold indices
    labels: np.ndarray      # (N,) int64

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64)
        if rows.ndim != 2 or rows.shape[1] != self.schema.k:
            raise SchemaMismatch(f"rows must be (N, {self.schema.k})")
        if labels.shape != (rows.shape[0],):
            raise SchemaMismatch("labels must align with rows")
        if labels.size and (labels.min() < 0 or labels.max() >= self.schema.class_count):
            raise SchemaMismatch("label index out of range")
        for j in self.schema.categorical_indices():
            col = rows[:, j]
            spec = self.schema.features[j]
            if col.size and (
                np.any(col != np.floor(col))
                or col.min() < 0
                or col.max() >= len(spec.categories)
            ):
                raise SchemaMismatch(f"{spec.name}: category index out of range")
        rows.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return self.rows.shape[0]

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    def validate_instance(self, x) -> np.ndarray:
        return validate_instance(self.schema, x)

    def take(self, indices) -> "DataTable":
        idx = np.asarray(indices, dtype=np.int64)
        return DataTable(self.schema, self.rows[idx].copy(), self.labels[idx].copy())


def validate_instance(schema: DatasetSchema, x) -> np.ndarray:
    """Check one raw instance vector against the schema; returns float64 copy."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.shape != (schema.k,):
        raise SchemaMismatch(f"instance must have {schema.k} values, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise SchemaMismatch("instance contains non-finite values")
    for j in schema.categorical_indices():
        spec = schema.features[j]
        v = arr[j]
        if v != np.floor(v) or v < 0 or v >= len(spec.categories):
            raise SchemaMismatch(f"{spec.name}: invalid category index {v}")
    return arr


def _with_display_ranges(schema: DatasetSchema, rows: np.ndarray) -> DatasetSchema:
    """Fill absent display ranges from observed [min, max] widened by 5% a side."""
    feats = []
    for j, f in enumerate(schema.features):
        if f.is_continuous and f.display_range is None:
            if rows.shape[0]:
                lo = float(rows[:, j].min())
                hi = float(rows[:, j].max())
            else:
                lo, hi = 0.0, 1.0
            pad = 0.05 * (hi - lo)
            if pad == 0.0:
                pad = 0.5 if hi == lo else 0.0
            f = FeatureSpec(f.name, f.kind, f.categories, (lo - pad, hi + pad))
        feats.append(f)
    return DatasetSchema(features=tuple(feats), label=schema.label)


def load_dataset(csv_source, schema: DatasetSchema, options: IngestOptions | None = None) -> DataTable:
    """Parse a UTF-8 CSV (header row, any column order) into a DataTable.

    Categorical strings are mapped to indices in schema order; row order is
    preserved. Raises :class:`UnknownColumn`, :class:`UnknownCategory`,
    :class:`NonNumeric` or :class:`MissingValue` per the ingest options.
    """
    options = options or IngestOptions()
    if isinstance(csv_source, (bytes, bytearray)):
        text = csv_source.decode("utf-8")
    elif isinstance(csv_source, str):
        text = csv_source
    elif hasattr(csv_source, "read"):
        raw = csv_source.read()
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    else:
        raise TypeError("csv_source must be bytes, str, or a readable stream")

    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise UnknownColumn("CSV has no header row") from None
    header = [h.strip() for h in header]

    wanted = {f.name for f in schema.features} | {schema.label.name}
    for col in header:
        if col not in wanted:
            raise UnknownColumn(f"unexpected column {col!r}")
    for name in wanted:
        if name not in header:
            raise UnknownColumn(f"missing column {name!r}")

    col_of = {name: header.index(name) for name in wanted}
    feat_cols = [col_of[f.name] for f in schema.features]
    label_col = col_of[schema.label.name]

    rows: list[list[float]] = []
    labels: list[int] = []
    missing_rows: list[tuple[int, list[int]]] = []  # (row number, missing feature slots)
    dropped = 0

    for row_no, record in enumerate(reader, start=1):
        if not record or all(cell.strip() == "" for cell in record):
            continue
        if len(record) != len(header):
            raise NonNumeric(f"row {row_no}: expected {len(header)} cells, got {len(record)}")
        values: list[float] = []
        missing_slots: list[int] = []
        for slot, (spec, col) in enumerate(zip(schema.features, feat_cols)):
            token = record[col].strip()
            if token.lower() in options.na_strings:
                missing_slots.append(slot)
                values.append(np.nan)
                continue
            if spec.is_continuous:
                try:
                    values.append(float(token))
                except ValueError:
                    raise NonNumeric(
                        f"row {row_no}: {spec.name}={token!r} is not numeric") from None
            else:
                try:
                    values.append(float(spec.category_index(token)))
                except UnknownCategory:
                    raise UnknownCategory(
                        f"row {row_no}: {spec.name}: unknown category {token!r}") from None
        label_token = record[label_col].strip()
        if label_token.lower() in options.na_strings:
            missing_slots.append(-1)
            label_idx = -1
        else:
            try:
                label_idx = schema.label.category_index(label_token)
            except UnknownCategory:
                raise UnknownCategory(
                    f"row {row_no}: {schema.label.name}: unknown category {label_token!r}"
                ) from None

        if missing_slots:
            if options.missing == "reject":
                raise MissingValue(f"row {row_no}: missing value(s)")
            if options.missing == "drop":
                dropped += 1
                continue
            if options.missing != "impute":
                raise ValueError(f"unknown missing policy {options.missing!r}")
            if -1 in missing_slots:  # label cannot be imputed
                dropped += 1
                continue
            missing_rows.append((len(rows), missing_slots))
        rows.append(values)
        labels.append(label_idx)

    if dropped:
        logger.info("load_dataset: dropped %d row(s) with missing values", dropped)

    mat = np.asarray(rows, dtype=np.float64).reshape(len(rows), schema.k)
    lab = np.asarray(labels, dtype=np.int64)

    if missing_rows:
        for j in range(schema.k):
            col = mat[:, j]
            mask = np.isnan(col)
            if not mask.any():
                continue
            seen = col[~mask]
            if schema.features[j].is_continuous:
                fill = float(seen.mean()) if seen.size else 0.0
            else:
                fill = float(np.bincount(seen.astype(int)).argmax()) if seen.size else 0.0
            mat[mask, j] = fill
        logger.info("load_dataset: imputed cells in %d row(s)", len(missing_rows))

    return DataTable(_with_display_ranges(schema, mat), mat, lab)


def dump_csv(table: DataTable) -> str:
    """Serialize a table back to CSV text (schema column order, `%.17g` reals)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    names = [f.name for f in table.schema.features] + [table.schema.label.name]
    writer.writerow(names)
    for i in range(table.n):
        cells = []
        for j, spec in enumerate(table.schema.features):
            v = table.rows[i, j]
            if spec.is_continuous:
                cells.append(f"{v:.17g}")
            else:
                cells.append(spec.categories[int(v)])
        cells.append(table.schema.label.categories[int(table.labels[i])])
        writer.writerow(cells)
    return out.getvalue()


def split_train_test(table: DataTable, test_fraction: float, seed: int) -> tuple[DataTable, DataTable]:
    """Disjoint seeded partition with |test| = round(N * test_fraction)."""
    if not 0.0 < test_fraction < 1.0:
        raise ValueError("test_fraction must lie in (0, 1)")
    n = table.n
    if n < 2:
        raise NoData("need at least 2 rows to split")
    n_test = int(round(n * test_fraction))
    if n_test == 0 or n_test == n:
        raise DegenerateSplit(f"split of {n} rows at {test_fraction} leaves one side empty")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    test_idx = np.sort(perm[:n_test])
    train_idx = np.sort(perm[n_test:])
    return table.take(train_idx), table.take(test_idx)
