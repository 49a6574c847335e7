"""Joint density estimation over mixed features, and sampling from it.

The joint factors into a categorical PMF over the observed discrete-value
tuples times a Gaussian-kernel conditional density over the continuous
sub-vector of each tuple's matching rows. The kernel covariance is a shared
diagonal bandwidth matrix from Silverman's rule of thumb.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .dataset import DataTable, DatasetSchema, validate_instance
from .errors import NoData, SchemaMismatch

DiscreteKey = tuple[int, ...]


@dataclass(frozen=True)
class Combo:
    """One observed discrete-value tuple with its continuous sub-rows."""

    probability: float
    count: int
    centers: np.ndarray  # (count, c) continuous sub-vectors


@dataclass(frozen=True)
class DensityModel:
    schema: DatasetSchema
    combos: dict[DiscreteKey, Combo]
    bandwidth: np.ndarray       # (c,) diagonal of the covariance matrix H
    n_train: int
    cont_idx: tuple[int, ...]
    disc_idx: tuple[int, ...]
    cont_min: np.ndarray        # observed per-feature ranges, used to clamp samples
    cont_max: np.ndarray

    @property
    def c(self) -> int:
        return len(self.cont_idx)


def silverman_bandwidth(x_con: np.ndarray, ranges: np.ndarray) -> np.ndarray:
    """Diagonal of H: (((c+2)/4 * n) ** (-1/(c+4)) * sigma_i) ** 2.

    sigma_i is the per-feature sample standard deviation. A constant feature
    gets a vanishing stand-in bandwidth of 1e-6 times its range width (or 1.0
    when the width is zero) so H stays invertible.
    """
    n, c = x_con.shape
    if c == 0:
        return np.zeros(0)
    sigma = x_con.std(axis=0, ddof=1) if n > 1 else np.zeros(c)
    factor = ((c + 2.0) / 4.0 * n) ** (-1.0 / (c + 4.0))
    root_h = factor * sigma
    width = ranges[1] - ranges[0]
    fallback = 1e-6 * np.where(width > 0, width, 1.0)
    root_h = np.where(np.isfinite(root_h) & (root_h > 0), root_h, fallback)
    return root_h ** 2


def estimate_distribution(train: DataTable) -> DensityModel:
    """Fit the PMF over discrete tuples and the shared KDE bandwidth."""
    if train.n == 0:
        raise NoData("cannot estimate a distribution from zero rows")
    schema = train.schema
    disc_idx = tuple(schema.categorical_indices())
    cont_idx = tuple(schema.continuous_indices())
    x_disc = train.rows[:, disc_idx].astype(np.int64)
    x_con = train.rows[:, cont_idx]
    n = train.n

    if len(cont_idx):
        cont_min = x_con.min(axis=0)
        cont_max = x_con.max(axis=0)
    else:
        cont_min = np.zeros(0)
        cont_max = np.zeros(0)
    bandwidth = silverman_bandwidth(x_con, np.vstack([cont_min, cont_max]) if len(cont_idx) else np.zeros((2, 0)))

    combos: dict[DiscreteKey, Combo] = {}
    keys = [tuple(row) for row in x_disc]
    order: dict[DiscreteKey, list[int]] = {}
    for i, key in enumerate(keys):
        order.setdefault(key, []).append(i)
    for key, members in order.items():
        centers = x_con[members]
        combos[key] = Combo(probability=len(members) / n, count=len(members), centers=centers)

    return DensityModel(
        schema=schema,
        combos=combos,
        bandwidth=bandwidth,
        n_train=n,
        cont_idx=cont_idx,
        disc_idx=disc_idx,
        cont_min=cont_min,
        cont_max=cont_max,
    )


def _kde_at(centers: np.ndarray, bandwidth: np.ndarray, x_con: np.ndarray) -> float:
    c = len(bandwidth)
    if c == 0:
        return 1.0
    diff = centers - x_con
    quad = np.sum(diff * diff / bandwidth, axis=1)
    norm = (2.0 * np.pi) ** (c / 2.0) * np.sqrt(np.prod(bandwidth))
    return float(np.exp(-0.5 * quad).sum() / (len(centers) * norm))


def density_at(model: DensityModel, x) -> float:
    """Joint density p(x_disc) * f(x_con | x_disc); zero on unseen tuples."""
    arr = validate_instance(model.schema, x)
    key = tuple(int(arr[i]) for i in model.disc_idx)
    combo = model.combos.get(key)
    if combo is None:
        return 0.0
    x_con = arr[list(model.cont_idx)]
    return combo.probability * _kde_at(combo.centers, model.bandwidth, x_con)


def sample(model: DensityModel, n_samples: int, seed: int) -> DataTable:
    """Draw synthetic rows: tuple ~ PMF, center uniform in the tuple's rows,
    then Gaussian jitter with covariance H, clamped to the observed ranges.

    The returned table carries a placeholder all-zero label vector; callers
    are expected to relabel with a teacher.
    """
    if n_samples < 1:
        raise NoData("n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    keys = sorted(model.combos.keys())
    probs = np.array([model.combos[k].probability for k in keys])
    probs = probs / probs.sum()
    choice = rng.choice(len(keys), size=n_samples, p=probs)

    k = model.schema.k
    out = np.zeros((n_samples, k))
    c = model.c
    if c:
        noise = rng.standard_normal((n_samples, c)) * np.sqrt(model.bandwidth)
    cont_cols = list(model.cont_idx)
    for key_i, key in enumerate(keys):
        mask = choice == key_i
        m = int(mask.sum())
        if m == 0:
            continue
        combo = model.combos[key]
        for slot, j in enumerate(model.disc_idx):
            out[mask, j] = key[slot]
        if c:
            picks = rng.integers(combo.count, size=m)
            vals = np.clip(combo.centers[picks] + noise[mask], model.cont_min, model.cont_max)
            out[np.flatnonzero(mask)[:, None], cont_cols] = vals
    labels = np.zeros(n_samples, dtype=np.int64)
    return DataTable(model.schema, out, labels)


def schema_digest(schema: DatasetSchema) -> str:
    return hashlib.sha256(schema.dumps().encode("utf-8")).hexdigest()[:16]


def model_to_json(model: DensityModel) -> dict:
    """JSON form for caching between runs (combos, counts, H, schema hash)."""
    return {
        "v": 1,
        "schema_hash": schema_digest(model.schema),
        "n_train": model.n_train,
        "bandwidth": model.bandwidth.tolist(),
        "cont_idx": list(model.cont_idx),
        "disc_idx": list(model.disc_idx),
        "cont_min": model.cont_min.tolist(),
        "cont_max": model.cont_max.tolist(),
        "combos": [
            {
                "key": list(key),
                "count": combo.count,
                "centers": combo.centers.tolist(),
            }
            for key, combo in sorted(model.combos.items())
        ],
    }


def model_from_json(doc: dict, schema: DatasetSchema) -> DensityModel:
    if doc.get("schema_hash") != schema_digest(schema):
        raise SchemaMismatch("cached density model belongs to a different schema")
    n = doc["n_train"]
    combos = {}
    for entry in doc["combos"]:
        key = tuple(int(v) for v in entry["key"])
        centers = np.asarray(entry["centers"], dtype=np.float64).reshape(entry["count"], len(doc["cont_idx"]))
        combos[key] = Combo(probability=entry["count"] / n, count=entry["count"], centers=centers)
    return DensityModel(
        schema=schema,
        combos=combos,
        bandwidth=np.asarray(doc["bandwidth"], dtype=np.float64),
        n_train=n,
        cont_idx=tuple(doc["cont_idx"]),
        disc_idx=tuple(doc["disc_idx"]),
        cont_min=np.asarray(doc["cont_min"], dtype=np.float64),
        cont_max=np.asarray(doc["cont_max"], dtype=np.float64),
    )
