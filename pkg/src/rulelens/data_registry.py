"""Built-in example datasets and the on-disk dataset pair convention.

A named dataset lives as ``<name>.csv`` plus ``<name>.schema.json``. The
registry can materialize a handful of classic benchmarks (and two synthetic
tables) into any data directory so the CLI and service work out of the box.

The diabetes table is a deterministic synthetic stand-in for the classic
Pima Indian cohort: same schema, size, class balance, and a comparable
difficulty profile (a mid-glucose band of older patients that is genuinely
ambiguous). Generated, not collected; do not use it for medical conclusions.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .dataset import (
    CATEGORICAL,
    CONTINUOUS,
    DataTable,
    DatasetSchema,
    FeatureSpec,
    dump_csv,
    load_dataset,
)

DATA_DIR_ENV = "RULELENS_DATA_DIR"
DEFAULT_DATA_DIR = "rulelens-data"

_DIABETES_SEED = 13
_BENCH_SEED = 77


def data_dir(explicit: str | None = None) -> Path:
    return Path(explicit or os.environ.get(DATA_DIR_ENV, DEFAULT_DATA_DIR))


def _schema_from_arrays(feature_names, class_names) -> DatasetSchema:
    feats = tuple(FeatureSpec(name=n, kind=CONTINUOUS) for n in feature_names)
    label = FeatureSpec(name="class", kind=CATEGORICAL, categories=tuple(class_names))
    return DatasetSchema(features=feats, label=label)


def _sklearn_table(loader, rename=None) -> DataTable:
    data = loader()
    names = [str(n).replace(" ", "_") for n in data.feature_names]
    classes = [str(c) for c in data.target_names]
    schema = _schema_from_arrays(names, classes)
    return DataTable(schema, np.asarray(data.data, dtype=np.float64),
                     np.asarray(data.target, dtype=np.int64))


def _iris() -> DataTable:
    from sklearn.datasets import load_iris
    return _sklearn_table(load_iris)


def _wine() -> DataTable:
    from sklearn.datasets import load_wine
    return _sklearn_table(load_wine)


def _breast_cancer() -> DataTable:
    from sklearn.datasets import load_breast_cancer
    return _sklearn_table(load_breast_cancer)


def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


def _diabetes(n: int = 768, seed: int = _DIABETES_SEED) -> DataTable:
    """Synthetic diabetes-risk cohort with a deliberately ambiguous band.

    Marginals track the published Pima summary statistics; the label model is
    a noisy risk score dominated by plasma glucose. Inside the mid-glucose
    band of older, heavier patients the score instead follows the insulin
    residual, so that region stays hard for a small network trained on the
    full cohort but rewards extra training weight. Each variable draws from
    its own substream, so the table is stable under local recalibration.
    """
    streams = np.random.SeedSequence(seed).spawn(10)
    (r_age, r_preg, r_bmi, r_dpf, r_glu, r_mix,
     r_bp, r_skin, r_ins, r_lab) = (np.random.default_rng(s) for s in streams)

    age = np.round(21.0 + r_age.gamma(1.6, 7.6, size=n)).clip(21, 81)
    pregnancies = r_preg.poisson(np.clip((age - 19.0) * 0.22, 0.3, 6.5)).clip(0, 17)
    bmi = np.round(r_bmi.normal(31.6, 6.9, size=n).clip(18.0, 55.0), 1)
    dpf = np.round((0.078 + r_dpf.gamma(1.9, 0.21, size=n)).clip(0.078, 2.42), 3)
    glucose = r_glu.normal(109.0, 23.0, size=n)
    glucose = glucose + (r_mix.random(n) < 0.22) * r_mix.normal(38.0, 14.0, size=n)
    glucose = np.round(glucose.clip(56, 199))
    blood_pressure = np.round(
        r_bp.normal(66.0 + 0.14 * (age - 33.0) + 0.35 * (bmi - 32.0), 10.5, size=n)
    ).clip(40, 112)
    skin_thickness = np.round(
        r_skin.normal(20.5 + 0.55 * (bmi - 32.0), 7.5, size=n)
    ).clip(7, 63)
    insulin = np.round(
        np.exp(r_ins.normal(np.log(85.0) + 0.005 * (glucose - 120.0), 0.55, size=n))
    ).clip(15, 600)

    g = (glucose - 120.0) / 31.0
    b = (bmi - 32.0) / 6.9
    a = (age - 33.0) / 11.8
    d = (dpf - 0.47) / 0.33
    p = (pregnancies - 3.8) / 3.4
    ins_r = np.log(insulin / 100.0) / 0.55 - 0.005 * (glucose - 120.0) / 0.55

    score_global = (-0.62 + 1.55 * g + 0.45 * b + 0.30 * a + 0.28 * d
                    + 0.15 * p + 0.25 * g * b)
    in_band = (glucose >= 108) & (glucose <= 137) & (age > 32) & (bmi >= 27)
    score_band = 0.45 + 1.5 * ins_r - 0.4 * d
    score = np.where(in_band, score_band, score_global)
    labels = (r_lab.random(n) < _sigmoid(1.1 * score)).astype(np.int64)

    features = np.column_stack([
        pregnancies.astype(float), glucose, blood_pressure, skin_thickness,
        insulin, bmi, dpf, age.astype(float),
    ])
    schema = DatasetSchema(
        features=(
            FeatureSpec("pregnancies", CONTINUOUS),
            FeatureSpec("plasma_glucose", CONTINUOUS),
            FeatureSpec("blood_pressure", CONTINUOUS),
            FeatureSpec("skin_thickness", CONTINUOUS),
            FeatureSpec("insulin", CONTINUOUS),
            FeatureSpec("bmi", CONTINUOUS),
            FeatureSpec("dpf", CONTINUOUS),
            FeatureSpec("age", CONTINUOUS),
        ),
        label=FeatureSpec("diabetes", CATEGORICAL, categories=("negative", "positive")),
    )
    return DataTable(schema, features, labels)


def _benchmark20(n: int = 1750, k: int = 20, seed: int = _BENCH_SEED) -> DataTable:
    """Gaussian-blob benchmark: 20 features, 3 classes, informative first half."""
    rng = np.random.default_rng(seed)
    n_classes = 3
    centers = rng.normal(0.0, 2.2, size=(n_classes, k))
    centers[:, k // 2:] = 0.0  # second half of the features is noise
    labels = rng.integers(n_classes, size=n)
    rows = centers[labels] + rng.normal(0.0, 1.4, size=(n, k))
    schema = _schema_from_arrays([f"f{i:02d}" for i in range(k)],
                                 [f"c{i}" for i in range(n_classes)])
    return DataTable(schema, rows, labels.astype(np.int64))


_BUILTIN = {
    "iris": _iris,
    "wine": _wine,
    "breast_cancer": _breast_cancer,
    "diabetes": _diabetes,
    "benchmark20": _benchmark20,
}

# the synthetic cohort also answers to the classic benchmark's name
_ALIASES = {"pima": "diabetes"}


def builtin_names() -> list[str]:
    return sorted(_BUILTIN)


def builtin_table(name: str) -> DataTable:
    key = _ALIASES.get(name, name)
    if key not in _BUILTIN:
        raise KeyError(f"unknown built-in dataset {name!r}")
    return _BUILTIN[key]()


def write_pair(table: DataTable, directory: Path | str, name: str) -> tuple[Path, Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    csv_path = directory / f"{name}.csv"
    schema_path = directory / f"{name}.schema.json"
    csv_path.write_text(dump_csv(table), encoding="utf-8")
    schema_path.write_text(table.schema.dumps(), encoding="utf-8")
    return csv_path, schema_path


def load_pair(directory: Path | str, name: str) -> DataTable:
    directory = Path(directory)
    schema = DatasetSchema.loads((directory / f"{name}.schema.json").read_text("utf-8"))
    return load_dataset((directory / f"{name}.csv").read_bytes(), schema)


def resolve_table(name: str, directory: Path | str | None = None) -> DataTable:
    """Load `<name>` from the data directory, materializing built-ins on demand."""
    d = data_dir(None if directory is None else str(directory))
    if (d / f"{name}.csv").exists() and (d / f"{name}.schema.json").exists():
        return load_pair(d, name)
    table = builtin_table(name)  # KeyError surfaces to the caller
    write_pair(table, d, name)
    return table
