import numpy as np
import pytest

from rulelens import data_registry
from rulelens.dataset import (
    CATEGORICAL,
    CONTINUOUS,
    DataTable,
    DatasetSchema,
    FeatureSpec,
    split_train_test,
)


@pytest.fixture(scope="session")
def iris_table():
    return data_registry.builtin_table("iris")


@pytest.fixture(scope="session")
def diabetes_table():
    return data_registry.builtin_table("diabetes")


@pytest.fixture(scope="session")
def diabetes_split(diabetes_table):
    return split_train_test(diabetes_table, 0.25, seed=7)


@pytest.fixture
def mixed_schema():
    return DatasetSchema(
        features=(
            FeatureSpec("temperature", CONTINUOUS),
            FeatureSpec("color", CATEGORICAL, categories=("red", "green", "blue")),
            FeatureSpec("weight", CONTINUOUS),
        ),
        label=FeatureSpec("outcome", CATEGORICAL, categories=("no", "yes")),
    )


@pytest.fixture
def two_continuous_schema():
    return DatasetSchema(
        features=(FeatureSpec("x0", CONTINUOUS), FeatureSpec("x1", CONTINUOUS)),
        label=FeatureSpec("y", CATEGORICAL, categories=("a", "b")),
    )


def make_table(schema, rows, labels):
    return DataTable(schema, np.asarray(rows, dtype=float),
                     np.asarray(labels, dtype=np.int64))


@pytest.fixture
def make_table_fn():
    return make_table
