import math

import numpy as np
import pytest

from rulelens.dataset import CATEGORICAL, CONTINUOUS, DataTable, DatasetSchema, FeatureSpec
from rulelens.discretize import Discretization, mdl_discretize


def one_feature_table(values, labels, n_classes=2):
    schema = DatasetSchema(
        features=(FeatureSpec("x", CONTINUOUS),),
        label=FeatureSpec("y", CATEGORICAL,
                          categories=tuple(f"c{i}" for i in range(n_classes))),
    )
    rows = np.asarray(values, dtype=float).reshape(-1, 1)
    return DataTable(schema, rows, np.asarray(labels, dtype=np.int64))


def entropy(counts):
    counts = np.asarray(counts, dtype=float)
    p = counts[counts > 0] / counts.sum()
    return float(-(p * np.log2(p)).sum())


def brute_force_best_split(values, labels, n_classes):
    """Independent entropy scan: best cut and its gain over all midpoints."""
    order = np.argsort(values)
    v, y = np.asarray(values)[order], np.asarray(labels)[order]
    n = len(v)
    whole = np.bincount(y, minlength=n_classes)
    best_gain, best_cut, best_parts = -1.0, None, None
    for p in range(1, n):
        if v[p] == v[p - 1]:
            continue
        left = np.bincount(y[:p], minlength=n_classes)
        right = whole - left
        e = (p / n) * entropy(left) + ((n - p) / n) * entropy(right)
        gain = entropy(whole) - e
        if gain > best_gain:
            best_gain, best_cut = gain, (v[p - 1] + v[p]) / 2
            best_parts = (left, right)
    return best_gain, best_cut, whole, best_parts


def mdlp_threshold(whole, left, right, n):
    k = int(np.count_nonzero(whole))
    k1 = int(np.count_nonzero(left))
    k2 = int(np.count_nonzero(right))
    delta = (math.log2(3.0 ** k - 2.0) - k * entropy(whole)
             + k1 * entropy(left) + k2 * entropy(right))
    return (math.log2(n - 1.0) + delta) / n


class TestMdlp:
    def test_perfect_separation_single_cut(self):
        table = one_feature_table([1, 2, 3, 4, 6, 7, 8, 9],
                                  [0, 0, 0, 0, 1, 1, 1, 1])
        disc = mdl_discretize(table)
        cuts = disc.cuts[0]
        assert len(cuts) == 1
        assert 4 < cuts[0] < 6

    def test_constant_feature_no_cuts(self):
        table = one_feature_table([5.0] * 12, [0, 1] * 6)
        disc = mdl_discretize(table)
        assert disc.cuts[0] == ()

    def test_random_labels_no_cuts(self):
        rng = np.random.default_rng(0)
        table = one_feature_table(rng.normal(size=60), rng.integers(2, size=60))
        disc = mdl_discretize(table)
        assert disc.cuts[0] == ()

    def test_two_gaussian_fixture_against_brute_force(self):
        rng = np.random.default_rng(21)
        v0 = rng.normal(0.0, 1.0, 100)
        v1 = rng.normal(4.0, 1.0, 100)
        values = np.concatenate([v0, v1])
        labels = np.array([0] * 100 + [1] * 100)
        disc = mdl_discretize(one_feature_table(values, labels))
        cuts = disc.cuts[0]
        assert len(cuts) >= 1
        first = min(cuts, key=lambda c: abs(c - 2.0))
        assert 1.2 <= first <= 2.8

        gain, cut, whole, (left, right) = brute_force_best_split(values, labels, 2)
        assert first == pytest.approx(cut)
        assert gain > mdlp_threshold(whole, left, right, 200)

    def test_cuts_strictly_inside_range(self):
        rng = np.random.default_rng(5)
        values = np.concatenate([rng.normal(0, 1, 80), rng.normal(5, 1, 80)])
        labels = np.array([0] * 80 + [1] * 80)
        disc = mdl_discretize(one_feature_table(values, labels))
        for cut in disc.cuts[0]:
            assert values.min() < cut < values.max()

    def test_idempotence_on_bin_midpoints(self):
        rng = np.random.default_rng(33)
        values = np.concatenate([rng.normal(0, 1, 90), rng.normal(4, 1, 90),
                                 rng.normal(8, 1, 90)])
        labels = np.array([0] * 90 + [1] * 90 + [0] * 90)
        table = one_feature_table(values, labels)
        disc = mdl_discretize(table)
        cuts = np.asarray(disc.cuts[0])
        assert len(cuts) >= 2

        bins = disc.bin_of(0, values)
        edges = np.concatenate([[values.min()], cuts, [values.max()]])
        midpoints = (edges[:-1] + edges[1:]) / 2.0
        replaced = midpoints[bins]
        disc2 = mdl_discretize(one_feature_table(replaced, labels))
        cuts2 = np.asarray(disc2.cuts[0])
        # re-splitting bin midpoints must not create new intra-bin cuts
        assert len(cuts2) <= len(cuts)
        bins2 = disc2.bin_of(0, replaced)
        for b in np.unique(bins):
            assert len(np.unique(bins2[bins == b])) == 1

    def test_categorical_features_untouched(self, mixed_schema):
        rows = np.array([[1.0, 0, 5.0], [2.0, 1, 6.0], [3.0, 2, 7.0],
                         [4.0, 0, 8.0]])
        table = DataTable(mixed_schema, rows, np.array([0, 1, 0, 1]))
        disc = mdl_discretize(table)
        assert set(disc.cuts) == {0, 2}
        assert disc.bin_of(1, rows[:, 1]).tolist() == [0, 1, 2, 0]


class TestBinning:
    def test_bins_partition_entire_axis(self):
        disc = Discretization(
            schema=one_feature_table([0.0], [0]).schema,
            cuts={0: (1.0, 3.0)},
        )
        values = np.array([-1e12, 0.999, 1.0, 2.5, 3.0, 1e12])
        bins = disc.bin_of(0, values)
        assert bins.tolist() == [0, 0, 1, 1, 2, 2]
        assert disc.bin_count(0) == 3

    def test_interval_bounds(self):
        disc = Discretization(
            schema=one_feature_table([0.0], [0]).schema,
            cuts={0: (1.0, 3.0)},
        )
        assert disc.interval(0, 0) == (-math.inf, 1.0)
        assert disc.interval(0, 1) == (1.0, 3.0)
        assert disc.interval(0, 2) == (3.0, math.inf)

    def test_every_value_maps_to_exactly_one_bin(self):
        rng = np.random.default_rng(1)
        cuts = tuple(sorted(rng.normal(size=4)))
        disc = Discretization(
            schema=one_feature_table([0.0], [0]).schema,
            cuts={0: cuts},
        )
        values = rng.normal(size=300) * 3
        bins = disc.bin_of(0, values)
        for v, b in zip(values, bins):
            lo, hi = disc.interval(0, int(b))
            assert lo <= v < hi

    def test_json_round_trip(self):
        schema = one_feature_table([0.0], [0]).schema
        disc = Discretization(schema=schema, cuts={0: (0.5, 2.5)})
        again = Discretization.from_json_dict(disc.to_json_dict(), schema)
        assert again.cuts == disc.cuts
