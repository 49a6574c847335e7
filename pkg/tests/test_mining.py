import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rulelens.dataset import CATEGORICAL, CONTINUOUS, DataTable, DatasetSchema, FeatureSpec
from rulelens.discretize import Discretization
from rulelens.errors import EmptyTransactionSet
from rulelens.mining import CandidateAntecedent, Clause, build_transactions, fp_growth


def item(feature, category):
    """Distinct hashable clause for hand-built transaction fixtures."""
    return Clause(feature=feature, category=category)


A, B, C = item(0, 0), item(1, 0), item(2, 0)


def brute_force(transactions, min_support, max_card):
    """Power-set enumeration oracle."""
    universe = sorted({i for tx in transactions for i in tx}, key=Clause.sort_key)
    n = len(transactions)
    out = {}
    for size in range(1, max_card + 1):
        for combo in itertools.combinations(universe, size):
            s = frozenset(combo)
            count = sum(1 for tx in transactions if s <= tx)
            if count >= min_support * n - 1e-9 and count > 0:
                out[s] = count
    return out


class TestFpGrowth:
    def test_hand_enumeration(self):
        tx = [frozenset({A, B}), frozenset({A, B}), frozenset({A, C})]
        pool = fp_growth(tx, min_support=0.5, max_cardinality=2)
        found = {tuple(a.clauses): a.support_count for a in pool}
        assert found == {(A,): 3, (B,): 2, (A, B): 2}

    def test_full_support_without_universal_item(self):
        tx = [frozenset({A}), frozenset({B})]
        assert fp_growth(tx, min_support=1.0, max_cardinality=2) == []

    def test_empty_transaction_list(self):
        with pytest.raises(EmptyTransactionSet):
            fp_growth([], min_support=0.5, max_cardinality=2)

    def test_sort_order(self):
        tx = [frozenset({A, B}), frozenset({A, B}), frozenset({A, C}),
              frozenset({B, C})]
        pool = fp_growth(tx, min_support=0.25, max_cardinality=2)
        keys = [(-a.support_count, a.cardinality, a.sort_key()) for a in pool]
        assert keys == sorted(keys)

    def test_random_vs_brute_force(self):
        rng = np.random.default_rng(17)
        items = [item(f, c) for f in range(4) for c in range(3)]  # 12 items
        transactions = []
        for _ in range(300):
            # one clause per feature, sometimes absent
            chosen = set()
            for f in range(4):
                if rng.random() < 0.85:
                    chosen.add(item(f, int(rng.integers(3))))
            transactions.append(frozenset(chosen))
        pool = fp_growth(transactions, min_support=0.1, max_cardinality=3)
        mined = {frozenset(a.clauses): a.support_count for a in pool}
        assert mined == brute_force(transactions, 0.1, 3)

    @given(seed=st.integers(0, 40), min_support=st.sampled_from([0.05, 0.2, 0.5]))
    @settings(max_examples=12, deadline=None)
    def test_downward_closure(self, seed, min_support):
        rng = np.random.default_rng(seed)
        transactions = []
        for _ in range(60):
            chosen = {item(f, int(rng.integers(2))) for f in range(5)
                      if rng.random() < 0.8}
            transactions.append(frozenset(chosen))
        if not transactions:
            return
        pool = fp_growth(transactions, min_support=min_support, max_cardinality=3)
        support = {frozenset(a.clauses): a.support_count for a in pool}
        for itemset, count in support.items():
            for size in range(1, len(itemset)):
                for sub in itertools.combinations(itemset, size):
                    assert frozenset(sub) in support
                    assert support[frozenset(sub)] >= count

    def test_exact_support_counts(self):
        tx = [frozenset({A}), frozenset({A, B}), frozenset({A, B, C}),
              frozenset({B, C})]
        pool = fp_growth(tx, min_support=0.25, max_cardinality=3)
        found = {tuple(a.clauses): a.support_count for a in pool}
        assert found[(A,)] == 3
        assert found[(B,)] == 3
        assert found[(C,)] == 2
        assert found[(A, B)] == 2
        assert found[(B, C)] == 2
        assert found[(A, B, C)] == 1


class TestClauses:
    def test_antecedent_rejects_duplicate_features(self):
        with pytest.raises(ValueError):
            CandidateAntecedent((item(0, 0), item(0, 1)), 1)

    def test_interval_clause_matching(self):
        clause = Clause(feature=0, lo=1.0, hi=3.0)
        values = np.array([0.5, 1.0, 2.9, 3.0])
        assert clause.matches(values).tolist() == [False, True, True, False]

    def test_open_ended_intervals(self):
        low = Clause(feature=0, hi=2.0)
        high = Clause(feature=0, lo=2.0)
        values = np.array([-1e9, 1.999, 2.0, 1e9])
        assert low.matches(values).tolist() == [True, True, False, False]
        assert high.matches(values).tolist() == [False, False, True, True]

    def test_describe(self, mixed_schema):
        assert Clause(0, lo=1.0, hi=2.0).describe(mixed_schema) == "1 <= temperature < 2"
        assert Clause(1, category=2).describe(mixed_schema) == "color = blue"
        assert Clause(2, hi=4.5).describe(mixed_schema) == "weight < 4.5"


class TestTransactions:
    def test_cutless_continuous_features_excluded(self, mixed_schema):
        rows = np.array([[1.0, 0, 5.0], [2.0, 1, 6.0]])
        disc = Discretization(schema=mixed_schema, cuts={0: (1.5,), 2: ()})
        tx = build_transactions(rows, disc)
        # weight (feature 2) has no cuts -> never appears
        for t in tx:
            assert all(c.feature != 2 for c in t)
        assert {c.feature for c in tx[0]} == {0, 1}

    def test_transaction_contents(self, mixed_schema):
        rows = np.array([[1.0, 2, 5.0]])
        disc = Discretization(schema=mixed_schema, cuts={0: (1.5,), 2: ()})
        (t,) = build_transactions(rows, disc)
        by_feature = {c.feature: c for c in t}
        assert by_feature[0].hi == 1.5
        assert by_feature[1].category == 2
