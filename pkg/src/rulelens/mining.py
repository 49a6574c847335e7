"""Candidate antecedent mining: clauses, transactions, FP-Growth.

Each sampled instance becomes a transaction holding one clause per
discriminating feature (its discretization bin, or its category). Frequent
clause conjunctions are mined with an FP-tree and become the antecedent pool
the rule-list learner selects from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import CONTINUOUS, DatasetSchema
from .discretize import Discretization
from .errors import EmptyTransactionSet


@dataclass(frozen=True)
class Clause:
    """A single condition: `lo <= x_f < hi` or `x_f == category`."""

    feature: int
    lo: float = -math.inf
    hi: float = math.inf
    category: int | None = None

    def __post_init__(self):
        if self.category is None and not self.lo < self.hi:
            raise ValueError("interval clause needs lo < hi")

    @property
    def is_categorical(self) -> bool:
        return self.category is not None

    def sort_key(self):
        cat = self.category if self.category is not None else -1
        return (self.feature, cat, self.lo, self.hi)

    def matches(self, values: np.ndarray) -> np.ndarray:
        """Boolean mask over a raw value vector for this clause's feature."""
        values = np.asarray(values, dtype=np.float64)
        if self.is_categorical:
            return values == float(self.category)
        return (values >= self.lo) & (values < self.hi)

    def matches_value(self, value: float) -> bool:
        if self.is_categorical:
            return value == float(self.category)
        return self.lo <= value < self.hi

    def describe(self, schema: DatasetSchema) -> str:
        name = schema.features[self.feature].name
        if self.is_categorical:
            return f"{name} = {schema.features[self.feature].categories[self.category]}"
        if math.isinf(self.lo):
            return f"{name} < {self.hi:g}"
        if math.isinf(self.hi):
            return f"{name} >= {self.lo:g}"
        return f"{self.lo:g} <= {name} < {self.hi:g}"

    def to_json_dict(self, schema: DatasetSchema) -> dict:
        spec = schema.features[self.feature]
        doc: dict = {"feature": spec.name}
        if self.is_categorical:
            doc["category"] = spec.categories[self.category]
        else:
            doc["lo"] = None if math.isinf(self.lo) else self.lo
            doc["hi"] = None if math.isinf(self.hi) else self.hi
        doc["description"] = self.describe(schema)
        return doc


@dataclass(frozen=True)
class CandidateAntecedent:
    """A conjunction of clauses (at most one per feature) with its support."""

    clauses: tuple[Clause, ...]
    support_count: int

    def __post_init__(self):
        feats = [c.feature for c in self.clauses]
        if len(set(feats)) != len(feats):
            raise ValueError("antecedent may use each feature at most once")
        object.__setattr__(self, "clauses",
                           tuple(sorted(self.clauses, key=Clause.sort_key)))

    @property
    def cardinality(self) -> int:
        return len(self.clauses)

    def sort_key(self):
        return tuple(c.sort_key() for c in self.clauses)

    def matches_matrix(self, rows: np.ndarray) -> np.ndarray:
        """Boolean coverage mask over an (N, k) raw matrix."""
        mask = np.ones(rows.shape[0], dtype=bool)
        for clause in self.clauses:
            mask &= clause.matches(rows[:, clause.feature])
        return mask


def clause_for_bin(disc: Discretization, feature: int, code: int) -> Clause:
    spec = disc.schema.features[feature]
    if spec.kind == CONTINUOUS:
        lo, hi = disc.interval(feature, code)
        return Clause(feature=feature, lo=lo, hi=hi)
    return Clause(feature=feature, category=int(code))


def build_transactions(rows: np.ndarray, disc: Discretization) -> list[frozenset[Clause]]:
    """One transaction per row: the clause each discriminating feature satisfies.

    Continuous features without any accepted cut span the whole axis and are
    skipped; they can never discriminate.
    """
    codes = disc.transform(rows)
    active = [j for j in range(disc.schema.k)
              if disc.schema.features[j].kind != CONTINUOUS or disc.cuts.get(j, ())]
    clause_cache: dict[tuple[int, int], Clause] = {}
    out = []
    for i in range(rows.shape[0]):
        items = []
        for j in active:
            key = (j, int(codes[i, j]))
            clause = clause_cache.get(key)
            if clause is None:
                clause = clause_for_bin(disc, j, key[1])
                clause_cache[key] = clause
            items.append(clause)
        out.append(frozenset(items))
    return out


class _FPNode:
    __slots__ = ("item", "count", "parent", "children")

    def __init__(self, item, parent):
        self.item = item
        self.count = 0
        self.parent = parent
        self.children: dict = {}


def _build_tree(transactions, counts, min_count, item_order):
    root = _FPNode(None, None)
    header: dict = {}
    for tx, weight in transactions:
        items = sorted((i for i in tx if counts[i] >= min_count), key=item_order)
        node = root
        for item in items:
            child = node.children.get(item)
            if child is None:
                child = _FPNode(item, node)
                node.children[item] = child
                header.setdefault(item, []).append(child)
            child.count += weight
            node = child
    return root, header


def _mine(transactions, weights, min_count, max_cardinality, suffix, results, item_order):
    counts: dict = {}
    for tx, weight in zip(transactions, weights):
        for item in tx:
            counts[item] = counts.get(item, 0) + weight
    frequent = [i for i, c in counts.items() if c >= min_count]
    if not frequent:
        return
    _, header = _build_tree(zip(transactions, weights), counts, min_count, item_order)

    for item in sorted(frequent, key=item_order, reverse=True):
        support = counts[item]
        itemset = suffix + (item,)
        results[frozenset(itemset)] = support
        if len(itemset) >= max_cardinality:
            continue
        # conditional pattern base: prefix paths of every node holding `item`
        cond_tx = []
        cond_w = []
        for node in header.get(item, ()):
            path = []
            parent = node.parent
            while parent is not None and parent.item is not None:
                path.append(parent.item)
                parent = parent.parent
            if path:
                cond_tx.append(path)
                cond_w.append(node.count)
        if cond_tx:
            _mine(cond_tx, cond_w, min_count, max_cardinality, itemset, results, item_order)


def mine_itemsets(transactions, min_support: float, max_cardinality: int, item_order):
    """FP-Growth over generic hashable items; returns {frozenset: count}.

    Items are relabeled to dense integers before mining so the hot tree
    operations hash machine ints, not user objects.
    """
    if len(transactions) == 0:
        raise EmptyTransactionSet("no transactions to mine")
    if not 0.0 < min_support <= 1.0:
        raise ValueError("min_support must lie in (0, 1]")
    if max_cardinality < 1:
        raise ValueError("max_cardinality must be >= 1")
    n = len(transactions)
    min_count = max(1, int(math.ceil(min_support * n - 1e-9)))

    universe = sorted({item for tx in transactions for item in tx}, key=item_order)
    item_id = {item: i for i, item in enumerate(universe)}
    encoded = [[item_id[item] for item in tx] for tx in transactions]

    raw: dict = {}
    _mine(encoded, [1] * n, min_count, max_cardinality, (), raw, _identity)
    return {frozenset(universe[i] for i in ids): count for ids, count in raw.items()}


def _identity(x):
    return x


def fp_growth(
    transactions: list[frozenset[Clause]],
    min_support: float,
    max_cardinality: int = 3,
) -> list[CandidateAntecedent]:
    """All clause conjunctions with support >= min_support and bounded size.

    Output is sorted by descending support, then ascending size, then
    lexicographically on the clauses.
    """
    found = mine_itemsets(transactions, min_support, max_cardinality,
                          item_order=Clause.sort_key)
    pool = [CandidateAntecedent(clauses=tuple(items), support_count=count)
            for items, count in found.items()]
    pool.sort(key=lambda a: (-a.support_count, a.cardinality, a.sort_key()))
    return pool
