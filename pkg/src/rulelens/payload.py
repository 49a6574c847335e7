"""The complete render model for the matrix view.

One document carries everything a client needs to draw the display: rules in
order with clause intervals in raw units, per-cell class-split distributions
(optionally conditioned on the data still unclassified at each rule), output
bars, support/confidence/fidelity/evidence, flow quantities, collapsed
groups, and the feature order.
"""

from __future__ import annotations

import numpy as np

from .dataset import DataTable
from .explain import (
    DataFilter,
    ExplanationBundle,
    MetricsView,
    RuleFilterView,
    compute_metrics,
    feature_importance,
    filter_rules,
)
from .serialize import clause_to_json, metrics_to_json
from .teacher import Oracle

PAYLOAD_VERSION = 1
HISTOGRAM_BINS = 20

FIDELITY_HIGH = 0.8
FIDELITY_MEDIUM = 0.5


def fidelity_level(value: float) -> str:
    if value >= FIDELITY_HIGH:
        return "high"
    if value >= FIDELITY_MEDIUM:
        return "medium"
    return "low"


def _class_split_histogram(values: np.ndarray, labels: np.ndarray, n_classes: int,
                           lo: float, hi: float, bins: int) -> dict:
    edges = np.linspace(lo, hi, bins + 1)
    counts = []
    for c in range(n_classes):
        hist, _ = np.histogram(values[labels == c], bins=edges)
        counts.append(hist.tolist())
    return {"edges": edges.tolist(), "counts": counts}


def _category_split_counts(values: np.ndarray, labels: np.ndarray, n_classes: int,
                           n_categories: int) -> dict:
    counts = []
    for c in range(n_classes):
        sub = values[labels == c].astype(np.int64)
        counts.append(np.bincount(sub, minlength=n_categories).tolist())
    return {"counts": counts}


def _feature_distribution(table: DataTable, mask: np.ndarray, feature: int,
                          bins: int) -> dict:
    spec = table.schema.features[feature]
    values = table.rows[mask, feature]
    labels = table.labels[mask]
    n_classes = table.schema.class_count
    if spec.is_continuous:
        lo, hi = spec.display_range or (float(values.min() if values.size else 0.0),
                                        float(values.max() if values.size else 1.0))
        return _class_split_histogram(values, labels, n_classes, lo, hi, bins)
    return _category_split_counts(values, labels, n_classes, len(spec.categories))


def build_matrix_payload(
    bundle: ExplanationBundle,
    data: DataTable,
    oracle: Oracle,
    *,
    dataset_name: str = "train",
    metrics: MetricsView | None = None,
    min_support: float = 0.0,
    min_confidence: float = 0.0,
    data_filter: DataFilter | None = None,
    conditional: bool = False,
    show_stripes: bool = True,
    bins: int = HISTOGRAM_BINS,
) -> dict:
    """Assemble the versioned render document for one display dataset."""
    schema = bundle.schema
    n_classes = schema.class_count
    rule_list = bundle.rule_list
    if metrics is None:
        metrics = compute_metrics(bundle, data, oracle)

    fired = rule_list.fired_indices(data.rows)
    importance = feature_importance(schema, rule_list, metrics.per_rule)
    importance_order = [feature for feature, _ in importance]
    score_of = dict(importance)

    all_mask = np.ones(data.n, dtype=bool)
    features_doc = []
    for feature in importance_order:
        spec = schema.features[feature]
        entry = {
            "index": feature,
            "name": spec.name,
            "kind": spec.kind,
            "importance": score_of[feature],
            "distribution": _feature_distribution(data, all_mask, feature, bins),
        }
        if spec.is_continuous:
            entry["range"] = list(spec.display_range) if spec.display_range else None
            entry["cuts"] = list(bundle.discretization.cuts.get(feature, ()))
        else:
            entry["categories"] = list(spec.categories)
        features_doc.append(entry)

    # remaining[i]: mask of rows not captured before rule i (for conditional cells)
    remaining_masks = []
    remaining = np.ones(data.n, dtype=bool)
    for i in range(len(rule_list.rules)):
        remaining_masks.append(remaining.copy())
        remaining = remaining & (fired != i)

    rules_doc = []
    for i, (rule, m) in enumerate(zip(rule_list.rules, metrics.per_rule)):
        cell_mask = remaining_masks[i] if conditional else all_mask
        cells = {}
        for clause in rule.clauses:
            cells[str(clause.feature)] = {
                "clause": clause_to_json(clause, schema),
                "distribution": _feature_distribution(data, cell_mask, clause.feature, bins),
            }
        rules_doc.append({
            "index": i,
            "is_default": rule.is_default,
            "clauses": [clause_to_json(c, schema) for c in rule.clauses],
            "output": [float(v) for v in rule.output],
            "prediction": rule.prediction,
            "prediction_label": schema.class_names[rule.prediction],
            "capture_count": rule.capture_count,
            "metrics": metrics_to_json(m),
            "fidelity_level": fidelity_level(m.rule_fidelity),
            "cells": cells,
        })

    view: RuleFilterView = filter_rules(metrics.per_rule, min_support, min_confidence)
    rows_doc = []
    for kind, indices in view.rows:
        if kind == "rule":
            rows_doc.append({"type": "rule", "rule_index": indices[0]})
        else:
            support = int(sum(metrics.per_rule[i].support_count for i in indices))
            captured = np.zeros(n_classes, dtype=np.int64)
            for i in indices:
                captured += np.asarray(metrics.per_rule[i].captured)
            rows_doc.append({
                "type": "group",
                "rule_indices": list(indices),
                "support_count": support,
                "captured": captured.tolist(),
            })

    return {
        "v": PAYLOAD_VERSION,
        "dataset": dataset_name,
        "n": data.n,
        "classes": list(schema.class_names),
        "conditional": conditional,
        "show_stripes": show_stripes,
        "fidelity": metrics.fidelity,
        "teacher_accuracy": metrics.teacher_accuracy,
        "overall": {
            "fidelity_train": bundle.overall.fidelity_train,
            "teacher_accuracy_train": bundle.overall.teacher_accuracy_train,
            "fidelity_test": bundle.overall.fidelity_test,
            "teacher_accuracy_test": bundle.overall.teacher_accuracy_test,
        },
        "sampling_rate": bundle.sampling_rate,
        "teacher_ref": bundle.teacher_ref,
        "features": features_doc,
        "rules": rules_doc,
        "rows": rows_doc,
        "filters": {
            "min_support": min_support,
            "min_confidence": min_confidence,
            "data_filter": (data_filter.to_json_dict(schema)
                            if data_filter is not None else None),
        },
    }
