"""Versioned JSON forms of bundles, rule lists, and built-in teachers.

Everything the UI or a later CLI invocation needs round-trips through these
documents; clause bounds are written in raw feature units.
"""

from __future__ import annotations

import math

import numpy as np

from .dataset import DatasetSchema
from .discretize import Discretization
from .explain import ExplanationBundle, OverallStats, RuleMetrics
from .mining import Clause
from .rulelist import Hyperparams, Rule, RuleList
from .teacher import MlpTeacher, NearestNeighborTeacher, Oracle

BUNDLE_VERSION = 1


def clause_to_json(clause: Clause, schema: DatasetSchema) -> dict:
    return clause.to_json_dict(schema)


def clause_from_json(doc: dict, schema: DatasetSchema) -> Clause:
    feature = schema.feature_index(doc["feature"])
    if "category" in doc:
        return Clause(feature=feature,
                      category=schema.features[feature].category_index(doc["category"]))
    lo = doc.get("lo")
    hi = doc.get("hi")
    return Clause(feature=feature,
                  lo=-math.inf if lo is None else float(lo),
                  hi=math.inf if hi is None else float(hi))


def rule_list_to_json(rule_list: RuleList, schema: DatasetSchema) -> dict:
    return {
        "hyperparams": {
            "expected_length": rule_list.hyperparams.expected_length,
            "expected_clauses": rule_list.hyperparams.expected_clauses,
            "alpha": rule_list.hyperparams.alpha,
            "max_length": rule_list.hyperparams.max_length,
        },
        "log_posterior": rule_list.log_posterior,
        "rules": [
            {
                "clauses": [clause_to_json(c, schema) for c in rule.clauses],
                "output": [float(v) for v in rule.output],
                "capture_count": rule.capture_count,
                "is_default": rule.is_default,
            }
            for rule in rule_list.rules
        ],
    }


def rule_list_from_json(doc: dict, schema: DatasetSchema) -> RuleList:
    hp_doc = doc["hyperparams"]
    hp = Hyperparams(
        expected_length=hp_doc["expected_length"],
        expected_clauses=hp_doc["expected_clauses"],
        alpha=hp_doc["alpha"],
        max_length=hp_doc.get("max_length"),
    )
    rules = []
    for entry in doc["rules"]:
        rules.append(Rule(
            clauses=tuple(clause_from_json(c, schema) for c in entry["clauses"]),
            output=np.asarray(entry["output"], dtype=np.float64),
            capture_count=int(entry["capture_count"]),
        ))
    return RuleList(rules=tuple(rules), hyperparams=hp,
                    log_posterior=float(doc["log_posterior"]))


def metrics_to_json(metrics: RuleMetrics) -> dict:
    return {
        "support_count": metrics.support_count,
        "support_fraction": metrics.support_fraction,
        "confidence": metrics.confidence,
        "rule_fidelity": metrics.rule_fidelity,
        "empty": metrics.empty,
        "evidence": [list(pair) for pair in metrics.evidence],
        "flow_in": list(metrics.flow_in),
        "captured": list(metrics.captured),
    }


def metrics_from_json(doc: dict) -> RuleMetrics:
    return RuleMetrics(
        support_count=int(doc["support_count"]),
        support_fraction=float(doc["support_fraction"]),
        confidence=float(doc["confidence"]),
        rule_fidelity=float(doc["rule_fidelity"]),
        empty=bool(doc["empty"]),
        evidence=tuple((int(a), int(b)) for a, b in doc["evidence"]),
        flow_in=tuple(int(v) for v in doc["flow_in"]),
        captured=tuple(int(v) for v in doc["captured"]),
    )


def teacher_to_json(oracle: Oracle) -> dict | None:
    """Weights for built-in teachers; external oracles are not portable."""
    if isinstance(oracle, MlpTeacher):
        return {
            "kind": "mlp",
            "layer_sizes": list(oracle.layer_sizes),
            "weights": [w.tolist() for w in oracle.weights],
            "biases": [b.tolist() for b in oracle.biases],
            "l2_penalty": oracle.l2_penalty,
            "mean": oracle.mean.tolist(),
            "scale": oracle.scale.tolist(),
            "train_accuracy": oracle.train_accuracy,
        }
    if isinstance(oracle, NearestNeighborTeacher):
        return {
            "kind": "1nn",
            "points": oracle.points.tolist(),
            "labels": oracle.labels.tolist(),
            "mean": oracle.mean.tolist(),
            "scale": oracle.scale.tolist(),
        }
    return None


def teacher_from_json(doc: dict, schema: DatasetSchema) -> Oracle:
    kind = doc.get("kind")
    if kind == "mlp":
        return MlpTeacher(
            schema=schema,
            layer_sizes=list(doc["layer_sizes"]),
            weights=[np.asarray(w, dtype=np.float64) for w in doc["weights"]],
            biases=[np.asarray(b, dtype=np.float64) for b in doc["biases"]],
            l2_penalty=float(doc["l2_penalty"]),
            mean=np.asarray(doc["mean"], dtype=np.float64),
            scale=np.asarray(doc["scale"], dtype=np.float64),
            train_accuracy=float(doc.get("train_accuracy", 0.0)),
        )
    if kind == "1nn":
        return NearestNeighborTeacher(
            schema=schema,
            points=np.asarray(doc["points"], dtype=np.float64),
            labels=np.asarray(doc["labels"], dtype=np.int64),
            mean=np.asarray(doc["mean"], dtype=np.float64),
            scale=np.asarray(doc["scale"], dtype=np.float64),
        )
    raise ValueError(f"cannot rebuild a teacher of kind {kind!r}")


def bundle_to_json(bundle: ExplanationBundle, teacher: Oracle | None = None) -> dict:
    doc = {
        "v": BUNDLE_VERSION,
        "schema": bundle.schema.to_json_dict(),
        "sampling_rate": bundle.sampling_rate,
        "seed": bundle.seed,
        "teacher_ref": bundle.teacher_ref,
        "teacher_model": teacher_to_json(teacher) if teacher is not None else None,
        "discretization": bundle.discretization.to_json_dict(),
        "rule_list": rule_list_to_json(bundle.rule_list, bundle.schema),
        "per_rule": [metrics_to_json(m) for m in bundle.per_rule],
        "overall": {
            "fidelity_train": bundle.overall.fidelity_train,
            "teacher_accuracy_train": bundle.overall.teacher_accuracy_train,
            "fidelity_test": bundle.overall.fidelity_test,
            "teacher_accuracy_test": bundle.overall.teacher_accuracy_test,
        },
    }
    return doc


def bundle_from_json(doc: dict) -> tuple[ExplanationBundle, Oracle | None]:
    if doc.get("v") != BUNDLE_VERSION:
        raise ValueError(f"unsupported bundle version {doc.get('v')!r}")
    schema = DatasetSchema.from_json_dict(doc["schema"])
    rule_list = rule_list_from_json(doc["rule_list"], schema)
    overall_doc = doc["overall"]
    bundle = ExplanationBundle(
        schema=schema,
        rule_list=rule_list,
        discretization=Discretization.from_json_dict(doc["discretization"], schema),
        teacher_ref=doc["teacher_ref"],
        sampling_rate=float(doc["sampling_rate"]),
        seed=int(doc["seed"]),
        per_rule=tuple(metrics_from_json(m) for m in doc["per_rule"]),
        overall=OverallStats(
            fidelity_train=overall_doc["fidelity_train"],
            teacher_accuracy_train=overall_doc["teacher_accuracy_train"],
            fidelity_test=overall_doc.get("fidelity_test"),
            teacher_accuracy_test=overall_doc.get("teacher_accuracy_test"),
        ),
    )
    teacher = None
    if doc.get("teacher_model"):
        teacher = teacher_from_json(doc["teacher_model"], schema)
    return bundle, teacher
