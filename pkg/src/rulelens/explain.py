"""End-to-end rule induction plus every per-rule quantity the UI shows.

The pipeline: estimate the training distribution, draw synthetic rows, label
them with the teacher, discretize against those labels, mine candidate
antecedents, search for a MAP rule list, then score support / confidence /
fidelity / evidence / flow on real data.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import gammaln

from .dataset import DataTable, DatasetSchema, validate_instance
from .density import estimate_distribution, sample
from .discretize import Discretization, mdl_discretize
from .errors import EmptySelection, NoData, RuleListTooLongWarning
from .mining import build_transactions, fp_growth
from .rulelist import (
    Hyperparams,
    McmcConfig,
    Rule,
    RuleList,
    evaluate_fidelity,
    train_rule_list,
)
from .teacher import Oracle, predict_batch

LIST_LENGTH_GUIDELINE = 60


@dataclass(frozen=True)
class MinerConfig:
    min_support: float = 0.02
    max_cardinality: int = 3
    max_pool: int = 5000


@dataclass(frozen=True)
class RuleMetrics:
    """Everything the support view needs for one rule, on one dataset."""

    support_count: int
    support_fraction: float
    confidence: float
    rule_fidelity: float
    empty: bool                      # no captured instances; fidelity reported as 1.0
    evidence: tuple[tuple[int, int], ...]  # per teacher-predicted class: (correct, wrong)
    flow_in: tuple[int, ...]         # instances per true class remaining before this rule
    captured: tuple[int, ...]        # instances per true class captured by this rule


@dataclass(frozen=True)
class MetricsView:
    per_rule: tuple[RuleMetrics, ...]
    fidelity: float
    teacher_accuracy: float
    n: int


@dataclass(frozen=True)
class OverallStats:
    fidelity_train: float
    teacher_accuracy_train: float
    fidelity_test: float | None = None
    teacher_accuracy_test: float | None = None


@dataclass(frozen=True)
class FilterPredicate:
    """Continuous closed interval or categorical subset, for one feature."""

    lo: float = -math.inf
    hi: float = math.inf
    categories: frozenset[int] | None = None

    def __post_init__(self):
        if self.categories is not None:
            if not self.categories:
                raise ValueError("categorical predicate needs a non-empty subset")
        elif not self.lo <= self.hi:
            raise ValueError("interval predicate needs lo <= hi")

    def matches(self, values: np.ndarray) -> np.ndarray:
        if self.categories is not None:
            return np.isin(values.astype(np.int64), sorted(self.categories))
        return (values >= self.lo) & (values <= self.hi)


@dataclass(frozen=True)
class DataFilter:
    """Conjunction of per-feature predicates."""

    predicates: dict[int, FilterPredicate] = field(default_factory=dict)

    def matches(self, rows: np.ndarray) -> np.ndarray:
        mask = np.ones(rows.shape[0], dtype=bool)
        for feature, pred in self.predicates.items():
            mask &= pred.matches(rows[:, feature])
        return mask

    def to_json_dict(self, schema: DatasetSchema) -> dict:
        doc = {}
        for feature, pred in sorted(self.predicates.items()):
            spec = schema.features[feature]
            if pred.categories is not None:
                doc[spec.name] = {"categories": [spec.categories[c]
                                                 for c in sorted(pred.categories)]}
            else:
                doc[spec.name] = {
                    "lo": None if math.isinf(pred.lo) else pred.lo,
                    "hi": None if math.isinf(pred.hi) else pred.hi,
                }
        return doc

    @classmethod
    def from_json_dict(cls, doc: dict, schema: DatasetSchema) -> "DataFilter":
        predicates = {}
        for name, body in doc.items():
            j = schema.feature_index(name)
            spec = schema.features[j]
            if "categories" in body:
                cats = frozenset(spec.category_index(c) for c in body["categories"])
                predicates[j] = FilterPredicate(categories=cats)
            else:
                lo = body.get("lo")
                hi = body.get("hi")
                predicates[j] = FilterPredicate(
                    lo=-math.inf if lo is None else float(lo),
                    hi=math.inf if hi is None else float(hi),
                )
        return cls(predicates=predicates)


@dataclass(frozen=True)
class ExplanationBundle:
    schema: DatasetSchema
    rule_list: RuleList
    discretization: Discretization
    teacher_ref: dict
    sampling_rate: float
    seed: int
    per_rule: tuple[RuleMetrics, ...]   # computed on the training set
    overall: OverallStats


def _teacher_accuracy(oracle: Oracle, data: DataTable) -> float:
    return float((predict_batch(oracle, data.rows) == data.labels).mean())


def compute_metrics(bundle_or_list, data: DataTable, oracle: Oracle) -> MetricsView:
    """Route every instance to its fired rule and tally the support view.

    Evidence compares the teacher's prediction against the true label on each
    rule's captured rows; flow counts the per-class instances still
    unclassified when each rule is reached.
    """
    rule_list: RuleList = (bundle_or_list.rule_list
                           if isinstance(bundle_or_list, ExplanationBundle)
                           else bundle_or_list)
    if data.n == 0:
        raise NoData("metrics need at least one instance")
    n = data.n
    n_classes = data.schema.class_count
    oracle_labels = predict_batch(oracle, data.rows)
    fired = rule_list.fired_indices(data.rows)
    rule_preds = np.array([r.prediction for r in rule_list.rules], dtype=np.int64)

    inflow = np.bincount(data.labels, minlength=n_classes).astype(np.int64)
    per_rule = []
    agree_total = 0
    for i, rule in enumerate(rule_list.rules):
        captured_mask = fired == i
        count = int(captured_mask.sum())
        captured = np.bincount(data.labels[captured_mask], minlength=n_classes)
        empty = count == 0
        if empty:
            rule_fid = 1.0
        else:
            agree = int((oracle_labels[captured_mask] == rule_preds[i]).sum())
            agree_total += agree
            rule_fid = agree / count
        evidence = []
        for c in range(n_classes):
            pred_c = captured_mask & (oracle_labels == c)
            correct = int((pred_c & (data.labels == c)).sum())
            wrong = int(pred_c.sum()) - correct
            evidence.append((correct, wrong))
        per_rule.append(RuleMetrics(
            support_count=count,
            support_fraction=count / n,
            confidence=rule.confidence,
            rule_fidelity=rule_fid,
            empty=empty,
            evidence=tuple(evidence),
            flow_in=tuple(int(v) for v in inflow),
            captured=tuple(int(v) for v in captured),
        ))
        inflow = inflow - captured

    fidelity = agree_total / n
    teacher_acc = float((oracle_labels == data.labels).mean())
    return MetricsView(per_rule=tuple(per_rule), fidelity=fidelity,
                       teacher_accuracy=teacher_acc, n=n)


def warn_if_too_long(n_rules: int):
    """Readability guideline, not a hard cap: long lists still come back."""
    if n_rules > LIST_LENGTH_GUIDELINE:
        warnings.warn(
            f"extracted {n_rules} rules; lists beyond {LIST_LENGTH_GUIDELINE} "
            "strain readability",
            RuleListTooLongWarning,
        )


def _default_only_list(labels: np.ndarray, n_classes: int, hp: Hyperparams) -> RuleList:
    counts = np.bincount(labels, minlength=n_classes)
    alpha = hp.alpha
    output = (counts + alpha) / (counts.sum() + n_classes * alpha)
    log_post = float(
        gammaln(n_classes * alpha) - n_classes * gammaln(alpha)
        - gammaln(counts.sum() + n_classes * alpha)
        + gammaln(counts + alpha).sum()
    )
    rule = Rule(clauses=(), output=output, capture_count=int(counts.sum()))
    return RuleList(rules=(rule,), hyperparams=hp, log_posterior=log_post)


def induce(
    train: DataTable,
    oracle: Oracle,
    sampling_rate: float = 4.0,
    *,
    test: DataTable | None = None,
    miner: MinerConfig | None = None,
    hyperparams: Hyperparams | None = None,
    mcmc: McmcConfig | None = None,
    seed: int = 0,
    progress=None,
) -> ExplanationBundle:
    """Run the full induction pipeline against a frozen teacher.

    `sampling_rate` scales the synthetic sample count relative to the
    training size. Deterministic for a fixed seed.
    """
    if train.n == 0:
        raise NoData("cannot induce from an empty training set")
    if sampling_rate <= 0:
        raise ValueError("sampling_rate must be positive")
    miner = miner or MinerConfig()
    hyperparams = hyperparams or Hyperparams()
    mcmc = mcmc or McmcConfig()
    n_classes = train.schema.class_count

    def report(x: float):
        if progress is not None:
            progress(x)

    sample_seed, mcmc_seed = (
        int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(2))

    report(0.02)
    model = estimate_distribution(train)
    n_samples = max(1, int(round(sampling_rate * train.n)))
    synthetic = sample(model, n_samples, sample_seed)
    report(0.1)
    sample_labels = predict_batch(oracle, synthetic.rows)
    labeled = DataTable(train.schema, synthetic.rows, sample_labels)
    report(0.25)
    discretization = mdl_discretize(labeled)
    report(0.35)
    transactions = build_transactions(labeled.rows, discretization)
    pool = [a for a in fp_growth(transactions, miner.min_support, miner.max_cardinality)
            if a.cardinality >= 1]
    pool = pool[:miner.max_pool]
    report(0.4)

    if pool:
        def learner_progress(x: float):
            report(0.4 + 0.55 * x)
        rule_list = train_rule_list(
            labeled.rows, sample_labels, pool,
            hyperparams=hyperparams,
            mcmc=replace(mcmc, seed=mcmc_seed),
            n_classes=n_classes,
            progress=learner_progress if progress is not None else None,
        )
    else:
        rule_list = _default_only_list(sample_labels, n_classes, hyperparams)

    warn_if_too_long(len(rule_list.rules) - 1)

    train_view = compute_metrics(rule_list, train, oracle)
    overall = OverallStats(
        fidelity_train=train_view.fidelity,
        teacher_accuracy_train=train_view.teacher_accuracy,
    )
    if test is not None and test.n:
        test_labels = predict_batch(oracle, test.rows)
        overall = replace(
            overall,
            fidelity_test=evaluate_fidelity(rule_list, test_labels, test.rows),
            teacher_accuracy_test=float((test_labels == test.labels).mean()),
        )
    report(1.0)

    return ExplanationBundle(
        schema=train.schema,
        rule_list=rule_list,
        discretization=discretization,
        teacher_ref=oracle.describe(),
        sampling_rate=sampling_rate,
        seed=seed,
        per_rule=train_view.per_rule,
        overall=overall,
    )


@dataclass(frozen=True)
class SweepRow:
    rate: float
    mean_fidelity: float
    sd_fidelity: float
    mean_length: float
    sd_length: float


def sampling_rate_sweep(
    train: DataTable,
    test: DataTable | None,
    oracle: Oracle,
    rates: list[float],
    repeats: int,
    seed: int = 0,
    **induce_kwargs,
) -> list[SweepRow]:
    """Mean/sd fidelity and list length per sampling rate over seeded repeats.

    Fidelity comes from the test set when one is given, else the train set.
    """
    if not rates:
        raise ValueError("rates must be non-empty")
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    rows = []
    children = np.random.SeedSequence(seed).spawn(len(rates) * repeats)
    idx = 0
    for rate in rates:
        fids = []
        lengths = []
        for _ in range(repeats):
            run_seed = int(children[idx].generate_state(1)[0])
            idx += 1
            bundle = induce(train, oracle, rate, test=test, seed=run_seed,
                            **induce_kwargs)
            fid = (bundle.overall.fidelity_test if test is not None
                   else bundle.overall.fidelity_train)
            fids.append(fid)
            lengths.append(len(bundle.rule_list.rules) - 1)
        rows.append(SweepRow(
            rate=rate,
            mean_fidelity=float(np.mean(fids)),
            sd_fidelity=float(np.std(fids, ddof=1)) if repeats > 1 else 0.0,
            mean_length=float(np.mean(lengths)),
            sd_length=float(np.std(lengths, ddof=1)) if repeats > 1 else 0.0,
        ))
    return rows


def sweep_to_csv(rows: list[SweepRow]) -> str:
    lines = ["rate,mean_fidelity,sd_fidelity,mean_length,sd_length"]
    for r in rows:
        lines.append(f"{r.rate:g},{r.mean_fidelity:.6f},{r.sd_fidelity:.6f},"
                     f"{r.mean_length:.3f},{r.sd_length:.3f}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class RuleFilterView:
    """Kept rule indices plus collapsed runs, in original list order."""

    rows: tuple[tuple[str, tuple[int, ...]], ...]  # ("rule", (i,)) | ("group", (i..j))
    kept: tuple[int, ...]
    min_support: float
    min_confidence: float


def filter_rules(per_rule: tuple[RuleMetrics, ...] | list, min_support: float,
                 min_confidence: float) -> RuleFilterView:
    """Collapse consecutive rules failing either threshold; default stays."""
    n = len(per_rule)
    rows: list[tuple[str, tuple[int, ...]]] = []
    kept: list[int] = []
    run: list[int] = []

    def flush():
        nonlocal run
        if run:
            rows.append(("group", tuple(run)))
            run = []

    for i, m in enumerate(per_rule):
        is_default = i == n - 1
        passes = (m.support_fraction >= min_support
                  and m.confidence >= min_confidence) or is_default
        if passes:
            flush()
            rows.append(("rule", (i,)))
            kept.append(i)
        else:
            run.append(i)
    flush()
    return RuleFilterView(rows=tuple(rows), kept=tuple(kept),
                          min_support=min_support, min_confidence=min_confidence)


def filter_data(bundle_or_list, data_filter: DataFilter, data: DataTable,
                oracle: Oracle) -> tuple[DataTable, MetricsView]:
    """Metrics recomputed on the filtered subset; raises EmptySelection."""
    mask = data_filter.matches(data.rows)
    if not mask.any():
        raise EmptySelection("data filter matched nothing")
    subset = data.take(np.flatnonzero(mask))
    return subset, compute_metrics(bundle_or_list, subset, oracle)


def feature_importance(schema: DatasetSchema, rule_list: RuleList,
                       per_rule: tuple[RuleMetrics, ...] | list) -> list[tuple[int, int]]:
    """Per-feature discriminated-instance score, descending (ties: schema order).

    A feature scores the summed support of every rule whose antecedent uses
    it; features no rule touches score zero.
    """
    scores = {j: 0 for j in range(schema.k)}
    for rule, metrics in zip(rule_list.rules, per_rule):
        for clause in rule.clauses:
            scores[clause.feature] += metrics.support_count
    return sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))


@dataclass(frozen=True)
class ProbeResult:
    teacher_prediction: int
    rule_prediction: int
    fired_rule: int
    satisfaction: tuple[tuple[bool, ...], ...]  # per rule, per clause


def probe(bundle: ExplanationBundle, oracle: Oracle, x) -> ProbeResult:
    """Teacher and surrogate predictions for one raw instance, plus which
    clauses of every rule it satisfies (for highlighting)."""
    arr = validate_instance(bundle.schema, x)
    teacher_pred = int(predict_batch(oracle, arr.reshape(1, -1))[0])
    rule_pred, fired = bundle.rule_list.predict(arr)
    satisfaction = tuple(
        tuple(bool(c.matches_value(float(arr[c.feature]))) for c in rule.clauses)
        for rule in bundle.rule_list.rules
    )
    return ProbeResult(teacher_prediction=teacher_pred, rule_prediction=rule_pred,
                       fired_rule=fired, satisfaction=satisfaction)
