"""Rule-list explanations for black-box classifiers.

Induce an ordered decision-rule list that mimics any frozen classifier,
quantify how faithful each rule is, and serve the interactive matrix view.
"""

from .dataset import (
    DataTable,
    DatasetSchema,
    FeatureSpec,
    IngestOptions,
    dump_csv,
    load_dataset,
    split_train_test,
)
from .density import DensityModel, density_at, estimate_distribution, sample
from .discretize import Discretization, mdl_discretize
from .explain import (
    DataFilter,
    ExplanationBundle,
    FilterPredicate,
    MinerConfig,
    MetricsView,
    RuleMetrics,
    compute_metrics,
    feature_importance,
    filter_data,
    filter_rules,
    induce,
    probe,
    sampling_rate_sweep,
)
from .external import ExternalOracle, connect_external_oracle
from .mining import CandidateAntecedent, Clause, build_transactions, fp_growth
from .rulelist import (
    Hyperparams,
    McmcConfig,
    Rule,
    RuleList,
    evaluate_fidelity,
    train_rule_list,
)
from .teacher import (
    MlpTeacher,
    NearestNeighborTeacher,
    Oracle,
    predict_batch,
    train_mlp,
    train_nearest_neighbor,
)

__version__ = "0.1.0"
