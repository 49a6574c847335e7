"""Find where the model fails, then fix it with targeted oversampling.

The workflow the matrix view supports: read the extracted rules, notice the
mid-glucose band where nothing is confident, filter down to it, observe the
teacher's accuracy collapse there, then oversample that subset and retrain.
The retrained networks do measurably better on the held-out test set.
"""

import numpy as np

from rulelens import data_registry
from rulelens.dataset import DataTable, split_train_test
from rulelens.explain import DataFilter, FilterPredicate, filter_data, induce
from rulelens.rulelist import McmcConfig
from rulelens.teacher import predict_batch, train_mlp

SEEDS = range(10)

train, test = split_train_test(data_registry.builtin_table("diabetes"), 0.25, seed=7)

print("baseline: 10 networks (2 x 20 hidden units, l2 = 1.0)")
teachers = [train_mlp(train, [20, 20], l2_penalty=1.0, epochs=40,
                      learning_rate=0.02, seed=s) for s in SEEDS]
base_accs = [float((predict_batch(t, test.rows) == test.labels).mean()) for t in teachers]
print(f"  test accuracy: mean {100 * np.mean(base_accs):.1f}%, "
      f"best {100 * max(base_accs):.1f}%")

bundle = induce(train, teachers[0], 4.0, test=test, seed=0,
                mcmc=McmcConfig(iterations=10_000, chains=2, seed=0))
print(f"\nrule list: {len(bundle.rule_list.rules) - 1} rules, "
      f"train fidelity {bundle.overall.fidelity_train:.2f}")

# the region the rules are least confident about: mid glucose, older, heavier
hard_region = DataFilter({
    7: FilterPredicate(lo=33.0),             # age > 32
    1: FilterPredicate(lo=108.0, hi=137.0),  # plasma glucose neither low nor high
    5: FilterPredicate(lo=27.0),             # bmi >= 27
    6: FilterPredicate(hi=1.18),             # dpf <= 1.18
})
subset, view = filter_data(bundle, hard_region, train, teachers[0])
print(f"\nfiltered subset: {subset.n} patients, "
      f"teacher accuracy only {100 * view.teacher_accuracy:.0f}% there")

extra = np.random.default_rng(123).choice(
    np.flatnonzero(hard_region.matches(train.rows)),
    size=round(0.5 * subset.n), replace=False)
augmented = DataTable(train.schema,
                      np.vstack([train.rows, train.rows[extra]]),
                      np.concatenate([train.labels, train.labels[extra]]))
print(f"oversampling: +{extra.size} duplicated rows -> {augmented.n} training rows")

aug_accs = []
for s in SEEDS:
    model = train_mlp(augmented, [20, 20], l2_penalty=1.0, epochs=40,
                      learning_rate=0.02, seed=s)
    aug_accs.append(float((predict_batch(model, test.rows) == test.labels).mean()))
print(f"  retrained test accuracy: mean {100 * np.mean(aug_accs):.1f}%, "
      f"best {100 * max(aug_accs):.1f}%")
print(f"\nmean gain: {100 * (np.mean(aug_accs) - np.mean(base_accs)):+.1f} points")
