"""End-to-end extraction: train a network, mimic it with a rule list.

The pipeline estimates the training distribution, draws four synthetic rows
per real one, labels them with the network, discretizes, mines candidate
conjunctions, and searches for the best-scoring ordered list. The printout
mirrors what the matrix view shows: clauses, outputs, support, confidence,
per-rule fidelity, and evidence.
"""

import numpy as np

from rulelens import data_registry
from rulelens.dataset import split_train_test
from rulelens.explain import induce
from rulelens.rulelist import McmcConfig
from rulelens.teacher import train_mlp

train, test = split_train_test(data_registry.builtin_table("iris"), 0.25, seed=7)
teacher = train_mlp(train, [50], l2_penalty=1.0, epochs=200, learning_rate=0.02, seed=0)
print(f"teacher: 1 hidden layer x 50, train accuracy {teacher.train_accuracy:.3f}")

bundle = induce(train, teacher, sampling_rate=4.0, test=test, seed=1,
                mcmc=McmcConfig(iterations=10_000, chains=2, seed=0))

o = bundle.overall
print(f"\nfidelity: train {o.fidelity_train:.3f}, test {o.fidelity_test:.3f}")
print(f"teacher accuracy: train {o.teacher_accuracy_train:.3f}, test {o.teacher_accuracy_test:.3f}")
print(f"\nextracted list ({len(bundle.rule_list.rules) - 1} rules + default):\n")

classes = bundle.schema.class_names
for i, (rule, m) in enumerate(zip(bundle.rule_list.rules, bundle.per_rule)):
    antecedent = " AND ".join(c.describe(bundle.schema) for c in rule.clauses) or "(default)"
    print(f"{i:>2}. IF {antecedent}")
    print(f"     THEN {classes[rule.prediction]}  p={rule.confidence:.2f}  "
          f"support={m.support_count} ({100 * m.support_fraction:.0f}%)  "
          f"fidelity={m.rule_fidelity:.2f}")
    for c, (correct, wrong) in enumerate(m.evidence):
        if correct or wrong:
            print(f"       evidence[{classes[c]}]: {correct} correct, {wrong} wrong")
