"""Explain a classifier that lives in another process.

Any model that can read JSON lines on stdin and write labels on stdout can
be the teacher. This demo writes a small oracle script (logistic scoring in
plain Python), connects over the subprocess protocol, and runs the same
induction pipeline against it.
"""

import sys
import tempfile
from pathlib import Path

from rulelens import data_registry
from rulelens.dataset import split_train_test
from rulelens.explain import induce
from rulelens.external import connect_external_oracle
from rulelens.rulelist import McmcConfig

ORACLE_SOURCE = '''
import json, math, sys
for line in sys.stdin:
    msg = json.loads(line)
    if msg["op"] == "hello":
        print(json.dumps({"op": "hello", "classes": 2}), flush=True)
    elif msg["op"] == "predict":
        labels = []
        for row in msg["instances"]:
            glucose, bmi, age = row[1], row[5], row[7]
            z = 0.045 * (glucose - 120) + 0.08 * (bmi - 31) + 0.03 * (age - 33)
            labels.append(1 if z > 0 else 0)
        print(json.dumps({"op": "labels", "labels": labels}), flush=True)
'''

script = Path(tempfile.mkdtemp()) / "oracle.py"
script.write_text(ORACLE_SOURCE, encoding="utf-8")

train, test = split_train_test(data_registry.builtin_table("diabetes"), 0.25, seed=7)
command = f"{sys.executable} {script}"
print(f"launching external oracle: {command}")

with connect_external_oracle(command, train.schema) as teacher:
    print(f"handshake ok: {teacher.class_count} classes")
    bundle = induce(train, teacher, 2.0, test=test, seed=0,
                    mcmc=McmcConfig(iterations=8000, chains=2, seed=0))

print(f"rules: {len(bundle.rule_list.rules) - 1} + default, "
      f"test fidelity {bundle.overall.fidelity_test:.3f}")
for rule in bundle.rule_list.rules[:5]:
    antecedent = " AND ".join(c.describe(bundle.schema) for c in rule.clauses) or "(default)"
    print(f"  IF {antecedent} THEN {bundle.schema.class_names[rule.prediction]}")
