"""Fit the mixed joint density on a real table and sample synthetic rows.

Walks through the estimator: per-tuple probabilities, the shared Silverman
bandwidth, pointwise density queries, and a large sample whose moments match
the closed-form kernel-density moments.
"""

import numpy as np

from rulelens import data_registry
from rulelens.density import density_at, estimate_distribution, sample

table = data_registry.builtin_table("iris")
model = estimate_distribution(table)

print(f"iris: {table.n} rows, {table.schema.k} continuous features")
print(f"discrete tuples: {len(model.combos)} (all-continuous data has a single one)")
print("bandwidth diagonal (Silverman):")
for j, h in zip(model.cont_idx, model.bandwidth):
    name = table.schema.features[j].name
    print(f"  {name:<22} sqrt(H) = {np.sqrt(h):.4f}")

x = table.rows[0]
print(f"\ndensity at the first training row: {density_at(model, x):.4f}")
far = x + 30.0
print(f"density far outside the data:      {density_at(model, far):.2e}")

synthetic = sample(model, 20_000, seed=7)
print("\n20k samples vs training data (mean / std per feature):")
for j in range(table.schema.k):
    name = table.schema.features[j].name
    print(f"  {name:<22} data {table.rows[:, j].mean():6.2f}/{table.rows[:, j].std():5.2f}"
          f"   sample {synthetic.rows[:, j].mean():6.2f}/{synthetic.rows[:, j].std():5.2f}")
print("\nsampled values stay inside the observed ranges (clamped), and the")
print("sample variance exceeds the data variance by roughly the bandwidth.")
