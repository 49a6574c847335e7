"""Fidelity vs complexity across sampling rates.

Replays the rate study on the diabetes cohort: more synthetic samples buy
fidelity but the lists grow, which is exactly why the interactive view and
the rule filters exist. Writes sweep.csv and, when matplotlib is available,
sweep.png.
"""

from rulelens import data_registry
from rulelens.dataset import split_train_test
from rulelens.explain import sampling_rate_sweep, sweep_to_csv
from rulelens.rulelist import McmcConfig
from rulelens.teacher import train_mlp

RATES = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0]
REPEATS = 5  # bump to 10 for smoother curves

train, test = split_train_test(data_registry.builtin_table("diabetes"), 0.25, seed=7)
teacher = train_mlp(train, [20, 20], l2_penalty=1.0, epochs=40,
                    learning_rate=0.02, seed=0)

rows = sampling_rate_sweep(train, test, teacher, RATES, REPEATS, seed=0,
                           mcmc=McmcConfig(iterations=6000, chains=2, seed=0))

print(f"{'rate':>6} {'fidelity':>12} {'list length':>14}")
for r in rows:
    print(f"{r.rate:>6.2f} {r.mean_fidelity:>8.3f} ({r.sd_fidelity:.3f})"
          f" {r.mean_length:>9.1f} ({r.sd_length:.1f})")

with open("sweep.csv", "w", encoding="utf-8") as fh:
    fh.write(sweep_to_csv(rows))
print("\nwrote sweep.csv")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax1 = plt.subplots(figsize=(6, 3.5))
    ax2 = ax1.twinx()
    rates = [r.rate for r in rows]
    ax1.errorbar(rates, [r.mean_fidelity for r in rows],
                 yerr=[r.sd_fidelity for r in rows], color="tab:blue", label="fidelity")
    ax2.errorbar(rates, [r.mean_length for r in rows],
                 yerr=[r.sd_length for r in rows], color="tab:orange", label="length")
    ax1.set_xscale("log", base=2)
    ax1.set_xlabel("sampling rate")
    ax1.set_ylabel("test fidelity", color="tab:blue")
    ax2.set_ylabel("rule-list length", color="tab:orange")
    fig.tight_layout()
    fig.savefig("sweep.png", dpi=120)
    print("wrote sweep.png")
except ImportError:
    pass
