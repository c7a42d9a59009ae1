# %% [markdown]
# # Random subjects and screening cut-offs
#
# Uniform random choosers give the benchmark distributions: a real subject
# whose score is below the 2.5th percentile of random scores is doing
# better than chance.

# %%
import numpy as np

from choicefit.metrics import subject_metrics
from choicefit.models import ALL_MODELS, ModelKind
from choicefit.simulation import SimConfig, calibrate, paper_domain, simulate_uniform

N = 2000  # the acceptance suite uses 10k and 100k

# %%
for forced in (True, False):
    kinds = (ModelKind.RATIONAL, ModelKind.UNDOMINATED) if forced else ALL_MODELS
    cal = calibrate(SimConfig(paper_domain(), N, forced, seed=1), kinds)
    print("forced" if forced else "non-forced")
    for name, c in cal.score_cutoffs().items():
        print(f"  {name:4s} min {c.minimum:3.0f}  2.5% {c.value:3.0f}")
    for name, c in cal.screen_cutoffs().items():
        print(f"  {name:28s} {c.value:.3f}")

# %% [markdown]
# Same seed, same subjects, whichever order they are generated in.

# %%
cfg = SimConfig(paper_domain(), 5, False, seed=42)
a = simulate_uniform(cfg)
b = simulate_uniform(cfg)
print(all(x.observations == y.observations for x, y in zip(a, b)))
m = subject_metrics(a[0])
print(m.deferral_count, round(m.avg_choice_proportion, 3), round(m.avg_chosen_position, 3))

# %%
sizes = np.array([[len(o.choice) for o in d.observations] for d in a])
print(sizes.mean(axis=1))
