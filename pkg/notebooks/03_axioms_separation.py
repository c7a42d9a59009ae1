# %% [markdown]
# # Revealed preference, axioms and separating indifference from indecision
#
# Two hand-built subjects: one close to undominated choice, one that fits
# dominant choice exactly.

# %%
from pathlib import Path

from choicefit.dataset import parse_csv
from choicefit.graph import to_dot
from choicefit.models import ModelKind, distance_score
from choicefit.revealed import check_axioms, rationalize_dominant
from choicefit.separation import separate_dominant, separate_eliaz_ok, summarize

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"
uc = parse_csv(DATA / "uc_subject.csv")[0]
dc = parse_csv(DATA / "dc_subject.csv")[0]

# %%
for name, rep in check_axioms(dc).items():
    print(f"{name:24s} {'holds' if rep.holds else 'fails'}", rep.describe_witnesses()[:2])

# %%
res = rationalize_dominant(dc)
print(res.ok)
print(to_dot(res.relation, name="dc_subject"))

# %% [markdown]
# Pairs never chosen in each other's presence are indecisive; pairs always
# chosen or rejected together are indifferent.

# %%
pairs = separate_dominant(dc)
print(summarize(pairs))
print([p.pair_label for p in pairs if p.status.value == "indifferent"])

# %% [markdown]
# For the other subject the best undominated-choice relation misses five
# observations.  Indifference is then read off the explained observations.

# %%
fit = distance_score(uc, ModelKind.UNDOMINATED)
print(fit.score, fit.n_optimal)
sep = separate_eliaz_ok(uc, fit.optimal_relations[0])
print("regular:", sep.regular, "unexplained:", sep.unexplained)
print(summarize(sep.pairs))
print(to_dot(sep.preorder, name="uc_subject_weak"))
