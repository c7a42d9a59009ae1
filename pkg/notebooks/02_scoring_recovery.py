# %% [markdown]
# # Distance scores and recovered preferences
#
# A dataset is scored against each model by counting how many observations
# would have to change for some admissible relation to explain all of them.

# %%
from choicefit.dataset import Dataset, Menu, Observation
from choicefit.models import ALL_MODELS, ModelInstance, ModelKind, best_model, distance_score, generate_dataset
from choicefit.relations import RelationClass, enumerate_relations, to_text
from choicefit.simulation import paper_domain

# %%
mc = paper_domain()
print(len(mc), "menus")
weak = enumerate_relations(RelationClass.WEAK_ORDER, 6)[1234]
print(to_text(weak))
d = generate_dataset(ModelInstance(ModelKind.RATIONAL, weak), mc, "rational")
res = distance_score(d, ModelKind.RATIONAL)
print(res.score, res.n_optimal, res.optimal_relations[0] == weak)

# %% [markdown]
# Corrupt a few observations and watch the score follow.

# %%
obs = list(d.observations)
for i in (0, 7, 21):
    o = obs[i]
    obs[i] = Observation(o.menu, o.menu.members - o.choice or o.menu.members)
noisy = Dataset("noisy", tuple(obs), forced=True, n=6)
b = best_model(noisy)
for k in ALL_MODELS:
    print(k.value, b.scores[k].score, b.scores[k].n_optimal)
print("best:", b.kind.value)

# %% [markdown]
# Deferral only makes sense for dominant choice: the incomplete preorder
# with A and B unranked predicts an empty choice at {A, B}.

# %%
A, B, C = range(3)
tiny = Dataset("defer", (
    Observation(Menu.of(A, B)),
    Observation(Menu.of(A, C), frozenset({A})),
    Observation(Menu.of(B, C), frozenset({B})),
))
for k in ALL_MODELS:
    r = distance_score(tiny, k)
    print(k.value, r.score, [x.pairs() for x in r.optimal_relations[:3]])
