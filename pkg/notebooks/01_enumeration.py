# %% [markdown]
# # Enumerating preference relations
#
# Every model is fitted by trying every admissible relation, so the first
# thing to look at is how many there are and what they look like.

# %%
import time

import numpy as np

from choicefit.relations import (
    BinaryRelation, RelationClass, classify, count_relations, enumerate_relations, parts, to_text,
    transitive_closure, transitive_reduction,
)

# %%
t = time.perf_counter()
for cls in RelationClass:
    print(f"{cls.value:22s}", [count_relations(cls, n) for n in range(1, 7)])
print(f"{time.perf_counter() - t:.1f}s")

# %% [markdown]
# Weak orders on three items, in the canonical order used everywhere
# (lexicographic on the flattened matrix).

# %%
for r in enumerate_relations(RelationClass.WEAK_ORDER, 3)[:5]:
    print(to_text(r).replace("\n", " | "))

# %% [markdown]
# A preorder splits into a strict part, an indifference part and an
# incomparability part.

# %%
A, B, C, D = range(4)
pre = transitive_closure(BinaryRelation.from_pairs(4, [(A, B), (B, A), (A, C)]).with_diagonal())
strict, ind, inc = parts(pre)
print(classify(pre))
print("strict", strict.pairs())
print("indifferent", ind.pairs())
print("incomparable", inc.pairs())

# %%
# closure and reduction undo each other on strict partial orders
chain = BinaryRelation.from_pairs(4, [(A, B), (B, C), (C, D)])
full = transitive_closure(chain)
print(full.pairs())
print(transitive_reduction(full) == chain)
print(to_text(full))

# %%
arr = np.asarray(enumerate_relations(RelationClass.STRICT_PARTIAL_ORDER, 4)[-1].matrix)
print(arr.astype(int))
