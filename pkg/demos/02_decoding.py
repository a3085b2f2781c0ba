# %% [markdown]
# # From weights to a coloring
#
# A real vector is ranked into a vertex order. DSatur then colors greedily
# with at most three colors and leaves a vertex blank when all three are
# already taken around it. The objective is the number of blank vertices.

# %%
import numpy as np

from de3col.decode import dsatur_decode, evaluate, penalty, weights_to_permutation
from de3col.graph import generate

rng = np.random.default_rng(0)
g = generate("equipartite", 100, 0.06, 2)
w = rng.random(g.n)

perm = weights_to_permutation(w)
print("first vertices in order:", perm.order[:8])

coloring = dsatur_decode(g, perm)
print("uncolored:", coloring.uncolored_count, "penalty:", penalty(g, coloring))

# %% [markdown]
# The fused call does the same in one compiled pass.

# %%
c2, f = evaluate(g, w)
assert c2 == coloring and f == coloring.uncolored_count

# %%
scores = [evaluate(g, rng.random(g.n))[1] for _ in range(500)]
print("penalty over 500 random orders:", np.bincount(scores))
