# %% [markdown]
# # Does the local search help?
#
# The same graphs and the same run seeds are solved with and without the
# swap-based local search. The swap moves the first uncolored vertex to
# the slot of its most saturated neighbour.

# %%
from de3col import bench
from de3col.solver import SolverConfig

ab = bench.ablation("equipartite", 200, [0.035, 0.04, 0.045], SolverConfig(), runs=10, gen_seed=5)
print(bench.emit_ablation_csv(ab).decode())

# %%
avg = ab.averages()
print(f"mean SR without LS {avg['SR_none']:.3f}, with LS {avg['SR_ls']:.3f}")
