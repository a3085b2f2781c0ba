# %% [markdown]
# # Sweeping the edge density
#
# Sparse graphs are easy and dense ones are easy too, since dense planted
# partitions are strongly constrained. The hard region sits near average
# degree 7 to 9. Success rate (SR) and evaluations per success (AES) show it.

# %%
from de3col import bench
from de3col.solver import SolverConfig

ps = [0.01, 0.02, 0.03, 0.035, 0.04, 0.05, 0.06]
report = bench.sweep("equipartite", 200, ps, SolverConfig(), runs=10, gen_seed=5)
for row in report.rows:
    print(f"p={row.p:<6g} SR={row.SR:.2f} AES={row.AES or float('nan'):9.1f}")

# %%
print(bench.emit_csv(report).decode())
