# %% [markdown]
# # One solver run
#
# Self-adaptive DE searches the weight space. Each member carries its own
# F, CR and two mutation strengths, which evolve together with it.

# %%
import numpy as np

from de3col.bench import emit_trace
from de3col.graph import generate
from de3col.solver import SolverConfig, solve

g = generate("equipartite", 200, 0.04, 5)
result = solve(g, SolverConfig(seed=3))
print(f"success={result.success} evals={result.evals} best={result.best_penalty}")

# %% [markdown]
# The trace has one row per generation: evaluations so far, best and mean
# number of uncolored vertices.

# %%
for evals, best, mean in result.trace[:: max(1, len(result.trace) // 10)]:
    print(f"{int(evals):7d} {int(best):3d} {mean:7.2f}")

# %%
if result.success:
    color = result.best_coloring.color
    assert np.all(color[g.edge_u] != color[g.edge_v])
    print("coloring checked:", np.bincount(color)[1:])
print(emit_trace(result).decode().splitlines()[0])
