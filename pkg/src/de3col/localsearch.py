"""Order local search: swap the first uncolored vertex with its most
saturated neighbour and keep the swap while it reduces the penalty.

Swaps are written back into the weights (Lamarckian), so an improvement
survives selection.
"""
from __future__ import annotations

from dataclasses import replace
from typing import Callable, NamedTuple

import numpy as np

from . import decode as _decode
from .decode import UNCOLORED, Coloring, weights_to_permutation
from .graph import Graph
from .solver import Genotype

__all__ = ["swap_step", "local_search", "LocalSearchResult"]


class LocalSearchResult(NamedTuple):
    genotype: Genotype
    penalty: int
    evals: int
    coloring: Coloring


def swap_step(g: Graph, geno: Genotype, coloring: Coloring, rng: np.random.Generator):
    """One 1-swap move, or ``None`` if every vertex is colored.

    Returns ``(new_genotype, (v, u))`` where ``v`` is the uncolored vertex
    earliest in the permutation and ``u`` its neighbour of highest final
    saturation degree (ties drawn uniformly from ``rng``).
    """
    uncolored = np.flatnonzero(coloring.color == UNCOLORED)
    if len(uncolored) == 0:
        return None
    perm = weights_to_permutation(geno.w, g.n)
    v = int(uncolored[np.argmin(perm.rank[uncolored])])
    nb = g.neighbors(v)
    if len(nb) == 0:
        return None
    sat = coloring.saturation[nb]
    top = nb[sat == sat.max()]
    u = int(top[0] if len(top) == 1 else top[rng.integers(len(top))])
    w = geno.w.copy()
    w[v], w[u] = w[u], w[v]
    return replace(geno, w=w), (v, u)


def local_search(
    g: Graph,
    geno: Genotype,
    coloring: Coloring,
    budget: int,
    rng: np.random.Generator,
    current_penalty: int | None = None,
    evaluate: Callable | None = None,
) -> LocalSearchResult:
    """Improve ``geno`` by repeated swap steps.

    ``coloring`` must be the decode of ``geno``. Each re-decode costs one
    evaluation; the loop stops at the first swap that does not strictly
    lower the penalty (that swap is undone), when nothing is uncolored, when
    ``budget`` is spent, or after ``n`` swaps.
    """
    evaluate = evaluate or _decode.evaluate
    best, best_col = geno, coloring
    best_pen = _decode.penalty(g, coloring) if current_penalty is None else int(current_penalty)
    used = 0
    for _ in range(g.n):
        if best_pen == 0 or used >= budget:
            break
        step = swap_step(g, best, best_col, rng)
        if step is None:
            break
        cand, _pair = step
        col, pen = evaluate(g, cand.w)
        used += 1
        if pen >= best_pen:
            break
        best, best_col, best_pen = cand, col, pen
    return LocalSearchResult(best, best_pen, used, best_col)
