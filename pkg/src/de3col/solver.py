"""Self-adaptive DE/rand/1/bin over vertex weights.

Each individual carries its own scale factor ``F`` and crossover rate ``CR``
together with a mutation strength for each. Before an individual produces a
trial, both control parameters are perturbed with the uncorrelated
log-normal scheme from evolution strategies; the trial is built with the new
values and inherits them if it survives selection.

Generations are synchronous: donors are drawn from the current generation
and accepted trials become visible in the next one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import decode as _decode
from .decode import Coloring
from .graph import Graph

__all__ = [
    "ConfigError",
    "SolverConfig",
    "Genotype",
    "Population",
    "RunResult",
    "learning_rates",
    "adapt_control",
    "mutate_control_params",
    "init_population",
    "differential_mutation",
    "differential_crossover",
    "differential_selection",
    "solve",
]

F_RANGE = (0.1, 1.0)
CR_RANGE = (0.0, 1.0)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    np: int = 15
    fes_max: int = 300_000
    p_ls: float = 0.02
    sigma_init: float = 30.0
    b_lower: float = 0.0
    b_upper: float = 1.0
    eps0: float = 1e-3
    seed: int = 0
    ls_enabled: bool = True

    def __post_init__(self):
        if self.np < 4:
            raise ConfigError(f"population size must be at least 4, got {self.np}")
        if self.fes_max < self.np:
            raise ConfigError(
                f"evaluation budget {self.fes_max} is smaller than the population size {self.np}"
            )
        if not 0.0 <= self.p_ls <= 1.0:
            raise ConfigError(f"p_ls must lie in [0, 1], got {self.p_ls}")
        if not self.b_lower < self.b_upper:
            raise ConfigError("weight bounds need b_lower < b_upper")
        if not self.eps0 > 0:
            raise ConfigError("eps0 must be positive")
        if not self.sigma_init > 0:
            raise ConfigError("sigma_init must be positive")


@dataclass(frozen=True, eq=False)
class Genotype:
    w: np.ndarray
    F: float
    sigma0: float
    CR: float
    sigma1: float

    def __eq__(self, other):
        if not isinstance(other, Genotype):
            return NotImplemented
        return (
            np.array_equal(self.w, other.w)
            and (self.F, self.sigma0, self.CR, self.sigma1)
            == (other.F, other.sigma0, other.CR, other.sigma1)
        )

    __hash__ = None


@dataclass
class Population:
    """Column-wise storage of ``NP`` genotypes plus cached penalties."""

    w: np.ndarray
    F: np.ndarray
    sigma0: np.ndarray
    CR: np.ndarray
    sigma1: np.ndarray
    fitness: np.ndarray
    b_lower: float = 0.0
    b_upper: float = 1.0
    evals_used: int = 0
    best_coloring: Coloring | None = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return len(self.fitness)

    @property
    def best(self) -> int:
        return int(np.argmin(self.fitness))

    def member(self, i: int) -> Genotype:
        return Genotype(
            self.w[i].copy(), float(self.F[i]), float(self.sigma0[i]),
            float(self.CR[i]), float(self.sigma1[i]),
        )

    def put(self, i: int, geno: Genotype, fitness: int):
        self.w[i] = geno.w
        self.F[i] = geno.F
        self.sigma0[i] = geno.sigma0
        self.CR[i] = geno.CR
        self.sigma1[i] = geno.sigma1
        self.fitness[i] = fitness

    def copy(self) -> "Population":
        return replace(
            self, w=self.w.copy(), F=self.F.copy(), sigma0=self.sigma0.copy(),
            CR=self.CR.copy(), sigma1=self.sigma1.copy(), fitness=self.fitness.copy(),
        )


@dataclass
class RunResult:
    success: bool
    evals: int
    best_penalty: int
    trace: np.ndarray  # rows of (evals, best penalty, mean penalty)
    seed: int
    best_coloring: Coloring | None = field(default=None, repr=False, compare=False)


def learning_rates(n: int) -> tuple[float, float]:
    """``(tau, tau_prime)`` for dimension ``n``."""
    return 1.0 / math.sqrt(2.0 * math.sqrt(n)), 1.0 / math.sqrt(2.0 * n)


def adapt_control(F, sigma0, CR, sigma1, z, tau, tau_prime, eps0=1e-3):
    """Deterministic core of the control-parameter update.

    ``z[..., :5]`` holds standard normal draws: the global draw shared by
    both strengths, then the individual draws for ``sigma0``, ``F``,
    ``sigma1`` and ``CR`` in that order. Works elementwise on arrays.
    Returns ``(F, sigma0, CR, sigma1)``.
    """
    z = np.asarray(z, dtype=np.float64)
    g, z_s0, z_f, z_s1, z_cr = (z[..., k] for k in range(5))
    s0 = sigma0 * np.exp(tau_prime * g + tau * z_s0)
    F_new = F + s0 * z_f
    s1 = sigma1 * np.exp(tau_prime * g + tau * z_s1)
    CR_new = CR + s1 * z_cr
    # floors first, then the range clamps on the parameters themselves
    s0 = np.maximum(s0, eps0)
    s1 = np.maximum(s1, eps0)
    F_new = np.clip(F_new, *F_RANGE)
    CR_new = np.clip(CR_new, *CR_RANGE)
    return F_new, s0, CR_new, s1


def mutate_control_params(ind: Genotype, n: int, rng: np.random.Generator, eps0: float = 1e-3) -> Genotype:
    tau, tau_prime = learning_rates(n)
    F, s0, CR, s1 = adapt_control(ind.F, ind.sigma0, ind.CR, ind.sigma1, rng.standard_normal(5),
                                  tau, tau_prime, eps0)
    return Genotype(ind.w, float(F), float(s0), float(CR), float(s1))


def init_population(g: Graph, cfg: SolverConfig, rng: np.random.Generator) -> Population:
    """Random weights in the bounds, ``F``/``CR`` uniform in their ranges.

    Every member is decoded and scored, so ``evals_used == cfg.np``.
    """
    size, n = cfg.np, g.n
    w = rng.random((size, n)) * (cfg.b_upper - cfg.b_lower) + cfg.b_lower
    F = rng.uniform(*F_RANGE, size=size)
    CR = rng.uniform(*CR_RANGE, size=size)
    pop = Population(
        w=w, F=F, sigma0=np.full(size, cfg.sigma_init), CR=CR,
        sigma1=np.full(size, cfg.sigma_init), fitness=np.zeros(size, dtype=np.int64),
        b_lower=cfg.b_lower, b_upper=cfg.b_upper,
    )
    best = None
    for i in range(size):
        coloring, f = _decode.evaluate(g, w[i])
        pop.fitness[i] = f
        pop.evals_used += 1
        if best is None or f < best:
            best = f
            pop.best_coloring = coloring
    return pop


def _donors(size: int, targets: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    # random keys with the target masked out; the three smallest keys give a
    # uniform draw of three distinct donors per row
    keys = rng.random((len(targets), size))
    keys[np.arange(len(targets)), targets] = np.inf
    return np.argsort(keys, axis=1)[:, :3]


def _mutants(pop: Population, targets: np.ndarray, F: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    if pop.size < 4:
        raise ConfigError("need at least 4 members for DE/rand/1")
    r = _donors(pop.size, targets, rng)
    u = pop.w[r[:, 0]] + np.asarray(F)[:, None] * (pop.w[r[:, 1]] - pop.w[r[:, 2]])
    return np.clip(u, pop.b_lower, pop.b_upper, out=u)


def _crossover(target: np.ndarray, mutant: np.ndarray, CR: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    k, n = target.shape
    j_rand = rng.integers(n, size=k)
    take = rng.random((k, n)) <= np.asarray(CR)[:, None]
    take[np.arange(k), j_rand] = True
    return np.where(take, mutant, target)


def differential_mutation(pop: Population, i: int, F: float, rng: np.random.Generator) -> np.ndarray:
    """``w[r0] + F * (w[r1] - w[r2])`` with distinct donors ``!= i``, clipped to the bounds."""
    return _mutants(pop, np.array([i]), np.array([F]), rng)[0]


def differential_crossover(target, mutant, CR: float, rng: np.random.Generator) -> np.ndarray:
    """Binomial crossover; coordinate ``j_rand`` always comes from the mutant."""
    target = np.asarray(target, dtype=np.float64)
    mutant = np.asarray(mutant, dtype=np.float64)
    if target.shape != mutant.shape or target.ndim != 1:
        raise ValueError("target and mutant must be vectors of equal length")
    return _crossover(target[None], mutant[None], np.array([CR]), rng)[0]


def differential_selection(pop: Population, i: int, trial: Genotype, trial_fitness: int,
                           coloring: Coloring | None = None) -> bool:
    """Replace member ``i`` when the trial is no worse. Returns whether it did."""
    current = pop.fitness[i]
    if trial_fitness > current:
        return False
    if coloring is not None and trial_fitness < current and trial_fitness < pop.fitness.min():
        pop.best_coloring = coloring
    pop.put(i, trial, trial_fitness)
    return True


def _next_trials(pop: Population, n: int, eps0: float, rng: np.random.Generator):
    """All trials of one generation, built from the current population.

    Returns the trial weight matrix and the four adapted control arrays.
    """
    tau, tau_prime = learning_rates(n)
    z = rng.standard_normal((pop.size, 5))
    F, s0, CR, s1 = adapt_control(pop.F, pop.sigma0, pop.CR, pop.sigma1, z, tau, tau_prime, eps0)
    mutants = _mutants(pop, np.arange(pop.size), F, rng)
    return _crossover(pop.w, mutants, CR, rng), F, s0, CR, s1


def solve(g: Graph, cfg: SolverConfig | None = None, **overrides) -> RunResult:
    """Run the hybrid self-adaptive DE until a proper 3-coloring or budget exhaustion.

    Per generation, every member gets new control parameters, a mutant built
    with the new ``F``, a binomial crossover with the new ``CR``, one
    evaluation, local search with probability ``p_ls`` and then selection.
    Every decode-and-score counts as one evaluation, including the ones made
    inside local search. The trace gets a row after initialisation, after
    every generation and at termination.

    Keyword overrides are applied to ``cfg``, e.g. ``solve(g, seed=3)``.
    """
    from .localsearch import local_search

    cfg = cfg or SolverConfig()
    if overrides:
        cfg = replace(cfg, **overrides)
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    n = g.n
    pop = init_population(g, cfg, rng)
    evals = pop.evals_used
    trace = [(evals, int(pop.fitness.min()), float(pop.fitness.mean()))]

    def finish(success: bool) -> RunResult:
        row = (evals, int(pop.fitness.min()), float(pop.fitness.mean()))
        if trace[-1] != row:
            trace.append(row)
        return RunResult(
            success=success, evals=evals, best_penalty=int(pop.fitness.min()),
            trace=np.array(trace, dtype=np.float64), seed=cfg.seed,
            best_coloring=pop.best_coloring,
        )

    if pop.fitness.min() == 0:
        return finish(True)

    while True:
        w, F, s0, CR, s1 = _next_trials(pop, n, cfg.eps0, rng)
        nxt = pop.copy()
        best = int(nxt.fitness.min())
        for i in range(pop.size):
            if evals >= cfg.fes_max:
                pop = nxt
                return finish(False)
            wi = w[i]
            coloring, f = _decode.evaluate(g, wi)
            evals += 1
            if cfg.ls_enabled and f > 0 and rng.random() < cfg.p_ls:
                trial = Genotype(wi, float(F[i]), float(s0[i]), float(CR[i]), float(s1[i]))
                trial, f, used, coloring = local_search(
                    g, trial, coloring, cfg.fes_max - evals, rng, current_penalty=f,
                )
                evals += used
                wi = trial.w
            # same rule as differential_selection, inlined for speed
            if f <= nxt.fitness[i]:
                if f < best:
                    best = f
                    nxt.best_coloring = coloring
                nxt.w[i] = wi
                nxt.F[i], nxt.sigma0[i], nxt.CR[i], nxt.sigma1[i] = F[i], s0[i], CR[i], s1[i]
                nxt.fitness[i] = f
            if f == 0:
                pop = nxt
                pop.evals_used = evals
                return finish(True)
        pop = nxt
        pop.evals_used = evals
        trace.append((evals, int(pop.fitness.min()), float(pop.fitness.mean())))
