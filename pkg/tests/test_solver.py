import math
from dataclasses import replace

import numpy as np
import pytest

from de3col import decode
from de3col.graph import complete_graph, cycle_graph, generate
from de3col.solver import (
    ConfigError,
    Genotype,
    Population,
    SolverConfig,
    _crossover,
    _donors,
    adapt_control,
    differential_crossover,
    differential_mutation,
    differential_selection,
    init_population,
    learning_rates,
    mutate_control_params,
    solve,
)


class PinnedNormals:
    """Stand-in random stream whose standard normals are fixed."""

    def __init__(self, values):
        self.values = np.asarray(values, dtype=float)

    def standard_normal(self, size):
        assert size == len(self.values)
        return self.values.copy()


def make_pop(w, fitness=None, b=(0.0, 1.0)):
    w = np.array(w, dtype=float)
    k = len(w)
    return Population(
        w=w, F=np.full(k, 0.5), sigma0=np.full(k, 0.1), CR=np.full(k, 0.5), sigma1=np.full(k, 0.1),
        fitness=np.array(fitness if fitness is not None else [5] * k, dtype=np.int64),
        b_lower=b[0], b_upper=b[1],
    )


# --- configuration ----------------------------------------------------------

@pytest.mark.parametrize(
    "kw",
    [dict(b_lower=1.0, b_upper=1.0), dict(np=3), dict(fes_max=10), dict(p_ls=1.5),
     dict(eps0=0.0), dict(sigma_init=0.0)],
)
def test_config_validation(kw):
    with pytest.raises(ConfigError):
        SolverConfig(**kw)


def test_default_config():
    cfg = SolverConfig()
    assert (cfg.np, cfg.fes_max, cfg.p_ls, cfg.sigma_init) == (15, 300_000, 0.02, 30.0)
    assert (cfg.b_lower, cfg.b_upper, cfg.eps0, cfg.ls_enabled) == (0.0, 1.0, 1e-3, True)


# --- initialisation -----------------------------------------------------------

def test_init_population_ranges_and_cache():
    g = generate("equipartite", 40, 0.1, 1)
    cfg = SolverConfig(np=20)
    pop = init_population(g, cfg, np.random.default_rng(3))
    assert pop.w.shape == (20, 40)
    assert ((pop.w >= 0) & (pop.w <= 1)).all()
    assert ((pop.F >= 0.1) & (pop.F <= 1.0)).all()
    assert ((pop.CR >= 0.0) & (pop.CR <= 1.0)).all()
    assert (pop.sigma0 == 30.0).all() and (pop.sigma1 == 30.0).all()
    assert pop.evals_used == 20
    for i in range(20):
        assert pop.fitness[i] == decode.evaluate(g, pop.w[i])[1]
    assert pop.best_coloring.uncolored_count == pop.fitness.min()


def test_init_population_respects_custom_bounds():
    g = cycle_graph(9)
    pop = init_population(g, SolverConfig(b_lower=-2.0, b_upper=3.0), np.random.default_rng(0))
    assert pop.w.min() >= -2.0 and pop.w.max() <= 3.0


def test_init_population_deterministic():
    g = generate("flat", 30, 0.1, 1)
    a = init_population(g, SolverConfig(), np.random.default_rng(9))
    b = init_population(g, SolverConfig(), np.random.default_rng(9))
    for name in ("w", "F", "sigma0", "CR", "sigma1", "fitness"):
        assert np.array_equal(getattr(a, name), getattr(b, name))


# --- self-adaptation --------------------------------------------------------------

def test_learning_rates():
    tau, tau_prime = learning_rates(100)
    assert tau == pytest.approx(1 / math.sqrt(20))
    assert tau_prime == pytest.approx(1 / math.sqrt(200))


def test_adapt_control_hand_values():
    # n = 16: tau = 1/sqrt(8), tau' = 1/sqrt(32); values computed at 30 digits
    tau, tau_prime = learning_rates(16)
    assert tau == pytest.approx(0.35355339059327376)
    assert tau_prime == pytest.approx(0.17677669529663688)
    ind = Genotype(np.zeros(16), F=0.5, sigma0=0.2, CR=0.6, sigma1=0.1)
    out = mutate_control_params(ind, 16, PinnedNormals([0.5, -1.0, 0.8, 0.3, -0.4]))
    assert out.sigma0 == pytest.approx(0.153415867698987535, rel=1e-12)
    assert out.F == pytest.approx(0.622732694159190028, rel=1e-12)
    assert out.sigma1 == pytest.approx(0.121464805094544136, rel=1e-12)
    assert out.CR == pytest.approx(0.551414077962182346, rel=1e-12)
    assert out.w is ind.w


def test_zero_draws_are_identity():
    ind = Genotype(np.ones(5), F=0.37, sigma0=0.25, CR=0.81, sigma1=2.0)
    assert mutate_control_params(ind, 5, PinnedNormals(np.zeros(5))) == ind


def test_sigma_floor():
    ind = Genotype(np.ones(5), F=0.5, sigma0=1e-6, CR=0.5, sigma1=1e-9)
    out = mutate_control_params(ind, 5, PinnedNormals(np.zeros(5)), eps0=1e-3)
    assert out.sigma0 == 1e-3 and out.sigma1 == 1e-3
    # a strongly negative draw pushes sigma under the floor too
    ind = Genotype(np.ones(5), F=0.5, sigma0=0.01, CR=0.5, sigma1=0.01)
    out = mutate_control_params(ind, 5, PinnedNormals([-40, 0, 0, 0, 0]), eps0=1e-3)
    assert out.sigma0 == 1e-3 and out.sigma1 == 1e-3


@pytest.mark.parametrize("zf,zcr,F,CR", [(10.0, 10.0, 1.0, 1.0), (-10.0, -10.0, 0.1, 0.0)])
def test_control_params_clamped(zf, zcr, F, CR):
    ind = Genotype(np.ones(5), F=0.5, sigma0=1.0, CR=0.5, sigma1=1.0)
    out = mutate_control_params(ind, 5, PinnedNormals([0, 0, zf, 0, zcr]))
    assert (out.F, out.CR) == (F, CR)


def test_control_params_stay_in_range_with_default_sigma():
    rng = np.random.default_rng(0)
    ind = Genotype(np.ones(50), F=0.5, sigma0=30.0, CR=0.5, sigma1=30.0)
    for _ in range(2000):
        ind = mutate_control_params(ind, 50, rng)
        assert 0.1 <= ind.F <= 1.0 and 0.0 <= ind.CR <= 1.0
        assert ind.sigma0 >= 1e-3 and ind.sigma1 >= 1e-3


def test_f_mean_monte_carlo():
    # small sigma so clamping never engages: E[F'] = F exactly
    k, sigma0 = 100_000, 0.01
    tau, tau_prime = learning_rates(100)
    z = np.random.default_rng(5).standard_normal((k, 5))
    F, s0, _, _ = adapt_control(np.full(k, 0.5), np.full(k, sigma0), np.full(k, 0.5), np.full(k, 0.01),
                                z, tau, tau_prime)
    assert F.min() > 0.1 and F.max() < 1.0
    assert abs(F.mean() - 0.5) <= 3 * (sigma0 / math.sqrt(k)) * 2


# --- DE operators -----------------------------------------------------------------

def test_donors_distinct_and_exclude_target():
    rng = np.random.default_rng(1)
    targets = np.repeat(np.arange(4), 2500)
    r = _donors(4, targets, rng)
    assert (r != targets[:, None]).all()
    assert (r[:, 0] != r[:, 1]).all() and (r[:, 0] != r[:, 2]).all() and (r[:, 1] != r[:, 2]).all()
    # with NP = 4 every ordering of the other three members is equally likely
    counts = np.unique(r[targets == 0], axis=0, return_counts=True)[1]
    assert len(counts) == 6 and counts.min() > 300


def test_mutation_zero_scale_copies_base_vector():
    pop = make_pop(np.random.default_rng(0).random((6, 10)))
    u = differential_mutation(pop, 2, 0.0, np.random.default_rng(4))
    matches = [k for k in range(6) if np.array_equal(pop.w[k], u)]
    assert len(matches) == 1 and matches[0] != 2


def test_mutation_zero_difference():
    base = np.random.default_rng(0).random(8)
    pop = make_pop([np.zeros(8)] + [base] * 4)
    for seed in range(20):
        assert np.array_equal(differential_mutation(pop, 0, 0.9, np.random.default_rng(seed)), base)


def test_mutation_clamps_against_unclamped_oracle():
    rows = [np.full(5, 0.3), np.ones(5), np.full(5, 0.9), np.full(5, 0.2), np.full(5, 0.5)]
    pop = make_pop(rows)
    for seed in range(30):
        r0, r1, r2 = _donors(5, np.array([0]), np.random.default_rng(seed))[0]
        raw = pop.w[r0] + 1.0 * (pop.w[r1] - pop.w[r2])
        u = differential_mutation(pop, 0, 1.0, np.random.default_rng(seed))
        assert np.array_equal(u, np.clip(raw, 0.0, 1.0))
        if r0 == 1 and pop.w[r1][0] > pop.w[r2][0]:
            assert (raw > 1).all() and (u == 1.0).all()


def test_crossover_full_rate():
    t, m = np.zeros(20), np.ones(20)
    assert np.array_equal(differential_crossover(t, m, 1.0, np.random.default_rng(0)), m)


def test_crossover_zero_rate_takes_one_coordinate():
    t, m = np.zeros(20), np.ones(20)
    for seed in range(20):
        z = differential_crossover(t, m, 0.0, np.random.default_rng(seed))
        assert z.sum() == 1


def test_crossover_length_mismatch():
    with pytest.raises(ValueError):
        differential_crossover(np.zeros(3), np.zeros(4), 0.5, np.random.default_rng(0))


def test_crossover_binomial_fraction():
    k, n, cr = 100_000, 100, 0.3
    z = _crossover(np.zeros((k, n)), np.ones((k, n)), np.full(k, cr), np.random.default_rng(11))
    frac = z.mean()
    expected = cr + (1 - cr) / n
    se = math.sqrt(expected * (1 - expected) / (k * n))
    assert abs(frac - expected) <= 3 * se


def test_selection_accepts_ties_and_rejects_worse():
    pop = make_pop(np.zeros((4, 3)), fitness=[3, 2, 5, 4])
    tie = Genotype(np.full(3, 0.7), 0.2, 0.1, 0.3, 0.1)
    assert differential_selection(pop, 0, tie, 3)
    assert np.array_equal(pop.w[0], tie.w) and pop.F[0] == 0.2 and pop.CR[0] == 0.3
    worse = Genotype(np.full(3, 0.9), 0.9, 0.1, 0.9, 0.1)
    assert not differential_selection(pop, 0, worse, 4)
    assert np.array_equal(pop.w[0], tie.w) and pop.fitness[0] == 3
    assert pop.best == 1
    assert differential_selection(pop, 2, worse, 1)
    assert pop.best == 2


# --- full runs ---------------------------------------------------------------------

def test_triangle_solved_by_initial_population():
    for seed in range(5):
        r = solve(complete_graph(3), SolverConfig(seed=seed))
        assert r.success and r.evals == 15 and r.best_penalty == 0
        assert r.trace[0, 0] == 15 and r.trace[-1, 1] == 0


def test_k4_exhausts_budget():
    r = solve(complete_graph(4), SolverConfig(fes_max=3000, seed=1))
    assert not r.success
    assert r.evals == 3000
    assert r.best_penalty == 1
    assert r.best_coloring.uncolored_count == 1


def test_budget_below_population_is_config_error():
    with pytest.raises(ConfigError):
        solve(complete_graph(3), SolverConfig(np=15, fes_max=14))


def test_keyword_overrides():
    r = solve(complete_graph(3), seed=4, np=6)
    assert r.seed == 4 and r.evals == 6


def test_best_penalty_monotone_and_trace_shape():
    for seed in range(100):
        g = generate("equipartite", 30 + seed % 20, 0.25, seed)
        r = solve(g, SolverConfig(fes_max=600, seed=seed, p_ls=0.3))
        evals, best, mean = r.trace.T
        assert evals[0] == 15
        assert (np.diff(evals) >= 0).all()
        assert (np.diff(best) <= 0).all()
        assert (mean >= best).all()
        assert r.best_penalty == best[-1] and r.evals == evals[-1] <= 600
        assert r.success == (r.best_penalty == 0)
        if r.success:
            assert r.best_coloring.uncolored_count == 0


def test_reproducible_without_local_search():
    g = generate("uniform", 80, 0.07, 3)
    cfg = SolverConfig(fes_max=4000, seed=21, ls_enabled=False)
    a, b = solve(g, cfg), solve(g, cfg)
    assert (a.success, a.evals, a.best_penalty) == (b.success, b.evals, b.best_penalty)
    assert np.array_equal(a.trace, b.trace)
    assert a.best_coloring == b.best_coloring


def test_reproducible_with_local_search():
    g = generate("flat", 80, 0.07, 3)
    cfg = SolverConfig(fes_max=4000, seed=2, p_ls=0.5)
    assert np.array_equal(solve(g, cfg).trace, solve(g, cfg).trace)


def test_evaluations_counted_exactly(monkeypatch):
    calls = []
    real = decode.evaluate

    def counting(g, w):
        calls.append(1)
        return real(g, w)

    monkeypatch.setattr(decode, "evaluate", counting)
    g = generate("equipartite", 60, 0.09, 2)
    for seed in range(10):
        calls.clear()
        r = solve(g, SolverConfig(fes_max=1500, seed=seed, p_ls=0.5))
        assert len(calls) == r.evals <= 1500


def test_easy_region_pilot():
    g = generate("equipartite", 60, 0.02, 5)
    cfg = SolverConfig()
    results = [solve(g, replace(cfg, seed=s)) for s in range(25)]
    assert all(r.success for r in results)
