import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from neurise.errors import InvalidInputError
from neurise.grise import (Constrained, GriseProblem, Penalized, SolverSettings, default_penalty,
                           grise_fit, grise_fit_all, iso_gradient, iso_value, project_l1_ball, read_solution,
                           soft_threshold, write_solution)
from neurise.model import Alphabet, BasisTerm, PartialBasis, SampleSet, build_partial_basis, gen_er_pairwise
from neurise.neural import finite_difference_gradient, relative_error
from neurise.sampling import exact_distribution, exact_sample


def _problem(p=5, L=2, u=1, n=300, seed=0):
    rng = np.random.default_rng(seed)
    samples = SampleSet(p, Alphabet(2), rng.integers(0, 2, size=(n, p)))
    return GriseProblem.from_samples(build_partial_basis(p, 2, L, u), samples), samples


def naive_iso(basis, data, theta):
    total = 0.0
    for row in data:
        s = 0.0
        for k, t in enumerate(basis.terms):
            s += theta[k] * np.prod([1 - 2 * row[i] for i in t.sites])
        total += math.exp(-s)
    return total / len(data)


class TestIsoValue:
    def test_zero_theta(self):
        prob, _ = _problem()
        assert iso_value(prob, np.zeros(prob.n_terms)) == pytest.approx(1.0, abs=1e-12)

    def test_single_term(self):
        basis = PartialBasis(0, 2, 2, (BasisTerm((0, 1)),))
        prob = GriseProblem.from_samples(basis, SampleSet(2, Alphabet(2), [[0, 0]]))
        assert iso_value(prob, [1.0]) == pytest.approx(math.exp(-1), abs=1e-12)
        assert iso_value(prob, [1.0]) == pytest.approx(0.36788, abs=1e-5)

    def test_matches_naive_loops(self):
        prob, samples = _problem(p=5, L=3)
        theta = np.random.default_rng(3).normal(size=prob.n_terms)
        assert abs(iso_value(prob, theta) - naive_iso(prob.basis, samples.data, theta)) < 1e-12

    def test_length_mismatch(self):
        prob, _ = _problem()
        with pytest.raises(InvalidInputError):
            iso_value(prob, np.zeros(prob.n_terms + 1))

    def test_streaming_matches_cached(self):
        basis = build_partial_basis(6, 2, 3, 2)
        rows = np.random.default_rng(0).integers(0, 2, size=(9000, 6))
        w = np.ones(len(rows))
        a = GriseProblem(basis, rows, w)
        b = GriseProblem(basis, rows, w, max_cache=10)
        assert a.cached and not b.cached
        theta = np.random.default_rng(1).normal(scale=0.3, size=len(basis))
        assert iso_value(a, theta) == pytest.approx(iso_value(b, theta), rel=1e-12)
        np.testing.assert_allclose(iso_gradient(a, theta), iso_gradient(b, theta), rtol=1e-11, atol=1e-14)

    def test_cached_design_spot_check(self):
        prob, _ = _problem(p=6, L=3)
        g = prob.design()
        for r, k in [(0, 0), (3, 5), (7, len(prob.basis) - 1)]:
            assert g[r, k] == prob.basis.terms[k].values(prob.configs[[r]], 2)[0]


class TestIsoGradient:
    def test_plug_in(self):
        basis = PartialBasis(0, 3, 2, (BasisTerm((0, 1)), BasisTerm((0, 2))))
        prob = GriseProblem.from_samples(basis, SampleSet(3, Alphabet(2), [[0, 0, 1]]))
        np.testing.assert_allclose(iso_gradient(prob, [0.0, 0.0]), [-1.0, 1.0])

    @pytest.mark.parametrize("seed", range(5))
    def test_finite_differences(self, seed):
        prob, _ = _problem(p=6, L=3, seed=seed)
        theta = np.random.default_rng(seed).normal(scale=0.5, size=prob.n_terms)
        fd = finite_difference_gradient(lambda t: iso_value(prob, t), theta, h=1e-5)
        assert relative_error(iso_gradient(prob, theta), fd) < 1e-6

    def test_population_gradient_zero_at_truth(self):
        model = gen_er_pairwise(6, 0.6, (-1, 1), seed=5)
        dist = exact_distribution(model, 6, 2)
        for u in range(6):
            basis = build_partial_basis(6, 2, 2, u)
            truth = {t.sites: t.strength for t in model.terms}
            theta = np.array([truth.get(t.sites, 0.0) for t in basis.terms])
            prob = GriseProblem.from_distribution(basis, dist)
            assert np.max(np.abs(iso_gradient(prob, theta))) < 1e-8


@given(st.lists(st.floats(-5, 5), min_size=3, max_size=3), st.floats(0.1, 4))
@settings(max_examples=60, deadline=None)
def test_l1_projection_is_nearest_feasible(v, radius):
    v = np.array(v)
    x = project_l1_ball(v, radius)
    assert np.abs(x).sum() <= radius + 1e-9
    grid = np.linspace(-radius, radius, 41)
    pts = np.array(list(itertools.product(grid, repeat=3)))
    pts = pts[np.abs(pts).sum(axis=1) <= radius + 1e-12]
    best = np.min(np.linalg.norm(pts - v, axis=1))
    assert np.linalg.norm(x - v) <= best + 1e-9


@given(seed=st.integers(0, 10_000), alpha=st.floats(0, 1))
@settings(max_examples=30, deadline=None)
def test_iso_convex_along_segments(seed, alpha):
    prob, _ = _problem(p=5, L=2, n=50, seed=seed % 7)
    rng = np.random.default_rng(seed)
    t1, t2 = rng.normal(size=(2, prob.n_terms))
    mid = iso_value(prob, alpha * t1 + (1 - alpha) * t2)
    assert mid <= alpha * iso_value(prob, t1) + (1 - alpha) * iso_value(prob, t2) + 1e-10


def test_soft_threshold():
    assert soft_threshold(0.5, 0.2) == pytest.approx(0.3)
    np.testing.assert_allclose(soft_threshold(np.array([-1.0, 0.1, 0.0]), 0.2), [-0.8, 0.0, 0.0])


class TestGriseFit:
    def test_degenerate_constraint_binds(self):
        basis = build_partial_basis(4, 2, 2, 0)
        prob = GriseProblem.from_samples(basis, SampleSet(4, Alphabet(2), np.zeros((20, 4), dtype=int)))
        sol = grise_fit(prob, Constrained(2.0))
        assert sol.converged
        assert abs(np.abs(sol.theta).sum() - 2.0) < 1e-6

    def test_constrained_feasible(self):
        prob, _ = _problem(p=6, L=3, seed=2)
        sol = grise_fit(prob, Constrained(0.3))
        assert np.abs(sol.theta).sum() <= 0.3 + 1e-8

    def test_penalized_vs_unconstrained(self):
        model = gen_er_pairwise(5, 0.7, (-0.5, 0.5), seed=1)
        samples = exact_sample(exact_distribution(model, 5, 2), 20_000, seed=2)
        basis = build_partial_basis(5, 2, 2, 2)
        prob = GriseProblem.from_samples(basis, samples)
        a = grise_fit(prob, Penalized(0.0), SolverSettings(tol=1e-9))
        b = grise_fit(prob, Constrained(1e3), SolverSettings(tol=1e-9))
        assert a.converged and b.converged
        assert np.max(np.abs(a.theta - b.theta)) < 1e-4

    def test_objective_non_increasing(self):
        prob, _ = _problem(p=6, L=3, n=200, seed=4)
        values = []
        for it in (1, 2, 5, 10, 40, 200):
            sol = grise_fit(prob, Penalized(0.01), SolverSettings(max_iter=it))
            values.append(sol.objective)
        assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))

    def test_nonconvergence_reported(self):
        prob, _ = _problem(p=6, L=3, seed=4)
        sol = grise_fit(prob, Penalized(0.0), SolverSettings(max_iter=3))
        assert not sol.converged and sol.iterations == 3

    def test_bad_modes(self):
        prob, _ = _problem()
        with pytest.raises(InvalidInputError):
            grise_fit(prob, Constrained(0.0))
        with pytest.raises(InvalidInputError):
            grise_fit(prob, Penalized(-1.0))

    def test_recovery_improves_with_n(self):
        model = gen_er_pairwise(8, 0.45, (-0.7, 0.7), seed=3)
        dist = exact_distribution(model, 8, 2)
        truth = {t.sites: t.strength for t in model.terms}
        errors = []
        for n in (1_000, 10_000, 100_000):
            samples = exact_sample(dist, n, seed=7)
            sols = grise_fit_all(samples, 2)
            err = max(abs(th - truth.get(t.sites, 0.0)) for s in sols for th, t in zip(s.theta, s.basis.terms))
            errors.append(err)
        assert errors[0] >= errors[1] >= errors[2]
        assert errors[2] < 0.1

    def test_solution_round_trip(self, tmp_path):
        prob, _ = _problem()
        sol = grise_fit(prob, Penalized(0.01))
        write_solution(sol, tmp_path / "s.json")
        back = read_solution(tmp_path / "s.json")
        np.testing.assert_array_equal(back.theta, sol.theta)
        assert back.basis == sol.basis and back.converged == sol.converged


def test_default_penalty():
    assert default_penalty(8, 100_000) == pytest.approx(math.sqrt(math.log(8) / 1e5))
