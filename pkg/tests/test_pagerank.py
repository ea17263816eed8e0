import math

import numpy as np
import pytest

from gapbench import (
    ConvergenceError,
    GoogleOperator,
    get_element,
    inner_product,
    load_edge_list,
    power_method,
    scale_free_graph,
    uniform_random_graph,
    worst_case_graph,
)
from gapbench.pagerank import PageRankResult, iteration_bound
from oracles import dense_G, dense_P, dense_pagerank


def closed_form_worst_case(n, alpha):
    pi = np.full(n, (1 - alpha) / n)
    pi[0] = (alpha * (n // 2 - 1) + 1) / n
    pi[-1] = (alpha * (n - n // 2 - 1) + 1) / n
    return pi


def uniform_result(n):
    return PageRankResult(np.full(n, 1.0 / n), 0, 0.0, 1e-8, 0.85)


class TestPowerMethod:
    @pytest.mark.parametrize("alpha", [0.0, 0.3, 0.85, 0.99])
    def test_two_cycle_uniform(self, alpha):
        G = GoogleOperator.from_graph(load_edge_list("n 2\n0 1\n1 0"), alpha)
        r = power_method(G, 1e-10)
        assert np.allclose(r.pi, [0.5, 0.5], atol=1e-12)

    def test_worst_case_n4(self):
        r = power_method(GoogleOperator.from_graph(worst_case_graph(4), 0.85), 1e-10)
        assert np.allclose(r.pi, [0.4625, 0.0375, 0.0375, 0.4625], atol=1e-10)
        # closed form agrees with a dense eigen-solve of G pi = pi
        Gd = dense_G(dense_P(4, worst_case_graph(4).edges), 0.85)
        assert np.allclose(dense_pagerank(Gd), closed_form_worst_case(4, 0.85), atol=1e-12)

    @pytest.mark.parametrize("n", [2, 3, 9, 50, 257])
    @pytest.mark.parametrize("alpha", [0.5, 0.85, 0.99])
    def test_worst_case_closed_form(self, n, alpha):
        r = power_method(GoogleOperator.from_graph(worst_case_graph(n), alpha), 1e-12)
        assert np.allclose(r.pi, closed_form_worst_case(n, alpha), atol=1e-10, rtol=0)

    def test_iteration_bound_value(self):
        assert iteration_bound(0.85, 1e-8) == 116
        assert math.ceil(math.log(1e-8) / math.log(0.85)) + 2 == 116

    def test_bound_respected_alpha_085(self):
        for seed in range(5):
            r = power_method(GoogleOperator.from_graph(scale_free_graph(200, seed=seed), 0.85), 1e-8)
            assert r.iterations <= 116

    def test_result_invariants(self):
        G = GoogleOperator.from_graph(uniform_random_graph(40, 90, 3), 0.85)
        r = power_method(G, 1e-9)
        assert r.pi.min() >= 0
        assert abs(r.pi.sum() - 1) <= 1e-12
        assert r.residual <= r.epsilon
        assert r.converged and r.alpha == 0.85
        # fixed point within 2 epsilon
        assert np.abs(G.apply(r.pi) - r.pi).sum() <= 2 * r.epsilon

    def test_matches_dense_eigenvector(self):
        for seed in range(5):
            g = uniform_random_graph(60, 150, seed)
            G = GoogleOperator.from_graph(g, 0.85)
            r = power_method(G, 1e-13)
            ref = dense_pagerank(dense_G(dense_P(60, g.edges), 0.85))
            assert np.abs(r.pi - ref).sum() <= 1e-8

    def test_max_iter_exceeded(self):
        G = GoogleOperator.from_graph(uniform_random_graph(30, 60, 1), 0.99)
        with pytest.raises(ConvergenceError, match="residual") as exc:
            power_method(G, 1e-12, max_iter=5)
        partial = exc.value.result
        assert partial.iterations == 5 and not partial.converged
        assert partial.residual > 1e-12

    @pytest.mark.parametrize("eps", [0.0, -1.0])
    def test_bad_epsilon(self, eps):
        G = GoogleOperator.from_graph(worst_case_graph(4), 0.5)
        with pytest.raises(ValueError):
            power_method(G, eps)


class TestExtraction:
    def test_get_element_uniform(self):
        r = uniform_result(5)
        assert all(get_element(r, i) == pytest.approx(0.2) for i in range(5))

    def test_get_element_worst_case(self):
        r = power_method(GoogleOperator.from_graph(worst_case_graph(4), 0.85), 1e-12)
        assert get_element(r, 0) == pytest.approx(0.4625, abs=1e-10)

    @pytest.mark.parametrize("i", [4, -1, 100])
    def test_get_element_out_of_range(self, i):
        with pytest.raises(IndexError):
            get_element(uniform_result(4), i)

    def test_inner_product_uniform_self(self):
        assert inner_product(uniform_result(4), uniform_result(4)) == pytest.approx(0.25, abs=1e-15)

    def test_inner_product_with_uniform_is_one_over_n(self):
        r = power_method(GoogleOperator.from_graph(worst_case_graph(4), 0.85), 1e-12)
        assert inner_product(r, uniform_result(4)) == pytest.approx(0.25, abs=1e-12)

    def test_inner_product_worst_case_self(self):
        r = power_method(GoogleOperator.from_graph(worst_case_graph(4), 0.85), 1e-12)
        assert inner_product(r, r) == pytest.approx(2 * 0.4625**2 + 2 * 0.0375**2, abs=1e-10)
        # closed form: 2(0.4625)^2 + 2(0.0375)^2
        assert 2 * 0.4625**2 + 2 * 0.0375**2 == pytest.approx(0.430625, abs=1e-15)

    def test_inner_product_dimension_mismatch(self):
        with pytest.raises(ValueError):
            inner_product(uniform_result(3), uniform_result(4))
