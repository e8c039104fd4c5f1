import itertools

import numpy as np
import pytest
from scipy.optimize import linprog

from factories import nondegenerate, random_connected_graph, random_metric, random_tree
from src.curvature.forman import (
    TwoCellComplex,
    forman_cell_edge,
    forman_classic_edge,
    forman_curvature,
    forman_edge,
    laplacian_apply,
    laplacian_matrix,
)
from src.curvature.lin_lu_yau import (
    ProbabilityKernel,
    default_epsilon,
    kernel,
    lly_curvature,
    lly_edge,
    lly_limit_estimate,
    lly_potential,
    wasserstein,
)
from src.curvature.vector import CurvatureKind
from src.exceptions import (
    DegenerateMetricError,
    EpsilonTooLargeError,
    InvalidGraphError,
    InvalidKernelError,
)
from src.graph.measured_graph import MetricAssignment
from src.graph.surgery import distances_from
from src.graph.utils import GraphFamily, MeasureMode, build_named_graph


class TestLaplacian:
    def test_constant_function(self, rng):
        g = random_connected_graph(rng, 6, 3)
        f = {x: 2.5 for x in g.vertex_ids}
        for x in g.vertex_ids:
            assert laplacian_apply(g, f, x) == pytest.approx(0.0, abs=1e-12)

    def test_linear_function_on_path(self, p3):
        assert laplacian_apply(p3, {0: 0.0, 1: 1.0, 2: 2.0}, 1) == 0.0

    def test_leaf_indicator_at_star_center(self, k13):
        f = {0: 0.0, 1: 1.0, 2: 0.0, 3: 0.0}
        assert laplacian_apply(k13, f, 0) == 1.0

    def test_matrix_matches_pointwise(self, rng):
        g = random_connected_graph(rng, 5, 3)
        f = {x: float(rng.normal()) for x in g.vertex_ids}
        values = laplacian_matrix(g) @ np.array([f[x] for x in g.vertex_ids])
        for i, x in enumerate(g.vertex_ids):
            assert values[i] == pytest.approx(laplacian_apply(g, f, x))


class TestForman:
    def test_uniform_path(self):
        g = build_named_graph(GraphFamily.PATH, 4)
        omega = MetricAssignment.uniform(g)
        assert forman_edge(g, omega, 1) == 0.0
        assert forman_edge(g, omega, 0) == 1.0

    def test_uniform_star(self, k13):
        kappa = forman_curvature(k13, MetricAssignment.uniform(k13))
        assert kappa.kind == CurvatureKind.FORMAN
        assert np.array_equal(kappa.values, np.zeros(3))

    def test_unit_weights_give_combinatorial_formula(self, rng):
        g = random_connected_graph(rng, 8, 6, weighted=False)
        omega = MetricAssignment.uniform(g)
        for i, (u, v) in enumerate(g.edges):
            assert forman_edge(g, omega, i) == 4 - g.degree(u) - g.degree(v)

    def test_scaling_invariance(self, rng):
        g = random_connected_graph(rng, 6, 4)
        omega = random_metric(rng, g)
        assert np.allclose(
            forman_curvature(g, omega).values,
            forman_curvature(g, omega.scaled(7.5)).values,
        )

    def test_classic_form_with_unit_weights(self, rng):
        g = random_connected_graph(rng, 7, 5, weighted=False)
        w1 = {x: 1.0 for x in g.vertex_ids}
        w2 = np.ones(g.num_edges)
        for i, (u, v) in enumerate(g.edges):
            assert forman_classic_edge(g, w1, w2, i) == pytest.approx(
                4 - g.degree(u) - g.degree(v)
            )


class TestTwoCellComplex:
    def test_no_cells_matches_graph_formula(self, rng):
        g = random_connected_graph(rng, 6, 4)
        omega = random_metric(rng, g)
        complex_ = TwoCellComplex(g)
        for i in range(g.num_edges):
            assert forman_cell_edge(complex_, omega, i) == pytest.approx(
                forman_edge(g, omega, i), abs=1e-12
            )

    @pytest.mark.parametrize("m3, expected", [(1.0, 3.0), (3.0, 1.0)])
    def test_filled_triangle(self, triangle, m3, expected):
        complex_ = TwoCellComplex(triangle, [((0, 1, 2), m3)])
        omega = MetricAssignment.uniform(triangle)
        for i in range(3):
            assert forman_cell_edge(complex_, omega, i) == pytest.approx(expected)

    def test_rejects_non_edge_cycle(self, p3):
        with pytest.raises(InvalidGraphError):
            TwoCellComplex(p3, [((0, 1, 2), 1.0)])

    def test_rejects_duplicate_cell(self, triangle):
        with pytest.raises(InvalidGraphError):
            TwoCellComplex(triangle, [((0, 1, 2), 1.0), ((1, 0, 2), 2.0)])

    def test_rejects_short_cycle(self, triangle):
        with pytest.raises(InvalidGraphError):
            TwoCellComplex(triangle, [((0, 1), 1.0)])


class TestKernel:
    def test_path_interior(self, p3):
        mu = kernel(p3, 1, 0.25)
        assert mu.masses[1] == 0.5
        assert mu.masses[0] == mu.masses[2] == 0.25

    def test_tiny_epsilon_is_almost_a_point_mass(self, k13):
        assert kernel(k13, 0, 1e-12).masses[0] == pytest.approx(1.0)

    def test_normalized_measure_self_mass(self, normalized_k13):
        for x in normalized_k13.vertex_ids:
            assert kernel(normalized_k13, x, 0.5).masses[x] == pytest.approx(0.5)

    def test_masses_form_a_distribution(self, rng):
        g = random_connected_graph(rng, 7, 4)
        epsilon = default_epsilon(g)
        for x in g.vertex_ids:
            masses = np.array(list(kernel(g, x, epsilon).masses.values()))
            assert masses.sum() == pytest.approx(1.0, abs=1e-12)
            assert np.all((masses >= 0.0) & (masses <= 1.0))

    def test_epsilon_too_large(self, k13):
        with pytest.raises(EpsilonTooLargeError):
            kernel(k13, 0, 1.0 / 3.0)
        with pytest.raises(EpsilonTooLargeError):
            kernel(k13, 0, 0.0)

    def test_invalid_masses(self):
        with pytest.raises(InvalidKernelError):
            ProbabilityKernel(0, 0.1, {0: 0.5, 1: 0.4})
        with pytest.raises(InvalidKernelError):
            ProbabilityKernel(0, 0.1, {0: 1.5, 1: -0.5})


class TestWasserstein:
    def test_identical_kernels(self, triangle):
        omega = MetricAssignment.uniform(triangle)
        mu = kernel(triangle, 0, 0.1)
        assert wasserstein(triangle, omega, mu, mu) == pytest.approx(0.0, abs=1e-12)

    def test_point_masses(self, p3):
        omega = MetricAssignment([1.0, 2.0])
        mu = ProbabilityKernel(0, 0.1, {0: 1.0, 1: 0.0, 2: 0.0})
        nu = ProbabilityKernel(2, 0.1, {0: 0.0, 1: 0.0, 2: 1.0})
        assert wasserstein(p3, omega, mu, nu) == pytest.approx(3.0)

    def test_consistent_with_curvature(self, p3):
        omega = MetricAssignment.uniform(p3)
        epsilon = 0.1
        mu, nu = kernel(p3, 1, epsilon), kernel(p3, 2, epsilon)
        transport = wasserstein(p3, omega, mu, nu)
        assert transport == pytest.approx(1.0 - epsilon * lly_edge(p3, omega, 1))


class TestLinLuYau:
    def test_uniform_triangle(self, triangle):
        kappa = lly_curvature(triangle, MetricAssignment.uniform(triangle))
        assert kappa.kind == CurvatureKind.LLY
        assert np.allclose(kappa.values, 3.0, atol=1e-8)

    def test_uniform_five_cycle(self):
        g = build_named_graph(GraphFamily.CYCLE, 5)
        kappa = lly_curvature(g, MetricAssignment.uniform(g))
        assert np.allclose(kappa.values, 1.0, atol=1e-8)

    def test_equals_forman_on_trees(self, rng):
        for _ in range(10):
            g = random_tree(rng, int(rng.integers(1, 8)))
            omega = random_metric(rng, g)
            assert np.allclose(
                lly_curvature(g, omega).values,
                forman_curvature(g, omega).values,
                atol=1e-8,
            )

    def test_scaling_invariance(self, rng):
        g, omega = nondegenerate(*self._graph_and_metric(rng))
        for i in range(g.num_edges):
            assert lly_edge(g, omega.scaled(3.0), i) == pytest.approx(
                lly_edge(g, omega, i), abs=1e-8
            )

    def test_optimal_potential_is_globally_lipschitz(self, rng):
        for _ in range(5):
            g, omega = nondegenerate(*self._graph_and_metric(rng))
            distances = {x: distances_from(g, omega, x) for x in g.vertex_ids}
            for i in range(g.num_edges):
                x, y = g.edges[i]
                kappa, f = lly_potential(g, omega, i)
                assert kappa == pytest.approx(lly_edge(g, omega, i))
                assert f[x] == pytest.approx(0.0, abs=1e-9)
                assert f[y] == pytest.approx(omega[i], abs=1e-9)
                for a, b in itertools.combinations(g.vertex_ids, 2):
                    assert abs(f[a] - f[b]) <= distances[a][b] + 1e-8

    def test_all_pairs_program_has_the_same_optimum(self, rng):
        g, omega = nondegenerate(*self._graph_and_metric(rng))
        vertices = list(g.vertex_ids)
        laplacian = laplacian_matrix(g)
        rows, limits = [], []
        for a, b in itertools.permutations(range(len(vertices)), 2):
            row = np.zeros(len(vertices))
            row[a], row[b] = 1.0, -1.0
            rows.append(row)
            limits.append(distances_from(g, omega, vertices[a])[vertices[b]])
        for i in range(g.num_edges):
            x, y = (vertices.index(v) for v in g.edges[i])
            bounds = [(None, None)] * len(vertices)
            bounds[x], bounds[y] = (0.0, 0.0), (omega[i], omega[i])
            result = linprog(
                (laplacian[x] - laplacian[y]) / omega[i],
                A_ub=np.array(rows),
                b_ub=np.array(limits),
                bounds=bounds,
                method="highs",
                options={"primal_feasibility_tolerance": 1e-10},
            )
            assert result.status == 0
            assert lly_edge(g, omega, i) == pytest.approx(result.fun, abs=1e-7)

    def test_degenerate_metric(self, triangle):
        with pytest.raises(DegenerateMetricError):
            lly_edge(triangle, MetricAssignment([1.0, 1.0, 2.0]), 2)

    def test_degenerate_check_can_be_skipped(self, triangle):
        omega = MetricAssignment([1.0, 1.0, 2.0])
        assert np.isfinite(lly_edge(triangle, omega, 2, check_degenerate=False))

    @staticmethod
    def _graph_and_metric(rng):
        g = random_connected_graph(rng, 6, 4)
        return g, random_metric(rng, g)


class TestLimitEstimate:
    def test_triangle(self, triangle):
        omega = MetricAssignment.uniform(triangle)
        assert lly_limit_estimate(triangle, omega, 0, 0.05) == pytest.approx(
            3.0, abs=1e-6
        )

    def test_tree_edge(self, rng):
        g = random_tree(rng, 6)
        omega = random_metric(rng, g)
        for i in range(g.num_edges):
            assert lly_limit_estimate(g, omega, i) == pytest.approx(
                forman_edge(g, omega, i), abs=1e-6
            )

    def test_halving_epsilon(self):
        g = build_named_graph(
            GraphFamily.PATH, 3, MeasureMode.NORMALIZED_DEG1, [1.0, 2.0, 1.0]
        )
        omega = MetricAssignment([1.0, 0.5, 2.0])
        epsilon = default_epsilon(g)
        assert lly_limit_estimate(g, omega, 1, epsilon) == pytest.approx(
            lly_limit_estimate(g, omega, 1, epsilon / 2), abs=1e-8
        )

    def test_epsilon_too_large(self, k13):
        with pytest.raises(EpsilonTooLargeError):
            lly_limit_estimate(k13, MetricAssignment.uniform(k13), 0, 0.5)
