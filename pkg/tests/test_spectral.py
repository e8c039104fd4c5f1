import itertools
import math

import numpy as np
import pytest
from scipy.linalg import expm

from factories import random_connected_graph, random_metric, random_tree
from src.exceptions import (
    EigenConvergenceError,
    NotATreeError,
    NotUniformMeasureError,
    PerronVectorError,
    SpectralGapError,
)
from src.graph.measured_graph import (
    MeasuredGraph,
    MetricAssignment,
    line_graph_adjacency,
)
from src.graph.utils import GraphFamily, MeasureMode, build_named_graph, build_tree
from src.spectral.convergence import (
    Convergence,
    classify_convergence,
    curvature_bounds,
    long_time_horizon,
    normalized_path_report,
    normalized_star_report,
)
from src.spectral.eigen import (
    eigendecompose,
    eigendecompose_symmetric,
    flow_coefficients,
    _round_robin,
    jacobi_eigh,
    perron_normalize,
    spectral_solution,
)
from src.spectral.flow_matrix import build_flow_matrix
from src.spectral.inverse import curvature_matrix_lambda_max, inverse_curvature
from src.spectral.trees import (
    TreeCase,
    classify_tree_uniform,
    line_graph_spectral_radius,
    max_degree_bound,
)

PAW_TREE = [(0, 1), (0, 2), (0, 3), (1, 4)]


def uniform_path(n):
    return build_named_graph(GraphFamily.PATH, n)


def uniform_star(n):
    return build_named_graph(GraphFamily.STAR, n)


class TestFlowMatrix:
    def test_p3(self, p3):
        fm = build_flow_matrix(p3)
        assert np.array_equal(fm.F, [[-2.0, 1.0], [1.0, -2.0]])

    @pytest.mark.parametrize("n", [2, 3, 6])
    def test_star(self, n):
        fm = build_flow_matrix(uniform_star(n))
        assert np.array_equal(fm.F, -3.0 * np.eye(n) + np.ones((n, n)))

    def test_normalized_path(self, rng):
        a = rng.uniform(0.5, 3.0, size=5)
        fm = build_flow_matrix(
            build_named_graph(GraphFamily.PATH, 5, MeasureMode.NORMALIZED_DEG1, a)
        )
        for i in range(1, 4):
            assert fm.F[i, i] == pytest.approx(
                -(a[i] / (a[i - 1] + a[i]) + a[i] / (a[i] + a[i + 1]))
            )
        for i in range(4):
            assert fm.Ftilde[i, i + 1] == pytest.approx(
                math.sqrt(a[i] * a[i + 1]) / (a[i] + a[i + 1])
            )

    def test_symmetrization(self, rng):
        g = random_connected_graph(rng, 8, 5)
        fm = build_flow_matrix(g)
        assert np.array_equal(fm.Ftilde, fm.Ftilde.T)
        similar = fm.M @ fm.F @ np.linalg.inv(fm.M)
        assert np.allclose(fm.Ftilde, similar, atol=1e-12)
        off_diagonal = fm.F - np.diag(np.diag(fm.F))
        assert np.all(off_diagonal >= 0.0)
        assert np.array_equal(off_diagonal > 0.0, line_graph_adjacency(g) > 0.0)

    def test_uniform_tree_is_shifted_line_graph(self, rng):
        g = random_tree(rng, 9, weighted=False)
        fm = build_flow_matrix(g)
        assert np.array_equal(fm.F + 2.0 * np.eye(g.num_edges), line_graph_adjacency(g))

    def test_read_only(self, p3):
        with pytest.raises(ValueError):
            build_flow_matrix(p3).F[0, 0] = 1.0


class TestJacobi:
    def test_matches_reference_solver(self, rng):
        a = rng.normal(size=(7, 7))
        a = a + a.T
        eigenvalues, eigenvectors = jacobi_eigh(a)
        assert np.allclose(eigenvalues, np.linalg.eigvalsh(a), atol=1e-10)
        assert np.allclose(eigenvectors.T @ eigenvectors, np.eye(7), atol=1e-10)
        assert np.allclose(a @ eigenvectors, eigenvectors * eigenvalues, atol=1e-9)

    def test_rejects_non_symmetric(self):
        with pytest.raises(ValueError):
            jacobi_eigh(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_sweep_limit(self):
        with pytest.raises(EigenConvergenceError):
            jacobi_eigh(np.array([[1.0, 2.0], [2.0, 1.0]]), max_sweeps=0)

    @pytest.mark.parametrize("n", [2, 9, 30, 31])
    def test_rounds_cover_every_pair_once(self, n):
        seen = []
        for p, q in _round_robin(n):
            assert len(set(p.tolist()) | set(q.tolist())) == 2 * len(p)
            seen.extend(zip(p.tolist(), q.tolist()))
        assert sorted(seen) == list(itertools.combinations(range(n), 2))

    @pytest.mark.parametrize("n", [24, 25])
    def test_larger_matrices(self, rng, n):
        a = rng.normal(size=(n, n))
        a = a + a.T
        eigenvalues, eigenvectors = jacobi_eigh(a)
        assert np.allclose(eigenvalues, np.linalg.eigvalsh(a), atol=1e-9)
        assert np.allclose(eigenvectors.T @ eigenvectors, np.eye(n), atol=1e-10)

    def test_negligible_entries_are_left_alone(self):
        a = np.diag([3.0, 1.0, 2.0])
        a[0, 1] = a[1, 0] = 1e-15
        a[1, 2] = a[2, 1] = 0.5
        eigenvalues, eigenvectors = jacobi_eigh(a)
        assert eigenvalues[-1] == 3.0
        assert eigenvectors[:, -1].tolist() == [1.0, 0.0, 0.0]
        assert np.allclose(eigenvalues, np.linalg.eigvalsh(a), atol=1e-12)

    def test_one_by_one(self):
        eigenvalues, eigenvectors = jacobi_eigh(np.array([[-2.0]]))
        assert eigenvalues.tolist() == [-2.0]
        assert eigenvectors.tolist() == [[1.0]]


class TestPerron:
    def test_sign_flip(self):
        assert perron_normalize(np.array([-0.6, -0.8])).tolist() == [0.6, 0.8]

    def test_mixed_signs(self):
        with pytest.raises(PerronVectorError):
            perron_normalize(np.array([0.6, -0.8]))

    def test_repeated_top_eigenvalue(self):
        with pytest.raises(SpectralGapError):
            eigendecompose_symmetric(np.eye(3))

    def test_random_graphs(self, rng):
        for _ in range(20):
            g = random_connected_graph(rng, int(rng.integers(3, 9)), 3)
            sd = eigendecompose(build_flow_matrix(g))
            assert sd.spectral_gap > 0.0
            assert np.all(sd.perron_vector > 0.0)


class TestEigendecompose:
    def test_p3(self, p3):
        sd = eigendecompose(build_flow_matrix(p3))
        assert np.allclose(sd.eigenvalues, [-3.0, -1.0], atol=1e-12)

    @pytest.mark.parametrize("n", [1, 2, 5, 12])
    def test_path_law(self, n):
        sd = eigendecompose(build_flow_matrix(uniform_path(n)))
        assert sd.lambda_max == pytest.approx(-2.0 + 2.0 * math.cos(math.pi / (n + 1)))

    @pytest.mark.parametrize("n", [2, 3, 7])
    def test_star_law(self, n):
        sd = eigendecompose(build_flow_matrix(uniform_star(n)))
        assert sd.lambda_max == pytest.approx(n - 3.0)
        assert np.allclose(sd.perron_vector, 1.0 / math.sqrt(n))

    def test_eigenpairs(self, rng):
        fm = build_flow_matrix(random_connected_graph(rng, 7, 4))
        sd = eigendecompose(fm)
        assert np.all(np.diff(sd.eigenvalues) >= 0.0)
        for i in range(fm.size):
            p = sd.eigenvectors[:, i]
            residual = fm.Ftilde @ p - sd.eigenvalues[i] * p
            assert np.max(np.abs(residual)) < 1e-9


class TestFlowCoefficients:
    def test_perron_start_has_single_mode(self, rng):
        fm = build_flow_matrix(random_connected_graph(rng, 6, 3))
        sd = eigendecompose(fm)
        omega0 = MetricAssignment(sd.perron_vector / fm.sqrt_m2)
        coefficients = flow_coefficients(sd, fm, omega0)
        assert np.allclose(coefficients[:-1], 0.0, atol=1e-12)

    def test_claw_limit(self, k13):
        fm = build_flow_matrix(k13)
        sd = eigendecompose(fm)
        omega0 = MetricAssignment([1.0, 2.0, 4.0])
        assert np.allclose(flow_coefficients(sd, fm, omega0)[-1], 7.0 / 3.0)

    def test_dominant_coefficients_positive(self, rng):
        for _ in range(10):
            g = random_connected_graph(rng, 6, 2)
            fm = build_flow_matrix(g)
            sd = eigendecompose(fm)
            assert np.all(flow_coefficients(sd, fm, random_metric(rng, g))[-1] > 0.0)

    def test_solution_matches_matrix_exponential(self, rng):
        g = random_connected_graph(rng, 6, 3)
        fm = build_flow_matrix(g)
        sd = eigendecompose(fm)
        omega0 = random_metric(rng, g)
        for t in (0.0, 0.3, 1.7):
            expected = expm(t * fm.F) @ omega0.weights
            solution = spectral_solution(sd, fm, omega0, t)
            assert np.allclose(solution, expected, rtol=1e-9)

    def test_solution_solves_the_flow(self, rng):
        g = random_connected_graph(rng, 5, 2)
        fm = build_flow_matrix(g)
        sd = eigendecompose(fm)
        omega0 = random_metric(rng, g)
        h = 1e-5
        for t in (0.2, 1.0):
            derivative = (
                spectral_solution(sd, fm, omega0, t + h)
                - spectral_solution(sd, fm, omega0, t - h)
            ) / (2 * h)
            expected = fm.F @ spectral_solution(sd, fm, omega0, t)
            assert np.allclose(derivative, expected, atol=1e-8)


class TestCurvatureBounds:
    def test_p3(self, p3):
        bounds = curvature_bounds(p3)
        assert (bounds.lower, bounds.upper) == (1.0, 2.0)

    def test_claw(self, k13):
        bounds = curvature_bounds(k13)
        assert (bounds.lower, bounds.upper) == (0.0, 2.0)

    def test_single_edge(self, single_edge):
        bounds = curvature_bounds(single_edge)
        assert (bounds.lower, bounds.upper) == (2.0, 2.0)

    def test_bracket_limiting_curvature(self, rng):
        graphs = [uniform_path(3)] + [
            random_connected_graph(rng, 7, 3) for _ in range(10)
        ]
        for g in graphs:
            report = classify_convergence(g, MetricAssignment.uniform(g))
            assert report.bounds.contains(report.limiting_curvature)


class TestClassifyConvergence:
    def test_path(self):
        g = uniform_path(6)
        report = classify_convergence(g, MetricAssignment.uniform(g))
        assert report.classification == Convergence.VANISHING
        expected = 2 * (1 - math.cos(math.pi / 7))
        assert report.limiting_curvature == pytest.approx(expected)
        assert report.tree_case == TreeCase.PATH
        assert report.limiting_weights is None

    def test_claw(self, k13):
        report = classify_convergence(k13, MetricAssignment([1.0, 2.0, 3.0]))
        assert report.classification == Convergence.CONSTANT_METRIC
        assert report.limiting_curvature == pytest.approx(0.0, abs=1e-12)
        assert report.tree_case == TreeCase.K13
        assert all(
            value == pytest.approx(2.0) for value in report.limiting_weights.values()
        )

    def test_six_star(self):
        g = uniform_star(6)
        report = classify_convergence(g, MetricAssignment.uniform(g))
        assert report.classification == Convergence.DIVERGENT
        assert report.limiting_curvature == pytest.approx(-3.0)
        assert report.tree_case == TreeCase.BIG_DEGREE

    def test_tolerance_decides_the_middle_class(self):
        g = uniform_path(40)
        report = classify_convergence(g, MetricAssignment.uniform(g), tol_zero=1.0)
        assert report.classification == Convergence.CONSTANT_METRIC

    def test_limit_metric_is_a_distribution(self, rng):
        g = random_connected_graph(rng, 7, 4)
        report = classify_convergence(g, random_metric(rng, g))
        values = np.array(list(report.limiting_normalized_metric.values()))
        assert np.all(values > 0.0)
        assert values.sum() == pytest.approx(1.0, abs=1e-10)

    def test_limit_metric_ignores_initial_metric(self, rng):
        g = random_connected_graph(rng, 7, 4)
        first = classify_convergence(g, random_metric(rng, g))
        second = classify_convergence(g, random_metric(rng, g))
        assert first.limiting_normalized_metric == pytest.approx(
            second.limiting_normalized_metric, abs=1e-12
        )

    def test_to_dict(self, k13):
        payload = classify_convergence(k13, MetricAssignment.uniform(k13)).to_dict()
        assert payload["classification"] == "constant_metric"
        assert payload["tree_case"] == "k13_case"
        assert set(payload["limiting_normalized_metric"]) == {"0-1", "0-2", "0-3"}

    def test_long_time_horizon(self, p3, single_edge):
        sd = eigendecompose(build_flow_matrix(p3))
        assert long_time_horizon(sd) == pytest.approx(20.0)
        assert long_time_horizon(eigendecompose(build_flow_matrix(single_edge))) == 20.0


class TestNormalizedMeasures:
    def test_path_quadratic_form(self, rng):
        for n in (1, 2, 5, 9):
            a = rng.uniform(0.2, 5.0, size=n)
            g = build_named_graph(GraphFamily.PATH, n, MeasureMode.NORMALIZED_DEG1, a)
            ftilde = build_flow_matrix(g).Ftilde
            x = rng.normal(size=n)
            expected = -x[0] ** 2 - x[-1] ** 2
            for i in range(n - 1):
                difference = math.sqrt(a[i]) * x[i] - math.sqrt(a[i + 1]) * x[i + 1]
                expected -= difference**2 / (a[i] + a[i + 1])
            assert x @ ftilde @ x == pytest.approx(expected)

    def test_path_report(self, rng):
        report = normalized_path_report(rng.uniform(0.2, 5.0, size=8))
        assert report.lambda_max < 0.0
        assert report.classification == Convergence.VANISHING

    def test_star_report(self, rng):
        report = normalized_star_report(rng.uniform(0.2, 5.0, size=8))
        assert report.lambda_max < 0.0
        assert report.tree_case is None


class TestInverseCurvature:
    def test_claw_flat(self, k13):
        omega = inverse_curvature(k13, [0.0, 0.0, 0.0])
        assert np.allclose(omega.normalized().weights, 1.0 / 3.0)

    def test_p3_constant_one(self, p3):
        omega = inverse_curvature(p3, {(0, 1): 1.0, (1, 2): 1.0})
        assert np.allclose(omega.normalized().weights, 0.5)

    def test_p3_flat_has_no_solution(self, p3):
        assert inverse_curvature(p3, [0.0, 0.0]) is None
        assert curvature_matrix_lambda_max(p3, [0.0, 0.0]) == pytest.approx(-1.0)

    def test_wrong_length(self, p3):
        with pytest.raises(ValueError):
            inverse_curvature(p3, [0.0])


class TestTrees:
    def test_path(self):
        assert classify_tree_uniform(uniform_path(10)) == TreeCase.PATH

    def test_claw(self, k13):
        assert classify_tree_uniform(k13) == TreeCase.K13

    def test_paw(self):
        g = build_tree(PAW_TREE)
        assert classify_tree_uniform(g) == TreeCase.BIG_DEGREE
        assert line_graph_spectral_radius(g) > 2.17

    def test_not_a_tree(self, triangle):
        with pytest.raises(NotATreeError):
            classify_tree_uniform(triangle)

    def test_not_uniform(self, normalized_k13):
        with pytest.raises(NotUniformMeasureError):
            classify_tree_uniform(normalized_k13)

    def test_degree_bound(self, rng):
        for _ in range(20):
            g = random_tree(rng, int(rng.integers(1, 12)), weighted=False)
            assert line_graph_spectral_radius(g) >= max_degree_bound(g) - 1e-12

    def test_weighted_tree_is_rejected(self):
        g = MeasuredGraph([0, 1], [(0, 1)], {0: 2.0, 1: 1.0}, [1.0])
        with pytest.raises(NotUniformMeasureError):
            classify_tree_uniform(g)
