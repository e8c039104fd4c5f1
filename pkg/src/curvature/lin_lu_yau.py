from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Dict, Mapping, Optional, Tuple

import numpy as np
from scipy.optimize import linprog

from src.curvature.forman import laplacian_matrix
from src.curvature.vector import CurvatureKind, CurvatureVector
from src.exceptions import (
    DegenerateMetricError,
    EpsilonTooLargeError,
    InvalidKernelError,
    TransportError,
)
from src.graph.measured_graph import (
    EdgeRef,
    MeasuredGraph,
    MetricAssignment,
    Vertex,
    check_alignment,
    deg_measure,
    max_deg_measure,
)
from src.graph.surgery import TOL_SURGERY, alternative_distance, distances_from

LP_TOL = 1e-10
MASS_TOL = 1e-12

_HIGHS_OPTIONS = {
    "primal_feasibility_tolerance": LP_TOL,
    "dual_feasibility_tolerance": LP_TOL,
}

_log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProbabilityKernel:
    """The lazy random-walk distribution m_x^ε started at ``base_vertex``."""

    base_vertex: Vertex
    epsilon: float
    masses: Mapping[Vertex, float] = field(repr=False)

    def __post_init__(self):
        total = sum(self.masses.values())
        if abs(total - 1.0) > MASS_TOL:
            raise InvalidKernelError(f"Kernel masses sum to {total}, not 1.")
        if any(mass < 0.0 or mass > 1.0 for mass in self.masses.values()):
            raise InvalidKernelError("Kernel masses must lie in [0, 1].")

    @property
    def support(self):
        return [x for x, mass in self.masses.items() if mass > 0.0]


def kernel(g: MeasuredGraph, x: Vertex, epsilon: float) -> ProbabilityKernel:
    if epsilon <= 0.0:
        raise EpsilonTooLargeError(f"epsilon must be positive, got {epsilon}.")
    degree = deg_measure(g, x)
    if epsilon * degree >= 1.0:
        raise EpsilonTooLargeError(
            f"epsilon={epsilon} must be below 1/Deg({x!r}) = {1.0 / degree}."
        )
    masses = {y: 0.0 for y in g.vertex_ids}
    masses[x] = 1.0 - epsilon * degree
    for index in g.incident_edges(x):
        u, v = g.edges[index]
        y = v if u == x else u
        masses[y] = epsilon * g.m2[index] / g.m1[x]
    return ProbabilityKernel(x, epsilon, MappingProxyType(masses))


def wasserstein(
    g: MeasuredGraph,
    omega: MetricAssignment,
    mu: ProbabilityKernel,
    nu: ProbabilityKernel,
) -> float:
    """Exact transport cost between two kernels under the path metric d_ω."""
    sources, targets = mu.support, nu.support
    cost = np.empty((len(sources), len(targets)))
    for i, u in enumerate(sources):
        distances = distances_from(g, omega, u)
        cost[i] = [distances[v] for v in targets]

    n, m = cost.shape
    a_eq = np.zeros((n + m, n * m))
    for i in range(n):
        a_eq[i, i * m : (i + 1) * m] = 1.0
    for j in range(m):
        a_eq[n + j, j::m] = 1.0
    b_eq = np.concatenate(
        [[mu.masses[u] for u in sources], [nu.masses[v] for v in targets]]
    )
    result = linprog(
        cost.ravel(),
        A_eq=a_eq,
        b_eq=b_eq,
        bounds=(0, None),
        method="highs",
        options=_HIGHS_OPTIONS,
    )
    if result.status != 0:
        raise TransportError(f"Transport LP failed: {result.message}")
    return max(float(result.fun), 0.0)


def lly_potential(
    g: MeasuredGraph,
    omega: MetricAssignment,
    e: EdgeRef,
    check_degenerate: bool = True,
) -> Tuple[float, Dict[Vertex, float]]:
    """Lin-Lu-Yau curvature of e and an optimal potential f.

    Minimizes (Δf(x) − Δf(y)) / d over edgewise 1-Lipschitz f with f(x) = 0
    and f(y) = d, where d = d_ω(x, y). Edgewise 1-Lipschitz f are 1-Lipschitz
    for d_ω, so f is feasible for the all-pairs program too.
    """
    check_alignment(g, omega)
    index = g.edge_index(e)
    x, y = g.edges[index]
    if check_degenerate:
        alternative = alternative_distance(g, omega, index)
        if omega[index] >= alternative - TOL_SURGERY:
            raise DegenerateMetricError(
                f"Edge {x!r}-{y!r} (weight {omega[index]}) is not the unique "
                f"shortest path between its endpoints (alternative {alternative})."
            )
        distance = omega[index]
    else:
        distance = distances_from(g, omega, x)[y]

    position = {vertex: i for i, vertex in enumerate(g.vertex_ids)}
    laplacian = laplacian_matrix(g)
    objective = (laplacian[position[x]] - laplacian[position[y]]) / distance

    a_ub = np.zeros((2 * g.num_edges, g.num_vertices))
    for k, (a, b) in enumerate(g.edges):
        a_ub[2 * k, position[a]], a_ub[2 * k, position[b]] = 1.0, -1.0
        a_ub[2 * k + 1, position[a]], a_ub[2 * k + 1, position[b]] = -1.0, 1.0
    b_ub = np.repeat(omega.weights, 2)

    bounds = [(None, None)] * g.num_vertices
    bounds[position[x]] = (0.0, 0.0)
    bounds[position[y]] = (distance, distance)

    result = linprog(
        objective,
        A_ub=a_ub,
        b_ub=b_ub,
        bounds=bounds,
        method="highs",
        options=_HIGHS_OPTIONS,
    )
    if result.status == 3:
        raise TransportError(f"Curvature LP for {x!r}-{y!r} is unbounded.")
    if result.status != 0:
        raise TransportError(
            f"Curvature LP for {x!r}-{y!r} failed: {result.message}"
        )
    return float(result.fun), dict(zip(g.vertex_ids, result.x.tolist()))


def lly_edge(
    g: MeasuredGraph,
    omega: MetricAssignment,
    e: EdgeRef,
    check_degenerate: bool = True,
) -> float:
    """Lin-Lu-Yau curvature of e from the limit-free linear program."""
    return lly_potential(g, omega, e, check_degenerate)[0]


def lly_curvature(
    g: MeasuredGraph, omega: MetricAssignment, check_degenerate: bool = True
) -> CurvatureVector:
    return CurvatureVector(
        (lly_edge(g, omega, i, check_degenerate) for i in range(g.num_edges)),
        CurvatureKind.LLY,
    )


def default_epsilon(g: MeasuredGraph) -> float:
    return 1.0 / (4.0 * max_deg_measure(g))


def lly_limit_estimate(
    g: MeasuredGraph,
    omega: MetricAssignment,
    e: EdgeRef,
    epsilon: Optional[float] = None,
) -> float:
    """(1 − W(m_x^ε, m_y^ε) / d_ω(x, y)) / ε, an oracle for lly_edge."""
    if epsilon is None:
        epsilon = default_epsilon(g)
    x, y = g.endpoints(e)
    limit = 1.0 / max(deg_measure(g, x), deg_measure(g, y))
    if epsilon >= limit:
        raise EpsilonTooLargeError(f"epsilon={epsilon} must be below {limit}.")
    distance = distances_from(g, omega, x)[y]
    transport = wasserstein(g, omega, kernel(g, x, epsilon), kernel(g, y, epsilon))
    estimate = (1.0 - transport / distance) / epsilon
    if not math.isfinite(estimate):
        raise TransportError(f"Non-finite curvature estimate for {x!r}-{y!r}.")
    _log.debug("limit estimate at epsilon=%g: %g", epsilon, estimate)
    return estimate
