from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import numpy as np

from src.graph.measured_graph import (
    MeasuredGraph,
    MetricAssignment,
    check_alignment,
    is_tree,
)
from src.graph.utils import GraphFamily, MeasureMode, build_named_graph
from src.logger import logger
from src.spectral.eigen import SpectralData, eigendecompose, flow_coefficients
from src.spectral.flow_matrix import FlowMatrix, build_flow_matrix
from src.spectral.trees import TreeCase, classify_tree_uniform

TOL_ZERO = 1e-9
HORIZON_DECADES = 40.0


class Convergence(str, enum.Enum):
    VANISHING = "vanishing"
    CONSTANT_METRIC = "constant_metric"
    DIVERGENT = "divergent"


@dataclass(frozen=True)
class CurvatureBounds:
    lower: float
    upper: float

    def contains(self, value: float, tol: float = 1e-9) -> bool:
        return self.lower - tol <= value <= self.upper + tol


@dataclass(frozen=True)
class ConvergenceReport:
    """Long-time behaviour of the Forman flow started from a given metric.

    ``limiting_weights`` is only set for the constant-metric class, where the
    weights themselves converge. ``tree_case`` is only set for trees with
    uniform measures.
    """

    classification: Convergence
    lambda_max: float
    limiting_curvature: float
    limiting_normalized_metric: Dict[str, float]
    bounds: CurvatureBounds
    spectral_gap: Optional[float] = None
    long_time_horizon: Optional[float] = None
    limiting_weights: Optional[Dict[str, float]] = None
    tree_case: Optional[TreeCase] = None

    def to_dict(self) -> dict:
        return {
            "classification": self.classification.value,
            "lambda_max": self.lambda_max,
            "limiting_curvature": self.limiting_curvature,
            "limiting_normalized_metric": dict(self.limiting_normalized_metric),
            "bounds": {"lower": self.bounds.lower, "upper": self.bounds.upper},
            "spectral_gap": self.spectral_gap,
            "long_time_horizon": self.long_time_horizon,
            "limiting_weights": (
                None if self.limiting_weights is None else dict(self.limiting_weights)
            ),
            "tree_case": None if self.tree_case is None else self.tree_case.value,
        }


def curvature_bounds(g: MeasuredGraph) -> CurvatureBounds:
    """Gerschgorin bracket for the limiting curvature −λ_max(F̃).

    For each edge the diagonal term is m2(e)/m1(u) + m2(e)/m1(v) and the radius
    sums √(m2(e)m2(e'))/m1(x) over the edges e' meeting e at x.
    """
    diagonal = np.zeros(g.num_edges)
    radius = np.zeros(g.num_edges)
    for index, (u, v) in enumerate(g.edges):
        for x in (u, v):
            diagonal[index] += g.m2[index] / g.m1[x]
            radius[index] += sum(
                np.sqrt(g.m2[index] * g.m2[j]) / g.m1[x]
                for j in g.incident_edges(x)
                if j != index
            )
    return CurvatureBounds(
        lower=float(np.min(diagonal - radius)), upper=float(np.min(diagonal))
    )


def long_time_horizon(sd: SpectralData) -> float:
    """Time after which the subdominant modes are negligible (relative e^{-40})."""
    gap = sd.spectral_gap
    if gap is not None and gap > 0.0:
        return HORIZON_DECADES / gap
    return HORIZON_DECADES / abs(sd.lambda_max)


def limiting_normalized_metric(sd: SpectralData, fm: FlowMatrix) -> np.ndarray:
    limit = sd.perron_vector / fm.sqrt_m2
    return limit / limit.sum()


def _classify(lambda_max: float, tol_zero: float) -> Convergence:
    if lambda_max < -tol_zero:
        return Convergence.VANISHING
    if lambda_max > tol_zero:
        return Convergence.DIVERGENT
    return Convergence.CONSTANT_METRIC


@logger
def classify_convergence(
    g: MeasuredGraph, omega0: MetricAssignment, tol_zero: float = TOL_ZERO
) -> ConvergenceReport:
    check_alignment(g, omega0)
    fm = build_flow_matrix(g)
    sd = eigendecompose(fm)
    classification = _classify(sd.lambda_max, tol_zero)

    edge_ids = [g.edge_id(i) for i in range(g.num_edges)]
    limit = limiting_normalized_metric(sd, fm)
    limiting_weights = None
    if classification == Convergence.CONSTANT_METRIC:
        dominant = flow_coefficients(sd, fm, omega0)[-1]
        limiting_weights = dict(zip(edge_ids, map(float, dominant)))

    tree_case = None
    if is_tree(g) and g.is_uniform():
        tree_case = classify_tree_uniform(g)

    return ConvergenceReport(
        classification=classification,
        lambda_max=sd.lambda_max,
        limiting_curvature=-sd.lambda_max,
        limiting_normalized_metric=dict(zip(edge_ids, map(float, limit))),
        bounds=curvature_bounds(g),
        spectral_gap=sd.spectral_gap,
        long_time_horizon=long_time_horizon(sd),
        limiting_weights=limiting_weights,
        tree_case=tree_case,
    )


def normalized_path_report(a: Sequence[float]) -> ConvergenceReport:
    """Report for the Deg ≡ 1 path whose i-th edge carries m2 = a[i]."""
    g = build_named_graph(GraphFamily.PATH, len(a), MeasureMode.NORMALIZED_DEG1, a)
    return classify_convergence(g, MetricAssignment.uniform(g))


def normalized_star_report(a: Sequence[float]) -> ConvergenceReport:
    """Report for the Deg ≡ 1 star whose i-th leaf edge carries m2 = a[i]."""
    g = build_named_graph(GraphFamily.STAR, len(a), MeasureMode.NORMALIZED_DEG1, a)
    return classify_convergence(g, MetricAssignment.uniform(g))
