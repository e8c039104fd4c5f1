from __future__ import annotations

import logging
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from src.exceptions import InvalidMetricError
from src.graph.measured_graph import EdgeRef, MeasuredGraph, MetricAssignment
from src.spectral.eigen import eigendecompose_symmetric, jacobi_eigh
from src.spectral.flow_matrix import build_flow_matrix

TOL_INVERSE = 1e-9

CurvatureTarget = Union[Sequence[float], Mapping[EdgeRef, float]]

_log = logging.getLogger(__name__)


def _target_vector(g: MeasuredGraph, kappa: CurvatureTarget) -> np.ndarray:
    if isinstance(kappa, Mapping):
        values = np.full(g.num_edges, np.nan)
        for edge, value in kappa.items():
            values[g.edge_index(edge)] = value
    else:
        values = np.asarray(list(kappa), dtype=float)
    if values.shape != (g.num_edges,) or not np.all(np.isfinite(values)):
        raise InvalidMetricError(
            f"Target curvature must give a finite value on each of the "
            f"{g.num_edges} edges."
        )
    return values


def curvature_matrix(g: MeasuredGraph, kappa: CurvatureTarget) -> np.ndarray:
    """K = F̃ + diag(κ)."""
    return build_flow_matrix(g).Ftilde + np.diag(_target_vector(g, kappa))


def curvature_matrix_lambda_max(g: MeasuredGraph, kappa: CurvatureTarget) -> float:
    eigenvalues, _ = jacobi_eigh(curvature_matrix(g, kappa))
    return float(eigenvalues[-1])


def inverse_curvature(
    g: MeasuredGraph, kappa: CurvatureTarget, tol: float = TOL_INVERSE
) -> Optional[MetricAssignment]:
    """A positive metric whose Forman curvature is ``kappa``, if one exists.

    Such a metric exists exactly when λ_max(K) = 0; it is then unique up to
    scaling and is recovered from the Perron vector of K. Returns None
    otherwise.
    """
    fm = build_flow_matrix(g)
    matrix = fm.Ftilde + np.diag(_target_vector(g, kappa))
    eigenvalues, eigenvectors = eigendecompose_symmetric(matrix)
    lambda_max = float(eigenvalues[-1])
    if abs(lambda_max) > tol:
        _log.info(
            "no positive metric realizes the target: lambda_max(K)=%.6g", lambda_max
        )
        return None
    return MetricAssignment(eigenvectors[:, -1] / fm.sqrt_m2)
