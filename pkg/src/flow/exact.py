from __future__ import annotations

from typing import Sequence

import numpy as np

from src.curvature.forman import forman_curvature
from src.exceptions import InvalidMetricError
from src.graph.measured_graph import MeasuredGraph, MetricAssignment, check_alignment
from src.flow.trajectory import FlowSample, FlowTrajectory
from src.logger import logger
from src.spectral.eigen import eigendecompose, flow_coefficients
from src.spectral.flow_matrix import build_flow_matrix


def _check_times(times: Sequence[float]) -> np.ndarray:
    times = np.asarray(list(times), dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise InvalidMetricError("Need at least one sample time.")
    if np.any(times < 0.0) or np.any(np.diff(times) <= 0.0):
        raise InvalidMetricError("Sample times must be non-negative and increasing.")
    return times


@logger
def forman_flow_exact(
    g: MeasuredGraph, omega0: MetricAssignment, times: Sequence[float]
) -> FlowTrajectory:
    """Closed-form solution ω(t) = e^{tF} ω0 of the Forman flow.

    The weights are evaluated as Σ_i c_i(e) e^{(λ_i − λ_n) t} times e^{λ_n t},
    so that curvature stays accurate when the weights vanish or blow up.
    """
    check_alignment(g, omega0)
    times = _check_times(times)
    fm = build_flow_matrix(g)
    sd = eigendecompose(fm)
    sd = sd.with_coefficients(flow_coefficients(sd, fm, omega0))

    trajectory = FlowTrajectory(g)
    for t in times:
        if t == 0.0:
            omega, log_scale = omega0, 0.0
        else:
            scaled = sd.coefficients.T @ np.exp((sd.eigenvalues - sd.lambda_max) * t)
            omega, log_scale = _rescale(scaled, sd.lambda_max * t)
        trajectory.add_sample(
            FlowSample(
                t=float(t),
                omega=omega,
                kappa=forman_curvature(g, omega),
                log_scale=log_scale,
            )
        )
    return trajectory


def _rescale(scaled: np.ndarray, exponent: float):
    with np.errstate(over="ignore", under="ignore"):
        weights = scaled * np.exp(exponent)
    if np.all(np.isfinite(weights)) and np.all(weights > 0.0):
        return MetricAssignment(weights), 0.0
    return MetricAssignment(scaled), exponent
