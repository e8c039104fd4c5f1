from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import List, Optional

import numpy as np
import pandas as pd

from src.curvature.vector import CurvatureVector
from src.exceptions import InvalidMetricError
from src.graph.measured_graph import MeasuredGraph, MetricAssignment
from src.graph.surgery import SurgeryEvent
from src.spectral.flow_matrix import FlowMatrix

TRAJECTORY_COLUMNS = ["t", "edge_id", "omega", "omega_normalized", "kappa"]
SURGERY_COLUMNS = ["t", "edge_id", "omega", "alt_distance"]


@dataclass(frozen=True)
class FlowSample:
    """Weights and curvature at one time.

    The weights are ``omega * exp(log_scale)``; ``log_scale`` stays 0 unless
    the weights themselves over- or underflow.
    """

    t: float
    omega: MetricAssignment
    kappa: CurvatureVector
    graph_version: int = 0
    log_scale: float = 0.0

    @property
    def weights(self) -> np.ndarray:
        if self.log_scale == 0.0:
            return self.omega.weights
        return self.omega.weights * math.exp(self.log_scale)

    @property
    def normalized_weights(self) -> np.ndarray:
        return self.omega.normalized().weights


class FlowTrajectory:
    """Samples of a curvature flow together with the surgeries it went through.

    ``graph_snapshots[0]`` is the initial graph and ``graph_snapshots[k]`` the
    graph after the k-th surgery batch; each sample refers to its graph
    through ``graph_version``.
    """

    samples: List[FlowSample]
    surgeries: List[SurgeryEvent]
    graph_snapshots: List[MeasuredGraph]
    normalized: bool

    def __init__(self, graph: MeasuredGraph, normalized: bool = False) -> None:
        self.samples = []
        self.surgeries = []
        self.graph_snapshots = [graph]
        self.normalized = normalized

    def __repr__(self) -> str:
        return (
            f"{self.__class__.__name__}(samples={len(self.samples)}, "
            f"surgeries={len(self.surgeries)})"
        )

    def __len__(self) -> int:
        return len(self.samples)

    def add_sample(self, sample: FlowSample) -> None:
        if self.samples and sample.t <= self.samples[-1].t:
            raise ValueError(
                f"Sample times must increase: {sample.t} after {self.samples[-1].t}."
            )
        if sample.graph_version >= len(self.graph_snapshots):
            raise ValueError(f"Unknown graph version {sample.graph_version}.")
        self.samples.append(sample)

    def add_surgery(self, graph: MeasuredGraph, events: List[SurgeryEvent]) -> int:
        self.surgeries.extend(events)
        self.graph_snapshots.append(graph)
        return len(self.graph_snapshots) - 1

    @property
    def times(self) -> np.ndarray:
        return np.array([sample.t for sample in self.samples])

    @property
    def final(self) -> FlowSample:
        return self.samples[-1]

    def graph_at(self, sample: FlowSample) -> MeasuredGraph:
        return self.graph_snapshots[sample.graph_version]

    def weights_matrix(self) -> np.ndarray:
        """Weights as a (samples × edges) array; needs a constant edge set."""
        if self.surgeries:
            raise ValueError("The edge set changes along this trajectory.")
        return np.vstack([sample.weights for sample in self.samples])

    def curvature_matrix(self) -> np.ndarray:
        if self.surgeries:
            raise ValueError("The edge set changes along this trajectory.")
        return np.vstack([sample.kappa.values for sample in self.samples])

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for sample in self.samples:
            g = self.graph_at(sample)
            normalized = sample.normalized_weights
            for index, (omega, kappa) in enumerate(
                zip(sample.weights, sample.kappa.values)
            ):
                rows.append(
                    (sample.t, g.edge_id(index), omega, normalized[index], kappa)
                )
        return pd.DataFrame(rows, columns=TRAJECTORY_COLUMNS)

    def surgery_frame(self) -> pd.DataFrame:
        rows = [
            (
                event.time,
                f"{event.removed_edge[0]}-{event.removed_edge[1]}",
                event.edge_weight,
                event.alternative_distance,
            )
            for event in self.surgeries
        ]
        return pd.DataFrame(rows, columns=SURGERY_COLUMNS)


def normalized_trajectory(traj: FlowTrajectory) -> FlowTrajectory:
    """Rescale every sample to total weight 1; curvature is scale invariant."""
    result = FlowTrajectory(traj.graph_snapshots[0], normalized=True)
    result.graph_snapshots = list(traj.graph_snapshots)
    result.surgeries = list(traj.surgeries)
    for sample in traj.samples:
        result.add_sample(
            replace(sample, omega=sample.omega.normalized(), log_scale=0.0)
        )
    return result


def curvature_residual(
    traj: FlowTrajectory, fm: Optional[FlowMatrix] = None
) -> float:
    """Largest |dω/dt + κω| over interior samples, by central differences.

    ``fm`` is optional and only checked against the trajectory edge count;
    the residual itself uses the recorded curvature.
    """
    if len(traj.samples) < 3:
        raise InvalidMetricError(
            f"Need at least 3 samples for a residual, got {len(traj.samples)}."
        )
    weights = traj.weights_matrix()
    if fm is not None and fm.size != weights.shape[1]:
        raise InvalidMetricError(
            f"Flow matrix has {fm.size} edges, trajectory has {weights.shape[1]}."
        )
    curvature = traj.curvature_matrix()
    derivative = np.gradient(weights, traj.times, axis=0)
    residual = derivative + curvature * weights
    return float(np.max(np.abs(residual[1:-1])))
