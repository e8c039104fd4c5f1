import logging
from typing import Dict, Optional, Tuple

import mesa
import numpy as np

from src.curvature.forman import forman_curvature
from src.curvature.lin_lu_yau import lly_curvature
from src.curvature.vector import CurvatureKind, CurvatureVector
from src.exceptions import InputError, StepSizeTooLargeError
from src.flow.trajectory import FlowSample, FlowTrajectory
from src.graph.measured_graph import (
    MeasuredGraph,
    MetricAssignment,
    check_alignment,
    is_tree,
)
from src.graph.surgery import TOL_SURGERY, apply_surgery
from src.logger import logger
from src.model.integrator import rk4_step
from src.spectral.flow_matrix import FlowMatrix, build_flow_matrix

DEFAULT_DT = 1e-3
MAX_HALVINGS = 20
DENSE_SAMPLING_MAX_EDGES = 64
SPARSE_SAMPLING_EVERY = 10

_log = logging.getLogger(__name__)


def get_time(model) -> float:
    return model.current_time


def get_weights(model) -> np.ndarray:
    return model.omega.weights.copy()


def get_curvature(model) -> np.ndarray:
    return model.current_curvature.values.copy()


def get_graph_version(model) -> int:
    return model.graph_version


def get_total_weight(model) -> float:
    return model.omega.total


class RicciFlowModel(mesa.Model):
    """Time-stepping curvature flow dω/dt = −κ_ω ω with edge surgery.

    Each ``step`` first removes the edges that stopped being the unique
    shortest path between their endpoints, then advances one RK4 step.
    With ``normalized`` the model integrates the flow of ω / Σω instead.
    """

    running: bool
    graph: MeasuredGraph
    omega: MetricAssignment
    current_time: float
    t_end: float
    dt: float
    surgery: bool
    curvature: CurvatureKind
    normalized: bool
    tree_shortcut: bool
    tol_surgery: float
    graph_version: int
    num_steps: int
    trajectory: FlowTrajectory
    datacollector: mesa.DataCollector

    def __init__(
        self,
        graph: MeasuredGraph,
        omega0: MetricAssignment,
        t_end: float,
        dt: float = DEFAULT_DT,
        surgery: bool = True,
        curvature: CurvatureKind = CurvatureKind.LLY,
        normalized: bool = False,
        tree_shortcut: bool = True,
        tol_surgery: float = TOL_SURGERY,
    ) -> None:
        super().__init__()
        check_alignment(graph, omega0)
        if t_end < 0.0:
            raise InputError(f"t_end must be non-negative, got {t_end}.")
        if dt <= 0.0:
            raise InputError(f"dt must be positive, got {dt}.")
        self.graph = graph
        self.omega = omega0.normalized() if normalized else omega0
        self.current_time = 0.0
        self.t_end = t_end
        self.dt = dt
        self.surgery = surgery
        self.curvature = CurvatureKind(curvature)
        self.normalized = normalized
        self.tree_shortcut = tree_shortcut
        self.tol_surgery = tol_surgery
        self.graph_version = 0
        self.num_steps = 0
        self._flow_matrix: Optional[FlowMatrix] = None
        self._curvature_cache: Dict[Tuple[int, bytes], CurvatureVector] = dict()

        self.trajectory = FlowTrajectory(graph, normalized=normalized)
        self.datacollector = mesa.DataCollector(
            model_reporters={
                "time": get_time,
                "weights": get_weights,
                "curvature": get_curvature,
                "graph_version": get_graph_version,
                "total_weight": get_total_weight,
            }
        )
        self.running = not self._reached_end()
        self._record()

    @property
    def current_curvature(self) -> CurvatureVector:
        return self.curvature_of(self.omega)

    def curvature_of(self, omega: MetricAssignment) -> CurvatureVector:
        key = (self.graph_version, omega.weights.tobytes())
        if key not in self._curvature_cache:
            self._curvature_cache = {key: self._evaluate_curvature(omega)}
        return self._curvature_cache[key]

    def _evaluate_curvature(self, omega: MetricAssignment) -> CurvatureVector:
        if self.curvature == CurvatureKind.FORMAN:
            return forman_curvature(self.graph, omega)
        if self.tree_shortcut and is_tree(self.graph):
            # both curvatures agree on trees
            if self._flow_matrix is None:
                self._flow_matrix = build_flow_matrix(self.graph)
            values = -(self._flow_matrix.F @ omega.weights) / omega.weights
            return CurvatureVector(values, CurvatureKind.LLY)
        return lly_curvature(self.graph, omega, check_degenerate=False)

    def _derivative(self, state: np.ndarray) -> Optional[np.ndarray]:
        if not np.all(np.isfinite(state)) or np.any(state <= 0.0):
            return None
        kappa = self.curvature_of(MetricAssignment(state)).values
        derivative = -kappa * state
        if self.normalized:
            derivative += state * np.dot(kappa, state)
        return derivative

    def _reached_end(self) -> bool:
        return self.current_time >= self.t_end - 1e-12 * max(1.0, self.t_end)

    def _retain_sample(self) -> bool:
        if self.graph.num_edges <= DENSE_SAMPLING_MAX_EDGES:
            return True
        return self.num_steps % SPARSE_SAMPLING_EVERY == 0 or self._reached_end()

    def _record(self) -> None:
        self.trajectory.add_sample(
            FlowSample(
                t=self.current_time,
                omega=self.omega,
                kappa=self.current_curvature,
                graph_version=self.graph_version,
            )
        )
        self.datacollector.collect(self)

    def _apply_surgery(self) -> None:
        graph, omega, events = apply_surgery(
            self.graph, self.omega, t=self.current_time, tol=self.tol_surgery
        )
        if not events:
            return
        self.graph, self.omega = graph, omega
        self.graph_version = self.trajectory.add_surgery(graph, events)
        self._flow_matrix = None
        if self.normalized:
            self.omega = omega.normalized()

    def _advance(self) -> float:
        h = min(self.dt, self.t_end - self.current_time)
        f0 = self._derivative(self.omega.weights)
        for attempt in range(MAX_HALVINGS + 1):
            new_state = rk4_step(self._derivative, self.omega.weights, h, f0=f0)
            if (
                new_state is not None
                and np.all(np.isfinite(new_state))
                and np.all(new_state > 0.0)
            ):
                self.omega = MetricAssignment(new_state)
                return h
            if attempt < MAX_HALVINGS:
                _log.debug(
                    "non-positive weight at t=%g, halving dt to %g",
                    self.current_time,
                    h / 2,
                )
                h /= 2.0
        raise StepSizeTooLargeError(
            f"Weights left the positive orthant at t={self.current_time} even "
            f"after {MAX_HALVINGS} step halvings (last dt={h})."
        )

    def step(self) -> None:
        if self.surgery:
            self._apply_surgery()
        h = self._advance()
        self.current_time += h
        self.num_steps += 1
        self.running = not self._reached_end()
        if not self.running:
            self.current_time = max(self.current_time, self.t_end)
        if self._retain_sample():
            self._record()


@logger
def lly_flow_integrate(
    g: MeasuredGraph,
    omega0: MetricAssignment,
    t_end: float,
    dt: float = DEFAULT_DT,
    surgery: bool = True,
    curvature: CurvatureKind = CurvatureKind.LLY,
    normalized: bool = False,
    tree_shortcut: bool = True,
    tol_surgery: float = TOL_SURGERY,
) -> FlowTrajectory:
    model = RicciFlowModel(
        g,
        omega0,
        t_end,
        dt=dt,
        surgery=surgery,
        curvature=curvature,
        normalized=normalized,
        tree_shortcut=tree_shortcut,
        tol_surgery=tol_surgery,
    )
    while model.running:
        model.step()
    return model.trajectory
