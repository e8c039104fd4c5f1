from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import networkx as nx

from src.exceptions import DisconnectedAfterSurgeryError, InvalidGraphError
from src.graph.measured_graph import (
    Edge,
    EdgeRef,
    MeasuredGraph,
    MetricAssignment,
    Vertex,
    check_alignment,
)

TOL_SURGERY = 1e-9

_log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SurgeryEvent:
    time: float
    removed_edge: Edge
    edge_weight: float
    alternative_distance: float


def _weight_function(omega: MetricAssignment, excluded: Optional[int]):
    weights = omega.weights

    def weight(u, v, attributes):
        index = attributes["index"]
        if index == excluded:
            return None  # hidden edge
        return weights[index]

    return weight


def shortest_distance(
    g: MeasuredGraph,
    omega: MetricAssignment,
    u: Vertex,
    v: Vertex,
    excluded_edge: Optional[EdgeRef] = None,
) -> float:
    """Length of the shortest ω-weighted path, ``math.inf`` when unreachable."""
    check_alignment(g, omega)
    g.check_vertex(u)
    g.check_vertex(v)
    if u == v:
        return 0.0
    excluded = None if excluded_edge is None else g.edge_index(excluded_edge)
    try:
        return float(
            nx.dijkstra_path_length(
                g.nx_graph, u, v, weight=_weight_function(omega, excluded)
            )
        )
    except nx.NetworkXNoPath:
        return math.inf


def distances_from(
    g: MeasuredGraph, omega: MetricAssignment, source: Vertex
) -> Dict[Vertex, float]:
    check_alignment(g, omega)
    g.check_vertex(source)
    return nx.single_source_dijkstra_path_length(
        g.nx_graph, source, weight=_weight_function(omega, None)
    )


def alternative_distance(
    g: MeasuredGraph, omega: MetricAssignment, edge: EdgeRef
) -> float:
    u, v = g.endpoints(edge)
    return shortest_distance(g, omega, u, v, excluded_edge=edge)


def surgery_scan(
    g: MeasuredGraph, omega: MetricAssignment, tol: float = TOL_SURGERY
) -> List[Edge]:
    """Edges that are not the strict unique shortest path between their endpoints."""
    violating = []
    for index, edge in enumerate(g.edges):
        if omega[index] >= alternative_distance(g, omega, index) - tol:
            violating.append(edge)
    return violating


def apply_surgery(
    g: MeasuredGraph,
    omega: MetricAssignment,
    t: float = 0.0,
    tol: float = TOL_SURGERY,
) -> Tuple[MeasuredGraph, MetricAssignment, List[SurgeryEvent]]:
    events = []
    while True:
        violating = surgery_scan(g, omega, tol=tol)
        if not violating:
            return g, omega, events
        # lowest edge index first, then rescan
        index = g.edge_index(violating[0])
        event = SurgeryEvent(
            time=t,
            removed_edge=g.edges[index],
            edge_weight=omega[index],
            alternative_distance=alternative_distance(g, omega, index),
        )
        try:
            g = g.without_edge(index)
        except InvalidGraphError as error:
            raise DisconnectedAfterSurgeryError(
                f"Removing edge {event.removed_edge} at t={t} disconnects the graph."
            ) from error
        omega = omega.without(index)
        events.append(event)
        _log.info(
            "surgery at t=%g removed %s (weight %g >= alternative %g)",
            t,
            event.removed_edge,
            event.edge_weight,
            event.alternative_distance,
        )
