from __future__ import annotations

import math
from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np

from src.curvature.vector import CurvatureKind, CurvatureVector
from src.exceptions import InvalidGraphError
from src.graph.measured_graph import (
    EdgeRef,
    MeasuredGraph,
    MetricAssignment,
    Vertex,
    check_alignment,
)


def laplacian_matrix(g: MeasuredGraph) -> np.ndarray:
    """Dense Δ in vertex order: (Δf)(x) = Σ_y m2(x,y)(f(y) − f(x)) / m1(x)."""
    position = {x: i for i, x in enumerate(g.vertex_ids)}
    laplacian = np.zeros((g.num_vertices, g.num_vertices))
    for index, (u, v) in enumerate(g.edges):
        i, j = position[u], position[v]
        laplacian[i, j] += g.m2[index] / g.m1[u]
        laplacian[j, i] += g.m2[index] / g.m1[v]
    laplacian -= np.diag(laplacian.sum(axis=1))
    return laplacian


def laplacian_apply(g: MeasuredGraph, f: Mapping[Vertex, float], x: Vertex) -> float:
    total = 0.0
    for index in g.incident_edges(x):
        u, v = g.edges[index]
        y = v if u == x else u
        total += g.m2[index] * (f[y] - f[x])
    return float(total / g.m1[x])


def _vertex_term(
    g: MeasuredGraph, omega: MetricAssignment, index: int, x: Vertex
) -> float:
    own = g.m2[index] / g.m1[x]
    others = sum(
        g.m2[j] / g.m1[x] * omega[j] / omega[index]
        for j in g.incident_edges(x)
        if j != index
    )
    return own - others


def forman_edge(g: MeasuredGraph, omega: MetricAssignment, e: EdgeRef) -> float:
    check_alignment(g, omega)
    index = g.edge_index(e)
    u, v = g.edges[index]
    return float(_vertex_term(g, omega, index, u) + _vertex_term(g, omega, index, v))


def forman_curvature(g: MeasuredGraph, omega: MetricAssignment) -> CurvatureVector:
    return CurvatureVector(
        (forman_edge(g, omega, i) for i in range(g.num_edges)), CurvatureKind.FORMAN
    )


def forman_classic_edge(
    g: MeasuredGraph,
    vertex_weights: Mapping[Vertex, float],
    edge_weights: Sequence[float],
    e: EdgeRef,
) -> float:
    """Forman's original curvature of e divided by w2(e).

    Only the combinatorics of ``g`` is used; its measures are ignored in
    favour of the vertex weights w1 and edge weights w2.
    """
    index = g.edge_index(e)
    w2 = np.asarray(edge_weights, dtype=float)
    total = 0.0
    for x in g.edges[index]:
        total += vertex_weights[x] / w2[index]
        total -= sum(
            vertex_weights[x] / math.sqrt(w2[j] * w2[index])
            for j in g.incident_edges(x)
            if j != index
        )
    return float(total)


class TwoCellComplex:
    """A measured graph together with 2-cells glued along some of its cycles."""

    base: MeasuredGraph
    cells: Tuple[Tuple[Tuple[Vertex, ...], float], ...]
    _cell_edges: Tuple[frozenset, ...]

    def __init__(
        self,
        base: MeasuredGraph,
        cells: Sequence[Tuple[Sequence[Vertex], float]] = (),
    ) -> None:
        self.base = base
        seen = set()
        normalized, cell_edges = [], []
        for cycle, m3 in cells:
            cycle = tuple(cycle)
            if len(cycle) < 3 or len(set(cycle)) != len(cycle):
                raise InvalidGraphError(
                    f"A 2-cell needs an injective cycle of length >= 3, got {cycle}."
                )
            if m3 <= 0:
                raise InvalidGraphError(f"2-cell measure must be positive, got {m3}.")
            edges = frozenset(
                base.edge_index((cycle[k], cycle[(k + 1) % len(cycle)]))
                for k in range(len(cycle))
            )
            key = self._canonical(base, cycle)
            if key in seen:
                raise InvalidGraphError(f"Duplicate 2-cell {cycle}.")
            seen.add(key)
            normalized.append((cycle, float(m3)))
            cell_edges.append(edges)
        self.cells = tuple(normalized)
        self._cell_edges = tuple(cell_edges)

    @staticmethod
    def _canonical(base: MeasuredGraph, cycle: Tuple[Vertex, ...]) -> Tuple[int, ...]:
        position = {x: i for i, x in enumerate(base.vertex_ids)}
        labels = [position[x] for x in cycle]
        n = len(labels)
        rotations = []
        for sequence in (labels, labels[::-1]):
            for k in range(n):
                rotations.append(tuple(sequence[k:] + sequence[:k]))
        return min(rotations)

    def faces_of(self, index: int) -> List[int]:
        return [k for k, edges in enumerate(self._cell_edges) if index in edges]


def forman_cell_edge(
    complex_: TwoCellComplex, omega: MetricAssignment, e: EdgeRef
) -> float:
    g = complex_.base
    check_alignment(g, omega)
    index = g.edge_index(e)
    endpoints = set(g.edges[index])
    faces = set(complex_.faces_of(index))
    m2 = g.m2

    curvature = sum(m2[index] / g.m1[x] for x in endpoints)
    curvature += sum(complex_.cells[k][1] / m2[index] for k in faces)

    neighbours: Dict[int, None] = dict()
    for x in endpoints:
        for j in g.incident_edges(x):
            neighbours[j] = None
    for k in faces:
        for j in complex_._cell_edges[k]:
            neighbours[j] = None
    neighbours.pop(index, None)

    for j in neighbours:
        shared_vertices = endpoints & set(g.edges[j])
        shared_faces = faces & set(complex_.faces_of(j))
        coupling = sum(m2[j] / g.m1[x] for x in shared_vertices) - sum(
            complex_.cells[k][1] / m2[index] for k in shared_faces
        )
        curvature -= omega[j] / omega[index] * abs(coupling)
    return float(curvature)
