from __future__ import annotations

from types import MappingProxyType
from typing import Dict, Hashable, Iterable, List, Mapping, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from src.exceptions import InvalidGraphError, InvalidMetricError, UnknownVertexError

Vertex = Hashable
Edge = Tuple[Vertex, Vertex]
EdgeRef = Union[int, Edge]


class MeasuredGraph:
    """A connected simple graph with vertex measure m1 and edge measure m2.

    The order of ``edges`` fixes the edge indices used by every matrix built
    from the graph. Instances are immutable; operations that change the edge
    set (surgery) return new graphs.
    """

    _nx_graph: nx.Graph
    _vertex_ids: Tuple[Vertex, ...]
    _edges: Tuple[Edge, ...]
    _m1: Mapping[Vertex, float]
    _m2: np.ndarray
    _edge_index: Dict[frozenset, int]
    _incident: Dict[Vertex, Tuple[int, ...]]

    def __init__(
        self,
        vertex_ids: Iterable[Vertex],
        edges: Iterable[Edge],
        m1: Mapping[Vertex, float],
        m2: Union[Sequence[float], Mapping[Edge, float]],
    ) -> None:
        self._vertex_ids = tuple(vertex_ids)
        self._edges = tuple((u, v) for u, v in edges)
        if len(set(self._vertex_ids)) != len(self._vertex_ids):
            raise InvalidGraphError("Duplicate vertex identifiers.")
        if not self._edges:
            raise InvalidGraphError("A measured graph needs at least one edge.")

        self._edge_index = dict()
        for index, (u, v) in enumerate(self._edges):
            if u == v:
                raise InvalidGraphError(f"Loop at vertex {u!r} is not allowed.")
            key = frozenset((u, v))
            if key in self._edge_index:
                raise InvalidGraphError(f"Parallel edge {u!r}-{v!r} is not allowed.")
            self._edge_index[key] = index

        vertex_set = set(self._vertex_ids)
        for u, v in self._edges:
            for x in (u, v):
                if x not in vertex_set:
                    raise InvalidGraphError(f"Edge endpoint {x!r} is not a vertex.")

        self._m1 = MappingProxyType(
            {x: self._positive(m1, x, "m1") for x in self._vertex_ids}
        )
        if isinstance(m2, Mapping):
            m2_values = [self._edge_measure_from_mapping(m2, e) for e in self._edges]
        else:
            m2_values = list(m2)
        if len(m2_values) != len(self._edges):
            raise InvalidGraphError(
                f"Expected {len(self._edges)} edge measures, got {len(m2_values)}."
            )
        self._m2 = np.asarray(m2_values, dtype=float)
        if not np.all(np.isfinite(self._m2)) or np.any(self._m2 <= 0.0):
            raise InvalidGraphError("Edge measure m2 must be positive and finite.")
        self._m2.setflags(write=False)

        graph = nx.Graph()
        for x in self._vertex_ids:
            graph.add_node(x, m1=self._m1[x])
        for index, (u, v) in enumerate(self._edges):
            graph.add_edge(u, v, index=index, m2=float(self._m2[index]))
        if not nx.is_connected(graph):
            raise InvalidGraphError("The graph must be connected.")
        self._nx_graph = nx.freeze(graph)

        incident: Dict[Vertex, List[int]] = {x: [] for x in self._vertex_ids}
        for index, (u, v) in enumerate(self._edges):
            incident[u].append(index)
            incident[v].append(index)
        self._incident = {x: tuple(indices) for x, indices in incident.items()}

    @staticmethod
    def _positive(m1: Mapping[Vertex, float], x: Vertex, name: str) -> float:
        try:
            value = float(m1[x])
        except KeyError:
            raise InvalidGraphError(f"Missing {name} value for vertex {x!r}.")
        if not np.isfinite(value) or value <= 0.0:
            raise InvalidGraphError(f"{name}({x!r}) must be positive, got {value}.")
        return value

    @staticmethod
    def _edge_measure_from_mapping(m2: Mapping[Edge, float], edge: Edge) -> float:
        u, v = edge
        if (u, v) in m2:
            return float(m2[(u, v)])
        if (v, u) in m2:
            return float(m2[(v, u)])
        raise InvalidGraphError(f"Missing m2 value for edge {u!r}-{v!r}.")

    def __repr__(self) -> str:
        return (
            f"{self.__class__.__name__}(num_vertices={self.num_vertices}, "
            f"num_edges={self.num_edges})"
        )

    def __eq__(self, other):
        if isinstance(other, MeasuredGraph):
            return (
                self._vertex_ids == other._vertex_ids
                and self._edges == other._edges
                and dict(self._m1) == dict(other._m1)
                and np.array_equal(self._m2, other._m2)
            )
        return False

    __hash__ = None

    @property
    def nx_graph(self) -> nx.Graph:
        return self._nx_graph

    @property
    def vertex_ids(self) -> Tuple[Vertex, ...]:
        return self._vertex_ids

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return self._edges

    @property
    def m1(self) -> Mapping[Vertex, float]:
        return self._m1

    @property
    def m2(self) -> np.ndarray:
        return self._m2

    @property
    def num_vertices(self) -> int:
        return len(self._vertex_ids)

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    def has_vertex(self, x: Vertex) -> bool:
        return x in self._m1

    def check_vertex(self, x: Vertex) -> None:
        if x not in self._m1:
            raise UnknownVertexError(f"Unknown vertex {x!r}.")

    def edge_index(self, edge: EdgeRef) -> int:
        if isinstance(edge, (int, np.integer)):
            if not 0 <= edge < self.num_edges:
                raise InvalidGraphError(f"Edge index {edge} out of range.")
            return int(edge)
        u, v = edge
        try:
            return self._edge_index[frozenset((u, v))]
        except KeyError:
            raise InvalidGraphError(f"{u!r}-{v!r} is not an edge of the graph.")

    def edge_id(self, edge: EdgeRef) -> str:
        u, v = self._edges[self.edge_index(edge)]
        return f"{u}-{v}"

    def endpoints(self, edge: EdgeRef) -> Edge:
        return self._edges[self.edge_index(edge)]

    def incident_edges(self, x: Vertex) -> Tuple[int, ...]:
        self.check_vertex(x)
        return self._incident[x]

    def degree(self, x: Vertex) -> int:
        return len(self.incident_edges(x))

    def neighbors(self, x: Vertex) -> List[Vertex]:
        self.check_vertex(x)
        return list(self._nx_graph.neighbors(x))

    def edge_measure(self, u: Vertex, v: Vertex) -> float:
        return float(self._m2[self.edge_index((u, v))])

    def without_edge(self, edge: EdgeRef) -> MeasuredGraph:
        index = self.edge_index(edge)
        edges = self._edges[:index] + self._edges[index + 1 :]
        m2 = np.delete(self._m2, index)
        return MeasuredGraph(self._vertex_ids, edges, self._m1, m2)

    def is_uniform(self) -> bool:
        return all(value == 1.0 for value in self._m1.values()) and bool(
            np.all(self._m2 == 1.0)
        )


class MetricAssignment:
    """Positive edge weights ω aligned with the edge order of a MeasuredGraph."""

    _weights: np.ndarray

    def __init__(self, weights: Iterable[float]) -> None:
        array = np.array(list(weights), dtype=float)
        if array.ndim != 1 or array.size == 0:
            raise InvalidMetricError("A metric is a non-empty vector of edge weights.")
        if not np.all(np.isfinite(array)) or np.any(array <= 0.0):
            raise InvalidMetricError("Edge weights must be positive and finite.")
        array.setflags(write=False)
        self._weights = array

    @classmethod
    def uniform(cls, g: MeasuredGraph, value: float = 1.0) -> MetricAssignment:
        return cls(np.full(g.num_edges, value, dtype=float))

    @classmethod
    def from_mapping(
        cls, g: MeasuredGraph, weights: Mapping[Edge, float]
    ) -> MetricAssignment:
        values = np.empty(g.num_edges)
        for edge, value in weights.items():
            values[g.edge_index(edge)] = value
        if len(weights) != g.num_edges:
            raise InvalidMetricError(
                f"Expected {g.num_edges} edge weights, got {len(weights)}."
            )
        return cls(values)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(weights={self._weights.tolist()})"

    def __len__(self) -> int:
        return self._weights.size

    def __getitem__(self, index: int) -> float:
        return float(self._weights[index])

    def __iter__(self):
        return iter(self._weights.tolist())

    def __eq__(self, other):
        if isinstance(other, MetricAssignment):
            return np.array_equal(self._weights, other._weights)
        return False

    __hash__ = None

    @property
    def weights(self) -> np.ndarray:
        return self._weights

    @property
    def total(self) -> float:
        return float(self._weights.sum())

    def scaled(self, factor: float) -> MetricAssignment:
        return MetricAssignment(self._weights * factor)

    def normalized(self) -> MetricAssignment:
        return MetricAssignment(self._weights / self._weights.sum())

    def without(self, index: int) -> MetricAssignment:
        return MetricAssignment(np.delete(self._weights, index))

    def as_dict(self, g: MeasuredGraph) -> Dict[str, float]:
        check_alignment(g, self)
        return {g.edge_id(i): float(w) for i, w in enumerate(self._weights)}


def check_alignment(g: MeasuredGraph, omega: MetricAssignment) -> None:
    if len(omega) != g.num_edges:
        raise InvalidMetricError(
            f"Metric has {len(omega)} weights but the graph has {g.num_edges} edges."
        )


def deg_measure(g: MeasuredGraph, x: Vertex) -> float:
    incident = g.incident_edges(x)
    return float(sum(g.m2[i] for i in incident) / g.m1[x])


def max_deg_measure(g: MeasuredGraph) -> float:
    return max(deg_measure(g, x) for x in g.vertex_ids)


def is_tree(g: MeasuredGraph) -> bool:
    return g.num_edges == g.num_vertices - 1


def line_graph_adjacency(g: MeasuredGraph) -> np.ndarray:
    n = g.num_edges
    adjacency = np.zeros((n, n))
    for x in g.vertex_ids:
        incident = g.incident_edges(x)
        for i in incident:
            for j in incident:
                if i != j:
                    adjacency[i, j] = 1.0
    return adjacency
