"""Named reproduction runs for the star and tree experiments."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.exceptions import UnknownFigureError
from src.graph.measured_graph import Edge, MeasuredGraph, MetricAssignment
from src.graph.utils import GraphFamily, MeasureMode, build_named_graph, build_tree

REPRODUCE_DT = 1e-2
MAX_REPRODUCE_T = 200.0

TREE_EDGES: List[Edge] = [(1, 5), (2, 5), (3, 4), (4, 5), (5, 6), (6, 7), (6, 8)]
TREE_DELTAS = (0.0, 0.01, 0.02, 0.03)
K13_MEASURES = (1.0, 2.0, 3.0)
DEG1_PATH_MEASURES = (1.0, 2.0, 3.0, 4.0, 5.0)
DEG1_STAR_MEASURES = (1.0, 2.0, 3.0, 4.0, 5.0, 6.0)


class Figure(str, enum.Enum):
    FIG1A = "fig1a"
    FIG1B = "fig1b"
    FIG1C = "fig1c"
    FIG1D = "fig1d"
    FIG2 = "fig2"
    EX42 = "ex42"
    EX43 = "ex43"


class Solver(str, enum.Enum):
    LLY_FLOW = "lly_flow"
    EXACT = "exact"


@dataclass(frozen=True)
class FlowCase:
    """One trajectory to compute: graph, start metric and how to evolve it."""

    name: str
    graph: MeasuredGraph
    omega0: MetricAssignment
    solver: Solver = Solver.LLY_FLOW
    normalized: bool = False


def parse_figure(value: str) -> Figure:
    try:
        return Figure(value)
    except ValueError:
        raise UnknownFigureError(
            f"Unknown figure {value!r}. Choose from "
            f"{', '.join(f.value for f in Figure)}."
        )


def tree_initial_metric(g: MeasuredGraph, delta: float) -> MetricAssignment:
    """1/7 + (−1)^i δ on the i-th edge (counted from 1)."""
    signs = np.array([(-1.0) ** i for i in range(1, g.num_edges + 1)])
    return MetricAssignment(1.0 / 7.0 + signs * delta)


def _star(n: int, mode: MeasureMode, m2: Optional[Tuple[float, ...]] = None):
    return build_named_graph(GraphFamily.STAR, n, mode, m2)


def flow_cases(figure: Figure) -> List[FlowCase]:
    figure = Figure(figure)
    if figure == Figure.FIG1A:
        g = _star(3, MeasureMode.UNIFORM)
        return [FlowCase("k13_uniform", g, MetricAssignment([1.0, 2.0, 3.0]))]
    if figure == Figure.FIG1B:
        g = _star(3, MeasureMode.NORMALIZED_DEG1, K13_MEASURES)
        return [FlowCase("k13_normalized", g, MetricAssignment.uniform(g))]
    if figure == Figure.FIG1C:
        g = _star(6, MeasureMode.UNIFORM)
        return [FlowCase("k16_uniform", g, MetricAssignment.uniform(g))]
    if figure == Figure.FIG1D:
        g = _star(6, MeasureMode.NORMALIZED_DEG1)
        return [FlowCase("k16_normalized", g, MetricAssignment.uniform(g))]
    if figure == Figure.FIG2:
        g = build_tree(TREE_EDGES)
        return [
            FlowCase(
                f"delta_{delta:g}",
                g,
                tree_initial_metric(g, delta),
                normalized=True,
            )
            for delta in TREE_DELTAS
        ]
    if figure == Figure.EX42:
        g = build_named_graph(
            GraphFamily.PATH,
            len(DEG1_PATH_MEASURES),
            MeasureMode.NORMALIZED_DEG1,
            DEG1_PATH_MEASURES,
        )
        return [FlowCase("deg1_path", g, MetricAssignment.uniform(g), Solver.EXACT)]
    g = _star(len(DEG1_STAR_MEASURES), MeasureMode.NORMALIZED_DEG1, DEG1_STAR_MEASURES)
    return [FlowCase("deg1_star", g, MetricAssignment.uniform(g), Solver.EXACT)]


def edge_labels(g: MeasuredGraph) -> Dict[str, str]:
    """Edge ids mapped to the ``e<u><v>`` labels used in plots."""
    return {g.edge_id(i): f"e{u}{v}" for i, (u, v) in enumerate(g.edges)}
