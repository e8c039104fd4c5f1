from __future__ import annotations

import enum
import itertools
from collections import defaultdict
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, TextIO, Tuple, Union

from src.exceptions import GraphFormatError, InvalidGraphError
from src.graph.measured_graph import Edge, MeasuredGraph, MetricAssignment, Vertex


class GraphFamily(str, enum.Enum):
    PATH = "path"
    STAR = "star"
    CYCLE = "cycle"
    COMPLETE = "complete"


class MeasureMode(str, enum.Enum):
    UNIFORM = "uniform"
    NORMALIZED_DEG1 = "normalized_deg1"


def family_edges(family: GraphFamily, n: int) -> Tuple[List[Vertex], List[Edge]]:
    family = GraphFamily(family)
    if family in (GraphFamily.PATH, GraphFamily.STAR):
        if n < 1:
            raise InvalidGraphError(f"{family.value} needs at least one edge, got {n}.")
        vertices = list(range(n + 1))
        if family == GraphFamily.PATH:
            edges = [(i, i + 1) for i in range(n)]
        else:
            edges = [(0, i) for i in range(1, n + 1)]
    else:
        if n < 3:
            raise InvalidGraphError(
                f"{family.value} needs at least three vertices, got {n}."
            )
        vertices = list(range(n))
        if family == GraphFamily.CYCLE:
            edges = [(i, (i + 1) % n) for i in range(n)]
        else:
            edges = list(itertools.combinations(vertices, 2))
    return vertices, edges


def build_graph(
    vertices: Sequence[Vertex],
    edges: Sequence[Edge],
    measure_mode: MeasureMode = MeasureMode.UNIFORM,
    m2_values: Optional[Sequence[float]] = None,
) -> MeasuredGraph:
    """Attach uniform or Deg≡1 measures to an edge list.

    In the normalized mode ``m2_values`` default to 1 and m1(x) is the sum of
    the measures of the edges at x.
    """
    measure_mode = MeasureMode(measure_mode)
    if measure_mode == MeasureMode.UNIFORM:
        if m2_values is not None:
            raise InvalidGraphError("Uniform measures take no m2 values.")
        return MeasuredGraph(
            vertices, edges, {x: 1.0 for x in vertices}, [1.0] * len(edges)
        )

    if m2_values is None:
        m2_values = [1.0] * len(edges)
    if len(m2_values) != len(edges):
        raise InvalidGraphError(
            f"Expected {len(edges)} m2 values for the normalized measure, "
            f"got {len(m2_values)}."
        )
    m1: Dict[Vertex, float] = defaultdict(float)
    for (u, v), value in zip(edges, m2_values):
        m1[u] += value
        m1[v] += value
    return MeasuredGraph(vertices, edges, dict(m1), m2_values)


def build_named_graph(
    family: GraphFamily,
    n: int,
    measure_mode: MeasureMode = MeasureMode.UNIFORM,
    m2_values: Optional[Sequence[float]] = None,
) -> MeasuredGraph:
    vertices, edges = family_edges(family, n)
    return build_graph(vertices, edges, measure_mode, m2_values)


def build_tree(
    edges: Sequence[Edge],
    measure_mode: MeasureMode = MeasureMode.UNIFORM,
    m2_values: Optional[Sequence[float]] = None,
) -> MeasuredGraph:
    vertices = list(dict.fromkeys(x for edge in edges for x in edge))
    return build_graph(vertices, edges, measure_mode, m2_values)


def parse_named_graph(value: str) -> Tuple[GraphFamily, int]:
    """Parse ``family:n`` strings such as ``star:3``."""
    try:
        family, size = value.split(":")
        return GraphFamily(family.strip().lower()), int(size)
    except ValueError:
        raise InvalidGraphError(
            f"Invalid named graph {value!r}. Use family:n with family in "
            f"{', '.join(f.value for f in GraphFamily)}."
        )


def _number(token: str, line_number: int, what: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise GraphFormatError(f"{what} must be a number, got {token!r}", line_number)


def _decoded_lines(graph_file: TextIO) -> Iterator[str]:
    try:
        yield from graph_file
    except UnicodeDecodeError as error:
        raise GraphFormatError(f"graph file is not valid UTF-8: {error.reason}")


def read_graph_file(
    path: Union[str, Path]
) -> Tuple[MeasuredGraph, MetricAssignment]:
    """Read the ``graph``/``vertex``/``edge`` line format.

    Edge order in the file fixes the edge indices. Without ``omega0`` columns
    the initial metric is 1 on every edge.
    """
    header: Optional[Tuple[int, int]] = None
    m1: Dict[str, float] = dict()
    edges: List[Edge] = []
    m2: List[float] = []
    omega0: List[Optional[float]] = []

    with open(path, encoding="utf-8") as graph_file:
        for line_number, raw in enumerate(_decoded_lines(graph_file), start=1):
            tokens = raw.split("#", 1)[0].split()
            if not tokens:
                continue
            keyword, args = tokens[0], tokens[1:]
            if header is None:
                if keyword != "graph" or len(args) != 2:
                    raise GraphFormatError(
                        "expected header 'graph <num_vertices> <num_edges>'",
                        line_number,
                    )
                try:
                    header = (int(args[0]), int(args[1]))
                except ValueError:
                    raise GraphFormatError("header counts must be integers", line_number)
            elif keyword == "vertex":
                if len(args) != 2:
                    raise GraphFormatError("expected 'vertex <id> <m1>'", line_number)
                if edges:
                    raise GraphFormatError(
                        "vertex lines must precede edge lines", line_number
                    )
                if args[0] in m1:
                    raise GraphFormatError(f"duplicate vertex {args[0]!r}", line_number)
                m1[args[0]] = _number(args[1], line_number, "m1")
            elif keyword == "edge":
                if len(args) not in (3, 4):
                    raise GraphFormatError(
                        "expected 'edge <id_u> <id_v> <m2> [<omega0>]'", line_number
                    )
                for x in args[:2]:
                    if x not in m1:
                        raise GraphFormatError(f"undeclared vertex {x!r}", line_number)
                edges.append((args[0], args[1]))
                m2.append(_number(args[2], line_number, "m2"))
                omega0.append(
                    _number(args[3], line_number, "omega0") if len(args) == 4 else None
                )
            else:
                raise GraphFormatError(f"unknown keyword {keyword!r}", line_number)

    if header is None:
        raise GraphFormatError("empty graph file")
    if header != (len(m1), len(edges)):
        raise GraphFormatError(
            f"header announces {header[0]} vertices and {header[1]} edges, "
            f"found {len(m1)} and {len(edges)}"
        )
    given = [w for w in omega0 if w is not None]
    if given and len(given) != len(omega0):
        raise GraphFormatError("omega0 must be given on every edge or on none")

    g = MeasuredGraph(list(m1), edges, m1, m2)
    metric = MetricAssignment(given) if given else MetricAssignment.uniform(g)
    return g, metric


def write_graph_file(
    path: Union[str, Path], g: MeasuredGraph, omega: Optional[MetricAssignment] = None
) -> None:
    lines = [f"graph {g.num_vertices} {g.num_edges}"]
    lines += [f"vertex {x} {g.m1[x]!r}" for x in g.vertex_ids]
    for index, (u, v) in enumerate(g.edges):
        line = f"edge {u} {v} {float(g.m2[index])!r}"
        if omega is not None:
            line += f" {omega[index]!r}"
        lines.append(line)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
