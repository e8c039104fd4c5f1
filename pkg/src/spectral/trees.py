from __future__ import annotations

import enum

from src.exceptions import NotATreeError, NotUniformMeasureError
from src.graph.measured_graph import MeasuredGraph, is_tree, line_graph_adjacency
from src.spectral.eigen import jacobi_eigh


class TreeCase(str, enum.Enum):
    PATH = "path_case"
    K13 = "k13_case"
    BIG_DEGREE = "big_degree_case"

    @property
    def lambda_sign(self) -> int:
        """Sign of λ_max(F) for a uniform tree of this case."""
        return {TreeCase.PATH: -1, TreeCase.K13: 0, TreeCase.BIG_DEGREE: 1}[self]


def classify_tree_uniform(g: MeasuredGraph) -> TreeCase:
    """Long-time behaviour of the Forman flow on a tree with m1 ≡ m2 ≡ 1.

    Paths lose all weight, K_{1,3} keeps constant weights and every other
    tree blows up.
    """
    if not is_tree(g):
        raise NotATreeError(
            f"Expected a tree, got {g.num_vertices} vertices and {g.num_edges} edges."
        )
    if not g.is_uniform():
        raise NotUniformMeasureError("Tree classification needs m1 ≡ m2 ≡ 1.")

    degrees = sorted(g.degree(x) for x in g.vertex_ids)
    if degrees[-1] <= 2:
        return TreeCase.PATH
    # among trees the degree sequence pins down the claw
    if degrees == [1, 1, 1, 3]:
        return TreeCase.K13
    return TreeCase.BIG_DEGREE


def line_graph_spectral_radius(g: MeasuredGraph) -> float:
    eigenvalues, _ = jacobi_eigh(line_graph_adjacency(g))
    return float(eigenvalues[-1])


def max_degree_bound(g: MeasuredGraph) -> int:
    """Lower bound max_x d(x) − 1 on the spectral radius of the line graph."""
    return max(g.degree(x) for x in g.vertex_ids) - 1
