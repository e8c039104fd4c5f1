from __future__ import annotations

import numpy as np

from src.graph.measured_graph import MeasuredGraph


class FlowMatrix:
    """Generator F of the Forman flow dω/dt = Fω and its symmetrization.

    ``Ftilde = M F M⁻¹`` with ``M = diag(√m2)``.
    """

    F: np.ndarray
    M: np.ndarray
    Ftilde: np.ndarray

    def __init__(self, F: np.ndarray, M: np.ndarray, Ftilde: np.ndarray) -> None:
        self.F = F
        self.M = M
        self.Ftilde = Ftilde
        for matrix in (self.F, self.M, self.Ftilde):
            matrix.setflags(write=False)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(num_edges={self.size})"

    @property
    def size(self) -> int:
        return self.F.shape[0]

    @property
    def sqrt_m2(self) -> np.ndarray:
        return np.diag(self.M).copy()


def build_flow_matrix(g: MeasuredGraph) -> FlowMatrix:
    n = g.num_edges
    F = np.zeros((n, n))
    for x in g.vertex_ids:
        incident = g.incident_edges(x)
        for i in incident:
            F[i, i] -= g.m2[i] / g.m1[x]
            for j in incident:
                if j != i:
                    F[i, j] = g.m2[j] / g.m1[x]

    sqrt_m2 = np.sqrt(g.m2)
    M = np.diag(sqrt_m2)
    Ftilde = F * sqrt_m2[:, None] / sqrt_m2[None, :]
    Ftilde = 0.5 * (Ftilde + Ftilde.T)
    return FlowMatrix(F, M, Ftilde)
