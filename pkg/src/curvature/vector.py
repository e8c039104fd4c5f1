from __future__ import annotations

import enum
from typing import Dict, Iterable

import numpy as np

from src.graph.measured_graph import MeasuredGraph


class CurvatureKind(str, enum.Enum):
    FORMAN = "forman"
    LLY = "lly"


class CurvatureVector:
    """Per-edge curvature values aligned with the edge order of a graph."""

    kind: CurvatureKind
    _values: np.ndarray

    def __init__(self, values: Iterable[float], kind: CurvatureKind) -> None:
        self._values = np.array(list(values), dtype=float)
        self._values.setflags(write=False)
        self.kind = CurvatureKind(kind)

    def __repr__(self) -> str:
        return (
            f"{self.__class__.__name__}(kind={self.kind.value}, "
            f"values={self._values.tolist()})"
        )

    def __len__(self) -> int:
        return self._values.size

    def __getitem__(self, index: int) -> float:
        return float(self._values[index])

    @property
    def values(self) -> np.ndarray:
        return self._values

    def as_dict(self, g: MeasuredGraph) -> Dict[str, float]:
        return {g.edge_id(i): float(k) for i, k in enumerate(self._values)}
