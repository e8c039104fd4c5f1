from __future__ import annotations

import argparse
import enum
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional, Tuple

from src.curvature.vector import CurvatureKind
from src.exceptions import InputError
from src.graph.measured_graph import MeasuredGraph, MetricAssignment
from src.graph.surgery import TOL_SURGERY
from src.graph.utils import (
    MeasureMode,
    build_named_graph,
    parse_named_graph,
    read_graph_file,
)
from src.model.model import DEFAULT_DT
from src.spectral.convergence import TOL_ZERO
from src.spectral.inverse import TOL_INVERSE

ENV_TOL_ZERO = "RICCI_TOL_ZERO"

MEASURE_CHOICES = {
    "uniform": MeasureMode.UNIFORM,
    "normalized": MeasureMode.NORMALIZED_DEG1,
}


class Command(str, enum.Enum):
    CURVATURE = "curvature"
    FLOW = "flow"
    SPECTRUM = "spectrum"
    CLASSIFY = "classify"
    INVERSE = "inverse"
    REPRODUCE = "reproduce"


@dataclass(frozen=True)
class RunConfig:
    command: Command
    input_path: Optional[Path] = None
    named: Optional[str] = None
    measure_mode: MeasureMode = MeasureMode.UNIFORM
    m2_values: Optional[Tuple[float, ...]] = None
    t_end: float = 1.0
    dt: float = DEFAULT_DT
    surgery: bool = True
    curvature: CurvatureKind = CurvatureKind.LLY
    normalized: bool = False
    kappa: Optional[Tuple[float, ...]] = None
    figure: Optional[str] = None
    out_dir: Path = Path("results")
    tol_zero: float = TOL_ZERO
    tol_surgery: float = TOL_SURGERY
    tol_inverse: float = TOL_INVERSE

    def __post_init__(self):
        if self.command != Command.REPRODUCE:
            if (self.input_path is None) == (self.named is None):
                raise InputError("Give exactly one of --input FILE or --named SPEC.")
        if not (math.isfinite(self.t_end) and self.t_end >= 0.0):
            raise InputError(
                f"--t-end must be finite and non-negative, got {self.t_end}."
            )
        if not (math.isfinite(self.dt) and self.dt > 0.0):
            raise InputError(f"--dt must be finite and positive, got {self.dt}.")
        for name in ("tol_zero", "tol_surgery", "tol_inverse"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise InputError(f"{name} must be finite and positive, got {value}.")

    @classmethod
    def from_args(
        cls, args: argparse.Namespace, environ: Mapping[str, str] = os.environ
    ) -> RunConfig:
        tol_zero = getattr(args, "tol_zero", None)
        if tol_zero is None:
            try:
                tol_zero = float(environ.get(ENV_TOL_ZERO, TOL_ZERO))
            except ValueError:
                raise InputError(
                    f"{ENV_TOL_ZERO} must be a number, got {environ[ENV_TOL_ZERO]!r}."
                )
        return cls(
            command=Command(args.command),
            input_path=_optional_path(getattr(args, "input", None)),
            named=getattr(args, "named", None),
            measure_mode=MEASURE_CHOICES[getattr(args, "measure", "uniform")],
            m2_values=_optional_tuple(getattr(args, "m2", None)),
            t_end=getattr(args, "t_end", 1.0),
            dt=getattr(args, "dt", DEFAULT_DT),
            surgery=getattr(args, "surgery", True),
            curvature=CurvatureKind(getattr(args, "curvature", "lly")),
            normalized=getattr(args, "normalized", False),
            kappa=_optional_tuple(getattr(args, "kappa", None)),
            figure=getattr(args, "figure", None),
            out_dir=Path(args.out),
            tol_zero=tol_zero,
            tol_surgery=getattr(args, "tol_surgery", TOL_SURGERY),
            tol_inverse=getattr(args, "tol_inverse", TOL_INVERSE),
        )

    @property
    def name(self) -> str:
        """Stem shared by the output files of this run."""
        if self.command == Command.REPRODUCE:
            return self.figure
        if self.input_path is not None:
            return self.input_path.stem
        family, size = parse_named_graph(self.named)
        return f"{family.value}_{size}"

    def load_graph(self) -> Tuple[MeasuredGraph, MetricAssignment]:
        if self.input_path is not None:
            if self.m2_values is not None:
                raise InputError("--m2 only applies to named graphs.")
            return read_graph_file(self.input_path)
        family, size = parse_named_graph(self.named)
        g = build_named_graph(family, size, self.measure_mode, self.m2_values)
        return g, MetricAssignment.uniform(g)


def _optional_path(value) -> Optional[Path]:
    return None if value is None else Path(value)


def _optional_tuple(values) -> Optional[Tuple[float, ...]]:
    return None if values is None else tuple(float(v) for v in values)
