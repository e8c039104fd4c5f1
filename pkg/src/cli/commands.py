from __future__ import annotations

import logging
from pathlib import Path
from typing import Callable, Dict, List

import numpy as np
import pandas as pd
from tqdm import tqdm

from src.cli.config import Command, RunConfig
from src.cli.output import output_path, write_frame, write_json
from src.cli.recipes import (
    MAX_REPRODUCE_T,
    REPRODUCE_DT,
    Figure,
    FlowCase,
    Solver,
    edge_labels,
    flow_cases,
    parse_figure,
)
from src.curvature.forman import forman_curvature
from src.curvature.lin_lu_yau import default_epsilon, lly_curvature, lly_limit_estimate
from src.flow.exact import forman_flow_exact
from src.flow.trajectory import FlowTrajectory
from src.logger import logger
from src.model.model import lly_flow_integrate
from src.spectral.convergence import (
    classify_convergence,
    curvature_bounds,
    long_time_horizon,
)
from src.spectral.eigen import eigendecompose, flow_coefficients
from src.spectral.flow_matrix import build_flow_matrix
from src.spectral.inverse import curvature_matrix_lambda_max, inverse_curvature

EXACT_SAMPLES = 201

_log = logging.getLogger(__name__)


def _edge_map(g, values) -> Dict[str, float]:
    return {g.edge_id(i): float(value) for i, value in enumerate(values)}


@logger
def cmd_curvature(cfg: RunConfig) -> List[Path]:
    g, omega = cfg.load_graph()
    forman = forman_curvature(g, omega)
    lly = lly_curvature(g, omega)
    epsilon = default_epsilon(g)
    frame = pd.DataFrame(
        [
            (
                g.edge_id(i),
                forman[i],
                lly[i],
                lly_limit_estimate(g, omega, i, epsilon),
            )
            for i in range(g.num_edges)
        ],
        columns=["edge", "forman", "lly", "lly_limit_estimate"],
    )
    return [write_frame(output_path(cfg.out_dir, "curvature", cfg.name, ".csv"), frame)]


@logger
def cmd_flow(cfg: RunConfig) -> List[Path]:
    g, omega0 = cfg.load_graph()
    traj = lly_flow_integrate(
        g,
        omega0,
        cfg.t_end,
        dt=cfg.dt,
        surgery=cfg.surgery,
        curvature=cfg.curvature,
        normalized=cfg.normalized,
        tol_surgery=cfg.tol_surgery,
    )
    final_graph = traj.graph_at(traj.final)
    summary = {
        "graph": cfg.name,
        "curvature": cfg.curvature,
        "normalized": cfg.normalized,
        "t_end": traj.final.t,
        "dt": cfg.dt,
        "num_samples": len(traj),
        "num_surgeries": len(traj.surgeries),
        "remaining_edges": [
            final_graph.edge_id(i) for i in range(final_graph.num_edges)
        ],
        "final_weights": _edge_map(final_graph, traj.final.weights),
        "final_curvature": _edge_map(final_graph, traj.final.kappa.values),
    }
    return [
        write_frame(output_path(cfg.out_dir, "flow", cfg.name, ".csv"), traj.to_frame()),
        write_frame(
            output_path(cfg.out_dir, "flow", f"{cfg.name}_surgeries", ".csv"),
            traj.surgery_frame(),
        ),
        write_json(output_path(cfg.out_dir, "flow", cfg.name, ".json"), summary),
    ]


@logger
def cmd_spectrum(cfg: RunConfig) -> List[Path]:
    g, omega0 = cfg.load_graph()
    fm = build_flow_matrix(g)
    sd = eigendecompose(fm)
    coefficients = flow_coefficients(sd, fm, omega0)
    bounds = curvature_bounds(g)
    eigenvalues = pd.DataFrame(
        {"index": np.arange(1, sd.eigenvalues.size + 1), "eigenvalue": sd.eigenvalues}
    )
    summary = {
        "graph": cfg.name,
        "lambda_max": sd.lambda_max,
        "spectral_gap": sd.spectral_gap,
        "long_time_horizon": long_time_horizon(sd),
        "perron_vector": _edge_map(g, sd.perron_vector),
        "dominant_coefficients": _edge_map(g, coefficients[-1]),
        "bounds": {"lower": bounds.lower, "upper": bounds.upper},
    }
    return [
        write_frame(output_path(cfg.out_dir, "spectrum", cfg.name, ".csv"), eigenvalues),
        write_json(output_path(cfg.out_dir, "spectrum", cfg.name, ".json"), summary),
    ]


@logger
def cmd_classify(cfg: RunConfig) -> List[Path]:
    g, omega0 = cfg.load_graph()
    report = classify_convergence(g, omega0, tol_zero=cfg.tol_zero)
    payload = {"graph": cfg.name, "tol_zero": cfg.tol_zero, **report.to_dict()}
    return [write_json(output_path(cfg.out_dir, "classify", cfg.name, ".json"), payload)]


@logger
def cmd_inverse(cfg: RunConfig) -> List[Path]:
    g, omega0 = cfg.load_graph()
    if cfg.kappa is not None:
        target = np.asarray(cfg.kappa)
    else:
        target = forman_curvature(g, omega0).values
    metric = inverse_curvature(g, target, tol=cfg.tol_inverse)
    payload = {
        "graph": cfg.name,
        "target": _edge_map(g, target),
        "lambda_max_K": curvature_matrix_lambda_max(g, target),
        "metric": None if metric is None else metric.normalized().as_dict(g),
    }
    return [write_json(output_path(cfg.out_dir, "inverse", cfg.name, ".json"), payload)]


def run_case(case: FlowCase, tol_zero: float) -> Dict:
    """Evolve one reproduction case up to its long-time horizon."""
    report = classify_convergence(case.graph, case.omega0, tol_zero=tol_zero)
    t_end = min(report.long_time_horizon, MAX_REPRODUCE_T)
    if case.solver == Solver.EXACT:
        traj = forman_flow_exact(
            case.graph, case.omega0, np.linspace(0.0, t_end, EXACT_SAMPLES)
        )
    else:
        traj = lly_flow_integrate(
            case.graph,
            case.omega0,
            t_end,
            dt=REPRODUCE_DT,
            normalized=case.normalized,
        )
    return {"trajectory": traj, "report": report, "t_end": t_end}


def _case_summary(case: FlowCase, traj: FlowTrajectory, report, t_end) -> Dict:
    g = traj.graph_at(traj.final)
    limit = np.array(list(report.limiting_normalized_metric.values()))
    return {
        **report.to_dict(),
        "t_end": t_end,
        "normalized_flow": case.normalized,
        "edge_labels": edge_labels(g),
        "initial_weights": _edge_map(case.graph, case.omega0.weights),
        "final_weights": _edge_map(g, traj.final.weights),
        "final_normalized_weights": _edge_map(g, traj.final.normalized_weights),
        "final_curvature": _edge_map(g, traj.final.kappa.values),
        "max_deviation_from_limit": float(
            np.max(np.abs(traj.final.normalized_weights - limit))
        ),
    }


@logger
def cmd_reproduce(cfg: RunConfig) -> List[Path]:
    if cfg.figure == "all":
        figures = list(Figure)
    else:
        figures = [parse_figure(cfg.figure)]

    written = []
    for figure in figures:
        summary = {"figure": figure.value, "cases": dict()}
        for case in tqdm(flow_cases(figure), desc=figure.value, leave=False):
            result = run_case(case, cfg.tol_zero)
            traj = result["trajectory"]
            written.append(
                write_frame(
                    output_path(
                        cfg.out_dir, "reproduce", f"{figure.value}_{case.name}", ".csv"
                    ),
                    traj.to_frame(),
                )
            )
            summary["cases"][case.name] = _case_summary(
                case, traj, result["report"], result["t_end"]
            )
            _log.info("%s/%s finished at t=%g", figure.value, case.name, traj.final.t)
        written.append(
            write_json(
                output_path(cfg.out_dir, "reproduce", figure.value, ".json"), summary
            )
        )
    return written


COMMANDS: Dict[Command, Callable[[RunConfig], List[Path]]] = {
    Command.CURVATURE: cmd_curvature,
    Command.FLOW: cmd_flow,
    Command.SPECTRUM: cmd_spectrum,
    Command.CLASSIFY: cmd_classify,
    Command.INVERSE: cmd_inverse,
    Command.REPRODUCE: cmd_reproduce,
}
