from __future__ import annotations

import logging
from typing import List, Optional, Tuple

import numpy as np

from src.exceptions import EigenConvergenceError, PerronVectorError, SpectralGapError
from src.graph.measured_graph import MetricAssignment
from src.spectral.flow_matrix import FlowMatrix

JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
GAP_TOL = 1e-10

_log = logging.getLogger(__name__)


def _off_diagonal_norm(a: np.ndarray) -> float:
    return float(np.sqrt(2.0 * np.sum(np.triu(a, 1) ** 2)))


def _round_robin(n: int) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Split the n(n-1)/2 index pairs into rounds of disjoint pairs.

    Circle-method tournament ordering; with odd n the extra slot is a bye.
    """
    slots = n + n % 2
    players = list(range(slots))
    rounds = []
    for _ in range(slots - 1):
        pairs = [
            (min(players[i], players[-1 - i]), max(players[i], players[-1 - i]))
            for i in range(slots // 2)
        ]
        pairs = [(p, q) for p, q in pairs if q < n]
        if pairs:
            p, q = zip(*pairs)
            rounds.append((np.array(p, dtype=int), np.array(q, dtype=int)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def jacobi_eigh(
    matrix: np.ndarray, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS
) -> Tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi eigensolver for a real symmetric matrix.

    A sweep visits every off-diagonal pair once, in rounds of disjoint pairs
    whose rotations are applied together. Pairs with |a_pq| below
    ``tol / (2n)`` are left alone; together they stay under ``tol / 2``.

    Returns eigenvalues in ascending order and the matching orthonormal
    eigenvectors as columns.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"Expected a square matrix, got shape {a.shape}.")
    if not np.allclose(a, a.T, rtol=1e-12, atol=1e-12):
        raise ValueError("Jacobi rotations need a symmetric matrix.")
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    v = np.eye(n)
    negligible = tol / (2.0 * max(n, 1))
    rounds = _round_robin(n)

    for sweep in range(max_sweeps + 1):
        off = _off_diagonal_norm(a)
        if off < tol:
            break
        if sweep == max_sweeps:
            raise EigenConvergenceError(
                f"Jacobi rotations did not converge in {max_sweeps} sweeps "
                f"(off-diagonal norm {off:.3e})."
            )
        for p, q in rounds:
            apq = a[p, q]
            active = np.abs(apq) > negligible
            if not active.any():
                continue
            p, q, apq = p[active], q[active], apq[active]
            theta = (a[q, q] - a[p, p]) / (2.0 * apq)
            t = 1.0 / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            t = np.where(theta < 0.0, -t, t)
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c

            rotation = np.eye(n)
            rotation[p, p] = c
            rotation[q, q] = c
            rotation[p, q] = s
            rotation[q, p] = -s
            a = rotation.T @ a @ rotation
            a[p, q] = a[q, p] = 0.0
            v = v @ rotation
        a = 0.5 * (a + a.T)
    _log.debug("Jacobi converged after %d sweeps for n=%d", sweep, n)

    eigenvalues = np.diag(a).copy()
    order = np.argsort(eigenvalues, kind="stable")
    return eigenvalues[order], v[:, order]


def perron_normalize(vector: np.ndarray) -> np.ndarray:
    """Flip the sign so the largest-magnitude entry is positive; require positivity."""
    vector = np.array(vector, dtype=float)
    if vector[np.argmax(np.abs(vector))] < 0.0:
        vector = -vector
    if np.any(vector <= 0.0):
        raise PerronVectorError(
            f"Dominant eigenvector is not strictly positive: {vector.tolist()}."
        )
    return vector


def eigendecompose_symmetric(matrix: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Jacobi decomposition with a simple, positive dominant eigenpair.

    The matrix must have non-negative off-diagonal entries and a connected
    support pattern so that Perron-Frobenius applies.
    """
    eigenvalues, eigenvectors = jacobi_eigh(matrix)
    if eigenvalues.size >= 2 and eigenvalues[-1] - eigenvalues[-2] <= GAP_TOL:
        raise SpectralGapError(
            f"Largest eigenvalue is not simple: gap "
            f"{eigenvalues[-1] - eigenvalues[-2]:.3e}."
        )
    eigenvectors[:, -1] = perron_normalize(eigenvectors[:, -1])
    return eigenvalues, eigenvectors


class SpectralData:
    """Sorted eigenpairs of F̃ with optional flow coefficients c_i(e_l)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    coefficients: Optional[np.ndarray]

    def __init__(
        self,
        eigenvalues: np.ndarray,
        eigenvectors: np.ndarray,
        coefficients: Optional[np.ndarray] = None,
    ) -> None:
        self.eigenvalues = eigenvalues
        self.eigenvectors = eigenvectors
        self.coefficients = coefficients

    def __repr__(self) -> str:
        return (
            f"{self.__class__.__name__}(lambda_max={self.lambda_max}, "
            f"gap={self.spectral_gap})"
        )

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def perron_vector(self) -> np.ndarray:
        return self.eigenvectors[:, -1]

    @property
    def spectral_gap(self) -> Optional[float]:
        if self.eigenvalues.size < 2:
            return None
        return float(self.eigenvalues[-1] - self.eigenvalues[-2])

    def with_coefficients(self, coefficients: np.ndarray) -> SpectralData:
        return SpectralData(self.eigenvalues, self.eigenvectors, coefficients)


def eigendecompose(fm: FlowMatrix) -> SpectralData:
    eigenvalues, eigenvectors = eigendecompose_symmetric(fm.Ftilde)
    return SpectralData(eigenvalues, eigenvectors)


def flow_coefficients(
    sd: SpectralData, fm: FlowMatrix, omega0: MetricAssignment
) -> np.ndarray:
    """c[i, l] such that ω(t, e_l) = Σ_i c[i, l] exp(λ_i t)."""
    sqrt_m2 = fm.sqrt_m2
    projections = sd.eigenvectors.T @ (sqrt_m2 * omega0.weights)
    return projections[:, None] * sd.eigenvectors.T / sqrt_m2[None, :]


def spectral_solution(
    sd: SpectralData, fm: FlowMatrix, omega0: MetricAssignment, t: float
) -> np.ndarray:
    coefficients = flow_coefficients(sd, fm, omega0)
    return coefficients.T @ np.exp(sd.eigenvalues * t)
