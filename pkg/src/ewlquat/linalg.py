"""Cyclic Jacobi eigensolver for small real symmetric matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, ValidationError
from .quaternion import fix_sign

JACOBI_REL_TOL = 1e-13
MAX_SWEEPS = 50
CLUSTER_TOL = 1e-8


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues in descending order; ``vectors[:, n]`` pairs with ``values[n]``.

    ``clusters`` groups indices whose eigenvalues agree to within the
    cluster tolerance, in the same descending order.
    """

    values: np.ndarray
    vectors: np.ndarray
    clusters: tuple[tuple[int, ...], ...]

    @property
    def lambda_max(self) -> float:
        return float(self.values[0])

    def top_cluster(self) -> np.ndarray:
        return self.vectors[:, list(self.clusters[0])]

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.T


def jacobi_eigh(M, max_sweeps: int = MAX_SWEEPS, rel_tol: float = JACOBI_REL_TOL):
    """Diagonalize symmetric ``M`` by cyclic Jacobi rotations.

    Returns unsorted ``(values, V)`` with ``M = V diag(values) V^T``.
    """
    A = np.array(M, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValidationError("matrix must be square", field="matrix")
    if np.max(np.abs(A - A.T), initial=0.0) > 1e-12 * (1.0 + np.max(np.abs(A), initial=0.0)):
        raise ValidationError("matrix is not symmetric", field="matrix")
    A = 0.5 * (A + A.T)
    V = np.eye(n)
    threshold = rel_tol * (1.0 + np.max(np.abs(A), initial=0.0))

    for _ in range(max_sweeps + 1):
        off = np.abs(A - np.diag(np.diag(A)))
        if off.max(initial=0.0) < threshold:
            return np.diag(A).copy(), V
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) < 1e-300:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                G = np.eye(n)
                G[p, p] = G[q, q] = c
                G[p, q] = s
                G[q, p] = -s
                A = G.T @ A @ G
                A[p, q] = A[q, p] = 0.0
                V = V @ G
    raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")


def cluster_indices(values, tol: float = CLUSTER_TOL) -> tuple[tuple[int, ...], ...]:
    """Group descending eigenvalues that lie within ``tol*(1+|lambda_1|)``."""
    if len(values) == 0:
        return ()
    scale = tol * (1.0 + abs(values[0]))
    groups = [[0]]
    for n in range(1, len(values)):
        if abs(values[groups[-1][0]] - values[n]) <= scale:
            groups[-1].append(n)
        else:
            groups.append([n])
    return tuple(tuple(g) for g in groups)


def eigen_sym4(M, cluster_tol: float = CLUSTER_TOL) -> EigenDecomposition:
    values, V = jacobi_eigh(M)
    order = np.argsort(-values, kind="stable")
    values = values[order]
    V = V[:, order]
    V = np.column_stack([fix_sign(V[:, n]) for n in range(V.shape[1])])
    return EigenDecomposition(values, V, cluster_indices(values, cluster_tol))
