"""Payoff quadratic forms, best responses and the K-constraint."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .game import Game
from .linalg import CLUSTER_TOL, EigenDecomposition, eigen_sym4
from .quaternion import (
    OrthoFrame,
    Quaternion,
    UnitQuaternion,
    k_function,
    left_matrix,
    multiply,
    right_matrix,
)
from .strategy import MixedStrategy

__all__ = [
    "PayoffForm",
    "payoff_form",
    "eigen_sym4",
    "EigenDecomposition",
    "BestResponse",
    "best_response_set",
    "k_constraint",
]


def _player(player) -> int:
    if player in (1, "1", "one"):
        return 1
    if player in (2, "2", "two"):
        return 2
    raise ValueError(f"player must be one or two, got {player!r}")


@dataclass(frozen=True)
class PayoffForm:
    """``x^T M x`` is the player's payoff from pure ``x`` against the fixed opponent."""

    M: np.ndarray
    player: int

    def value(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(x @ self.M @ x)

    def decompose(self, cluster_tol: float = CLUSTER_TOL) -> EigenDecomposition:
        return eigen_sym4(self.M, cluster_tol)

    @property
    def lambda_max(self) -> float:
        return self.decompose().lambda_max


def payoff_form(g: Game, player, opponent: MixedStrategy) -> PayoffForm:
    """Quadratic form of one player's payoff against the opponent's strategy.

    Player One's payoff from ``p`` against atom ``q`` is ``sum_t X_t (R_q p)_t^2``;
    Player Two's payoff from ``q`` against atom ``p`` is ``sum_t Y_t (L_p q)_t^2``.
    """
    player = _player(player)
    D = np.diag(g.payoffs(player))
    M = np.zeros((4, 4))
    for x, w in zip(opponent.points, opponent.weights):
        T = right_matrix(x) if player == 1 else left_matrix(x)
        M += w * (T.T @ D @ T)
    return PayoffForm(0.5 * (M + M.T), player)


@dataclass(frozen=True)
class BestResponse:
    value: float
    basis: tuple[UnitQuaternion, ...]
    trace: float

    @property
    def dimension(self) -> int:
        return len(self.basis)


def best_response_set(g: Game, player, opponent: MixedStrategy,
                      cluster_tol: float = CLUSTER_TOL) -> BestResponse:
    """Maximal payoff and an orthonormal basis of the optimal subspace."""
    form = payoff_form(g, player, opponent)
    eig = form.decompose(cluster_tol)
    top = eig.top_cluster()
    basis = tuple(UnitQuaternion(*top[:, n]) for n in range(top.shape[1]))
    return BestResponse(eig.lambda_max, basis, float(np.trace(form.M)))


def k_constraint(probs: Sequence[float], support, p: Quaternion) -> float:
    """Weighted sum of ``K(p q_a)`` that must vanish at every best response.

    ``support`` holds the four orthogonal atoms of the opponent's strategy
    (an :class:`OrthoFrame` or any sequence of four quaternions) and
    ``probs`` their probabilities in the same order.
    """
    probs = [float(x) for x in probs]
    qs = list(support.members) if isinstance(support, OrthoFrame) else list(support)
    if len(probs) != 4 or len(qs) != 4:
        raise ValueError("k_constraint needs four probabilities and four support points")
    total = 0.0
    for a in range(4):
        coef = 1.0
        for b in range(4):
            if b != a:
                coef *= probs[a] - probs[b]
        if coef == 0.0:
            continue
        total += coef * k_function(multiply(p, qs[a]))
    return total
