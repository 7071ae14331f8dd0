"""Two-by-two games and the quantum payoff rule.

Outcomes are indexed in the fixed order CC, DD, CD, DC, matching the
coordinates 1, i, j, k of the product quaternion ``p*q``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import ValidationError
from .quaternion import Quaternion, multiply

OUTCOMES = ("CC", "DD", "CD", "DC")
GENERIC_TOL = 1e-9
ZERO_SUM_TOL = 1e-12


@dataclass(frozen=True)
class Game:
    """Payoffs ``X`` (Player One) and ``Y`` (Player Two), one entry per outcome."""

    X: tuple[float, float, float, float]
    Y: tuple[float, float, float, float]

    def __post_init__(self):
        for name, vals in (("X", self.X), ("Y", self.Y)):
            if len(vals) != 4:
                raise ValidationError(f"{name} needs four payoffs", field=name)
            if not all(math.isfinite(float(v)) for v in vals):
                raise ValidationError(f"{name} payoffs must be finite", field=name)
        object.__setattr__(self, "X", tuple(float(v) for v in self.X))
        object.__setattr__(self, "Y", tuple(float(v) for v in self.Y))

    def payoffs(self, player: int) -> np.ndarray:
        return np.array(self.X if player == 1 else self.Y)

    @classmethod
    def from_dict(cls, data: Mapping) -> "Game":
        try:
            table = data["payoffs"]
        except (KeyError, TypeError):
            raise ValidationError("game needs a 'payoffs' object", field="payoffs") from None
        X, Y = [], []
        for name in OUTCOMES:
            pair = table.get(name) if isinstance(table, Mapping) else None
            if pair is None or len(pair) != 2:
                raise ValidationError(f"payoffs.{name} must be an [X, Y] pair", field=f"payoffs.{name}")
            try:
                X.append(float(pair[0]))
                Y.append(float(pair[1]))
            except (TypeError, ValueError):
                raise ValidationError(f"payoffs.{name} must be numeric", field=f"payoffs.{name}") from None
        return cls(tuple(X), tuple(Y))

    def to_dict(self) -> dict:
        return {"payoffs": {name: [self.X[t], self.Y[t]] for t, name in enumerate(OUTCOMES)}}


@dataclass(frozen=True)
class GenericityResult:
    generic: bool
    witness: str | None = None

    def __bool__(self):
        return self.generic


def _first_collision(values, labels, tol):
    for (a, la), (b, lb) in itertools.combinations(zip(values, labels), 2):
        if abs(a - b) <= tol:
            return la, lb
    return None


def is_generic(g: Game, tol: float = GENERIC_TOL) -> GenericityResult:
    """Check that payoffs and pairwise payoff sums are distinct for each player."""
    for name, vals in (("X", g.X), ("Y", g.Y)):
        labels = [f"{name}[{o}]" for o in OUTCOMES]
        hit = _first_collision(vals, labels, tol)
        if hit:
            return GenericityResult(False, f"{hit[0]} == {hit[1]}")
        pairs = list(itertools.combinations(range(4), 2))
        sums = [vals[a] + vals[b] for a, b in pairs]
        slabels = [f"{name}[{OUTCOMES[a]}]+{name}[{OUTCOMES[b]}]" for a, b in pairs]
        hit = _first_collision(sums, slabels, tol)
        if hit:
            return GenericityResult(False, f"{hit[0]} == {hit[1]}")
    return GenericityResult(True)


def outcome_weights(p: Quaternion, q: Quaternion) -> np.ndarray:
    """Squared coordinates of ``p*q``: the outcome probabilities."""
    return multiply(p, q).as_array() ** 2


def quantum_payoff(g: Game, p: Quaternion, q: Quaternion) -> tuple[float, float]:
    w = outcome_weights(p, q)
    return float(w @ np.array(g.X)), float(w @ np.array(g.Y))


@dataclass(frozen=True)
class GameStats:
    mean_X: float
    mean_Y: float
    is_zero_sum: bool


def game_stats(g: Game) -> GameStats:
    zero_sum = all(abs(x + y) <= ZERO_SUM_TOL for x, y in zip(g.X, g.Y))
    return GameStats(sum(g.X) / 4.0, sum(g.Y) / 4.0, zero_sum)
