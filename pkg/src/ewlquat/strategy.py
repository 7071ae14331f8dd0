"""Finitely supported mixed quantum strategies.

Every payoff against a strategy depends on it only through its second-moment
matrix ``S = sum w q q^T``, so equivalence, reduction and translation are
all phrased in terms of ``S``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ValidationError
from .game import Game
from .linalg import eigen_sym4
from .quaternion import Quaternion, UnitQuaternion, batch_multiply, multiply

WEIGHT_SUM_TOL = 1e-9
EQUIV_TOL = 1e-9
WEIGHT_FLOOR = 1e-12
PSD_TOL = 1e-10


@dataclass(frozen=True)
class MixedStrategy:
    points: tuple[UnitQuaternion, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        if len(self.points) != len(self.weights):
            raise ValidationError("points and weights differ in length", field="atoms")
        if not self.points:
            raise ValidationError("a strategy needs at least one atom", field="atoms")
        pts = tuple(p if isinstance(p, UnitQuaternion) else UnitQuaternion(*p) for p in self.points)
        ws = tuple(float(w) for w in self.weights)
        if any(not np.isfinite(w) or w < 0 for w in ws):
            raise ValidationError("weights must be nonnegative", field="w")
        if abs(sum(ws) - 1.0) > WEIGHT_SUM_TOL:
            raise ValidationError(f"weights sum to {sum(ws)!r}, not 1", field="w")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", ws)

    @classmethod
    def from_atoms(cls, atoms: Iterable[tuple[Sequence[float], float]]) -> "MixedStrategy":
        pts, ws = [], []
        for q, w in atoms:
            pts.append(q if isinstance(q, UnitQuaternion) else UnitQuaternion(*q))
            ws.append(w)
        return cls(tuple(pts), tuple(ws))

    @classmethod
    def pure(cls, q) -> "MixedStrategy":
        return cls.from_atoms([(q, 1.0)])

    @classmethod
    def uniform(cls, points) -> "MixedStrategy":
        pts = list(points)
        return cls.from_atoms([(q, 1.0 / len(pts)) for q in pts])

    @classmethod
    def from_dict(cls, data: Mapping) -> "MixedStrategy":
        try:
            atoms = data["atoms"]
        except (KeyError, TypeError):
            raise ValidationError("strategy needs an 'atoms' list", field="atoms") from None
        if not isinstance(atoms, list):
            raise ValidationError("'atoms' must be a list", field="atoms")
        parsed = []
        for n, atom in enumerate(atoms):
            try:
                q = [float(x) for x in atom["q"]]
                w = float(atom["w"])
            except (KeyError, TypeError, ValueError):
                raise ValidationError(f"atoms[{n}] needs numeric 'q' and 'w'", field=f"atoms[{n}]") from None
            if len(q) != 4:
                raise ValidationError(f"atoms[{n}].q needs four coordinates", field=f"atoms[{n}].q")
            try:
                parsed.append((UnitQuaternion(*q), w))
            except ValidationError as exc:
                raise ValidationError(str(exc), field=f"atoms[{n}].q") from None
        return cls.from_atoms(parsed)

    def to_dict(self) -> dict:
        return {"atoms": [{"q": p.to_list(), "w": w} for p, w in zip(self.points, self.weights)]}

    @property
    def point_array(self) -> np.ndarray:
        return np.array([p.coords for p in self.points])

    @property
    def weight_array(self) -> np.ndarray:
        return np.array(self.weights)

    def __len__(self):
        return len(self.points)

    def atoms(self):
        return list(zip(self.points, self.weights))


def second_moment(mu: MixedStrategy) -> np.ndarray:
    Q = mu.point_array
    S = (Q * mu.weight_array[:, None]).T @ Q
    return 0.5 * (S + S.T)


def moment_distance(mu: MixedStrategy, other: MixedStrategy) -> float:
    return float(np.max(np.abs(second_moment(mu) - second_moment(other))))


def equivalent(mu: MixedStrategy, other: MixedStrategy, tol: float = EQUIV_TOL) -> bool:
    """Payoff-indistinguishability, tested as equality of second moments."""
    return moment_distance(mu, other) <= tol


def reduce_moment(S: np.ndarray, weight_floor: float = WEIGHT_FLOOR) -> MixedStrategy:
    """Strategy on the eigenvectors of ``S`` weighted by its eigenvalues."""
    eig = eigen_sym4(S)
    keep = [n for n, lam in enumerate(eig.values) if lam >= weight_floor]
    ws = eig.values[keep]
    ws = ws / ws.sum()
    return MixedStrategy.from_atoms((eig.vectors[:, n], w) for n, w in zip(keep, ws))


def reduce(mu: MixedStrategy, weight_floor: float = WEIGHT_FLOOR) -> MixedStrategy:
    """Equivalent strategy on at most four orthonormal points."""
    return reduce_moment(second_moment(mu), weight_floor)


def translate(mu: MixedStrategy, u: UnitQuaternion, side: str = "right") -> MixedStrategy:
    """Push ``mu`` forward under ``x -> x u^-1`` (right) or ``x -> u^-1 x`` (left)."""
    uinv = u.inverse()
    if side == "right":
        pts = [multiply(x, uinv) for x in mu.points]
    elif side == "left":
        pts = [multiply(uinv, x) for x in mu.points]
    else:
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    return MixedStrategy(tuple(pts), mu.weights)


def _pair_weights(nu: MixedStrategy, mu: MixedStrategy):
    P, Q = nu.point_array, mu.point_array
    prods = batch_multiply(P[:, None, :], Q[None, :, :]) ** 2
    return prods, np.outer(nu.weight_array, mu.weight_array)


def mixed_payoff(g: Game, nu: MixedStrategy, mu: MixedStrategy) -> tuple[float, float]:
    """Expected payoffs when Player One plays ``nu`` and Player Two plays ``mu``."""
    sq, w = _pair_weights(nu, mu)
    dist = np.einsum("ab,abt->t", w, sq)
    return float(dist @ np.array(g.X)), float(dist @ np.array(g.Y))
