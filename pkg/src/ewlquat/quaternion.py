"""Quaternion arithmetic on four real coordinates ordered (1, i, j, k)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import NotOrthogonal, NotUnit

UNIT_NORM_TOL = 1e-9
RENORMALIZE_TOL = 1e-6
ORTHO_TOL = 1e-9
GS_RESIDUAL_FLOOR = 1e-6


class Quaternion:
    """Immutable quaternion ``p1 + p2 i + p3 j + p4 k``."""

    __slots__ = ("_c",)

    def __init__(self, p1: float = 0.0, p2: float = 0.0, p3: float = 0.0, p4: float = 0.0):
        c = (float(p1), float(p2), float(p3), float(p4))
        if not all(math.isfinite(x) for x in c):
            raise NotUnit(f"non-finite quaternion coordinates {c}", field="q")
        object.__setattr__(self, "_c", c)

    def __setattr__(self, name, value):
        raise AttributeError("quaternions are immutable")

    @classmethod
    def from_seq(cls, seq: Iterable[float]):
        vals = [float(x) for x in seq]
        if len(vals) != 4:
            raise NotUnit(f"expected 4 coordinates, got {len(vals)}", field="q")
        return cls(*vals)

    @property
    def coords(self) -> tuple[float, float, float, float]:
        return self._c

    p1 = property(lambda self: self._c[0])
    p2 = property(lambda self: self._c[1])
    p3 = property(lambda self: self._c[2])
    p4 = property(lambda self: self._c[3])

    def as_array(self) -> np.ndarray:
        return np.array(self._c)

    def to_list(self) -> list[float]:
        return list(self._c)

    def __iter__(self):
        return iter(self._c)

    def __getitem__(self, idx):
        return self._c[idx]

    def __len__(self):
        return 4

    def __repr__(self):
        return f"{type(self).__name__}({', '.join(repr(x) for x in self._c)})"

    def __eq__(self, other):
        if not isinstance(other, Quaternion):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(self._c)

    def norm(self) -> float:
        return math.sqrt(sum(x * x for x in self._c))

    def conjugate(self) -> "Quaternion":
        a, b, c, d = self._c
        return type(self)(a, -b, -c, -d)

    def __neg__(self):
        a, b, c, d = self._c
        return type(self)(-a, -b, -c, -d)

    def __add__(self, other):
        return Quaternion(*(x + y for x, y in zip(self._c, other._c)))

    def __sub__(self, other):
        return Quaternion(*(x - y for x, y in zip(self._c, other._c)))

    def scale(self, s: float) -> "Quaternion":
        return Quaternion(*(s * x for x in self._c))

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return multiply(self, other)
        if isinstance(other, (int, float)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self.scale(other)
        return NotImplemented

    def isclose(self, other: "Quaternion", tol: float = 1e-12) -> bool:
        return max(abs(x - y) for x, y in zip(self._c, other._c)) <= tol


class UnitQuaternion(Quaternion):
    """A point of S^3.

    Inputs whose norm is within ``RENORMALIZE_TOL`` of 1 are silently
    renormalized; anything further off raises :class:`NotUnit`.
    """

    __slots__ = ()

    def __init__(self, p1: float = 1.0, p2: float = 0.0, p3: float = 0.0, p4: float = 0.0):
        super().__init__(p1, p2, p3, p4)
        n = self.norm()
        if abs(n - 1.0) > RENORMALIZE_TOL:
            raise NotUnit(f"quaternion norm {n!r} is not 1", field="q")
        if abs(n - 1.0) > 0.0:
            object.__setattr__(self, "_c", tuple(x / n for x in self._c))

    @classmethod
    def normalized(cls, seq: Iterable[float]) -> "UnitQuaternion":
        """Project an arbitrary nonzero 4-vector onto the sphere."""
        v = np.asarray(list(seq), dtype=float)
        n = float(np.linalg.norm(v))
        if n == 0.0:
            raise NotUnit("cannot normalize the zero quaternion", field="q")
        return cls(*(v / n))

    def inverse(self) -> "UnitQuaternion":
        return self.conjugate()


ONE = UnitQuaternion(1, 0, 0, 0)
I = UnitQuaternion(0, 1, 0, 0)
J = UnitQuaternion(0, 0, 1, 0)
K = UnitQuaternion(0, 0, 0, 1)
BASIS = (ONE, I, J, K)


def multiply(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product ``a * b``; unit inputs give a unit output."""
    a1, a2, a3, a4 = a.coords
    b1, b2, b3, b4 = b.coords
    c = (
        a1 * b1 - a2 * b2 - a3 * b3 - a4 * b4,
        a1 * b2 + a2 * b1 + a3 * b4 - a4 * b3,
        a1 * b3 - a2 * b4 + a3 * b1 + a4 * b2,
        a1 * b4 + a2 * b3 - a3 * b2 + a4 * b1,
    )
    if isinstance(a, UnitQuaternion) and isinstance(b, UnitQuaternion):
        return UnitQuaternion(*c)
    return Quaternion(*c)


def conjugate(a: Quaternion) -> Quaternion:
    """Quaternion conjugate; equals the inverse when ``a`` is a unit."""
    return a.conjugate()


conjugate_inverse = conjugate


def k_function(a: Quaternion) -> float:
    """Product of the four coordinates."""
    p1, p2, p3, p4 = a.coords
    return p1 * p2 * p3 * p4


def inner(a: Quaternion, b: Quaternion) -> float:
    return sum(x * y for x, y in zip(a.coords, b.coords))


def left_matrix(x) -> np.ndarray:
    """Matrix ``L`` with ``coords(x*q) == L @ coords(q)``."""
    a, b, c, d = x
    return np.array(
        [
            [a, -b, -c, -d],
            [b, a, -d, c],
            [c, d, a, -b],
            [d, -c, b, a],
        ],
        dtype=float,
    )


def right_matrix(x) -> np.ndarray:
    """Matrix ``R`` with ``coords(p*x) == R @ coords(p)``."""
    a, b, c, d = x
    return np.array(
        [
            [a, -b, -c, -d],
            [b, a, d, -c],
            [c, -d, a, b],
            [d, c, -b, a],
        ],
        dtype=float,
    )


def mul_matrices(x) -> tuple[np.ndarray, np.ndarray]:
    return left_matrix(x), right_matrix(x)


def batch_multiply(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise Hamilton product of two (..., 4) arrays."""
    a1, a2, a3, a4 = np.moveaxis(np.asarray(a, dtype=float), -1, 0)
    b1, b2, b3, b4 = np.moveaxis(np.asarray(b, dtype=float), -1, 0)
    return np.stack(
        [
            a1 * b1 - a2 * b2 - a3 * b3 - a4 * b4,
            a1 * b2 + a2 * b1 + a3 * b4 - a4 * b3,
            a1 * b3 - a2 * b4 + a3 * b1 + a4 * b2,
            a1 * b4 + a2 * b3 - a3 * b2 + a4 * b1,
        ],
        axis=-1,
    )


def fix_sign(v: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Flip ``v`` so its first non-negligible coordinate is positive."""
    v = np.asarray(v, dtype=float)
    for x in v:
        if abs(x) > tol:
            return v if x > 0 else -v
    return v


@dataclass(frozen=True)
class OrthoFrame:
    """Four mutually orthogonal unit quaternions.

    When the frame was built from a seed containing +-1, ``u`` and ``v`` are
    the first two remaining members; both square to -1 and anticommute.
    """

    members: tuple[UnitQuaternion, UnitQuaternion, UnitQuaternion, UnitQuaternion]
    u: UnitQuaternion | None = None
    v: UnitQuaternion | None = None

    def __post_init__(self):
        if len(self.members) != 4:
            raise NotOrthogonal("a frame needs exactly four members", field="frame")
        G = self.matrix @ self.matrix.T
        if np.max(np.abs(G - np.eye(4))) > ORTHO_TOL:
            raise NotOrthogonal("frame members are not orthonormal", field="frame")

    @property
    def matrix(self) -> np.ndarray:
        """Rows are the member coordinates."""
        return np.array([m.coords for m in self.members])

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, idx):
        return self.members[idx]

    def __len__(self):
        return 4


def check_orthonormal(vectors: Sequence[Quaternion], tol: float = ORTHO_TOL) -> None:
    if not vectors:
        return
    A = np.array([q.coords for q in vectors])
    G = A @ A.T
    if np.max(np.abs(G - np.eye(len(vectors)))) > tol:
        raise NotOrthogonal("seed quaternions are not mutually orthonormal", field="seed")


def extend_to_frame(seed: Sequence[UnitQuaternion] = ()) -> OrthoFrame:
    """Complete ``seed`` to an orthonormal frame by Gram-Schmidt.

    Candidates are the standard units 1, i, j, k tried in that order; those
    whose residual after projection is below ``GS_RESIDUAL_FLOOR`` are skipped.
    """
    seed = [q if isinstance(q, UnitQuaternion) else UnitQuaternion(*q) for q in seed]
    if len(seed) > 4:
        raise NotOrthogonal("more than four seed vectors", field="seed")
    check_orthonormal(seed)
    rows = [np.array(q.coords) for q in seed]
    for e in np.eye(4):
        if len(rows) == 4:
            break
        r = e.copy()
        for b in rows:
            r -= np.dot(b, r) * b
        # second pass keeps the residual orthogonal to working precision
        for b in rows:
            r -= np.dot(b, r) * b
        n = np.linalg.norm(r)
        if n < GS_RESIDUAL_FLOOR:
            continue
        rows.append(r / n)
    members = tuple(UnitQuaternion(*r) for r in rows)

    u = v = None
    one_idx = [n for n, q in enumerate(seed) if abs(abs(q.p1) - 1.0) <= ORTHO_TOL]
    if one_idx:
        rest = [q for n, q in enumerate(members) if n != one_idx[0]]
        u, v = rest[0], rest[1]
    return OrthoFrame(members, u, v)
