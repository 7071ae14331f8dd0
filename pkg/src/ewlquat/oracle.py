"""Brute-force two-qubit simulation of the entangled penny protocol.

Single-penny basis is (H, T); two-penny states use the Kronecker basis
(HH, HT, TH, TT) with Player One on the first factor.  Both players' operators
act directly on their own factor: the post-play state is ``(U kron V) Phi``.
Under this convention Player Two's matrix with top row ``(P, Q)`` corresponds
to the quaternion ``P - jQ`` and the outcome distribution matches the
quaternion product; the transposed action does not.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BasisExpansionFailed, ValidationError
from .game import OUTCOMES
from .quaternion import BASIS, Quaternion, UnitQuaternion, multiply

PLAYER_TWO_ACTION = "direct"
SU2_TOL = 1e-10
EXPANSION_TOL = 1e-9

H = np.array([1.0, 0.0], dtype=complex)
T = np.array([0.0, 1.0], dtype=complex)
ENTANGLED = np.kron(H, H) + np.kron(T, T)

C = np.eye(2, dtype=complex)
D = np.array([[0, 1], [-1, 0]], dtype=complex)


def _complete(a: complex, b: complex) -> np.ndarray:
    return np.array([[a, b], [-np.conj(b), np.conj(a)]], dtype=complex)


def su2_from_quat(p: Quaternion, player=1) -> np.ndarray:
    """Special-unitary matrix identified with ``p`` for the given player.

    Player One: top row ``(A, B)`` maps to ``A + Bj``.
    Player Two: top row ``(P, Q)`` maps to ``P - jQ``.
    """
    p1, p2, p3, p4 = p.coords
    if player in (1, "one"):
        return _complete(complex(p1, p2), complex(p3, p4))
    if player in (2, "two"):
        # P - jQ with Q = c + di equals a + bi - cj + dk
        return _complete(complex(p1, p2), complex(-p3, p4))
    raise ValueError(f"unknown player {player!r}")


def quat_from_su2(U: np.ndarray, player=1) -> UnitQuaternion:
    check_su2(U)
    a, b = U[0, 0], U[0, 1]
    if player in (1, "one"):
        return UnitQuaternion(a.real, a.imag, b.real, b.imag)
    if player in (2, "two"):
        return UnitQuaternion(a.real, a.imag, -b.real, b.imag)
    raise ValueError(f"unknown player {player!r}")


def check_su2(U: np.ndarray, tol: float = SU2_TOL) -> None:
    U = np.asarray(U)
    if U.shape != (2, 2):
        raise ValidationError("expected a 2x2 matrix", field="U")
    if np.max(np.abs(U.conj().T @ U - np.eye(2))) > tol:
        raise ValidationError("matrix is not unitary", field="U")
    if abs(np.linalg.det(U) - 1.0) > tol:
        raise ValidationError("determinant is not 1", field="U")


def outcome_basis() -> np.ndarray:
    """Columns are the outcome states CC, DD, CD, DC (unnormalized).

    Each is the entangled state after Player One applies the operator of a
    fundamental unit 1, i, j, k; CC and CD coincide with applying C and D.
    """
    return np.column_stack([np.kron(su2_from_quat(e, 1), C) @ ENTANGLED for e in BASIS])


@dataclass(frozen=True)
class AmplitudeVector:
    amplitudes: np.ndarray
    residual: float

    @property
    def probabilities(self) -> np.ndarray:
        mag = np.abs(self.amplitudes) ** 2
        return mag / mag.sum()

    def as_dict(self) -> dict:
        return {name: complex(a) for name, a in zip(OUTCOMES, self.amplitudes)}


def play(U: np.ndarray, V: np.ndarray) -> np.ndarray:
    """Two-penny state after both players act."""
    if PLAYER_TWO_ACTION == "direct":
        return np.kron(U, V) @ ENTANGLED
    return np.kron(U, V.T) @ ENTANGLED


def run_protocol(U: np.ndarray, V: np.ndarray) -> AmplitudeVector:
    check_su2(U)
    check_su2(V)
    psi = play(U, V)
    B = outcome_basis()
    coeffs, *_ = np.linalg.lstsq(B, psi, rcond=None)
    residual = float(np.linalg.norm(B @ coeffs - psi))
    if residual > EXPANSION_TOL:
        raise BasisExpansionFailed(f"outcome basis does not span the state (residual {residual:.3g})")
    return AmplitudeVector(coeffs, residual)


def check_prop_1_1(p: UnitQuaternion, q: UnitQuaternion) -> float:
    """Largest gap between simulated outcome probabilities and ``coords(p*q)**2``."""
    amps = run_protocol(su2_from_quat(p, 1), su2_from_quat(q, 2))
    expected = np.array(multiply(p, q).coords) ** 2
    return float(np.max(np.abs(amps.probabilities - expected)))


def amplitude_ratio(p: UnitQuaternion, q: UnitQuaternion) -> float:
    """Observed ``|alpha_t| / |coord_t(p*q)|`` on the dominant outcome."""
    amps = run_protocol(su2_from_quat(p, 1), su2_from_quat(q, 2)).amplitudes
    pq = np.abs(np.array(multiply(p, q).coords))
    t = int(np.argmax(pq))
    return float(np.abs(amps[t]) / pq[t])


def opt_out_distribution(U: np.ndarray, V: np.ndarray, fresh: np.ndarray = H) -> np.ndarray:
    """Outcome probabilities when Player One swaps in an unentangled penny.

    Player Two's half of the original pair is then maximally mixed.
    """
    check_su2(U)
    check_su2(V)
    f = U @ np.asarray(fresh, dtype=complex)
    rho_one = np.outer(f, f.conj()) / np.vdot(f, f).real
    rho_two = V @ (np.eye(2) / 2) @ V.conj().T
    rho = np.kron(rho_one, rho_two)
    B = outcome_basis()
    B = B / np.linalg.norm(B, axis=0)
    return np.real(np.einsum("it,ij,jt->t", B.conj(), rho, B))


def random_unit(rng) -> UnitQuaternion:
    return UnitQuaternion.normalized(rng.normal(size=4))


def sample_product_rule(n: int, seed: int = 0) -> float:
    rng = np.random.default_rng(seed)
    return max(check_prop_1_1(random_unit(rng), random_unit(rng)) for _ in range(n))


def sample_opt_out(n: int, seed: int = 0) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        U = su2_from_quat(random_unit(rng), 1)
        V = su2_from_quat(random_unit(rng), 2)
        worst = max(worst, float(np.max(np.abs(opt_out_distribution(U, V) - 0.25))))
    return worst
