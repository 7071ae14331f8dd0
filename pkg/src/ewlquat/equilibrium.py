"""Equilibrium verification, classification and a structured finder."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .game import Game, is_generic
from .linalg import eigen_sym4
from .quaternion import BASIS, Quaternion, UnitQuaternion, multiply
from .response import payoff_form
from .strategy import (
    MixedStrategy,
    mixed_payoff,
    reduce,
    second_moment,
    translate,
)

log = logging.getLogger(__name__)

EQ_TOL = 1e-8
CLASS_TOL = 1e-8
TWIST_TOL = 1e-9
PLANE_ANGLE_TOL = 1e-6
N_FRAMES = 3

TYPES = ("a", "b", "c", "d", "e", "not_equilibrium", "unclassified")


@dataclass(frozen=True)
class EquilibriumReport:
    is_equilibrium: bool
    slack: tuple[float, float]
    payoffs: tuple[float, float]
    lambda_max: tuple[float, float]
    violating: dict[str, list[int]]

    def to_dict(self) -> dict:
        return {
            "is_equilibrium": self.is_equilibrium,
            "slack": list(self.slack),
            "payoffs": list(self.payoffs),
            "lambda_max": list(self.lambda_max),
            "violating": {k: list(v) for k, v in self.violating.items()},
        }


def _slack(form, points: np.ndarray, weights: np.ndarray):
    lam = eigen_sym4(form.M).lambda_max
    achieved = np.einsum("ai,ij,aj->a", points, form.M, points)
    gaps = np.where(weights > 0, lam - achieved, -np.inf)
    return lam, gaps


def verify_equilibrium(g: Game, nu: MixedStrategy, mu: MixedStrategy,
                       tol: float = EQ_TOL) -> EquilibriumReport:
    """Nash test: every atom of each side must attain that side's top eigenvalue."""
    lam1, gaps1 = _slack(payoff_form(g, 1, mu), nu.point_array, nu.weight_array)
    lam2, gaps2 = _slack(payoff_form(g, 2, nu), mu.point_array, mu.weight_array)
    s1, s2 = float(np.max(gaps1)), float(np.max(gaps2))
    violating = {
        "one": [int(n) for n in np.flatnonzero(gaps1 > tol)],
        "two": [int(n) for n in np.flatnonzero(gaps2 > tol)],
    }
    return EquilibriumReport(
        is_equilibrium=s1 <= tol and s2 <= tol,
        slack=(s1, s2),
        payoffs=mixed_payoff(g, nu, mu),
        lambda_max=(lam1, lam2),
        violating=violating,
    )


# --- intertwining ---------------------------------------------------------

def quartic(p: Quaternion, q: Quaternion) -> np.ndarray:
    """Coefficients of ``K(Xp + Yq)`` on ``X^4, X^3 Y, ..., Y^4``."""
    c = np.array([1.0])
    for pt, qt in zip(p.coords, q.coords):
        c = np.convolve(c, [pt, qt])
    return c


@dataclass(frozen=True)
class Intertwining:
    intertwined: bool
    degenerate: bool
    alpha: float | None
    lhs: tuple[float, ...]
    rhs: tuple[float, ...]

    def __bool__(self):
        return self.intertwined

    def to_dict(self) -> dict:
        return {
            "intertwined": self.intertwined,
            "degenerate": self.degenerate,
            "alpha": self.alpha,
            "quartic_pq": list(self.lhs),
            "quartic_rs": list(self.rhs),
        }


def intertwining(p, q, r, s, tol: float = TWIST_TOL) -> Intertwining:
    """Test whether ``K(Xp+Yq)`` and ``K(Xr+Ys)`` are proportional."""
    a, b = quartic(p, q), quartic(r, s)
    na, nb = np.max(np.abs(a)), np.max(np.abs(b))
    lhs, rhs = tuple(float(x) for x in a), tuple(float(x) for x in b)
    if na <= tol and nb <= tol:
        return Intertwining(True, True, None, lhs, rhs)
    if na <= tol or nb <= tol:
        return Intertwining(False, False, None, lhs, rhs)
    an, bn = a / na, b / nb
    same = np.max(np.abs(an - bn))
    flipped = np.max(np.abs(an + bn))
    ok = min(same, flipped) <= tol
    k = int(np.argmax(np.abs(a)))
    return Intertwining(bool(ok), False, float(b[k] / a[k]) if ok else None, lhs, rhs)


def intertwined(p, q, r, s, tol: float = TWIST_TOL) -> bool:
    return intertwining(p, q, r, s, tol).intertwined


def fully_intertwined(p, q, r, s, tol: float = TWIST_TOL) -> bool:
    return intertwined(p, q, r, s, tol) and intertwined(p, r, q, s, tol)


# --- geometry helpers -----------------------------------------------------

def principal_angles(A: np.ndarray, B: np.ndarray) -> list[float]:
    """Principal angles (ascending) between the column spans of ``A`` and ``B``."""
    qa, _ = np.linalg.qr(np.asarray(A, dtype=float))
    qb, _ = np.linalg.qr(np.asarray(B, dtype=float))
    cos = np.sort(np.clip(np.linalg.svd(qa.T @ qb, compute_uv=False), 0.0, 1.0))[::-1]
    resid = qb - qa @ (qa.T @ qb)
    sin = np.sort(np.clip(np.linalg.svd(resid, compute_uv=False), 0.0, 1.0))
    return [float(np.arctan2(s, c)) for c, s in zip(cos, sin)]


def _is_diagonal(S: np.ndarray, tol: float) -> bool:
    return float(np.max(np.abs(S - np.diag(np.diag(S))))) <= tol


# --- canonical form -------------------------------------------------------

def _ranked_atoms(mu: MixedStrategy, tol: float = CLASS_TOL):
    """Atoms by descending weight; weights within ``tol`` fall back to coordinate order."""
    return sorted(mu.atoms(), key=lambda a: (round(-a[1] / tol), tuple(a[0].coords)))


def _apply_canonical(nu_r: MixedStrategy, mu_r: MixedStrategy, u: UnitQuaternion):
    # products p*q are preserved: (p u)(u^-1 q) = p q
    nu_c = translate(nu_r, u.inverse(), "right")
    mu_c = translate(mu_r, u, "left")
    return nu_c, mu_c


def canonicalize_pair(nu: MixedStrategy, mu: MixedStrategy):
    """Reduce both strategies and translate so that 1 is in Player Two's support.

    Returns ``(nu', mu', u)`` where ``u`` is the heaviest atom of ``reduce(mu)``,
    ``nu'`` carries points ``p*u`` and ``mu'`` carries points ``u^-1 * q``.
    """
    nu_r, mu_r = reduce(nu), reduce(mu)
    u = _ranked_atoms(mu_r)[0][0]
    nu_c, mu_c = _apply_canonical(nu_r, mu_r, u)
    return nu_c, mu_c, u


# --- classification -------------------------------------------------------

@dataclass
class Classification:
    type: str
    report: EquilibriumReport
    u: UnitQuaternion | None = None
    nu: MixedStrategy | None = None
    mu: MixedStrategy | None = None
    generic: bool = True
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "type": self.type,
            "generic": self.generic,
            "u": self.u.to_list() if self.u is not None else None,
            "nu_canonical": self.nu.to_dict() if self.nu is not None else None,
            "mu_canonical": self.mu.to_dict() if self.mu is not None else None,
            "report": self.report.to_dict(),
            "details": self.details,
        }


def _plane_data(nu_c: MixedStrategy, mu_c: MixedStrategy):
    Pn, Pm = nu_c.point_array.T, mu_c.point_array.T
    p = nu_c.points[0]
    # left-translate Player One's plane back by p^-1 and compare with mu's plane
    shifted = np.array([multiply(p.inverse(), x).coords for x in nu_c.points]).T
    return {
        "principal_angles": principal_angles(Pn, Pm),
        "translated_angles": principal_angles(shifted, Pm),
    }


def _type_c(nu_c: MixedStrategy, mu_c: MixedStrategy, tol: float, twist_tol: float):
    ones = [n for n, q in enumerate(mu_c.points) if abs(abs(q.p1) - 1.0) <= tol]
    if not ones:
        return None
    v = mu_c.points[1 - ones[0]]
    for a, b in ((0, 1), (1, 0)):
        p, pu = nu_c.points[a], nu_c.points[b]
        u = multiply(p.inverse(), pu)
        pv = multiply(p, v)
        quad = (p, pv, pu, multiply(pv, u))
        first = intertwining(*quad, tol=twist_tol)
        second = intertwining(quad[0], quad[2], quad[1], quad[3], tol=twist_tol)
        if first and second:
            return {
                "p": p.to_list(),
                "u": u.to_list(),
                "v": v.to_list(),
                "intertwining": first.to_dict(),
                "swapped_intertwining": second.to_dict(),
            }
    return None


def classify(g: Game, nu: MixedStrategy, mu: MixedStrategy,
             eq_tol: float = EQ_TOL, class_tol: float = CLASS_TOL,
             twist_tol: float = TWIST_TOL) -> Classification:
    """Match a pair against the five equilibrium shapes of generic games."""
    report = verify_equilibrium(g, nu, mu, eq_tol)
    generic = bool(is_generic(g))
    if not report.is_equilibrium:
        return Classification("not_equilibrium", report, generic=generic)

    nu_r, mu_r = reduce(nu), reduce(mu)
    ranked = _ranked_atoms(mu_r, class_tol)
    u0 = ranked[0][0]
    nu_c0, mu_c0 = _apply_canonical(nu_r, mu_r, u0)

    def result(kind, u, nu_c, mu_c, **details):
        return Classification(kind, report, u, nu_c, mu_c, generic, details)

    quarter = np.eye(4) / 4
    S_nu, S_mu = second_moment(nu_r), second_moment(mu_r)
    if max(np.max(np.abs(S_nu - quarter)), np.max(np.abs(S_mu - quarter))) <= class_tol:
        return result("a", u0, nu_c0, mu_c0, weights=[list(nu_r.weights), list(mu_r.weights)])

    sizes = (len(nu_r), len(mu_r))
    if sizes in ((1, 1), (3, 3)):
        # a degenerate weight makes the eigenbasis arbitrary; any support atom may anchor
        for u, _ in ranked:
            nu_c, mu_c = _apply_canonical(nu_r, mu_r, u)
            if _is_diagonal(second_moment(nu_c), class_tol) and _is_diagonal(second_moment(mu_c), class_tol):
                diag_nu = np.diag(second_moment(nu_c))
                diag_mu = np.diag(second_moment(mu_c))
                support = {
                    "nu": [name for name, w in zip("1ijk", diag_nu) if w > class_tol],
                    "mu": [name for name, w in zip("1ijk", diag_mu) if w > class_tol],
                }
                return result("e" if sizes == (1, 1) else "b", u, nu_c, mu_c,
                              support=support,
                              weights={"nu": diag_nu.tolist(), "mu": diag_mu.tolist()})

    if sizes == (2, 2):
        halves = all(abs(w - 0.5) <= class_tol for w in nu_r.weights + mu_r.weights)
        planes = _plane_data(nu_c0, mu_c0)
        if halves and max(planes["translated_angles"]) < PLANE_ANGLE_TOL:
            return result("d", u0, nu_c0, mu_c0, planes=planes)
        for u, _ in ranked:
            nu_c, mu_c = _apply_canonical(nu_r, mu_r, u)
            witness = _type_c(nu_c, mu_c, class_tol, twist_tol)
            if witness is not None:
                return result("c", u, nu_c, mu_c, planes=planes, witness=witness)
        return result("unclassified", u0, nu_c0, mu_c0, planes=planes)

    return result("unclassified", u0, nu_c0, mu_c0)


# --- finder ---------------------------------------------------------------

def _outcome_index(a: Quaternion, b: Quaternion) -> int:
    c = np.abs(np.array(multiply(a, b).coords))
    return int(np.argmax(c))


def _indifference(table: np.ndarray) -> np.ndarray | None:
    """Opponent weights making every row of ``table`` pay the same."""
    n, m = table.shape
    A = np.zeros((n + 1, m + 1))
    A[:n, :m] = table
    A[:n, m] = -1.0
    A[n, :m] = 1.0
    rhs = np.zeros(n + 1)
    rhs[n] = 1.0
    if abs(np.linalg.det(A)) < 1e-12:
        return None
    return np.linalg.solve(A, rhs)[:m]


def _random_unit(rng) -> UnitQuaternion:
    return UnitQuaternion.normalized(rng.normal(size=4))


def _sort_key(item):
    nu, mu, cls = item
    return (
        cls.type,
        tuple(tuple(round(x, 12) for x in p.coords) for p in nu.points),
        tuple(tuple(round(x, 12) for x in q.coords) for q in mu.points),
    )


def find_equilibria(g: Game, seed: int = 0, n_frames: int = N_FRAMES,
                    eq_tol: float = EQ_TOL, class_tol: float = CLASS_TOL):
    """Verified equilibria of types (a), (b) and (e).

    Returns ``(nu, mu, Classification)`` triples sorted by type and support.
    """
    if not is_generic(g):
        log.warning("game is not generic: %s", is_generic(g).witness)
    rng = np.random.default_rng(seed)
    candidates: list[tuple[MixedStrategy, MixedStrategy]] = []

    uniform = MixedStrategy.uniform(BASIS)
    candidates.append((uniform, uniform))
    for _ in range(n_frames):
        w = _random_unit(rng)
        candidates.append((translate(uniform, w, "right"), translate(uniform, w.inverse(), "left")))

    for a, b in itertools.product(BASIS, repeat=2):
        candidates.append((MixedStrategy.pure(a), MixedStrategy.pure(b)))

    X, Y = np.array(g.X), np.array(g.Y)
    for sn, sm in itertools.product(itertools.combinations(BASIS, 3), repeat=2):
        idx = np.array([[_outcome_index(a, b) for b in sm] for a in sn])
        y = _indifference(X[idx])
        x = _indifference(Y[idx].T)
        if x is None or y is None:
            continue
        if np.min(x) <= class_tol or np.min(y) <= class_tol:
            continue
        x, y = x / x.sum(), y / y.sum()
        candidates.append((MixedStrategy(sn, tuple(x)), MixedStrategy(sm, tuple(y))))

    found = []
    for nu, mu in candidates:
        report = verify_equilibrium(g, nu, mu, eq_tol)
        if not report.is_equilibrium:
            continue
        found.append((nu, mu, classify(g, nu, mu, eq_tol, class_tol)))
    found.sort(key=_sort_key)
    return found
