"""Exit criteria, one test each; every test prints a PASS/FAIL line."""

import json
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from ewlquat.equilibrium import classify, find_equilibria, intertwined, verify_equilibrium
from ewlquat.game import Game, game_stats, is_generic
from ewlquat.oracle import check_prop_1_1, opt_out_distribution, su2_from_quat
from ewlquat.quaternion import BASIS, I, J, ONE, Quaternion, UnitQuaternion, multiply
from ewlquat.response import best_response_set, k_constraint, payoff_form
from ewlquat.strategy import MixedStrategy, equivalent, moment_distance, reduce, translate

from conftest import random_frame, random_game, random_generic_game, random_strategy, random_unit


@pytest.fixture
def verdict(capsys):
    def emit(name, ok, detail=""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {name} {detail}")
        assert ok, f"{name}: {detail}"
    return emit


def test_c01_protocol_matches_quaternion_product(verdict):
    rng = np.random.default_rng(1)
    pairs = [(random_unit(rng), random_unit(rng)) for _ in range(1000)]
    t0 = time.perf_counter()
    worst = max(check_prop_1_1(p, q) for p, q in pairs)
    elapsed = time.perf_counter() - t0
    verdict("C1 protocol vs quaternion outcome weights", worst <= 1e-10 and elapsed < 1.0,
            f"max deviation {worst:.2e}, {elapsed:.3f}s")


def test_c02_reduction_to_four_points(verdict):
    rng = np.random.default_rng(2)
    strategies = [random_strategy(rng, max_atoms=50) for _ in range(200)]
    t0 = time.perf_counter()
    worst_dist = worst_ortho = 0.0
    max_atoms = 0
    for mu in strategies:
        r = reduce(mu)
        A = r.point_array
        max_atoms = max(max_atoms, len(r))
        worst_dist = max(worst_dist, moment_distance(mu, r))
        worst_ortho = max(worst_ortho, float(np.max(np.abs(A @ A.T - np.eye(len(r))))))
    elapsed = time.perf_counter() - t0
    ok = max_atoms <= 4 and worst_dist <= 1e-9 and worst_ortho <= 1e-9 and elapsed < 1.0
    verdict("C2 reduction", ok,
            f"max atoms {max_atoms}, moment gap {worst_dist:.2e}, ortho {worst_ortho:.2e}, {elapsed:.3f}s")


def test_c03_best_response_is_global_maximum(verdict):
    rng = np.random.default_rng(3)
    worst_excess = worst_basis = -np.inf
    for _ in range(200):
        g = random_game(rng)
        opp = random_strategy(rng, max_atoms=10)
        player = int(rng.integers(1, 3))
        br = best_response_set(g, player, opp)
        M = payoff_form(g, player, opp).M
        P = rng.normal(size=(1000, 4))
        P /= np.linalg.norm(P, axis=1, keepdims=True)
        worst_excess = max(worst_excess, float(np.max(np.einsum("ai,ij,aj->a", P, M, P))) - br.value)
        for b in br.basis:
            x = np.array(b.coords)
            worst_basis = max(worst_basis, abs(float(x @ M @ x) - br.value))
    verdict("C3 best response", worst_excess <= 1e-9 and worst_basis <= 1e-9,
            f"sample excess {worst_excess:.2e}, basis gap {worst_basis:.2e}")


def test_c04_k_constraint(verdict):
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(100):
        g = random_generic_game(rng)
        frame = random_frame(rng)
        probs = rng.dirichlet(np.ones(4))
        assert len(set(np.round(probs, 12))) == 4
        mu = MixedStrategy(tuple(frame), tuple(probs))
        for b in best_response_set(g, 1, mu).basis:
            worst = max(worst, abs(k_constraint(probs, frame, b)))
    uniform = [k_constraint([0.25] * 4, random_frame(rng), random_unit(rng)) for _ in range(100)]
    ok = worst <= 1e-8 and all(v == 0.0 for v in uniform)
    verdict("C4 K-constraint", ok, f"max |K| at best responses {worst:.2e}; uniform case exact zeros")


def test_c05_payoff_lower_bound(verdict):
    rng = np.random.default_rng(5)
    worst = np.inf
    for _ in range(1000):
        g = random_game(rng)
        br = best_response_set(g, 1, random_strategy(rng, max_atoms=10))
        worst = min(worst, br.value - sum(g.X) / 4)
    verdict("C5 lambda_max >= mean payoff", worst >= -1e-9, f"min margin {worst:.2e}")


def test_c06_zero_sum_exact_payoff(verdict):
    rng = np.random.default_rng(6)
    worst = 0.0
    count = 0
    for _ in range(50):
        g = random_generic_game(rng, zero_sum=True)
        s = game_stats(g)
        for _, _, c in find_equilibria(g, seed=6):
            count += 1
            a, b = c.report.payoffs
            worst = max(worst, abs(a - s.mean_X), abs(b + s.mean_X))
    verdict("C6 zero-sum payoffs", worst <= 1e-8 and count > 0, f"{count} equilibria, max gap {worst:.2e}")


def _half_weight_plane_pairs(rng, n_games):
    """Equal-weight pairs mu on {1, u}, nu on {p, p u} with p in Player One's top plane."""
    pairs = []
    # Prisoner's Dilemma, u = i: top plane for One is span{j, k}
    pd = Game((3, 1, 0, 5), (3, 1, 5, 0))
    theta = rng.uniform(0, 2 * math.pi)
    p = multiply(J, UnitQuaternion(math.cos(theta), math.sin(theta), 0, 0))
    pairs.append((pd, p, I))
    for _ in range(n_games):
        g = random_generic_game(rng)
        u = UnitQuaternion.normalized([0, *rng.normal(size=3)]) if rng.random() < 0.5 else BASIS[int(rng.integers(1, 4))]
        mu = MixedStrategy.from_atoms([(ONE, 0.5), (u, 0.5)])
        eig = payoff_form(g, 1, mu).decompose()
        top = eig.top_cluster()
        if top.shape[1] != 2:
            continue
        c = rng.normal(size=2)
        pairs.append((g, UnitQuaternion.normalized(top @ c), u))
    return pairs


def test_c07_classification_coverage(verdict):
    rng = np.random.default_rng(7)
    a_ok = True
    for _ in range(50):
        g = random_generic_game(rng)
        c = classify(g, MixedStrategy.uniform(random_frame(rng)), MixedStrategy.uniform(random_frame(rng)))
        a_ok &= c.report.is_equilibrium and c.type == "a"

    cc = Game((5, 1, 0, 3), (5, 1, 0, 3))
    e = classify(cc, MixedStrategy.pure(ONE), MixedStrategy.pure(ONE))
    e_ok = bool(is_generic(cc)) and e.report.is_equilibrium and e.type == "e"

    verified = 0
    d_ok = True
    for g, p, u in _half_weight_plane_pairs(rng, 300):
        mu = MixedStrategy.from_atoms([(ONE, 0.5), (u, 0.5)])
        nu = MixedStrategy.from_atoms([(p, 0.5), (multiply(p, u), 0.5)])
        if verify_equilibrium(g, nu, mu).is_equilibrium:
            verified += 1
            d_ok &= classify(g, nu, mu).type == "d"
    d_ok &= verified > 0

    p, q = Quaternion(1, 2, 3, 4), Quaternion(1, 1, 1, 1)
    t_ok = intertwined(p, q, p.scale(2), q.scale(2))

    verdict("C7 type coverage", a_ok and e_ok and d_ok and t_ok,
            f"a={a_ok} e={e_ok} d={d_ok} ({verified} verified constructions) intertwined={t_ok}")


def test_c08_translation_invariance(verdict):
    rng = np.random.default_rng(8)
    worst = 0.0
    same = True
    n_eq = 0
    for n in range(100):
        g = random_generic_game(rng)
        if n % 2 == 0:
            found = find_equilibria(g, seed=n, n_frames=0)
            nu, mu, _ = found[int(rng.integers(len(found)))]
        else:
            nu, mu = random_strategy(rng, max_atoms=4), random_strategy(rng, max_atoms=4)
        u = random_unit(rng)
        a = verify_equilibrium(g, nu, mu)
        b = verify_equilibrium(g, translate(nu, u, "right"), translate(mu, u.inverse(), "left"))
        n_eq += a.is_equilibrium
        same &= a.is_equilibrium == b.is_equilibrium
        worst = max(worst, float(np.max(np.abs(np.subtract(a.slack, b.slack)))))
    verdict("C8 translation invariance", same and worst <= 1e-9 and n_eq >= 50,
            f"{n_eq} equilibria among 100 candidates, max slack change {worst:.2e}")


def test_c09_opt_out_uniform(verdict):
    rng = np.random.default_rng(9)
    worst = 0.0
    for _ in range(100):
        U = su2_from_quat(random_unit(rng), 1)
        V = su2_from_quat(random_unit(rng), 2)
        worst = max(worst, float(np.max(np.abs(opt_out_distribution(U, V) - 0.25))))
    verdict("C9 opt-out distribution", worst <= 1e-12, f"max deviation {worst:.2e}")


def test_c10_find_is_deterministic(verdict, tmp_path):
    game = tmp_path / "game.json"
    game.write_text(json.dumps({"payoffs": {"CC": [5, 5], "DD": [1, 1], "CD": [0, 0], "DC": [3, 3]}}))
    cmd = [sys.executable, "-m", "ewlquat", "find", "--game", str(game), "--seed", "7"]
    a = subprocess.run(cmd, capture_output=True)
    b = subprocess.run(cmd, capture_output=True)
    ok = a.returncode == 0 and a.stdout == b.stdout and len(a.stdout) > 0
    verdict("C10 deterministic find", ok, f"{len(a.stdout)} bytes")
