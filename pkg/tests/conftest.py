import numpy as np
import pytest

from ewlquat.game import Game, is_generic
from ewlquat.quaternion import UnitQuaternion
from ewlquat.strategy import MixedStrategy


def random_unit(rng):
    return UnitQuaternion.normalized(rng.normal(size=4))


def random_frame(rng):
    Q, _ = np.linalg.qr(rng.normal(size=(4, 4)))
    return [UnitQuaternion(*row) for row in Q.T]


def random_strategy(rng, n_atoms=None, max_atoms=50):
    n = n_atoms or int(rng.integers(1, max_atoms + 1))
    return MixedStrategy.from_atoms(zip((random_unit(rng) for _ in range(n)), rng.dirichlet(np.ones(n))))


def random_game(rng, zero_sum=False):
    X = rng.normal(size=4)
    Y = -X if zero_sum else rng.normal(size=4)
    return Game(tuple(X), tuple(Y))


def random_generic_game(rng, zero_sum=False):
    while True:
        g = random_game(rng, zero_sum)
        if is_generic(g):
            return g


@pytest.fixture
def rng():
    return np.random.default_rng(20061015)
