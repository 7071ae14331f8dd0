"""Mixed-strategy Nash equilibria of quantized two-by-two games.

Pure strategies are unit quaternions; a mixed strategy is a finite list of
weighted unit quaternions.
"""

from .equilibrium import (
    Classification,
    EquilibriumReport,
    canonicalize_pair,
    classify,
    find_equilibria,
    fully_intertwined,
    intertwined,
    verify_equilibrium,
)
from .errors import BasisExpansionFailed, NoConvergence, NotOrthogonal, NotUnit, ValidationError
from .game import Game, game_stats, is_generic, quantum_payoff
from .linalg import EigenDecomposition, eigen_sym4
from .quaternion import (
    OrthoFrame,
    Quaternion,
    UnitQuaternion,
    conjugate,
    extend_to_frame,
    k_function,
    mul_matrices,
    multiply,
)
from .response import PayoffForm, best_response_set, k_constraint, payoff_form
from .strategy import MixedStrategy, equivalent, mixed_payoff, reduce, second_moment, translate

__version__ = "0.1.0"
