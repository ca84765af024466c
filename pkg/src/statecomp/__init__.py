"""Unambiguous comparison of quantum states.

The comparison task is mapped to unambiguous discrimination between two
mixed states on the joint system, reduced by subspace eliminations, and
solved in closed form where a solution is known.
"""

from .baselines import gain, p_sep, separable_solution
from .ensemble import (DiscriminationProblem, MixedEnsemble, Povm, PureEnsemble,
                       build_problem, check_unambiguous, is_comparable, witness_povm)
from .errors import (DomainError, InfeasibleError, NotPositiveError, PovmDefectError,
                     ReductionError, StateCompError, ValidationError)
from .hermlin import HermitianOperator, Subspace
from .montecarlo import SimConfig, SimReport, exact_success, simulate
from .reduction import lift_success, reduce
from .solver2oo2 import p_opt, solve
from .solver2oo3 import p_opt3

__all__ = [
    "DiscriminationProblem", "DomainError", "HermitianOperator", "InfeasibleError",
    "MixedEnsemble", "NotPositiveError", "Povm", "PovmDefectError", "PureEnsemble",
    "ReductionError", "SimConfig", "SimReport", "StateCompError", "Subspace",
    "ValidationError", "build_problem", "check_unambiguous", "exact_success", "gain",
    "is_comparable", "lift_success", "p_opt", "p_opt3", "p_sep", "reduce",
    "separable_solution", "simulate", "solve", "witness_povm",
]
