"""Closed forms checked against a semidefinite program for optimal unambiguous discrimination."""

import numpy as np
import pytest

from statecomp import hermlin
from statecomp.ensemble import build_problem
from statecomp.solver2oo2 import TwoTwoInstance, p_opt
from statecomp.solver2oo3 import ThreeInstance, p_opt3_value

cp = pytest.importorskip("cvxpy")


def sdp_optimum(prob):
    ra = np.real(prob.rho_a.matrix)
    rb = np.real(prob.rho_b.matrix)
    # elements restricted to the opposite kernels keep the program strictly feasible
    kb = np.real(hermlin.kernel(rb).basis)
    ka = np.real(hermlin.kernel(ra).basis)
    x = cp.Variable((kb.shape[1],) * 2, symmetric=True)
    y = cp.Variable((ka.shape[1],) * 2, symmetric=True)
    fa, fb = kb @ x @ kb.T, ka @ y @ ka.T
    objective = cp.Maximize(prob.eta_a * cp.trace(fa @ ra) + prob.eta_b * cp.trace(fb @ rb))
    problem = cp.Problem(objective, [x >> 0, y >> 0, np.eye(ra.shape[0]) - fa - fb >> 0])
    problem.solve(solver="CLARABEL")
    assert problem.status == "optimal"
    return problem.value


@pytest.mark.parametrize("q1, c", [(0.5, 0.5), (0.9, 0.5), (0.3, 0.2), (0.85, 0.41), (0.7, 0.8)])
def test_two_two_closed_form(q1, c):
    prob = build_problem(TwoTwoInstance(q1, c).ensemble(), 2)
    assert sdp_optimum(prob) == pytest.approx(p_opt(q1, c)[0], abs=1e-6)


@pytest.mark.parametrize("c", [0.1, 0.2, 0.3, 0.38])
def test_two_three_closed_form_in_region(c):
    prob = build_problem(ThreeInstance(c).ensemble(), 2)
    assert sdp_optimum(prob) == pytest.approx(p_opt3_value(c), abs=1e-6)
