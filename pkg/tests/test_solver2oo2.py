import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from statecomp import hermlin, reduction
from statecomp.ensemble import build_problem, check_unambiguous
from statecomp.errors import DomainError, ValidationError
from statecomp.solver2oo2 import (TwoTwoInstance, comparison_priors, condition_star,
                                  e_basis, jaeger_shimony, p_opt, solve)

# min eigenvalue of the partial transpose of F_a at q1 = c = 1/2, frozen from
# a run of the eigendecomposition in this package
NPT_MIN_EIG_HALF = -0.2693809889886724

qs = st.floats(0.01, 0.99)
cs = st.floats(0.01, 0.99)


def star_rhs(q1):
    ea, eb = comparison_priors(q1)
    return np.sqrt(ea / eb) * (1 - np.sqrt((ea - eb) / ea))


def test_condition_star_threshold():
    mp.mp.dps = 30
    ea, eb = mp.mpf("0.82"), mp.mpf("0.18")
    exact = mp.sqrt(ea / eb) * (1 - mp.sqrt((ea - eb) / ea))
    assert star_rhs(0.9) == pytest.approx(float(exact), abs=1e-14)
    assert star_rhs(0.9) == pytest.approx(0.248757, abs=1e-6)
    assert star_rhs(0.5) == pytest.approx(1.0)
    ea, eb = comparison_priors(0.9)
    assert condition_star(ea, eb, 0.24)
    assert not condition_star(ea, eb, 0.25)


@pytest.mark.parametrize("q1, c, expected, star", [
    (0.5, 0.5, 0.5, True),
    (0.5, 0.1, 0.9, True),
    (0.9, 0.5, 0.5595, False),
    (0.9, 0.1, 1 - 2 * np.sqrt(0.82 * 0.18) * 0.1, True),
])
def test_p_opt_examples(q1, c, expected, star):
    value, flag = p_opt(q1, c)
    assert value == pytest.approx(expected, abs=1e-12)
    assert flag is star


def test_p_opt_domain():
    for q1, c in [(0.5, 0.0), (0.5, 1.0), (0.0, 0.5), (1.0, 0.5), (0.5, float("nan"))]:
        with pytest.raises(DomainError):
            p_opt(q1, c)
    assert p_opt(0.5, 0.0, allow_limit=True)[0] == pytest.approx(1.0)
    assert p_opt(0.3, 1.0, allow_limit=True)[0] == pytest.approx(0.0)


def test_p_opt_vectorised_matches_scalar():
    q = np.array([0.1, 0.5, 0.9])
    c = np.array([0.2, 0.5, 0.7])
    vals, flags = p_opt(q, c)
    for k in range(3):
        v, f = p_opt(q[k], c[k])
        assert vals[k] == v and flags[k] == f


@pytest.mark.parametrize("q1", [0.6, 0.75, 0.9, 0.97])
def test_continuous_across_branch_boundary(q1):
    lo, hi = 0.01, 0.99
    for _ in range(60):
        mid = (lo + hi) / 2
        lo, hi = (mid, hi) if p_opt(q1, mid)[1] else (lo, mid)
    assert lo == pytest.approx(star_rhs(q1), abs=1e-12)
    assert abs(p_opt(q1, lo)[0] - p_opt(q1, hi)[0]) < 1e-9


@settings(max_examples=100, deadline=None)
@given(q1=qs, c=cs)
def test_p_opt_symmetric_bounded_monotone(q1, c):
    v = p_opt(q1, c)[0]
    assert v == pytest.approx(p_opt(1 - q1, c)[0], abs=1e-12)
    assert 0 <= v <= 1
    assert p_opt(q1, min(c + 0.005, 0.995))[0] <= v + 1e-12


def test_jaeger_shimony_examples():
    assert jaeger_shimony(0.5, 0.5, 0.5)[0] == pytest.approx(0.5)
    v, both = jaeger_shimony(0.9, 0.1, 0.5)
    assert not both and v == pytest.approx(0.9 * 0.75)


def test_e_basis_orthonormal():
    inst = TwoTwoInstance(0.4, 0.3)
    b = e_basis(0.3, inst.psi1, inst.psi2)
    m = np.column_stack([b.e1, b.e2, b.e3, b.e4])
    assert np.allclose(m.conj().T @ m, np.eye(4), atol=1e-14)


def test_factor_swap_and_state_exchange_parities():
    c = 0.35
    inst = TwoTwoInstance(0.5, c)
    b = e_basis(c, inst.psi1, inst.psi2)
    swap = hermlin.swap_operator(2)
    assert [np.allclose(swap @ e, e) for e in (b.e1, b.e2, b.e3)] == [True] * 3
    assert np.allclose(swap @ b.e4, -b.e4)
    u = (inst.psi1 + inst.psi2) / np.linalg.norm(inst.psi1 + inst.psi2)
    r = 2 * np.outer(u, u.conj()) - np.eye(2)
    assert np.allclose(r @ inst.psi1, inst.psi2)
    rr = np.kron(r, r)
    assert np.allclose(rr @ b.e1, b.e1) and np.allclose(rr @ b.e3, b.e3)
    assert np.allclose(rr @ b.e2, -b.e2) and np.allclose(rr @ b.e4, -b.e4)


@pytest.mark.parametrize("q1, c", [(0.5, 0.5), (0.2, 0.7), (0.9, 0.5)])
def test_gamma_is_projection_of_mixed_product(q1, c):
    sol = solve(q1, c)
    res = reduction.reduce(build_problem(sol.instance.ensemble(), 2))
    p = res.H_prime.projector()
    v = p @ np.kron(sol.instance.psi1, sol.instance.psi2)
    v /= np.linalg.norm(v)
    assert abs(abs(np.vdot(v, sol.gamma)) - 1) < 1e-12
    assert abs(np.vdot(sol.gamma, sol.gamma_perp)) < 1e-14
    assert np.allclose(p @ sol.gamma_perp, sol.gamma_perp)


@settings(max_examples=60, deadline=None)
@given(q1=qs, c=cs)
def test_assembled_povm_is_optimal_and_unambiguous(q1, c):
    sol = solve(q1, c)
    assert sol.povm.min_eigenvalue() >= -1e-10
    assert sol.povm.completeness_error() <= 1e-10
    assert check_unambiguous(sol.povm, sol.instance.ensemble(), 2).passed
    assert sol.success_rate() == pytest.approx(sol.p_opt, abs=1e-12)
    g3 = (1 - c * c) / (1 + c * c)
    assert sol.alpha * g3 ** 2 <= 1 + 1e-12
    assert 0 <= sol.beta


def test_weights_outside_star():
    sol = solve(0.9, 0.5)
    assert not sol.star and (sol.alpha, sol.beta) == (1.0, 0.0)


def test_rotated_embedding_gives_same_rates(rng):
    c = 0.4
    z = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    u, _ = np.linalg.qr(z)
    psi1 = u @ np.array([1, 0, 0])
    psi2 = u @ np.array([c, np.sqrt(1 - c * c), 0])
    from statecomp.solver2oo2 import assemble_povm
    sol = assemble_povm(TwoTwoInstance(0.35, c, psi1, psi2))
    assert sol.povm.dim == 9
    assert sol.success_rate() == pytest.approx(p_opt(0.35, c)[0], abs=1e-12)
    assert check_unambiguous(sol.povm, sol.instance.ensemble(), 2).passed


def test_instance_validation():
    with pytest.raises(ValidationError):
        TwoTwoInstance(0.5, 0.4, [1, 0], [0.5, np.sqrt(0.75)])
    with pytest.raises(ValidationError):
        TwoTwoInstance(0.5, 0.4, [1, 0], None)


def test_optimal_elements_are_npt():
    sol = solve(0.5, 0.5)
    lam = hermlin.min_eigenvalue(hermlin.partial_transpose(sol.povm["a"], 1, (2, 2)))
    assert lam == pytest.approx(NPT_MIN_EIG_HALF, abs=1e-9)
    assert lam <= -1e-3
