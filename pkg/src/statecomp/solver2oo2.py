"""Optimal unambiguous comparison of two systems drawn from two pure states.

The states ``psi_1``, ``psi_2`` have real overlap ``c = cos(theta)`` in
``(0, 1)`` and priors ``q_1``, ``q_2 = 1 - q_1``.  The induced
discrimination problem reduces to two pure states ``|e_1>`` and ``|gamma>``
on a 2-dimensional subspace, where the Jaeger-Shimony optimum applies.

The closed forms (:func:`p_opt`, :func:`condition_star`,
:func:`jaeger_shimony`) accept numpy arrays and broadcast.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import hermlin
from .ensemble import Povm, PureEnsemble, build_problem
from .errors import DomainError, ValidationError

PRIOR_MIN = 1e-6
OVERLAP_TOL = 1e-12


def check_domain(q1, cos_theta, allow_limit: bool = False):
    """Validate ``q1`` and ``cos_theta`` (scalars or arrays).

    ``cos_theta`` in ``{0, 1}`` are the excluded trivial cases; with
    ``allow_limit`` they are accepted so the closed forms can be evaluated as
    one-sided limits.
    """
    q = np.asarray(q1, dtype=float)
    c = np.asarray(cos_theta, dtype=float)
    if not np.all(np.isfinite(q)) or not np.all(np.isfinite(c)):
        raise DomainError("parameters must be finite")
    if np.any(q < PRIOR_MIN) or np.any(q > 1.0 - PRIOR_MIN):
        raise DomainError(f"q1 must lie in [{PRIOR_MIN:g}, 1 - {PRIOR_MIN:g}]")
    if allow_limit:
        if np.any(c < 0.0) or np.any(c > 1.0):
            raise DomainError("cos_theta must lie in [0, 1]")
    elif np.any(c <= 0.0) or np.any(c >= 1.0):
        raise DomainError(
            "cos_theta must lie strictly between 0 and 1 "
            "(orthogonal and co-linear states are trivial cases)")
    return q, c


def _out(value, flag):
    if np.ndim(value) == 0:
        return float(value), bool(flag)
    return value, flag


def comparison_priors(q1):
    """``(eta_a, eta_b) = (q1^2 + q2^2, 2 q1 q2)``."""
    q1 = np.asarray(q1, dtype=float)
    q2 = 1.0 - q1
    eta_a = q1 * q1 + q2 * q2
    eta_b = 2.0 * q1 * q2
    if eta_a.ndim == 0:
        return float(eta_a), float(eta_b)
    return eta_a, eta_b


def condition_star(eta_a, eta_b, cos_theta):
    """Branch selector of the optimal success rate (strict inequality)."""
    eta_a = np.asarray(eta_a, dtype=float)
    eta_b = np.asarray(eta_b, dtype=float)
    rhs = np.sqrt(eta_a / eta_b) * (1.0 - np.sqrt(np.maximum(eta_a - eta_b, 0.0) / eta_a))
    out = np.asarray(cos_theta) < rhs
    return bool(out) if out.ndim == 0 else out


def jaeger_shimony(prior_1, prior_2, overlap):
    """Optimal unambiguous discrimination of two pure states.

    Args:
        prior_1, prior_2: priors of the two states (summing to one).
        overlap: modulus of their inner product.

    Returns:
        ``(success, both_conclusive)``; the flag is false in the regime where
        only the more likely state is ever identified.
    """
    p1 = np.asarray(prior_1, dtype=float)
    p2 = np.asarray(prior_2, dtype=float)
    s = np.asarray(overlap, dtype=float)
    lo, hi = np.minimum(p1, p2), np.maximum(p1, p2)
    both = s < np.sqrt(lo / hi)
    value = np.where(both, 1.0 - 2.0 * np.sqrt(p1 * p2) * s, hi * (1.0 - s * s))
    return _out(value, both)


def p_opt(q1, cos_theta, allow_limit: bool = False):
    """Optimal comparison success rate and whether condition (*) holds."""
    q1, c = check_domain(q1, cos_theta, allow_limit)
    eta_a, eta_b = comparison_priors(q1)
    star = condition_star(eta_a, eta_b, c)
    np2 = 1.0 + c * c
    nm2 = 1.0 - c * c
    value = np.where(star,
                     1.0 - 2.0 * np.sqrt(eta_a * eta_b) * c,
                     nm2 / np2 * (1.0 - 0.5 * eta_b * nm2))
    return _out(value, star)


class EBasis(NamedTuple):
    e1: np.ndarray
    e2: np.ndarray
    e3: np.ndarray
    e4: np.ndarray
    n_plus: float
    n_minus: float


def complement_vectors(psi1, psi2, cos_theta):
    """Unit vectors in the plane of the states with ``bar1 _|_ psi1`` and ``bar2 _|_ psi2``.

    Signs are fixed so that ``<bar2|psi1> = <bar1|psi2> = sin(theta) > 0``.
    """
    s = np.sqrt(1.0 - cos_theta ** 2)
    bar1 = (psi2 - cos_theta * psi1) / s
    bar2 = (psi1 - cos_theta * psi2) / s
    return bar1, bar2


def e_basis(cos_theta, psi1, psi2) -> EBasis:
    """Orthonormal basis of ``Supp rho_a (+) Supp rho_b``.

    ``e1, e2 = (|psi1 psi1> +- |psi2 psi2>) / (sqrt2 n_pm)`` and
    ``e3, e4 = (|bar1 bar2> +- |bar2 bar1>) / (sqrt2 n_pm)`` with
    ``n_pm = sqrt(1 +- cos^2)``.
    """
    c = float(cos_theta)
    if not 0.0 < c < 1.0:
        raise DomainError("e basis needs 0 < cos_theta < 1")
    psi1 = np.asarray(psi1, dtype=complex)
    psi2 = np.asarray(psi2, dtype=complex)
    n_plus = np.sqrt(1.0 + c * c)
    n_minus = np.sqrt(1.0 - c * c)
    bar1, bar2 = complement_vectors(psi1, psi2, c)
    k = hermlin.ket_kron
    e1 = (k(psi1, psi1) + k(psi2, psi2)) / (np.sqrt(2) * n_plus)
    e2 = (k(psi1, psi1) - k(psi2, psi2)) / (np.sqrt(2) * n_minus)
    e3 = (k(bar1, bar2) + k(bar2, bar1)) / (np.sqrt(2) * n_plus)
    e4 = (k(bar1, bar2) - k(bar2, bar1)) / (np.sqrt(2) * n_minus)
    return EBasis(e1, e2, e3, e4, float(n_plus), float(n_minus))


def gamma_vector(cos_theta, basis: EBasis) -> tuple[np.ndarray, np.ndarray]:
    """``gamma`` (symmetric part of ``|psi1 psi2>``, normalised) and ``gamma_perp``.

    Both lie in ``span(e1, e3)``; components are
    ``<e1|gamma> = 2c / n_+^2`` and ``<e3|gamma> = sin^2 / n_+^2``.
    """
    c = float(cos_theta)
    np2 = 1.0 + c * c
    g1 = 2.0 * c / np2
    g3 = (1.0 - c * c) / np2
    gamma = g1 * basis.e1 + g3 * basis.e3
    gamma_perp = g3 * basis.e1 - g1 * basis.e3
    return gamma, gamma_perp


@dataclass(frozen=True, eq=False)
class TwoTwoInstance:
    q1: float
    cos_theta: float
    psi1: np.ndarray
    psi2: np.ndarray

    def __init__(self, q1: float, cos_theta: float, psi1=None, psi2=None):
        check_domain(q1, cos_theta)
        c = float(cos_theta)
        if psi1 is None and psi2 is None:
            psi1 = np.array([1.0, 0.0], dtype=complex)
            psi2 = np.array([c, np.sqrt(1.0 - c * c)], dtype=complex)
        elif psi1 is None or psi2 is None:
            raise ValidationError("give both states or neither")
        psi1 = np.array(psi1, dtype=complex)
        psi2 = np.array(psi2, dtype=complex)
        if psi1.shape != psi2.shape or psi1.ndim != 1 or psi1.size < 2:
            raise ValidationError("states must be vectors of equal dimension >= 2")
        for v in (psi1, psi2):
            if abs(np.linalg.norm(v) - 1.0) > hermlin.TOL_ORTH:
                raise ValidationError("states must be normalised")
        ov = np.vdot(psi1, psi2)
        if abs(ov.imag) > OVERLAP_TOL or abs(ov.real - c) > OVERLAP_TOL:
            raise ValidationError(f"<psi1|psi2> = {ov} does not equal cos_theta = {c}")
        psi1.setflags(write=False)
        psi2.setflags(write=False)
        object.__setattr__(self, "q1", float(q1))
        object.__setattr__(self, "cos_theta", c)
        object.__setattr__(self, "psi1", psi1)
        object.__setattr__(self, "psi2", psi2)

    @property
    def dim(self) -> int:
        return self.psi1.size

    def ensemble(self) -> PureEnsemble:
        return PureEnsemble([self.psi1, self.psi2], [self.q1, 1.0 - self.q1])


@dataclass(frozen=True, eq=False)
class TwoTwoSolution:
    instance: TwoTwoInstance
    p_opt: float
    star: bool
    alpha: float
    beta: float
    povm: Povm
    basis: EBasis
    gamma: np.ndarray
    gamma_perp: np.ndarray
    eta_a: float
    eta_b: float

    @property
    def n_plus(self) -> float:
        return self.basis.n_plus

    @property
    def n_minus(self) -> float:
        return self.basis.n_minus

    def success_rate(self) -> float:
        """``eta_a tr(F_a rho_a) + eta_b tr(F_b rho_b)`` from the assembled POVM."""
        prob = build_problem(self.instance.ensemble(), 2)
        return float(np.real(
            self.eta_a * np.trace(self.povm["a"] @ prob.rho_a.matrix)
            + self.eta_b * np.trace(self.povm["b"] @ prob.rho_b.matrix)))


def povm_weights(eta_a, eta_b, cos_theta) -> tuple[float, float, bool]:
    """Weights ``(alpha, beta)`` of ``|gamma_perp><gamma_perp|`` and ``|e3><e3|``."""
    c = float(cos_theta)
    star = condition_star(eta_a, eta_b, c)
    if not star:
        return 1.0, 0.0, False
    np2 = 1.0 + c * c
    g1 = 2.0 * c / np2
    g3sq = ((1.0 - c * c) / np2) ** 2
    alpha = (1.0 - np.sqrt(eta_b / eta_a) * g1) / g3sq
    beta = (1.0 - np.sqrt(eta_a / eta_b) * g1) / g3sq
    return float(alpha), float(beta), True


def assemble_povm(instance: TwoTwoInstance) -> TwoTwoSolution:
    """Optimal comparison measurement ``{F_a, F_b, F_?}`` on ``dim^2`` dimensions.

    ``F_a = alpha |gamma_perp><gamma_perp| + |e2><e2|`` and
    ``F_b = beta |e3><e3| + |e4><e4|``.
    """
    c = instance.cos_theta
    eta_a, eta_b = comparison_priors(instance.q1)
    basis = e_basis(c, instance.psi1, instance.psi2)
    gamma, gamma_perp = gamma_vector(c, basis)
    alpha, beta, star = povm_weights(eta_a, eta_b, c)
    outer = hermlin.outer
    fa = alpha * outer(gamma_perp) + outer(basis.e2)
    fb = beta * outer(basis.e3) + outer(basis.e4)
    dim2 = instance.dim ** 2
    fq = np.eye(dim2) - fa - fb
    povm = Povm({"a": fa, "b": fb, "?": fq}, (instance.dim, instance.dim)).validate()
    value, _ = p_opt(instance.q1, c)
    return TwoTwoSolution(instance, value, star, alpha, beta, povm, basis,
                          gamma, gamma_perp, eta_a, eta_b)


def solve(q1: float, cos_theta: float) -> TwoTwoSolution:
    """Optimal solution in the canonical embedding ``psi1 = (1, 0)``, ``psi2 = (c, s)``."""
    return assemble_povm(TwoTwoInstance(q1, cos_theta))
