"""Comparison of two systems drawn from three equal-overlap, equally likely pure states.

Here the reduced discrimination problem lives on the 6-dimensional symmetric
subspace and is genuinely mixed.  A closed-form optimum is known only for
``cos_theta <= (sqrt2 - 2**0.25) / (2 - sqrt2)``:

    P_opt = 1 - (sqrt8 / 9) (4 c - c^2)

Outside that region no optimum is reported.  No optimal measurement is
constructed; the separable value provided here is a numerical heuristic.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from . import reduction
from .ensemble import PureEnsemble, build_problem, equal_overlap_states
from .errors import DomainError, ReductionError
from .hermlin import Subspace
from .reduction import ReductionResult


def region_boundary() -> float:
    return (sqrt(2.0) - sqrt(sqrt(2.0))) / (2.0 - sqrt(2.0))


def _check_overlap(cos_theta) -> float:
    c = float(cos_theta)
    if not 0.0 < c < 1.0:
        raise DomainError("cos_theta must lie strictly between 0 and 1")
    return c


@dataclass(frozen=True, eq=False)
class ThreeInstance:
    cos_theta: float
    states: np.ndarray

    def __init__(self, cos_theta: float):
        c = _check_overlap(cos_theta)
        object.__setattr__(self, "cos_theta", c)
        object.__setattr__(self, "states", equal_overlap_states(3, c))

    def ensemble(self) -> PureEnsemble:
        return PureEnsemble(self.states, [1 / 3, 1 / 3, 1 / 3])


@dataclass(frozen=True, eq=False)
class ThreeReduction:
    result: ReductionResult
    H_plus: Subspace
    H_minus: Subspace


@dataclass(frozen=True, eq=False)
class ThreeReport:
    cos_theta: float
    dim_H_prime: int
    dim_kcap_a: int
    dim_kcap_b: int
    region_ok: bool
    p_opt: float | None
    boundary: float

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.dim_H_prime, self.dim_kcap_a, self.dim_kcap_b


def reduce3(instance: ThreeInstance) -> ThreeReduction:
    """Generic reduction plus the structural checks specific to this family.

    Raises:
        ReductionError: if ``dim H' != 6``, ``K_b != {0}`` or ``K_a`` differs
            from the antisymmetric subspace (numerical trouble).
    """
    prob = build_problem(instance.ensemble(), 2)
    res = reduction.reduce(prob)
    split = reduction.symmetry_split(res.H)
    if res.H_prime.dim != 6:
        raise ReductionError(f"dim H' = {res.H_prime.dim}, expected 6", res.H_prime.dim)
    if res.kcap_b.dim != 0:
        raise ReductionError(f"dim K_b = {res.kcap_b.dim}, expected 0", res.kcap_b.dim)
    if res.kcap_a.dim != 3 or not (res.kcap_a.contains(split.H_minus)
                                  and split.H_minus.contains(res.kcap_a)):
        raise ReductionError(
            f"K_a (dim {res.kcap_a.dim}) is not the antisymmetric subspace", res.kcap_a.dim)
    if not split.H_plus.contains(res.H_prime):
        raise ReductionError("H' is not the symmetric subspace", res.H_prime.dim)
    return ThreeReduction(res, split.H_plus, split.H_minus)


def p_opt3_value(cos_theta) -> float:
    c = float(cos_theta)
    return 1.0 - sqrt(8.0) / 9.0 * (4.0 * c - c * c)


def p_opt3(cos_theta: float, with_reduction: bool = True) -> ThreeReport:
    c = _check_overlap(cos_theta)
    b = region_boundary()
    ok = c <= b
    dims = (6, 3, 0)
    if with_reduction:
        dims = reduce3(ThreeInstance(c)).result.dims
    return ThreeReport(c, dims[0], dims[1], dims[2], ok,
                       p_opt3_value(c) if ok else None, b)


def separable_heuristic3(cos_theta: float, steps: int = 21, refinements: int = 3) -> float:
    """Square of a grid-searched local unambiguous discrimination success.

    HEURISTIC: local elements ``w_i |phi_i><phi_i|`` with ``phi_i`` the
    normalised dual vectors; the weights are searched on a coarse grid
    (refined around the best cell) subject to ``1 - sum_i F_i >= 0``.  No
    optimality claim is made.
    """
    c = _check_overlap(cos_theta)
    psi = equal_overlap_states(3, c).real
    dual = np.linalg.inv(psi).T
    phi = dual / np.linalg.norm(dual, axis=1, keepdims=True)
    proj = np.einsum("ia,ib->iab", phi, phi)
    hit = np.einsum("ia,ia->i", phi, psi) ** 2

    lo, hi = np.zeros(3), np.ones(3)
    best_w, best = np.zeros(3), 0.0
    for _ in range(refinements):
        axes = [np.linspace(lo[k], hi[k], steps) for k in range(3)]
        w = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3)
        mats = np.eye(3) - np.einsum("ni,iab->nab", w, proj)
        feasible = np.linalg.eigvalsh(mats)[:, 0] >= -1e-12
        succ = (w * hit).sum(axis=1) / 3.0
        succ[~feasible] = -1.0
        k = int(np.argmax(succ))
        if succ[k] > best:
            best, best_w = float(succ[k]), w[k]
        width = (hi - lo) / (steps - 1)
        lo = np.clip(best_w - width, 0.0, 1.0)
        hi = np.clip(best_w + width, 0.0, 1.0)
    return best ** 2

