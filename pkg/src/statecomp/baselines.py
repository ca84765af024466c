"""Best separable (incoherent) comparison of two systems from two pure states.

The optimal separable strategy measures each system with the same optimal
local unambiguous discrimination POVM ``{F1, F2, F?}`` and declares "equal"
on outcomes ``(1,1)``/``(2,2)`` and "different" on ``(1,2)``/``(2,1)``.  Its
success rate is the square of the local discrimination success.  Adaptive
schemes cannot help here because the reduced state of the second system is
the same average state whatever the first outcome was.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import TextIO

import numpy as np

from . import hermlin
from .ensemble import Povm, UnambiguityReport, build_problem, check_unambiguous
from .errors import DomainError
from .solver2oo2 import (TwoTwoInstance, _out, check_domain, complement_vectors,
                         jaeger_shimony, p_opt)


def condition_doublestar(q1, cos_theta):
    """``cos_theta < sqrt((1 - q_max) / q_max)``: both local outcomes conclusive."""
    q = np.asarray(q1, dtype=float)
    q_max = np.maximum(q, 1.0 - q)
    out = np.asarray(cos_theta) < np.sqrt((1.0 - q_max) / q_max)
    return bool(out) if out.ndim == 0 else out


def p_sep(q1, cos_theta, allow_limit: bool = False):
    """Success rate of the best separable measurement and the (**) flag."""
    q1, c = check_domain(q1, cos_theta, allow_limit)
    q_max = np.maximum(q1, 1.0 - q1)
    ds = condition_doublestar(q1, c)
    value = np.where(ds,
                     (1.0 - 2.0 * np.sqrt(q1 * (1.0 - q1)) * c) ** 2,
                     q_max ** 2 * (1.0 - c * c) ** 2)
    return _out(value, ds)


def gain(q1, cos_theta, allow_limit: bool = False):
    """``P_opt - P_sep``."""
    return (p_opt(q1, cos_theta, allow_limit)[0]
            - p_sep(q1, cos_theta, allow_limit)[0])


@dataclass(frozen=True, eq=False)
class LocalUD:
    """Optimal local discrimination ``{F1, F2, F?}`` of ``psi1`` vs ``psi2``.

    ``F1 = w1 |bar2><bar2|`` never fires on ``psi2`` and ``F2 = w2
    |bar1><bar1|`` never fires on ``psi1``.  ``alpha = <psi1|F1|psi1>`` and
    ``beta = <psi2|F2|psi2>`` are the conditional success probabilities.
    Outside (**) the weight of the less likely state is exactly zero.
    """

    instance: TwoTwoInstance
    povm: Povm
    w1: float
    w2: float
    alpha: float
    beta: float
    bar1: np.ndarray
    bar2: np.ndarray
    success: float
    doublestar: bool


def local_ud_povm(q1: float, cos_theta: float, psi1=None, psi2=None) -> LocalUD:
    inst = TwoTwoInstance(q1, cos_theta, psi1, psi2)
    c = inst.cos_theta
    q2 = 1.0 - inst.q1
    s2 = 1.0 - c * c
    ds = condition_doublestar(inst.q1, c)
    if ds:
        alpha = 1.0 - np.sqrt(q2 / inst.q1) * c
        beta = 1.0 - np.sqrt(inst.q1 / q2) * c
    elif inst.q1 >= q2:
        alpha, beta = s2, 0.0
    else:
        alpha, beta = 0.0, s2
    # |<psi1|bar2>|^2 = |<psi2|bar1>|^2 = sin^2
    w1, w2 = alpha / s2, beta / s2
    bar1, bar2 = complement_vectors(inst.psi1, inst.psi2, c)
    f1 = w1 * hermlin.outer(bar2)
    f2 = w2 * hermlin.outer(bar1)
    povm = Povm({"1": f1, "2": f2, "?": np.eye(inst.dim) - f1 - f2}).validate()
    success, _ = jaeger_shimony(inst.q1, q2, c)
    return LocalUD(inst, povm, float(w1), float(w2), float(alpha), float(beta),
                   bar1, bar2, success, ds)


@dataclass(frozen=True, eq=False)
class SeparableSolution:
    """Product-of-local-UD comparison measurement.

    ``povm`` holds ``F_a = F1(x)F1 + F2(x)F2``, ``F_b = F1(x)F2 + F2(x)F1`` and
    ``F_?``.  ``pattern`` holds the same combinations built from the
    unit-weight projectors, used to judge unambiguity in the limit of
    infinitesimally positive weights when (**) fails.
    """

    p_sep: float
    doublestar: bool
    local: LocalUD
    povm: Povm
    pattern: dict
    q_max: float

    def success_rate(self) -> float:
        """Success computed from traces of the assembled measurement."""
        prob = build_problem(self.local.instance.ensemble(), 2)
        return float(np.real(
            prob.eta_a * np.trace(self.povm["a"] @ prob.rho_a.matrix)
            + prob.eta_b * np.trace(self.povm["b"] @ prob.rho_b.matrix)))

    def unambiguity(self) -> UnambiguityReport:
        ens = self.local.instance.ensemble()
        if self.doublestar:
            return check_unambiguous(self.povm, ens, 2)
        return check_unambiguous(self.pattern, ens, 2, epsilon_limit=True)


def _pair_elements(f1, f2):
    return {"a": np.kron(f1, f1) + np.kron(f2, f2),
            "b": np.kron(f1, f2) + np.kron(f2, f1)}


def separable_solution(q1: float, cos_theta: float, psi1=None, psi2=None) -> SeparableSolution:
    local = local_ud_povm(q1, cos_theta, psi1, psi2)
    d = local.instance.dim
    els = _pair_elements(local.povm["1"], local.povm["2"])
    els["?"] = np.eye(d * d) - els["a"] - els["b"]
    povm = Povm(els, (d, d)).validate()
    pattern = _pair_elements(hermlin.outer(local.bar2), hermlin.outer(local.bar1))
    value, ds = p_sep(q1, cos_theta)
    return SeparableSolution(value, ds, local, povm, pattern, max(q1, 1.0 - q1))


GRID_HEADER = ("q1", "cos_theta", "p_opt", "p_sep", "gain", "star", "doublestar")


@dataclass(frozen=True, eq=False)
class GainGrid:
    """Closed-form rates on a ``steps_q x steps_c`` grid (q1 major, cos_theta minor)."""

    q1: np.ndarray
    cos_theta: np.ndarray
    p_opt: np.ndarray
    p_sep: np.ndarray
    gain: np.ndarray
    star: np.ndarray
    doublestar: np.ndarray

    def __len__(self):
        return self.gain.size

    def argmax(self) -> tuple[float, float, float]:
        """``(q1, cos_theta, gain)`` of the largest gain cell."""
        k = int(np.argmax(self.gain))
        return float(self.q1.flat[k]), float(self.cos_theta.flat[k]), float(self.gain.flat[k])

    def rows(self):
        cols = [a.ravel() for a in (self.q1, self.cos_theta, self.p_opt, self.p_sep,
                                    self.gain, self.star, self.doublestar)]
        for vals in zip(*cols):
            yield vals

    def write_csv(self, fh: TextIO):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(GRID_HEADER)
        for q, c, po, ps, g, st, ds in self.rows():
            w.writerow([repr(float(q)), repr(float(c)), repr(float(po)), repr(float(ps)),
                        repr(float(g)), int(st), int(ds)])


def grid_axis(steps: int) -> np.ndarray:
    """``steps`` points inset by half a step from 0 and 1."""
    if steps < 2:
        raise DomainError("need at least two grid steps")
    return (np.arange(steps) + 0.5) / steps


def gain_grid(steps_q: int, steps_c: int | None = None) -> GainGrid:
    steps_c = steps_q if steps_c is None else steps_c
    q, c = np.meshgrid(grid_axis(steps_q), grid_axis(steps_c), indexing="ij")
    po, star = p_opt(q, c)
    ps, ds = p_sep(q, c)
    return GainGrid(q, c, po, ps, po - ps, star, ds)
