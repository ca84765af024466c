"""Monte Carlo simulation of comparison experiments.

Each trial draws ``copies`` state indices from the priors, prepares the
product state and samples one outcome of a comparison POVM ``{F_a, F_b,
F_?}``.  The simulation is the stochastic counterpart of
:func:`exact_success` and an operational check of the zero-error property.

Random numbers come from :mod:`statecomp.rng`.  Trial ``t`` consumes draws
``t * (copies + 1) .. t * (copies + 1) + copies``: one per index, in order,
then one for the outcome.  Outcomes are chosen by cumulative probability in
the fixed order ``a, b, ?``; any residual mass goes to ``?``.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import rng
from .ensemble import Ensemble, Povm, build_problem, product_states
from .errors import PovmDefectError, ValidationError

log = logging.getLogger(__name__)

PROB_SUM_TOL = 1e-8
CHUNK = 1 << 18
OUTCOMES = ("a", "b", "?")
TRUTHS = ("equal", "different")


@dataclass(frozen=True, eq=False)
class SimConfig:
    """Simulation parameters.

    ``shards`` is the shard plan: trial counts processed as independent
    units (possibly on different threads).  Results do not depend on it.
    """

    trials: int
    seed: int
    povm: Povm
    ensemble: Ensemble
    copies: int = 2
    shards: Sequence[int] | None = None
    workers: int = 1

    def shard_plan(self) -> list[int]:
        plan = [self.trials] if self.shards is None else [int(s) for s in self.shards]
        if any(s < 0 for s in plan) or sum(plan) != self.trials:
            raise ValidationError(f"shard plan {plan} does not cover {self.trials} trials")
        return plan


@dataclass(frozen=True)
class SimReport:
    counts: dict = field(repr=False)
    trials: int
    empirical_p: float
    error_count: int
    std_error: float

    def count(self, truth: str, outcome: str) -> int:
        return self.counts[(truth, outcome)]


def outcome_table(povm: Povm, ens: Ensemble, copies: int) -> np.ndarray:
    """``(N**copies, 3)`` outcome probabilities per product state, in draw order.

    Raises:
        PovmDefectError: if some row does not sum to one within 1e-8.
    """
    expected = ens.dim ** copies
    if povm.dim != expected:
        raise ValidationError(f"POVM acts on dimension {povm.dim}, ensemble needs {expected}")
    rows = []
    for idx, _, rho in product_states(ens, copies):
        p = [float(np.real(np.trace(povm[lab] @ rho))) for lab in OUTCOMES]
        if abs(sum(p) - 1.0) > PROB_SUM_TOL or min(p) < -PROB_SUM_TOL:
            raise PovmDefectError(f"outcome probabilities {p} for product state {idx}")
        rows.append(p)
    return np.array(rows)


def _run_range(cfg: SimConfig, table: np.ndarray, start: int, count: int) -> np.ndarray:
    """Counts ``[truth, outcome]`` for trials ``start .. start + count - 1``."""
    n = cfg.ensemble.n
    c = cfg.copies
    cum_q = np.cumsum(cfg.ensemble.priors)
    weights = n ** np.arange(c - 1, -1, -1)
    counts = np.zeros((2, 3), dtype=np.int64)
    for lo in range(start, start + count, CHUNK):
        m = min(CHUNK, start + count - lo)
        u = rng.uniforms(cfg.seed, lo * (c + 1), m * (c + 1)).reshape(m, c + 1)
        idx = np.minimum(np.searchsorted(cum_q, u[:, :c], side="right"), n - 1)
        state = idx @ weights
        differ = np.any(idx != idx[:, :1], axis=1).astype(np.int64)
        pa = table[state, 0]
        pab = pa + table[state, 1]
        v = u[:, c]
        outcome = np.where(v < pa, 0, np.where(v < pab, 1, 2))
        np.add.at(counts, (differ, outcome), 1)
    return counts


def simulate(cfg: SimConfig) -> SimReport:
    if cfg.trials < 1:
        raise ValidationError("need at least one trial")
    table = outcome_table(cfg.povm, cfg.ensemble, cfg.copies)
    plan = cfg.shard_plan()
    starts = np.concatenate([[0], np.cumsum(plan)[:-1]]).astype(int)
    jobs = list(zip(starts.tolist(), plan))
    if cfg.workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(lambda j: _run_range(cfg, table, *j), jobs))
    else:
        parts = [_run_range(cfg, table, *j) for j in jobs]
    total = np.sum(parts, axis=0)
    counts = {(TRUTHS[t], OUTCOMES[o]): int(total[t, o]) for t in range(2) for o in range(3)}
    conclusive = int(total[:, 0].sum() + total[:, 1].sum())
    p_hat = conclusive / cfg.trials
    errors = counts[("different", "a")] + counts[("equal", "b")]
    se = float(np.sqrt(p_hat * (1.0 - p_hat) / cfg.trials))
    log.debug("simulated %d trials in %d shards: p=%.6f", cfg.trials, len(plan), p_hat)
    return SimReport(counts, cfg.trials, p_hat, errors, se)


def exact_success(povm: Povm, ens: Ensemble, copies: int = 2) -> float:
    """``eta_a tr(F_a rho_a) + eta_b tr(F_b rho_b)``."""
    if povm.dim != ens.dim ** copies:
        raise ValidationError(f"POVM acts on dimension {povm.dim}, ensemble needs {ens.dim ** copies}")
    prob = build_problem(ens, copies)
    return float(np.real(prob.eta_a * np.trace(povm["a"] @ prob.rho_a.matrix)
                         + prob.eta_b * np.trace(povm["b"] @ prob.rho_b.matrix)))


def conclusive_probability(povm: Povm, ens: Ensemble, copies: int = 2) -> float:
    """``sum_k p_k tr((F_a + F_b) rho_k)``, the quantity the simulation estimates.

    Equals :func:`exact_success` for unambiguous measurements.
    """
    table = outcome_table(povm, ens, copies)
    priors = np.array([np.prod(ens.priors[list(idx)])
                       for idx in itertools.product(range(ens.n), repeat=copies)])
    return float(priors @ (table[:, 0] + table[:, 1]))
