"""Ensembles, the comparison-induced discrimination problem, and feasibility.

Comparing ``C`` systems drawn from ``{pi_1, ..., pi_N}`` with priors ``q_i``
is equivalent to unambiguously discriminating

    rho_a = (1/eta_a) sum_i (q_i pi_i)^{(x)C}                (all equal)
    rho_b = (1/eta_b) (sum_i q_i pi_i)^{(x)C} - (eta_a/eta_b) rho_a

with ``eta_a = sum_i q_i^C`` and ``eta_b = 1 - eta_a``, provided the
measurement also reproduces the per-product-state pattern checked by
:func:`check_unambiguous`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence, Union

import numpy as np

from . import hermlin
from .errors import InfeasibleError, ValidationError
from .hermlin import HermitianOperator, Subspace

PRIOR_SUM_TOL = 1e-12
TRACE_TOL = 1e-10
POVM_TOL = 1e-10
ZERO_THRESHOLD = 1e-9
POSITIVE_THRESHOLD = 1e-9
WITNESS_NORM_MIN = 1e-8


def _check_priors(priors) -> np.ndarray:
    q = np.asarray(priors, dtype=float)
    if q.ndim != 1 or q.size < 2:
        raise ValidationError("an ensemble needs at least two states")
    if np.any(~np.isfinite(q)) or np.any(q <= 0):
        raise ValidationError("priors must be strictly positive")
    if abs(q.sum() - 1.0) > PRIOR_SUM_TOL:
        raise ValidationError(f"priors sum to {q.sum()!r}, expected 1")
    q.setflags(write=False)
    return q


def _reject_duplicates(mats: np.ndarray):
    for i, j in itertools.combinations(range(len(mats)), 2):
        if np.max(np.abs(mats[i] - mats[j])) <= TRACE_TOL:
            raise ValidationError(f"states {i} and {j} are identical")


@dataclass(frozen=True, eq=False)
class MixedEnsemble:
    """Density matrices ``states[i]`` occurring with prior ``priors[i]``."""

    states: np.ndarray
    priors: np.ndarray

    def __init__(self, states, priors):
        s = np.array(states, dtype=complex)
        if s.ndim != 3 or s.shape[1] != s.shape[2]:
            raise ValidationError(f"states must be a stack of square matrices, got {s.shape}")
        q = _check_priors(priors)
        if len(q) != len(s):
            raise ValidationError(f"{len(s)} states but {len(q)} priors")
        for i, rho in enumerate(s):
            hermlin.HermitianOperator(rho)
            if abs(np.trace(rho).real - 1.0) > TRACE_TOL:
                raise ValidationError(f"state {i} does not have unit trace")
            if hermlin.min_eigenvalue(rho) < -TRACE_TOL:
                raise ValidationError(f"state {i} is not positive semidefinite")
        _reject_duplicates(s)
        s.setflags(write=False)
        object.__setattr__(self, "states", s)
        object.__setattr__(self, "priors", q)

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    @property
    def n(self) -> int:
        return len(self.states)

    def density_matrices(self) -> np.ndarray:
        return self.states

    def average_state(self) -> np.ndarray:
        return np.einsum("i,ijk->jk", self.priors, self.states)


@dataclass(frozen=True, eq=False)
class PureEnsemble:
    """Unit vectors ``states[i]`` occurring with prior ``priors[i]``."""

    states: np.ndarray
    priors: np.ndarray

    def __init__(self, states, priors):
        s = np.array(states, dtype=complex)
        if s.ndim != 2:
            raise ValidationError(f"pure states must be given as a 2-D array, got {s.shape}")
        q = _check_priors(priors)
        if len(q) != len(s):
            raise ValidationError(f"{len(s)} states but {len(q)} priors")
        norms = np.linalg.norm(s, axis=1)
        bad = np.flatnonzero(np.abs(norms - 1.0) > hermlin.TOL_ORTH)
        if bad.size:
            raise ValidationError(f"state {bad[0]} is not normalised (norm {norms[bad[0]]!r})")
        _reject_duplicates(np.einsum("ij,ik->ijk", s, s.conj()))
        s.setflags(write=False)
        object.__setattr__(self, "states", s)
        object.__setattr__(self, "priors", q)

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    @property
    def n(self) -> int:
        return len(self.states)

    def gram(self) -> np.ndarray:
        """Overlap matrix ``C_ij = <psi_i|psi_j>``."""
        return self.states.conj() @ self.states.T

    def density_matrices(self) -> np.ndarray:
        return np.einsum("ij,ik->ijk", self.states, self.states.conj())

    def to_mixed(self) -> MixedEnsemble:
        return MixedEnsemble(self.density_matrices(), self.priors)

    def average_state(self) -> np.ndarray:
        return np.einsum("i,ijk->jk", self.priors, self.density_matrices())


Ensemble = Union[PureEnsemble, MixedEnsemble]


@dataclass(frozen=True, eq=False)
class DiscriminationProblem:
    rho_a: HermitianOperator
    rho_b: HermitianOperator
    eta_a: float
    eta_b: float
    copies: int


@dataclass(frozen=True, eq=False)
class Povm:
    """Ordered, labelled measurement elements on ``prod(factor_dims)`` dimensions.

    Comparison measurements use the labels ``"a"`` (all equal), ``"b"``
    (some different) and ``"?"`` (inconclusive).
    """

    elements: Mapping[str, np.ndarray]
    factor_dims: tuple[int, ...]

    def __init__(self, elements: Mapping[str, np.ndarray], factor_dims: Sequence[int] | None = None):
        els = {}
        for label, m in elements.items():
            els[str(label)] = hermlin.HermitianOperator(m, factor_dims).matrix
        if not els:
            raise ValidationError("a POVM needs at least one element")
        dim = next(iter(els.values())).shape[0]
        if any(m.shape[0] != dim for m in els.values()):
            raise ValidationError("POVM elements have different dimensions")
        dims = (dim,) if factor_dims is None else tuple(int(d) for d in factor_dims)
        object.__setattr__(self, "elements", els)
        object.__setattr__(self, "factor_dims", dims)

    @property
    def dim(self) -> int:
        return next(iter(self.elements.values())).shape[0]

    @property
    def labels(self) -> list[str]:
        return list(self.elements)

    def __getitem__(self, label: str) -> np.ndarray:
        return self.elements[label]

    def min_eigenvalue(self) -> float:
        return min(hermlin.min_eigenvalue(m) for m in self.elements.values())

    def completeness_error(self) -> float:
        total = sum(self.elements.values())
        return float(np.max(np.abs(total - np.eye(self.dim))))

    def is_valid(self, tol: float = POVM_TOL) -> bool:
        return self.min_eigenvalue() >= -tol and self.completeness_error() <= tol

    def validate(self, tol: float = POVM_TOL) -> "Povm":
        lam = self.min_eigenvalue()
        if lam < -tol:
            raise ValidationError(f"POVM element has eigenvalue {lam:.3e}")
        err = self.completeness_error()
        if err > tol:
            raise ValidationError(f"POVM elements deviate from identity by {err:.3e}")
        return self


def tensor_power(m: np.ndarray, copies: int) -> np.ndarray:
    return hermlin.kron_all([m] * copies)


def build_problem(ens: Ensemble, copies: int) -> DiscriminationProblem:
    """Discrimination problem induced by comparing ``copies`` systems."""
    if int(copies) != copies or copies < 2:
        raise ValidationError(f"copies must be an integer >= 2, got {copies!r}")
    copies = int(copies)
    q = ens.priors
    pis = ens.density_matrices()
    eta_a = float(np.sum(q ** copies))
    eta_b = 1.0 - eta_a
    unnorm_a = sum(tensor_power(qi * pi, copies) for qi, pi in zip(q, pis))
    avg = tensor_power(ens.average_state(), copies)
    dims = (ens.dim,) * copies
    rho_a = HermitianOperator(unnorm_a / eta_a, dims)
    rho_b = HermitianOperator((avg - unnorm_a) / eta_b, dims)
    return DiscriminationProblem(rho_a, rho_b, eta_a, eta_b, copies)


def product_states(ens: Ensemble, copies: int) -> Iterator[tuple[tuple[int, ...], float, np.ndarray]]:
    """Yield ``(indices, prior, state)`` for every product state of ``copies`` systems."""
    pis = ens.density_matrices()
    for idx in itertools.product(range(ens.n), repeat=copies):
        yield idx, float(np.prod(ens.priors[list(idx)])), hermlin.kron_all(pis[list(idx)])


@dataclass(frozen=True)
class PatternEntry:
    indices: tuple[int, ...]
    equal: bool
    tr_a: float
    tr_b: float
    ok: bool


@dataclass(frozen=True)
class UnambiguityReport:
    """Trace pattern of ``F_a``, ``F_b`` against every product state.

    ``epsilon_limit`` marks reports evaluated on the structural (unit-weight)
    operators of a measurement whose some local weights vanish, i.e. in the
    limit of an infinitesimal positive perturbation of those weights.
    """

    entries: tuple[PatternEntry, ...]
    passed: bool
    epsilon_limit: bool = False

    @property
    def failures(self) -> list[PatternEntry]:
        return [e for e in self.entries if not e.ok]


def check_unambiguous(povm: Povm | Mapping[str, np.ndarray], ens: Ensemble, copies: int, *,
                      zero_threshold: float = ZERO_THRESHOLD,
                      positive_threshold: float = POSITIVE_THRESHOLD,
                      epsilon_limit: bool = False) -> UnambiguityReport:
    """Check the defining pattern of an unambiguous comparison measurement.

    ``F_a`` must click with strictly positive probability exactly on the
    product states ``pi_m^{(x)C}`` and ``F_b`` exactly on the others.  Only the
    ``"a"`` and ``"b"`` elements are read, so ``povm`` may be any mapping
    holding them (completeness is not checked here).
    """
    fa = np.asarray(povm["a"], dtype=complex)
    fb = np.asarray(povm["b"], dtype=complex)
    expected = ens.dim ** copies
    if fa.shape != (expected, expected) or fb.shape != (expected, expected):
        raise ValidationError(
            f"POVM acts on dimension {fa.shape[0]}, ensemble needs {expected}")
    entries = []
    for idx, _, rho in product_states(ens, copies):
        equal = len(set(idx)) == 1
        ta = float(np.real(np.trace(fa @ rho)))
        tb = float(np.real(np.trace(fb @ rho)))
        if equal:
            ok = ta >= positive_threshold and abs(tb) <= zero_threshold
        else:
            ok = tb >= positive_threshold and abs(ta) <= zero_threshold
        entries.append(PatternEntry(idx, equal, ta, tb, ok))
    return UnambiguityReport(tuple(entries), all(e.ok for e in entries), epsilon_limit)


@dataclass(frozen=True)
class StateDiagnosis:
    index: int
    contained: bool
    residual: float  # max-norm of (1 - P_others) P_i


@dataclass(frozen=True)
class ComparabilityReport:
    comparable: bool
    states: tuple[StateDiagnosis, ...]

    def __bool__(self):
        return self.comparable


def _as_mixed(ens: Ensemble) -> MixedEnsemble:
    return ens.to_mixed() if isinstance(ens, PureEnsemble) else ens


def _other_supports(supports: list[Subspace], i: int) -> Subspace:
    total = Subspace.zero(supports[0].ambient_dim)
    for k, s in enumerate(supports):
        if k != i:
            total = hermlin.subspace_sum(total, s)
    return total


def is_comparable(ens: Ensemble, tol: float = hermlin.TOL_ISECT) -> ComparabilityReport:
    """Whether unambiguous comparison of any number of copies is possible.

    It is iff no state's support lies inside the sum of the other supports.
    """
    ens = _as_mixed(ens)
    supports = [hermlin.support(pi) for pi in ens.states]
    diags = []
    for i, s in enumerate(supports):
        others = _other_supports(supports, i)
        resid = (np.eye(ens.dim) - others.projector()) @ s.projector()
        r = float(np.max(np.abs(resid)))
        diags.append(StateDiagnosis(i, r <= tol, r))
    return ComparabilityReport(not any(d.contained for d in diags), tuple(diags))


def witness_povm(ens: Ensemble, seed: int = 0) -> Povm:
    """Local measurement ``{F_1, ..., F_N, F_?}`` with ``tr(F_i pi_j) > 0`` iff ``i == j``.

    ``F_i = |phi_i><phi_i| / N`` where ``phi_i`` is a support vector of
    ``pi_i`` projected onto the orthogonal complement of the other supports.

    Raises:
        InfeasibleError: if the ensemble is not comparable.
    """
    ens = _as_mixed(ens)
    report = is_comparable(ens)
    if not report:
        bad = [d.index for d in report.states if d.contained]
        raise InfeasibleError(f"supports of states {bad} lie in the sum of the others")
    n = ens.n
    rng = np.random.default_rng(seed)
    supports = [hermlin.support(pi) for pi in ens.states]
    elements = {}
    for i, pi in enumerate(ens.states):
        vals, vecs = hermlin.eigh(pi)
        sup = supports[i].basis
        proj = np.eye(ens.dim) - _other_supports(supports, i).projector()
        order = np.argsort(vals)[::-1][: sup.shape[1]]
        candidates = [vecs[:, k] for k in order]
        phi = None
        for v in candidates:
            w = proj @ v
            if np.linalg.norm(w) > WITNESS_NORM_MIN:
                phi = w / np.linalg.norm(w)
                break
        while phi is None:
            coeffs = rng.normal(size=sup.shape[1]) + 1j * rng.normal(size=sup.shape[1])
            w = proj @ (sup @ coeffs)
            if np.linalg.norm(w) > WITNESS_NORM_MIN:
                phi = w / np.linalg.norm(w)
        elements[str(i + 1)] = hermlin.outer(phi) / n
    elements["?"] = np.eye(ens.dim) - sum(elements.values())
    return Povm(elements)


def comparison_povm(local: Povm, copies: int) -> Povm:
    """Comparison measurement obtained by applying ``local`` to every copy.

    ``local`` must label its conclusive elements ``"1".."N"`` and the
    inconclusive one ``"?"``.  Outcome ``a`` is all copies giving the same
    conclusive label, ``b`` all conclusive with at least two differing.
    """
    conclusive = [lab for lab in local.labels if lab != "?"]
    dim = local.dim
    fa = np.zeros((dim ** copies,) * 2, dtype=complex)
    fb = np.zeros_like(fa)
    for labs in itertools.product(conclusive, repeat=copies):
        term = hermlin.kron_all([local[lab] for lab in labs])
        if len(set(labs)) == 1:
            fa += term
        else:
            fb += term
    dims = (dim,) * copies
    return Povm({"a": fa, "b": fb, "?": np.eye(dim ** copies) - fa - fb}, dims)


def witness_pattern(povm: Povm, ens: Ensemble) -> np.ndarray:
    """Table ``T[i, j] = tr(F_i pi_j)`` over the conclusive elements."""
    pis = ens.density_matrices()
    labels = [lab for lab in povm.labels if lab != "?"]
    return np.array([[np.real(np.trace(povm[lab] @ pi)) for pi in pis] for lab in labels])


def equal_overlap_states(n: int, cos_theta: float, dim: int | None = None) -> np.ndarray:
    """``n`` unit vectors with all pairwise overlaps equal to ``cos_theta``.

    Rows of the symmetric square root of the Gram matrix ``(1-c) 1 + c J``,
    zero-padded to ``dim`` components.
    """
    c = float(cos_theta)
    if not -1.0 / (n - 1) < c < 1.0:
        raise ValidationError(f"no {n} linearly independent states with overlap {c}")
    gram = (1.0 - c) * np.eye(n) + c * np.ones((n, n))
    vals, vecs = np.linalg.eigh(gram)
    root = (vecs * np.sqrt(vals)) @ vecs.T
    dim = n if dim is None else dim
    if dim < n:
        raise ValidationError(f"dimension {dim} too small for {n} independent states")
    out = np.zeros((n, dim), dtype=complex)
    out[:, :n] = root
    return out
