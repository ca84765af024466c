"""Two-step reduction of an unambiguous discrimination problem.

First step: restrict to ``H = Supp rho_a (+) Supp rho_b``.  Second step:
split off ``K_a = Kern rho_a & Supp rho_b`` and ``K_b = Kern rho_b & Supp
rho_a`` (both perfectly discriminable) and keep their orthogonal complement
``H'`` inside ``H``.  If ``P'`` is the optimal success on ``H'`` the optimum
of the full problem is ``1 - (1 - P') zeta``.

For comparison of two systems drawn from pure states the kernel
intersections are also available in closed coefficient form from the
overlap matrix, see :func:`kcap_a_symmetric` and :func:`kcap_b_diagonal`.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

import numpy as np

from . import hermlin
from .ensemble import DiscriminationProblem
from .errors import DomainError, ReductionError, ValidationError
from .hermlin import HermitianOperator, Subspace


@dataclass(frozen=True, eq=False)
class ReductionResult:
    """Subspaces and reduced problem of the two-step reduction.

    ``rho_a_prime``/``rho_b_prime`` are expressed in the coordinates of
    ``H_prime.basis``.  When ``H'`` carries no weight of a state (``zeta_x ==
    0``, e.g. orthogonal inputs) the corresponding reduced state is ``None``.
    """

    H: Subspace
    kcap_a: Subspace
    kcap_b: Subspace
    H_prime: Subspace
    zeta_a: float
    zeta_b: float
    zeta: float
    eta_a_prime: float
    eta_b_prime: float
    rho_a_prime: HermitianOperator | None
    rho_b_prime: HermitianOperator | None

    @property
    def dims(self) -> tuple[int, int, int]:
        """``(dim H', dim K_a, dim K_b)``."""
        return self.H_prime.dim, self.kcap_a.dim, self.kcap_b.dim


@dataclass(frozen=True, eq=False)
class SymmetrySplit:
    H_plus: Subspace
    H_minus: Subspace


def first_reduction(prob: DiscriminationProblem) -> Subspace:
    """``Supp rho_a (+) Supp rho_b``.

    Raises:
        ReductionError: if the two supports intersect; ``overlap_dim`` holds
            the dimension of the intersection.
    """
    sa = hermlin.support(prob.rho_a)
    sb = hermlin.support(prob.rho_b)
    overlap = hermlin.subspace_intersection(sa, sb)
    if overlap.dim:
        raise ReductionError(
            f"supports of rho_a and rho_b share a {overlap.dim}-dimensional subspace",
            overlap_dim=overlap.dim)
    return hermlin.subspace_sum(sa, sb)


def second_reduction(prob: DiscriminationProblem, H: Subspace) -> ReductionResult:
    sa = hermlin.support(prob.rho_a)
    sb = hermlin.support(prob.rho_b)
    kcap_a = hermlin.subspace_intersection(hermlin.kernel(prob.rho_a), sb)
    kcap_b = hermlin.subspace_intersection(hermlin.kernel(prob.rho_b), sa)
    h_prime = hermlin.subspace_sum(kcap_a, kcap_b).complement(within=H)

    v = h_prime.basis
    blocks = {}
    for name, rho in (("a", prob.rho_a), ("b", prob.rho_b)):
        compressed = v.conj().T @ rho.matrix @ v
        z = float(np.trace(compressed).real) if v.shape[1] else 0.0
        blocks[name] = (z, compressed)
    zeta_a, comp_a = blocks["a"]
    zeta_b, comp_b = blocks["b"]
    zeta = zeta_a * prob.eta_a + zeta_b * prob.eta_b
    if zeta > 0:
        eta_a_prime = prob.eta_a * zeta_a / zeta
    else:
        # Empty reduced problem: keep the original priors by convention.
        eta_a_prime = prob.eta_a
    eta_b_prime = 1.0 - eta_a_prime

    def reduced(z, comp):
        if z <= 0:
            return None
        return HermitianOperator((comp + comp.conj().T) / (2 * z))

    return ReductionResult(
        H=H, kcap_a=kcap_a, kcap_b=kcap_b, H_prime=h_prime,
        zeta_a=zeta_a, zeta_b=zeta_b, zeta=zeta,
        eta_a_prime=eta_a_prime, eta_b_prime=eta_b_prime,
        rho_a_prime=reduced(zeta_a, comp_a), rho_b_prime=reduced(zeta_b, comp_b),
    )


def reduce(prob: DiscriminationProblem) -> ReductionResult:
    return second_reduction(prob, first_reduction(prob))


def lift_success(p_prime: float, zeta: float) -> float:
    """Success rate of the full problem from the reduced optimum ``p_prime``."""
    if not 0.0 <= p_prime <= 1.0:
        raise DomainError(f"reduced success {p_prime!r} outside [0, 1]")
    if not 0.0 < zeta <= 1.0:
        raise DomainError(f"zeta {zeta!r} outside (0, 1]")
    p = 1.0 - (1.0 - p_prime) * zeta
    assert 0.0 <= p <= 1.0, p
    return p


def _check_gram(gram) -> np.ndarray:
    c = np.asarray(gram, dtype=complex)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise ValidationError(f"overlap matrix must be square, got {c.shape}")
    vals = hermlin.eigh(c)[0]
    if vals[0] <= hermlin.RANK_TOL * vals[-1]:
        raise ValidationError("overlap matrix is singular: states are linearly dependent")
    return c


def _nullspace(m: np.ndarray) -> np.ndarray:
    """Orthonormal basis (columns) of the right nullspace of ``m``."""
    _, s, vh = np.linalg.svd(m)
    rank = int(np.sum(s > hermlin.RANK_TOL * s[0])) if s.size and s[0] > 0 else 0
    return vh[rank:].conj().T


def _lower_pairs(n):
    return [(i, j) for i in range(n) for j in range(i)]


def kcap_a_symmetric(gram) -> np.ndarray:
    """Basis of the symmetric part of ``Kern rho_a & Supp rho_b``, as coefficients.

    Each returned ``A`` (strictly lower triangular, shape ``(N, N)``) encodes
    the vector ``sum_{i>j} A_ij (|psi_i psi_j> + |psi_j psi_i>)``; the ``A``
    solve ``[C A C^T]_kk = 0`` for all ``k``.

    Returns:
        Array of shape ``(dim, N, N)``.
    """
    c = _check_gram(gram)
    n = c.shape[0]
    pairs = _lower_pairs(n)
    if not pairs:
        return np.zeros((0, n, n), dtype=complex)
    m = np.array([[c[k, i] * c[k, j] for (i, j) in pairs] for k in range(n)])
    null = _nullspace(m)
    out = np.zeros((null.shape[1], n, n), dtype=complex)
    for col in range(null.shape[1]):
        for (i, j), a in zip(pairs, null[:, col]):
            out[col, i, j] = a
    return out


def kcap_b_diagonal(gram) -> np.ndarray:
    """Basis of ``Kern rho_b & Supp rho_a`` as diagonal coefficient matrices.

    ``B`` encodes ``sum_k B_kk |psi_k psi_k>`` and solves
    ``[C B C^T]_ij = 0`` for all ``i > j``.

    Returns:
        Array of shape ``(dim, N, N)``.
    """
    c = _check_gram(gram)
    n = c.shape[0]
    pairs = _lower_pairs(n)
    if not pairs:
        return np.array([np.diag(e) for e in np.eye(n, dtype=complex)])
    m = np.array([[c[i, k] * c[j, k] for k in range(n)] for (i, j) in pairs])
    null = _nullspace(m)
    return np.array([np.diag(null[:, col]) for col in range(null.shape[1])]).reshape(-1, n, n)


def symmetric_pair_vectors(states, coeffs: np.ndarray) -> np.ndarray:
    """Vectors ``sum_{i>j} A_ij (|psi_i psi_j> + |psi_j psi_i>)`` as columns."""
    s = np.asarray(states, dtype=complex)
    n = len(s)
    cols = []
    for a in coeffs:
        v = sum(a[i, j] * (np.kron(s[i], s[j]) + np.kron(s[j], s[i])) for (i, j) in _lower_pairs(n))
        cols.append(v)
    return np.column_stack(cols) if cols else np.zeros((s.shape[1] ** 2, 0), dtype=complex)


def diagonal_vectors(states, coeffs: np.ndarray) -> np.ndarray:
    """Vectors ``sum_k B_kk |psi_k psi_k>`` as columns."""
    s = np.asarray(states, dtype=complex)
    cols = [sum(b[k, k] * np.kron(s[k], s[k]) for k in range(len(s))) for b in coeffs]
    return np.column_stack(cols) if cols else np.zeros((s.shape[1] ** 2, 0), dtype=complex)


def symmetry_split(H: Subspace, copies: int = 2) -> SymmetrySplit:
    """Split a swap-invariant ``H`` of ``C^d (x) C^d`` into symmetric and antisymmetric parts.

    Raises:
        ReductionError: if the ambient space is not a square of equal
            factors, ``copies != 2``, or ``H`` is not invariant under the swap.
    """
    if copies != 2:
        raise ReductionError(f"factor swap needs exactly two factors, got {copies}")
    d = isqrt(H.ambient_dim)
    if d * d != H.ambient_dim:
        raise ReductionError(f"ambient dimension {H.ambient_dim} is not d*d")
    swap = hermlin.swap_operator(d)
    proj = H.projector()
    if np.max(np.abs(swap @ proj @ swap - proj), initial=0.0) > hermlin.TOL_ORTH:
        raise ReductionError("subspace is not invariant under the factor swap")
    if H.dim == 0:
        return SymmetrySplit(H, H)
    restricted = H.basis.conj().T @ swap @ H.basis
    vals, vecs = np.linalg.eigh((restricted + restricted.conj().T) / 2)
    plus = hermlin.span(H.basis @ vecs[:, vals > 0])
    minus = hermlin.span(H.basis @ vecs[:, vals < 0])
    return SymmetrySplit(plus, minus)
