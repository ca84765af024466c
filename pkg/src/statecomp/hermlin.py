"""Dense complex Hermitian linear algebra.

Spectra, supports and kernels of positive operators, sums and intersections
of subspaces, and the partial transpose on a declared tensor structure.  All
dimensions involved are tiny (at most a few dozen), so everything is dense
and computed directly from eigen- or singular value decompositions.

Values returned from this module are immutable: the underlying arrays are
flagged read-only.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence, Union

import numpy as np

from .errors import NotPositiveError, ValidationError

#: Relative cutoff below which an eigen/singular value counts as zero.
RANK_TOL = 1e-10
TOL_HERM = 1e-10
TOL_ORTH = 1e-10
TOL_ISECT = 1e-10
TOL_RECON = 1e-9


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Hermitian matrix acting on ``prod(factor_dims)``-dimensional space."""

    matrix: np.ndarray
    factor_dims: tuple[int, ...]

    def __init__(self, matrix, factor_dims: Sequence[int] | None = None):
        m = np.asarray(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError(f"operator must be a square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValidationError("operator has non-finite entries")
        if np.max(np.abs(m - m.conj().T), initial=0.0) > TOL_HERM:
            raise ValidationError("operator is not Hermitian")
        dims = (m.shape[0],) if factor_dims is None else tuple(int(d) for d in factor_dims)
        if prod(dims) != m.shape[0]:
            raise ValidationError(f"factor dims {dims} do not multiply to {m.shape[0]}")
        object.__setattr__(self, "matrix", _frozen(m))
        object.__setattr__(self, "factor_dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of ``C^n`` held as an ``(n, k)`` array of orthonormal columns.

    ``k`` may be zero, in which case the subspace is ``{0}``.
    """

    basis: np.ndarray

    def __init__(self, basis):
        b = np.asarray(basis, dtype=complex)
        if b.ndim != 2:
            raise ValidationError(f"basis must be 2-D, got shape {b.shape}")
        if b.shape[1] > b.shape[0]:
            raise ValidationError("more basis vectors than the ambient dimension")
        gram = b.conj().T @ b
        if np.max(np.abs(gram - np.eye(b.shape[1])), initial=0.0) > TOL_ORTH:
            raise ValidationError("basis columns are not orthonormal")
        object.__setattr__(self, "basis", _frozen(b))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(np.zeros((ambient_dim, 0), dtype=complex))

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(np.eye(ambient_dim, dtype=complex))

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def contains(self, other: "Subspace", tol: float = TOL_ISECT) -> bool:
        """True if ``other`` lies inside this subspace."""
        _check_ambient(self, other)
        resid = other.basis - self.basis @ (self.basis.conj().T @ other.basis)
        return bool(np.max(np.abs(resid), initial=0.0) <= tol)

    def complement(self, within: "Subspace | None" = None) -> "Subspace":
        """Orthogonal complement, optionally relative to an enclosing subspace."""
        if within is None:
            within = Subspace.full(self.ambient_dim)
        _check_ambient(self, within)
        # Restrict to `within`; the complement there is the kernel of the
        # compressed projector.
        w = within.basis
        m = w.conj().T @ self.projector() @ w
        vals, vecs = np.linalg.eigh(m)
        keep = vals < 0.5
        return _orthonormalize(w @ vecs[:, keep])

    def __repr__(self):
        return f"Subspace(ambient_dim={self.ambient_dim}, dim={self.dim})"


MatrixLike = Union[HermitianOperator, np.ndarray, Sequence]


def as_hermitian(op: MatrixLike) -> np.ndarray:
    """Return ``op`` as a complex array after checking hermiticity."""
    if isinstance(op, HermitianOperator):
        return op.matrix
    return HermitianOperator(op).matrix


def _check_ambient(a: Subspace, b: Subspace):
    if a.ambient_dim != b.ambient_dim:
        raise ValidationError(
            f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}")


def _orthonormalize(vectors: np.ndarray, tol: float = RANK_TOL) -> Subspace:
    # Column span via SVD, relative cutoff against the largest singular value.
    n = vectors.shape[0]
    if vectors.shape[1] == 0:
        return Subspace.zero(n)
    u, s, _ = np.linalg.svd(vectors, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return Subspace.zero(n)
    return Subspace(u[:, s > tol * s[0]])


def span(vectors) -> Subspace:
    """Subspace spanned by the columns of ``vectors`` (or a list of 1-D vectors)."""
    if isinstance(vectors, (list, tuple)):
        vectors = np.column_stack([np.asarray(v, dtype=complex) for v in vectors])
    return _orthonormalize(np.asarray(vectors, dtype=complex))


def eigh(op: MatrixLike) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian operator."""
    m = as_hermitian(op)
    vals, vecs = np.linalg.eigh(m)
    return vals, vecs


def min_eigenvalue(op: MatrixLike) -> float:
    return float(np.linalg.eigvalsh(as_hermitian(op))[0])


def _spectral_split(op: MatrixLike, tol: float):
    vals, vecs = eigh(op)
    lam_max = max(float(np.max(np.abs(vals), initial=0.0)), 0.0)
    if lam_max == 0.0:
        return vecs[:, :0], vecs
    if vals[0] < -tol * lam_max:
        raise NotPositiveError(
            f"operator has eigenvalue {vals[0]:.3e} below -{tol:g} * lambda_max")
    pos = vals > tol * lam_max
    return vecs[:, pos], vecs[:, ~pos]


def support(op: MatrixLike, tol: float = RANK_TOL) -> Subspace:
    """Span of eigenvectors with eigenvalue above ``tol * lambda_max``.

    The zero operator has the zero subspace as support.

    Raises:
        NotPositiveError: if some eigenvalue is below ``-tol * lambda_max``.
    """
    sup, _ = _spectral_split(op, tol)
    return Subspace(sup)


def kernel(op: MatrixLike, tol: float = RANK_TOL) -> Subspace:
    """Orthogonal complement of :func:`support`."""
    _, ker = _spectral_split(op, tol)
    return Subspace(ker)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    return _orthonormalize(np.hstack([a.basis, b.basis]))


def subspace_intersection(a: Subspace, b: Subspace, tol: float = TOL_ISECT) -> Subspace:
    """Intersection of two subspaces.

    Computed as the eigenvalue-1 eigenspace of ``P_a P_b P_a`` restricted to
    ``a``, i.e. of ``A^dag P_b A`` for the basis ``A`` of ``a``.  Eigenvalues
    within ``tol`` of one are treated as exactly one.
    """
    _check_ambient(a, b)
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.ambient_dim)
    overlap = a.basis.conj().T @ b.basis
    vals, vecs = np.linalg.eigh(overlap @ overlap.conj().T)
    keep = vals >= 1.0 - tol
    return _orthonormalize(a.basis @ vecs[:, keep])


def partial_transpose(op: MatrixLike, factor_index: int,
                      factor_dims: Sequence[int] | None = None) -> HermitianOperator:
    """Transpose the tensor factor ``factor_index`` of ``op``.

    ``factor_dims`` is taken from ``op`` when it is a :class:`HermitianOperator`
    with more than one factor; otherwise it must be given.
    """
    if factor_dims is None:
        if isinstance(op, HermitianOperator) and len(op.factor_dims) > 1:
            factor_dims = op.factor_dims
        else:
            raise ValidationError("partial transpose needs a declared tensor structure")
    dims = tuple(int(d) for d in factor_dims)
    m = as_hermitian(op)
    if prod(dims) != m.shape[0]:
        raise ValidationError(f"factor dims {dims} do not match operator size {m.shape[0]}")
    n = len(dims)
    if not 0 <= factor_index < n:
        raise ValidationError(f"factor index {factor_index} out of range for {n} factors")
    t = m.reshape(dims + dims)
    axes = list(range(2 * n))
    axes[factor_index], axes[n + factor_index] = axes[n + factor_index], axes[factor_index]
    return HermitianOperator(t.transpose(axes).reshape(m.shape), dims)


def swap_operator(d: int) -> np.ndarray:
    """Unitary exchanging the two factors of ``C^d (x) C^d``."""
    s = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            s[j * d + i, i * d + j] = 1.0
    return s


def kron_all(mats) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def ket_kron(*vecs) -> np.ndarray:
    out = np.ones(1, dtype=complex)
    for v in vecs:
        out = np.kron(out, v)
    return out


def outer(v: np.ndarray, w: np.ndarray | None = None) -> np.ndarray:
    """``|v><w|`` (``|v><v|`` by default)."""
    w = v if w is None else w
    return np.outer(v, np.conj(w))
