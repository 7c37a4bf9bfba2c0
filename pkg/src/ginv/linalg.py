"""Rank-revealing factorization, subspaces and projectors.

Exact matrices go through Gauss-Jordan elimination over the rationals.
Floating matrices use column-pivoted QR for rank decisions, with the
threshold ``rank_tol * max(|R[0, 0]|, scale)``; ``scale`` lets a caller
supply the magnitude a product *would* have had, so that a product which
is zero in exact arithmetic is not promoted to full rank by roundoff.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.linalg

from .exceptions import NonIdempotentError, RankAmbiguityError, SpectralSeparationError
from .scalar import DEFAULT_POLICY, Backend, backend_of, check_same_backend

__all__ = [
    "RankFactorization",
    "Subspace",
    "Projector",
    "eye",
    "zeros",
    "ctranspose",
    "fro_norm",
    "mdot",
    "matrix_power",
    "inv",
    "matrix_rank",
    "rank_factorize",
    "range_basis",
    "nullspace_basis",
    "subspace_equal",
    "subspace_contained",
    "direct_sum_check",
    "projector_onto_along",
    "complement_of",
    "annihilator",
    "solve_sylvester",
    "relative_residual",
    "identity_holds",
]


# -- elementary helpers -------------------------------------------------------


def _is_exact(A):
    return A.dtype == object


def eye(n, like):
    if _is_exact(like):
        out = np.empty((n, n), dtype=object)
        out.fill(Fraction(0))
        for i in range(n):
            out[i, i] = Fraction(1)
        return out
    return np.eye(n, dtype=like.dtype)


def zeros(shape, like):
    if _is_exact(like):
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros(shape, dtype=like.dtype)


def ctranspose(A):
    """Conjugate transpose; plain transpose for exact (real) matrices."""
    return A.T.copy() if _is_exact(A) else A.conj().T


def fro_norm(A):
    if A.size == 0:
        return 0.0
    if _is_exact(A):
        return float(sum(x * x for x in A.flat)) ** 0.5
    return float(np.linalg.norm(A))


def mdot(*mats):
    out = mats[0]
    for m in mats[1:]:
        out = out @ m
    return out


def matrix_power(A, k):
    out = eye(A.shape[0], A)
    for _ in range(k):
        out = out @ A
    return out


def _rref(A):
    """Reduced row echelon form over the rationals.

    Returns the list-of-rows form and the pivot columns.
    """
    m = [list(row) for row in A]
    n_rows = len(m)
    n_cols = A.shape[1]
    pivots = []
    piv_r = 0
    for c in range(n_cols):
        if piv_r == n_rows:
            break
        for i in range(piv_r, n_rows):
            if m[i][c] != 0:
                break
        else:
            continue
        m[piv_r], m[i] = m[i], m[piv_r]
        p = m[piv_r][c]
        m[piv_r] = [x / p for x in m[piv_r]]
        for i in range(n_rows):
            f = m[i][c]
            if i != piv_r and f != 0:
                m[i] = [x - f * y for x, y in zip(m[i], m[piv_r])]
        pivots.append(c)
        piv_r += 1
    return m, pivots


def _exact_array(rows, shape):
    out = np.empty(shape, dtype=object)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            out[i, j] = Fraction(v)
    return out


def inv(A):
    """Inverse of a square matrix; raises ``LinAlgError`` if singular."""
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError(f"inverse of non-square matrix {A.shape}")
    if n == 0:
        return A.copy()
    if not _is_exact(A):
        return np.linalg.inv(A)
    aug = np.hstack([A, eye(n, A)])
    rows, pivots = _rref(aug)
    if pivots[:n] != list(range(n)):
        raise np.linalg.LinAlgError("singular matrix")
    return _exact_array([row[n:] for row in rows], (n, n))


# -- rank ---------------------------------------------------------------------


def _pivot_threshold(d, policy, scale):
    ref = max(float(d[0]) if d.size else 0.0, scale)
    thr = policy.rank_tol * ref
    r = int(np.count_nonzero(d > thr))
    if policy.strict and ref > 0:
        band = (d > thr / 100) & (d <= thr * 100)
        if np.any(band):
            raise RankAmbiguityError(
                f"pivot {d[band][0]:.3e} within two decades of rank threshold {thr:.3e}"
            )
    return r


def _qr_rank(A, policy, scale, mode="economic"):
    m, n = A.shape
    if m == 0 or n == 0:
        Q = np.eye(m, dtype=A.dtype) if mode == "full" else np.zeros((m, 0), dtype=A.dtype)
        return Q, np.zeros((0, n), dtype=A.dtype), np.arange(n), 0
    Q, R, piv = scipy.linalg.qr(A, pivoting=True, mode=mode)
    d = np.abs(np.diag(R))
    return Q, R, piv, _pivot_threshold(d, policy, scale)


def matrix_rank(A, policy=DEFAULT_POLICY, scale=0.0):
    """Exact rank, or numerical rank from pivoted QR."""
    if _is_exact(A):
        return len(_rref(A)[1]) if A.size else 0
    return _qr_rank(A, policy, scale)[3]


@dataclass(frozen=True, eq=False)
class RankFactorization:
    """``A = F @ G`` with ``F`` full column rank and ``G`` full row rank."""

    F: np.ndarray
    G: np.ndarray
    rank: int


def rank_factorize(A, policy=DEFAULT_POLICY, scale=0.0):
    """Full-rank factorization.

    Exact matrices use the pivot columns of ``A`` for ``F`` and the nonzero
    rows of the reduced echelon form for ``G``, so ``[[1, 2], [2, 4]]``
    factors as ``[[1], [2]] @ [[1, 2]]``. Floating matrices take the leading
    columns of ``Q`` and rows of ``R`` from a pivoted QR.
    """
    m, n = A.shape
    if _is_exact(A):
        if A.size == 0:
            return RankFactorization(zeros((m, 0), A), zeros((0, n), A), 0)
        rows, pivots = _rref(A)
        r = len(pivots)
        F = A[:, pivots].copy()
        G = _exact_array(rows[:r], (r, n))
        return RankFactorization(F, G, r)
    Q, R, piv, r = _qr_rank(A, policy, scale)
    F = Q[:, :r]
    G = np.zeros((r, n), dtype=R.dtype)
    G[:, piv] = R[:r, :]
    return RankFactorization(F, G, r)


# -- subspaces ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of ``K^n`` stored through a canonical basis.

    Exact bases are in reduced column echelon form, hence equal subspaces
    have identical bases. Floating bases are orthonormal. ``dim == 0`` is
    the zero subspace.
    """

    basis: np.ndarray

    @property
    def ambient(self):
        return self.basis.shape[0]

    @property
    def dim(self):
        return self.basis.shape[1]

    @property
    def backend(self):
        return backend_of(self.basis)

    @classmethod
    def span(cls, vectors, policy=DEFAULT_POLICY, scale=0.0):
        """Subspace spanned by the columns of ``vectors``."""
        return range_basis(vectors, policy, scale)

    @classmethod
    def zero(cls, n, like):
        return cls(zeros((n, 0), like))

    @classmethod
    def full(cls, n, like):
        return cls(eye(n, like))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient}, backend={self.backend.value})"


def range_basis(A, policy=DEFAULT_POLICY, scale=0.0):
    """Column space of ``A`` in canonical form."""
    n, m = A.shape
    if _is_exact(A):
        if A.size == 0:
            return Subspace.zero(n, A)
        rows, pivots = _rref(A.T)
        return Subspace(_exact_array(rows[: len(pivots)], (len(pivots), n)).T.copy())
    Q, _, _, r = _qr_rank(A, policy, scale)
    return Subspace(Q[:, :r].copy())


def nullspace_basis(A, policy=DEFAULT_POLICY, scale=0.0):
    """Kernel of ``A`` in canonical form."""
    n, m = A.shape
    if _is_exact(A):
        if n == 0:
            return Subspace.full(m, A)
        rows, pivots = _rref(A)
        free = [c for c in range(m) if c not in pivots]
        vecs = zeros((m, len(free)), A)
        for k, f in enumerate(free):
            vecs[f, k] = Fraction(1)
            for i, p in enumerate(pivots):
                vecs[p, k] = -rows[i][f]
        return range_basis(vecs)
    Q, _, _, r = _qr_rank(ctranspose(A), policy, scale, mode="full")
    return Subspace(Q[:, r:].copy())


def _check_ambient(U, V):
    if U.ambient != V.ambient:
        raise ValueError(f"ambient dimensions differ: {U.ambient} vs {V.ambient}")
    check_same_backend(U.basis, V.basis)


def subspace_contained(U, V, policy=DEFAULT_POLICY):
    """True iff ``U`` is a subspace of ``V``."""
    _check_ambient(U, V)
    if U.dim == 0:
        return True
    if U.dim > V.dim:
        return False
    if U.backend is Backend.EXACT:
        return matrix_rank(np.hstack([V.basis, U.basis])) == V.dim
    resid = U.basis - V.basis @ (V.basis.conj().T @ U.basis)
    return bool(np.linalg.norm(resid, 2) <= policy.angle_tol)


def subspace_equal(U, V, policy=DEFAULT_POLICY):
    _check_ambient(U, V)
    if U.dim != V.dim:
        return False
    if U.backend is Backend.EXACT:
        return bool(np.array_equal(U.basis, V.basis))
    return subspace_contained(U, V, policy)


def direct_sum_check(U, V, policy=DEFAULT_POLICY):
    """True iff ``U + V`` is the whole space and ``U`` meets ``V`` only in 0."""
    _check_ambient(U, V)
    n = U.ambient
    if U.dim + V.dim != n:
        return False
    if U.dim == 0 or V.dim == 0:
        return True
    S = np.hstack([U.basis, V.basis])
    if U.backend is Backend.EXACT:
        return matrix_rank(S) == n
    return bool(np.linalg.svd(S, compute_uv=False)[-1] > policy.angle_tol)


def complement_of(M, policy=DEFAULT_POLICY):
    """A deterministic complement of ``M``.

    Exact: span of the standard basis vectors picked greedily to complete
    the basis of ``M``. Float: the orthogonal complement.
    """
    n = M.ambient
    if M.dim == 0:
        return Subspace.full(n, M.basis)
    if M.backend is Backend.FLOAT:
        return nullspace_basis(ctranspose(M.basis), policy)
    I = eye(n, M.basis)
    current = M.basis
    chosen = []
    for i in range(n):
        if current.shape[1] == n:
            break
        trial = np.hstack([current, I[:, [i]]])
        if matrix_rank(trial) > current.shape[1]:
            current = trial
            chosen.append(i)
    return Subspace(I[:, chosen].copy())


def annihilator(N, policy=DEFAULT_POLICY):
    """Full-row-rank ``C`` whose kernel is exactly ``N``."""
    n = N.ambient
    if N.dim == 0:
        return eye(n, N.basis)
    if N.backend is Backend.FLOAT:
        return ctranspose(complement_of(N, policy).basis)
    return nullspace_basis(N.basis.T.copy()).basis.T.copy()


# -- projectors ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Projector:
    """Idempotent matrix together with its range and kernel."""

    matrix: np.ndarray
    range: Subspace
    nullspace: Subspace

    @classmethod
    def from_matrix(cls, P, policy=DEFAULT_POLICY):
        """Wrap an idempotent; float ranks come from ``round(trace(P))``."""
        if not identity_holds(P @ P, P, policy):
            raise NonIdempotentError("matrix is not idempotent")
        if _is_exact(P):
            return cls(P, range_basis(P), nullspace_basis(P))
        n = P.shape[0]
        k = int(round(float(np.trace(P).real)))
        k = min(max(k, 0), n)
        U, _, Vh = np.linalg.svd(P)
        return cls(P, Subspace(U[:, :k].copy()), Subspace(Vh[k:].conj().T.copy()))

    def complement(self):
        """``I - P``: same pair of subspaces, roles swapped."""
        n = self.matrix.shape[0]
        return Projector(eye(n, self.matrix) - self.matrix, self.nullspace, self.range)


def projector_onto_along(M, N, policy=DEFAULT_POLICY):
    """Projector with range ``M`` and kernel ``N``."""
    _check_ambient(M, N)
    if not direct_sum_check(M, N, policy):
        raise ValueError("subspaces are not complementary")
    n, k = M.ambient, M.dim
    S = np.hstack([M.basis, N.basis])
    if M.backend is Backend.EXACT:
        P = M.basis @ inv(S)[:k, :]
    else:
        P = M.basis @ np.linalg.solve(S, np.eye(n))[:k, :]
    return Projector(P, M, N)


# -- Sylvester ----------------------------------------------------------------


def solve_sylvester(A11, A22, C, policy=DEFAULT_POLICY):
    """Solve ``A11 @ X - X @ A22 = C`` for disjoint spectra (float only)."""
    if _is_exact(A11) or _is_exact(A22) or _is_exact(C):
        raise TypeError("solve_sylvester requires the float backend")
    p, q = A11.shape[0], A22.shape[0]
    if C.shape != (p, q):
        raise ValueError(f"C has shape {C.shape}, expected {(p, q)}")
    if p == 0 or q == 0:
        return np.zeros((p, q), dtype=np.result_type(A11, A22, C))
    l1 = np.linalg.eigvals(A11)
    l2 = np.linalg.eigvals(A22)
    gap = np.min(np.abs(l1[:, None] - l2[None, :]))
    scale = max(1.0, np.linalg.norm(A11, 2), np.linalg.norm(A22, 2))
    if gap <= policy.rank_tol * scale:
        raise SpectralSeparationError(f"spectra overlap (gap {gap:.3e})")
    return scipy.linalg.solve_sylvester(A11, -A22, C)


# -- residuals ----------------------------------------------------------------


def relative_residual(lhs, rhs):
    """``||lhs - rhs||_F / max(1, ||lhs||_F)``; exactly 0.0 for equal exact matrices."""
    if lhs.shape != rhs.shape:
        raise ValueError(f"shape mismatch {lhs.shape} vs {rhs.shape}")
    if _is_exact(lhs) and _is_exact(rhs) and np.array_equal(lhs, rhs):
        return 0.0
    return fro_norm(lhs - rhs) / max(1.0, fro_norm(lhs))


def identity_holds(lhs, rhs, policy=DEFAULT_POLICY):
    if _is_exact(lhs) and _is_exact(rhs):
        return bool(np.array_equal(lhs, rhs))
    return relative_residual(lhs, rhs) <= policy.residual_tol
