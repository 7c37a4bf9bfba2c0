"""Generalized inverses of dense matrices.

Every function accepts exact (``Fraction`` object arrays) or floating
matrices and returns a matrix of the same backend. When an inverse does
not exist the function raises :class:`~ginv.exceptions.NotInvertibleError`
whose ``condition`` names the first failed existence condition.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .exceptions import NonIdempotentError, NotInvertibleError, TheoremViolation
from .linalg import (
    Subspace,
    annihilator,
    complement_of,
    direct_sum_check,
    eye,
    fro_norm,
    identity_holds,
    inv,
    matrix_rank,
    nullspace_basis,
    range_basis,
    rank_factorize,
    subspace_contained,
)
from .scalar import DEFAULT_POLICY, as_matrix, backend_of, check_same_backend, check_square

__all__ = [
    "InverseKind",
    "MaryDiagnosis",
    "inner_inverse",
    "reflexive_prescribed",
    "moore_penrose",
    "group_inverse",
    "drazin",
    "drazin_index",
    "outer_prescribed",
    "mary_inverse",
    "mary_diagnose",
    "pq_inverse",
    "dw_idempotents",
    "theorem22_product",
]


class InverseKind(enum.Enum):
    INNER = "inner"
    OUTER = "outer"
    REFLEXIVE = "reflexive"
    MOORE_PENROSE = "mp"
    GROUP = "group"
    DRAZIN = "drazin"
    PQ = "pq"
    MARY = "mary"

    @classmethod
    def parse(cls, name):
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("-", "_")
        aliases = {"moore_penrose": "mp", "pinv": "mp", "along": "mary"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            choices = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown inverse kind {name!r}; choose from {choices}") from None


def _scale(*mats):
    s = 1.0
    for m in mats:
        s *= fro_norm(m)
    return s


def _outer_from_bases(A, U, N, policy):
    """Outer inverse with range ``span(U)`` and kernel ``N``: ``U (C A U)^-1 C``."""
    r = U.dim
    AU = A @ U.basis
    if matrix_rank(AU, policy, scale=_scale(A)) < r:
        raise NotInvertibleError("dim A(M) < dim M", "A is not injective on the prescribed range")
    if not direct_sum_check(range_basis(AU, policy, scale=_scale(A)), N, policy):
        raise NotInvertibleError("A(M) + N is not a direct sum equal to the whole space")
    C = annihilator(N, policy)
    return U.basis @ inv(C @ AU) @ C


def outer_prescribed(A, M, N, policy=DEFAULT_POLICY):
    """Outer inverse ``B`` of ``A`` with ``R(B) = M`` and ``N(B) = N``.

    Parameters
    ----------
    A : (n, m) matrix
    M : Subspace of the domain ``K^m``
    N : Subspace of the codomain ``K^n``; ``dim M + dim N`` must equal ``n``.

    Returns
    -------
    B : (m, n) matrix with ``B A B = B``.

    Raises
    ------
    NotInvertibleError
        If ``A`` is not injective on ``M`` or ``A(M)`` does not complement ``N``.
    """
    A = as_matrix(A)
    check_same_backend(A, M.basis, N.basis)
    n, m = A.shape
    if M.ambient != m or N.ambient != n:
        raise ValueError("subspace ambient dimensions do not match A")
    if M.dim + N.dim != n:
        raise ValueError(f"dim M + dim N = {M.dim + N.dim}, expected {n}")
    return _outer_from_bases(A, M, N, policy)


def reflexive_prescribed(A, N, M, policy=DEFAULT_POLICY):
    """The reflexive inverse with range ``N`` and kernel ``M``.

    Requires ``K^m = N + N(A)`` and ``K^n = R(A) + M`` as direct sums.
    """
    A = as_matrix(A)
    check_same_backend(A, N.basis, M.basis)
    if not direct_sum_check(N, nullspace_basis(A, policy), policy):
        raise ValueError("N is not a complement of the kernel of A")
    if not direct_sum_check(range_basis(A, policy), M, policy):
        raise ValueError("M is not a complement of the range of A")
    return _outer_from_bases(A, N, M, policy)


def inner_inverse(A, W=None, policy=DEFAULT_POLICY):
    """An inner inverse ``B`` (``A B A = A``).

    With the default complements ``N`` of ``N(A)`` and ``M`` of ``R(A)``,
    ``B`` acts as ``A1^-1`` from ``R(A)`` onto ``N`` and as ``W`` from ``M``
    into ``N(A)``, in the canonical bases. ``W=None`` means ``W = 0``.
    """
    A = as_matrix(A)
    n, m = A.shape
    kernel = nullspace_basis(A, policy)
    image = range_basis(A, policy)
    N = complement_of(kernel, policy)
    M = complement_of(image, policy)
    B = _outer_from_bases(A, N, M, policy)
    if W is None:
        return B
    W = as_matrix(W, backend_of(A))
    if W.shape != (kernel.dim, M.dim):
        raise ValueError(f"W must have shape {(kernel.dim, M.dim)}, got {W.shape}")
    r = image.dim
    S = np.hstack([image.basis, M.basis])
    coords = inv(S)[r:, :]
    return B + kernel.basis @ W @ coords


def moore_penrose(A, policy=DEFAULT_POLICY):
    """Moore-Penrose inverse.

    Exact matrices use ``G^T (G G^T)^-1 (F^T F)^-1 F^T`` from a rank
    factorization; floating matrices a thresholded SVD.
    """
    A = as_matrix(A)
    n, m = A.shape
    if A.dtype == object:
        rf = rank_factorize(A)
        if rf.rank == 0:
            return A.T * 0
        F, G = rf.F, rf.G
        return G.T @ inv(G @ G.T) @ inv(F.T @ F) @ F.T
    if A.size == 0:
        return np.zeros((m, n), dtype=A.dtype)
    U, s, Vh = np.linalg.svd(A, full_matrices=False)
    r = int(np.count_nonzero(s > policy.rank_tol * s[0])) if s[0] > 0 else 0
    return (Vh[:r].conj().T / s[:r]) @ U[:, :r].conj().T


def group_inverse(A, policy=DEFAULT_POLICY):
    """Group inverse ``A#`` via ``A = F G``, ``A# = F (G F)^-2 G``.

    Raises ``NotInvertibleError("rank(A) ≠ rank(A²)")`` when it does not exist.
    """
    A = check_square(as_matrix(A))
    rf = rank_factorize(A, policy)
    GF = rf.G @ rf.F
    if matrix_rank(GF, policy, scale=_scale(rf.G, rf.F)) < rf.rank:
        raise NotInvertibleError("rank(A) ≠ rank(A²)")
    core = inv(GF)
    return rf.F @ core @ core @ rf.G


def drazin_index(A, policy=DEFAULT_POLICY):
    """Least ``k >= 0`` with ``rank(A^k) == rank(A^(k+1))``, from explicit powers."""
    A = check_square(as_matrix(A))
    n = A.shape[0]
    prev = n
    power = eye(n, A)
    for k in range(n + 1):
        power = power @ A
        cur = matrix_rank(power, policy, scale=fro_norm(A) ** (k + 1))
        if cur == prev:
            return k
        prev = cur
    return n


def drazin(A, policy=DEFAULT_POLICY):
    """Drazin inverse and index by recursive rank factorization.

    ``A = F1 G1``, ``G1 F1 = F2 G2``, ... until ``Gk Fk`` is invertible;
    then ``A^D = F1 ... Fk (Gk Fk)^-(k+1) Gk ... G1`` and the index is ``k``
    (``0`` for invertible ``A``).
    """
    A = check_square(as_matrix(A))
    n = A.shape[0]
    if matrix_rank(A, policy) == n:
        return inv(A), 0
    Fs, Gs = [], []
    M = A
    scale = fro_norm(A)
    while True:
        rf = rank_factorize(M, policy, scale=scale)
        Fs.append(rf.F)
        Gs.append(rf.G)
        scale = _scale(rf.G, rf.F)
        M = rf.G @ rf.F
        r = M.shape[0]
        if r == 0 or matrix_rank(M, policy, scale=scale) == r:
            break
        if len(Fs) > n:
            raise TheoremViolation("Drazin recursion exceeded the matrix order")
    k = len(Fs)
    core = inv(M)
    mid = eye(M.shape[0], A)
    for _ in range(k + 1):
        mid = mid @ core
    left = Fs[0]
    for F in Fs[1:]:
        left = left @ F
    right = Gs[-1]
    for G in reversed(Gs[:-1]):
        right = right @ G
    return left @ mid @ right, k


def mary_inverse(A, D, policy=DEFAULT_POLICY):
    """Inverse of ``A`` along ``D``: ``D (A D)#``.

    Exists iff ``N(AD) ⊆ N(D)`` and ``AD`` is group invertible.
    """
    A, D = as_matrix(A), as_matrix(D)
    check_same_backend(A, D)
    if D.shape != A.shape[::-1]:
        raise ValueError(f"D must have shape {A.shape[::-1]}, got {D.shape}")
    AD = A @ D
    scale = _scale(A, D)
    if not subspace_contained(
        nullspace_basis(AD, policy, scale=scale), nullspace_basis(D, policy), policy
    ):
        raise NotInvertibleError("N(AD) ⊄ N(D)")
    try:
        G = group_inverse(AD, policy)
    except NotInvertibleError:
        raise NotInvertibleError("AD is not group invertible") from None
    return D @ G


@dataclass(frozen=True, eq=False)
class MaryDiagnosis:
    """Existence conditions for the inverse along ``T``, evaluated one by one."""

    rn_closed_complemented: bool
    range_AT: Subspace
    direct_sum_holds: bool
    reduction_invertible: bool

    @property
    def exists(self):
        return self.rn_closed_complemented and self.direct_sum_holds and self.reduction_invertible

    def failed(self):
        out = []
        if not self.direct_sum_holds:
            out.append("R(AT) ⊕ N(T) ≠ X")
        if not self.reduction_invertible:
            out.append("A restricted to R(T) is not injective")
        return out


def mary_diagnose(A, T, policy=DEFAULT_POLICY):
    """Check ``R(AT) ⊕ N(T) = X`` and invertibility of ``A: R(T) -> R(AT)``."""
    A, T = as_matrix(A), as_matrix(T)
    check_same_backend(A, T)
    image_T = range_basis(T, policy)
    range_AT = range_basis(A @ T, policy, scale=_scale(A, T))
    direct = direct_sum_check(range_AT, nullspace_basis(T, policy), policy)
    injective = matrix_rank(A @ image_T.basis, policy, scale=_scale(A)) == image_T.dim
    return MaryDiagnosis(True, range_AT, direct, injective)


def _require_idempotent(P, name, policy):
    P = check_square(as_matrix(P), name)
    if not identity_holds(P @ P, P, policy):
        raise NonIdempotentError(f"{name} is not idempotent")
    return P


def pq_inverse(A, p, q, policy=DEFAULT_POLICY):
    """Outer inverse ``B`` with ``B A = p`` and ``I - A B = q``."""
    A = as_matrix(A)
    p = _require_idempotent(p, "p", policy)
    q = _require_idempotent(q, "q", policy)
    check_same_backend(A, p, q)
    n, m = A.shape
    if p.shape != (m, m) or q.shape != (n, n):
        raise ValueError("p must be (m, m) and q must be (n, n) for A of shape (n, m)")
    M, N = range_basis(p, policy), range_basis(q, policy)
    if M.dim + N.dim != n:
        raise NotInvertibleError("rank p + rank q ≠ n")
    B = _outer_from_bases(A, M, N, policy)
    if not identity_holds(B @ A, p, policy):
        raise NotInvertibleError("BA ≠ p")
    if not identity_holds(eye(n, A) - A @ B, q, policy):
        raise NotInvertibleError("I − AB ≠ q")
    return B


def dw_idempotents(A, D, policy=DEFAULT_POLICY):
    """``(p, q, t)`` with ``t = (AD)# A``, ``p = D t`` and ``q = I - t D``."""
    A, D = as_matrix(A), as_matrix(D)
    mary_inverse(A, D, policy)
    t = group_inverse(A @ D, policy) @ A
    return D @ t, eye(A.shape[0], A) - t @ D, t


def theorem22_product(A, C, p, q, policy=DEFAULT_POLICY):
    """``C (A C)#``, checked against the (p, q)-inverse of ``A``.

    Requires both ``a^(2)_{p,q}`` and a reflexive ``c^(1,2)_{1-q,1-p}``.
    """
    A, C = as_matrix(A), as_matrix(C)
    p, q = as_matrix(p), as_matrix(q)
    check_same_backend(A, C, p, q)
    try:
        b = pq_inverse(A, p, q, policy)
    except NotInvertibleError as exc:
        raise NotInvertibleError(f"a^(2)_(p,q) does not exist: {exc.condition}") from None
    n, m = A.shape
    try:
        t = pq_inverse(C, eye(n, A) - q, eye(m, A) - p, policy)
    except NotInvertibleError as exc:
        raise NotInvertibleError(f"c^(2)_(1-q,1-p) does not exist: {exc.condition}") from None
    if not identity_holds(C @ t @ C, C, policy):
        raise NotInvertibleError("c^(1,2)_(1-q,1-p) does not exist: C t C ≠ C")
    out = C @ group_inverse(A @ C, policy)
    if not identity_holds(out, b, policy):
        raise TheoremViolation("C (AC)# differs from the (p, q)-inverse")
    return out

