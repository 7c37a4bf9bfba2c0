"""Spectral projections, the core/quasinilpotent splitting and related inverses.

Spectral projections are built two ways: from a reordered complex Schur
form plus one Sylvester solve, and by trapezoidal quadrature of the
resolvent over a circle. Both are floating-point only; exact inputs are
converted. :func:`decompose_h0_core` and :func:`koliha_drazin` work on
either backend because they only need ranks of powers.
"""

from dataclasses import dataclass, field
import warnings

import numpy as np
import scipy.linalg

from .exceptions import NonIdempotentError, NotInvertibleError, SpectralSeparationError, TheoremViolation
from .geninv import drazin, drazin_index, mary_inverse
from .linalg import (
    Projector,
    Subspace,
    eye,
    fro_norm,
    identity_holds,
    inv,
    matrix_power,
    matrix_rank,
    nullspace_basis,
    projector_onto_along,
    range_basis,
    relative_residual,
    solve_sylvester,
    subspace_contained,
)
from .scalar import DEFAULT_POLICY, as_float, as_matrix, check_square

__all__ = [
    "BOUNDARY_TOL",
    "CLUSTER_TOL",
    "SpectralSet",
    "Contour",
    "SpectralDecomposition",
    "Report",
    "spectrum",
    "resolvent",
    "spectral_projection_schur",
    "spectral_projection_contour",
    "decompose_h0_core",
    "koliha_drazin",
    "mary_along_spectral",
    "verify_proposition_kd",
    "verify_koliha_poon_inclusion",
]

# Eigenvalues closer than this to a separating circle are rejected.
BOUNDARY_TOL = 1e-8
# Single-linkage gap used to group computed eigenvalues into clusters.
CLUSTER_TOL = 1e-8


def spectrum(A):
    """Eigenvalues with algebraic multiplicity, sorted by (real, imag)."""
    A = check_square(as_float(A))
    ev = np.linalg.eigvals(A).astype(complex)
    return ev[np.lexsort((ev.imag, ev.real))]


def resolvent(A, lam, policy=DEFAULT_POLICY):
    """``(A - lam I)^-1``."""
    A = check_square(as_float(A))
    ev = spectrum(A)
    scale = max(1.0, np.linalg.norm(A, 2))
    if ev.size and np.min(np.abs(ev - lam)) <= policy.rank_tol * scale:
        raise SpectralSeparationError(f"{lam} lies in the spectrum")
    return np.linalg.inv(A - lam * np.eye(A.shape[0]))


def _clusters(ev, tol):
    order = np.argsort(ev.real, kind="stable")
    labels = -np.ones(len(ev), dtype=int)
    current = 0
    for i in order:
        if labels[i] >= 0:
            continue
        stack = [i]
        labels[i] = current
        while stack:
            j = stack.pop()
            near = np.nonzero((np.abs(ev - ev[j]) <= tol) & (labels < 0))[0]
            labels[near] = current
            stack.extend(near.tolist())
        current += 1
    return labels


@dataclass(frozen=True)
class SpectralSet:
    """A split of the spectrum into ``Λ`` and its complement.

    Build it with :meth:`from_disk` or :meth:`from_eigenvalues`; the
    constructor only validates a ready-made split.
    """

    lambda_members: tuple
    complement_members: tuple
    separation_gap: float
    disk: tuple = field(default=None, compare=False)

    def __post_init__(self):
        if self.lambda_members and self.complement_members and not self.separation_gap > CLUSTER_TOL:
            raise SpectralSeparationError(
                f"separation gap {self.separation_gap:.3e} does not isolate the spectral set"
            )

    @classmethod
    def _split(cls, inside, outside, disk=None):
        inside = tuple(complex(z) for z in inside)
        outside = tuple(complex(z) for z in outside)
        if inside and outside:
            gap = float(np.min(np.abs(np.subtract.outer(np.array(inside), np.array(outside)))))
        else:
            gap = float("inf")
        return cls(inside, outside, gap, disk)

    @classmethod
    def from_disk(cls, A, center, radius, boundary_tol=BOUNDARY_TOL):
        """Eigenvalues strictly inside ``|z - center| < radius``."""
        if not radius > 0:
            raise ValueError("radius must be positive")
        ev = spectrum(A)
        dist = np.abs(ev - center)
        if np.any(np.abs(dist - radius) <= boundary_tol):
            raise SpectralSeparationError("an eigenvalue lies on the boundary circle")
        return cls._split(ev[dist < radius], ev[dist > radius], (complex(center), float(radius)))

    @classmethod
    def from_eigenvalues(cls, A, selected, cluster_tol=CLUSTER_TOL):
        """The clusters of computed eigenvalues nearest to each selected value."""
        ev = spectrum(A)
        labels = _clusters(ev, cluster_tol)
        chosen = set()
        for z in np.atleast_1d(np.asarray(selected, dtype=complex)):
            chosen.add(labels[int(np.argmin(np.abs(ev - z)))])
        mask = np.isin(labels, sorted(chosen))
        return cls._split(ev[mask], ev[~mask])

    def contains(self, z):
        """Whether ``z`` is nearer to ``Λ`` than to the complement."""
        if not self.lambda_members:
            return False
        if not self.complement_members:
            return True
        d_in = min(abs(z - w) for w in self.lambda_members)
        d_out = min(abs(z - w) for w in self.complement_members)
        return d_in < d_out

    def complement(self):
        return SpectralSet(self.complement_members, self.lambda_members, self.separation_gap)

    def contour(self, points=64):
        if self.disk is None:
            raise ValueError("spectral set was not defined by a disk")
        return Contour(self.disk[0], self.disk[1], points)


@dataclass(frozen=True)
class Contour:
    """Positively oriented circle used for resolvent quadrature."""

    center: complex = 0j
    radius: float = 1.0
    points: int = 64

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        if self.points < 4:
            raise ValueError("need at least 4 quadrature points")


def _realify(P, like, policy):
    if not np.iscomplexobj(like) and np.max(np.abs(P.imag), initial=0.0) <= policy.residual_tol * max(
        1.0, np.max(np.abs(P), initial=0.0)
    ):
        return P.real.copy()
    return P


def spectral_projection_schur(A, spectral_set, policy=DEFAULT_POLICY):
    """Spectral projection from a reordered Schur form.

    The ``Λ`` eigenvalues are moved to the leading block ``T11``; with
    ``T11 X - X T22 = T12`` the projection is ``Z [[I, X], [0, 0]] Z^H``.
    """
    A = check_square(as_float(A))
    n = A.shape[0]
    k_expected = len(spectral_set.lambda_members)
    if k_expected == 0:
        return Projector.from_matrix(np.zeros_like(A), policy)
    if k_expected == n:
        return Projector.from_matrix(np.eye(n, dtype=A.dtype), policy)
    T, Z, k = scipy.linalg.schur(A.astype(complex), output="complex", sort=spectral_set.contains)
    if k != k_expected:
        raise SpectralSeparationError(
            f"Schur reordering selected {k} eigenvalues, spectral set has {k_expected}"
        )
    X = solve_sylvester(T[:k, :k], T[k:, k:], T[:k, k:], policy)
    PT = np.zeros((n, n), dtype=complex)
    PT[:k, :k] = np.eye(k)
    PT[:k, k:] = X
    P = Z @ PT @ Z.conj().T
    return Projector.from_matrix(_realify(P, A, policy), policy)


def _trapezoid(A, contour, N):
    n = A.shape[0]
    I = np.eye(n)
    theta = 2 * np.pi * np.arange(N) / N
    w = np.exp(1j * theta)
    P = np.zeros((n, n), dtype=complex)
    # -(1/2πi) ∮ (A - zI)^-1 dz with dz = i r w dθ
    for wj in w:
        z = contour.center + contour.radius * wj
        P += wj * np.linalg.solve(z * I - A, I)
    return P * (contour.radius / N)


def spectral_projection_contour(
    A, contour, policy=DEFAULT_POLICY, adaptive=True, max_points=1024, quad_tol=1e-10
):
    """Spectral projection for the eigenvalues enclosed by ``contour``.

    Trapezoidal rule with ``contour.points`` nodes; when ``adaptive`` the
    node count doubles until successive results differ by less than
    ``quad_tol`` (max-entry) or ``max_points`` is reached.
    """
    A = check_square(as_float(A))
    ev = spectrum(A)
    if ev.size and np.min(np.abs(np.abs(ev - contour.center) - contour.radius)) <= BOUNDARY_TOL:
        raise SpectralSeparationError("an eigenvalue lies on the contour")
    N = contour.points
    P = _trapezoid(A, contour, N)
    while adaptive:
        if N * 2 > max_points:
            warnings.warn(f"contour quadrature not converged at N={N}", RuntimeWarning, stacklevel=2)
            break
        N *= 2
        P2 = _trapezoid(A, contour, N)
        diff = np.max(np.abs(P2 - P))
        P = P2
        if diff < quad_tol:
            break
    try:
        return Projector.from_matrix(_realify(P, A, policy), policy)
    except NonIdempotentError:
        raise SpectralSeparationError(
            "quadrature did not produce a projection; contour too close to an eigenvalue"
        ) from None


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """``X = K(A) ⊕ H0(A)`` with ``H0 = N(A^k)``, ``K = R(A^k)``, ``k`` the index."""

    H0: Subspace
    K: Subspace
    index: int


def decompose_h0_core(A, policy=DEFAULT_POLICY):
    A = check_square(as_matrix(A))
    k = drazin_index(A, policy)
    Ak = matrix_power(A, k)
    scale = fro_norm(A) ** k if k else 0.0
    return SpectralDecomposition(
        nullspace_basis(Ak, policy, scale=scale), range_basis(Ak, policy, scale=scale), k
    )


def koliha_drazin(A, policy=DEFAULT_POLICY):
    """Koliha-Drazin inverse ``(A + P)^-1 (I - P)``.

    ``P`` projects onto ``H0(A)`` along ``K(A)``; ``A + P`` is invertible
    since ``A`` is invertible on ``K(A)`` and nilpotent on ``H0(A)``.
    """
    A = check_square(as_matrix(A))
    dec = decompose_h0_core(A, policy)
    P = projector_onto_along(dec.H0, dec.K, policy).matrix
    I = eye(A.shape[0], A)
    return inv(A + P) @ (I - P)


def _zero_in(A, spectral_set, policy):
    n = A.shape[0]
    if matrix_rank(A, policy) == n:
        return False
    ev = spectrum(A)
    return spectral_set.contains(ev[int(np.argmin(np.abs(ev)))])


def mary_along_spectral(A, spectral_set, policy=DEFAULT_POLICY):
    """Inverse of ``A`` along ``P_Λ(A)`` (``0 ∉ Λ``) or ``I - P_Λ(A)`` (``0 ∈ Λ``).

    In the second case ``I - P_Λ(A)`` is built as ``P_{σ∖Λ}(A)`` directly.
    Existence is guaranteed; a failure raises :class:`TheoremViolation`.
    """
    A = check_square(as_float(A))
    target = spectral_set.complement() if _zero_in(A, spectral_set, policy) else spectral_set
    D = spectral_projection_schur(A, target, policy).matrix
    try:
        return mary_inverse(A, D, policy)
    except NotInvertibleError as exc:
        raise TheoremViolation(f"inverse along the spectral projection failed: {exc.condition}") from None


@dataclass(frozen=True, eq=False)
class Report:
    """Outcome of a structural check on one matrix."""

    holds: bool
    residuals: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    degenerate: bool = False
    detail: str = ""


def verify_proposition_kd(A, policy=DEFAULT_POLICY):
    """Inverse along the projector onto ``K(A)`` along ``H0(A)`` versus ``A^D``."""
    A = check_square(as_matrix(A))
    dec = decompose_h0_core(A, policy)
    if dec.K.dim == 0:
        return Report(False, degenerate=True, detail="K(A) = {0}: direction T = 0 is excluded")
    T = projector_onto_along(dec.K, dec.H0, policy).matrix
    try:
        B = mary_inverse(A, T, policy)
    except NotInvertibleError as exc:
        return Report(False, checks={"exists": False}, detail=exc.condition)
    KD = koliha_drazin(A, policy)
    AD, _ = drazin(A, policy)
    residuals = {"B=KD(A)": relative_residual(B, KD), "B=A^D": relative_residual(B, AD)}
    checks = {
        "exists": True,
        "B=KD(A)": identity_holds(B, KD, policy),
        "B=A^D": identity_holds(B, AD, policy),
    }
    return Report(all(checks.values()), residuals, checks)


def verify_koliha_poon_inclusion(A, r, policy=DEFAULT_POLICY):
    """Check ``N(P_Λ(A)) ⊆ K(A)`` for ``Λ = σ(A) ∩ {|z| < r}``."""
    A = check_square(as_float(A))
    ev = spectrum(A)
    if np.any(np.abs(np.abs(ev) - r) <= BOUNDARY_TOL):
        raise SpectralSeparationError(f"radius {r} coincides with an eigenvalue modulus")
    S = SpectralSet.from_disk(A, 0.0, r)
    P = spectral_projection_schur(A, S, policy)
    K = decompose_h0_core(A, policy).K
    inside = subspace_contained(P.nullspace, K, policy)
    return Report(inside, checks={"N(P)⊆K(A)": inside})
