"""Residual certificates for claimed generalized inverses."""

from dataclasses import dataclass, field
import json

from .exceptions import NotInvertibleError
from .geninv import InverseKind, drazin_index, group_inverse, mary_inverse
from .linalg import (
    ctranspose,
    eye,
    identity_holds,
    matrix_power,
    nullspace_basis,
    range_basis,
    relative_residual,
    subspace_equal,
)
from .scalar import DEFAULT_POLICY, Backend, as_matrix, backend_of, check_same_backend

__all__ = ["Certificate", "certify", "theorem23_witness"]


@dataclass(frozen=True, eq=False)
class Certificate:
    """Per-identity residuals, subspace predicates and witness matrices.

    ``tolerance`` is ``None`` for exact certificates, where every identity
    must hold with equality.
    """

    kind: InverseKind
    tolerance: object
    identities: dict = field(default_factory=dict)
    subspace_checks: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    verdict: str = "FAIL"
    note: str = ""

    @property
    def passed(self):
        return self.verdict == "PASS"

    @property
    def max_residual(self):
        return max(self.identities.values(), default=0.0)

    def to_dict(self):
        from .io import matrix_to_json

        return {
            "identities": {k: float(v) for k, v in self.identities.items()},
            "kind": self.kind.value,
            "subspace_checks": dict(self.subspace_checks),
            "tolerance": "exact" if self.tolerance is None else self.tolerance,
            "verdict": self.verdict,
            "witnesses": {k: matrix_to_json(v) for k, v in self.witnesses.items()},
        }

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), sort_keys=True, indent=indent, ensure_ascii=False)


def _build(kind, identities, checks, witnesses, A, policy, note=""):
    exact = backend_of(A) is Backend.EXACT
    residuals = {name: relative_residual(lhs, rhs) for name, (lhs, rhs) in identities.items()}
    ok = all(identity_holds(lhs, rhs, policy) for lhs, rhs in identities.values())
    ok = ok and all(checks.values())
    return Certificate(
        kind=kind,
        tolerance=None if exact else policy.residual_tol,
        identities=residuals,
        subspace_checks=dict(checks),
        witnesses=dict(witnesses),
        verdict="PASS" if ok else "FAIL",
        note=note,
    )


def _need(value, name, kind):
    if value is None:
        raise ValueError(f"certifying kind {kind.value!r} requires {name}")
    return value


def certify(
    A,
    B,
    kind,
    *,
    along=None,
    p=None,
    q=None,
    range_space=None,
    null_space=None,
    index=None,
    policy=DEFAULT_POLICY,
):
    """Evaluate the defining identities of ``kind`` for the pair ``(A, B)``.

    Context by kind: ``along`` (the matrix ``D``) for MARY, ``p`` and ``q``
    for PQ, optional ``range_space``/``null_space`` subspaces for OUTER and
    REFLEXIVE, optional ``index`` for DRAZIN (computed when omitted).
    Subspace predicates are compared as subspaces, never as distances.
    """
    kind = InverseKind.parse(kind)
    A, B = as_matrix(A), as_matrix(B)
    check_same_backend(A, B)
    if B.shape != A.shape[::-1]:
        raise ValueError(f"B must have shape {A.shape[::-1]}, got {B.shape}")
    AB, BA = A @ B, B @ A
    inner = ("ABA=A", (A @ B @ A, A))
    outer = ("BAB=B", (B @ A @ B, B))
    ids, checks = {}, {}
    if kind is InverseKind.INNER:
        ids = dict([inner])
    elif kind in (InverseKind.OUTER, InverseKind.REFLEXIVE):
        ids = dict([inner, outer]) if kind is InverseKind.REFLEXIVE else dict([outer])
        if range_space is not None:
            checks["R(B)=M"] = subspace_equal(range_basis(B, policy), range_space, policy)
        if null_space is not None:
            checks["N(B)=N"] = subspace_equal(nullspace_basis(B, policy), null_space, policy)
    elif kind is InverseKind.MOORE_PENROSE:
        ids = dict([inner, outer, ("(AB)*=AB", (ctranspose(AB), AB)), ("(BA)*=BA", (ctranspose(BA), BA))])
    elif kind is InverseKind.GROUP:
        ids = dict([inner, outer, ("AB=BA", (AB, BA))])
    elif kind is InverseKind.DRAZIN:
        k = drazin_index(A, policy) if index is None else int(index)
        Ak = matrix_power(A, k)
        ids = dict([(f"A^{k}BA=A^{k}", (Ak @ BA, Ak)), outer, ("AB=BA", (AB, BA))])
    elif kind is InverseKind.PQ:
        p = as_matrix(_need(p, "p", kind))
        q = as_matrix(_need(q, "q", kind))
        check_same_backend(A, p, q)
        ids = dict([outer, ("BA=p", (BA, p)), ("I−AB=q", (eye(A.shape[0], A) - AB, q))])
    elif kind is InverseKind.MARY:
        D = as_matrix(_need(along, "along (D)", kind))
        check_same_backend(A, D)
        ids = dict([outer])
        checks["R(B)=R(D)"] = subspace_equal(range_basis(B, policy), range_basis(D, policy), policy)
        checks["N(B)=N(D)"] = subspace_equal(
            nullspace_basis(B, policy), nullspace_basis(D, policy), policy
        )
    return _build(kind, ids, checks, {}, A, policy)


def theorem23_witness(A, D, policy=DEFAULT_POLICY):
    """Certificate that ``B = A^{||D}`` is an outer inverse with a reflexive witness ``t``.

    ``t = (AD)# A`` must satisfy ``tDt = t``, ``DtD = D``, ``BA = Dt`` and
    ``AB = tD``. When the inverse along ``D`` does not exist the result is a
    FAIL certificate whose ``note`` names the failed condition.
    """
    A, D = as_matrix(A), as_matrix(D)
    check_same_backend(A, D)
    try:
        B = mary_inverse(A, D, policy)
    except NotInvertibleError as exc:
        return _build(InverseKind.MARY, {}, {"exists": False}, {}, A, policy, note=exc.condition)
    t = group_inverse(A @ D, policy) @ A
    n = A.shape[0]
    ids = {
        "tDt=t": (t @ D @ t, t),
        "DtD=D": (D @ t @ D, D),
        "BA=Dt": (B @ A, D @ t),
        "AB=tD": (A @ B, t @ D),
        "BAB=B": (B @ A @ B, B),
        "D=SAD": (B @ A @ D, D),
    }
    witnesses = {"t": t, "S": B, "p": D @ t, "q": eye(n, A) - t @ D}
    return _build(InverseKind.MARY, ids, {"exists": True}, witnesses, A, policy)
