"""Command-line interface.

Exit codes: 0 success, 2 the requested inverse does not exist, 3 parse or
usage error, 4 numerical failure (ambiguous rank decision, eigenvalue too
close to a contour).
"""

import argparse
import json
import os
import sys

import numpy as np

from . import geninv, spectral
from .certify import certify
from .exceptions import (
    BackendMismatchError,
    NonIdempotentError,
    NotInvertibleError,
    NumericalError,
    TheoremViolation,
)
from .geninv import InverseKind
from .io import MatrixFormatError, dumps_matrix, format_matrix, matrix_to_json, parse_matrix
from .linalg import range_basis, relative_residual
from .planting import plant_mary_pair
from .scalar import TolerancePolicy, as_exact, as_float

EXIT_OK = 0
EXIT_NOT_EXISTS = 2
EXIT_USAGE = 3
EXIT_NUMERICAL = 4

COMMANDS = ("mp", "group", "drazin", "mary", "outer", "pq", "specproj", "kd", "diagnose", "certify", "plant")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p):
    p.add_argument("--tol", type=float, default=None, help="relative rank threshold (default 1e-10 or $GINV_TOL)")
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")
    p.add_argument("--quad-points", type=int, default=64, help="initial contour quadrature points")
    p.add_argument("--backend", choices=("exact", "float"), default=None)


def build_parser():
    parser = _Parser(prog="ginv", description="Generalized inverses with certificates.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, help_, *files):
        p = sub.add_parser(name, help=help_)
        for f in files:
            p.add_argument(f)
        _common(p)
        return p

    cmd("mp", "Moore-Penrose inverse", "A")
    cmd("group", "group inverse", "A")
    cmd("drazin", "Drazin inverse and index", "A")
    cmd("mary", "inverse of A along D", "A", "D")
    p = cmd("outer", "outer inverse with prescribed range and nullspace", "A")
    p.add_argument("--range", dest="range_file", required=True, help="matrix whose columns span R(B)")
    p.add_argument("--nullspace", dest="null_file", required=True, help="matrix whose columns span N(B)")
    cmd("pq", "(p,q)-inverse", "A", "P", "Q")
    p = cmd("specproj", "spectral projection", "A")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--disk", nargs=3, type=float, metavar=("CX", "CY", "R"))
    g.add_argument("--eigs", metavar="FILE", help="JSON list of eigenvalues ([re, im] or numbers)")
    p.add_argument("--method", choices=("schur", "contour"), default="schur")
    cmd("kd", "Koliha-Drazin inverse", "A")
    cmd("diagnose", "existence conditions for the inverse along T", "A", "T")
    p = cmd("certify", "certify a claimed inverse", "A", "B")
    p.add_argument("--kind", required=True)
    p.add_argument("--along", help="D for kind mary")
    p.add_argument("--p", dest="p_file")
    p.add_argument("--q", dest="q_file")
    p.add_argument("--range", dest="range_file")
    p.add_argument("--nullspace", dest="null_file")
    p.add_argument("--index", type=int)
    p = sub.add_parser("plant", help="write a planted pair (A, D)")
    p.add_argument("n", type=int)
    p.add_argument("r", type=int)
    p.add_argument("seed", type=int)
    p.add_argument("--negative", action="store_true", help="plant a pair with no inverse along D")
    p.add_argument("--prefix", default="plant")
    _common(p)
    return parser


def _policy(args):
    tol = args.tol
    if tol is None:
        env = os.environ.get("GINV_TOL")
        if env:
            try:
                tol = float(env)
            except ValueError:
                raise UsageError(f"GINV_TOL is not a number: {env!r}") from None
    tol = 1e-10 if tol is None else tol
    if not tol > 0:
        raise UsageError("--tol must be positive")
    if args.quad_points < 4:
        raise UsageError("--quad-points must be at least 4")
    return TolerancePolicy(rank_tol=tol, strict=True)


class _Loader:
    """Reads every input first, then fixes one backend for all of them."""

    def __init__(self, backend):
        self.backend = backend

    def load(self, paths):
        mats = [parse_matrix(p) for p in paths]
        rational = any(m.dtype == object for m in mats)
        if rational and self.backend == "float":
            raise UsageError("rational JSON input forces the exact backend")
        if rational or self.backend == "exact":
            if any(np.iscomplexobj(m) for m in mats):
                raise UsageError("complex input requires the float backend")
            return [as_exact(m) for m in mats]
        return [as_float(m) for m in mats]


def _emit_result(out, B, cert, policy, json_mode, extra=None):
    if json_mode:
        doc = {"certificate": cert.to_dict(), "result": matrix_to_json(B)}
        doc.update(extra or {})
        out.write(json.dumps(doc, sort_keys=True, ensure_ascii=False) + "\n")
        return
    out.write(format_matrix(B, policy.rank_tol) + "\n")
    for k, v in (extra or {}).items():
        out.write(f"{k}: {v}\n")
    _emit_checks(out, cert)


def _emit_checks(out, cert):
    for name, res in cert.identities.items():
        out.write(f"verified {name}: residual {res:.3g}\n")
    for name, ok in cert.subspace_checks.items():
        out.write(f"verified {name}: {'yes' if ok else 'no'}\n")
    out.write(f"verdict: {cert.verdict}\n")


def _run(args, out):
    policy = _policy(args)
    if args.command == "plant":
        backend = args.backend or "float"
        A, D = plant_mary_pair(args.n, args.r, args.seed, backend, exists=not args.negative)
        ext = "json" if backend == "exact" else "mtx"
        for name, M in (("A", A), ("D", D)):
            path = f"{args.prefix}_{name}.{ext}"
            with open(path, "w") as fh:
                fh.write(dumps_matrix(M, ext))
            out.write(path + "\n")
        return EXIT_OK
    if args.command == "specproj" and args.backend == "exact":
        raise UsageError("spectral projections require the float backend")
    load = _Loader(args.backend).load
    cmd = args.command

    if cmd in ("mp", "group", "drazin", "kd"):
        (A,) = load([args.A])
        extra = None
        if cmd == "mp":
            B, kind = geninv.moore_penrose(A, policy), InverseKind.MOORE_PENROSE
            cert = certify(A, B, kind, policy=policy)
        elif cmd == "group":
            B = geninv.group_inverse(A, policy)
            cert = certify(A, B, InverseKind.GROUP, policy=policy)
        else:
            if cmd == "drazin":
                B, k = geninv.drazin(A, policy)
            else:
                B, k = spectral.koliha_drazin(A, policy), geninv.drazin_index(A, policy)
            cert = certify(A, B, InverseKind.DRAZIN, index=k, policy=policy)
            extra = {"index": k}
        _emit_result(out, B, cert, policy, args.json, extra)
        return EXIT_OK

    if cmd == "mary":
        A, D = load([args.A, args.D])
        B = geninv.mary_inverse(A, D, policy)
        _emit_result(out, B, certify(A, B, InverseKind.MARY, along=D, policy=policy), policy, args.json)
        return EXIT_OK

    if cmd == "outer":
        A, U, N = load([args.A, args.range_file, args.null_file])
        M, Nsp = range_basis(U, policy), range_basis(N, policy)
        B = geninv.outer_prescribed(A, M, Nsp, policy)
        cert = certify(A, B, InverseKind.OUTER, range_space=M, null_space=Nsp, policy=policy)
        _emit_result(out, B, cert, policy, args.json)
        return EXIT_OK

    if cmd == "pq":
        A, P, Q = load([args.A, args.P, args.Q])
        B = geninv.pq_inverse(A, P, Q, policy)
        _emit_result(out, B, certify(A, B, InverseKind.PQ, p=P, q=Q, policy=policy), policy, args.json)
        return EXIT_OK

    if cmd == "diagnose":
        A, T = load([args.A, args.T])
        d = geninv.mary_diagnose(A, T, policy)
        rows = {
            "R(T), N(T) closed and complemented": d.rn_closed_complemented,
            "R(AT) ⊕ N(T) = X": d.direct_sum_holds,
            "A: R(T) -> R(AT) invertible": d.reduction_invertible,
            "exists": d.exists,
        }
        if args.json:
            doc = {"conditions": rows, "dim_R(AT)": d.range_AT.dim}
            out.write(json.dumps(doc, sort_keys=True, ensure_ascii=False) + "\n")
        else:
            for k, v in rows.items():
                out.write(f"{k}: {'yes' if v else 'no'}\n")
        return EXIT_OK

    if cmd == "certify":
        kind = InverseKind.parse(args.kind)
        named = [(k, f) for k, f in (("along", args.along), ("p", args.p_file), ("q", args.q_file),
                                     ("range", args.range_file), ("null", args.null_file)) if f]
        mats = load([args.A, args.B] + [f for _, f in named])
        A, B = mats[:2]
        ctx = {k: m for (k, _), m in zip(named, mats[2:])}
        kw = {"along": ctx.get("along"), "p": ctx.get("p"), "q": ctx.get("q"), "index": args.index}
        if "range" in ctx:
            kw["range_space"] = range_basis(ctx["range"], policy)
        if "null" in ctx:
            kw["null_space"] = range_basis(ctx["null"], policy)
        cert = certify(A, B, kind, policy=policy, **kw)
        if args.json:
            out.write(cert.to_json() + "\n")
        else:
            _emit_checks(out, cert)
        return EXIT_OK

    if cmd == "specproj":
        (A,) = load([args.A])
        if args.disk:
            cx, cy, r = args.disk
            S = spectral.SpectralSet.from_disk(A, complex(cx, cy), r)
        else:
            S = spectral.SpectralSet.from_eigenvalues(A, _read_eigs(args.eigs))
        if args.method == "schur":
            P = spectral.spectral_projection_schur(A, S, policy).matrix
        else:
            if S.disk is None:
                raise UsageError("--method contour needs --disk")
            P = spectral.spectral_projection_contour(A, S.contour(args.quad_points), policy).matrix
        n = A.shape[0]
        checks = {"P²=P": relative_residual(P @ P, P), "AP=PA": relative_residual(A @ P, P @ A)}
        if args.json:
            doc = {"identities": checks, "result": matrix_to_json(P), "lambda": [[z.real, z.imag] for z in S.lambda_members]}
            out.write(json.dumps(doc, sort_keys=True, ensure_ascii=False) + "\n")
        else:
            out.write(format_matrix(P, policy.rank_tol) + "\n")
            for k, v in checks.items():
                out.write(f"verified {k}: residual {v:.3g}\n")
            out.write(f"rank: {int(round(float(np.trace(P).real)))} of {n}\n")
        return EXIT_OK
    raise UsageError(f"unknown command {cmd!r}")


def _read_eigs(path):
    try:
        with open(path) as fh:
            vals = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise MatrixFormatError(f"cannot read eigenvalue list: {exc}") from None
    if not isinstance(vals, list) or not vals:
        raise MatrixFormatError("eigenvalue file must hold a non-empty JSON list")
    try:
        return [complex(v[0], v[1]) if isinstance(v, list) else complex(v) for v in vals]
    except (TypeError, ValueError, IndexError):
        raise MatrixFormatError("eigenvalues must be numbers or [re, im] pairs") from None


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return _run(args, out)
    except NotInvertibleError as exc:
        err.write(f"inverse does not exist: {exc.condition}\n")
        return EXIT_NOT_EXISTS
    except (NumericalError, TheoremViolation) as exc:
        err.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERICAL
    except (UsageError, MatrixFormatError, NonIdempotentError, BackendMismatchError, ValueError, TypeError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
