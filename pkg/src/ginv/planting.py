"""Seeded generators of test instances with known structure.

Random pairs ``(A, D)`` almost never admit an inverse along ``D``, so the
generators assemble instances from block forms whose properties are known
by construction. Float instances are kept well conditioned: every random
invertible factor has singular values in ``[1, cond]``.
"""

from fractions import Fraction

import numpy as np
import scipy.linalg

from .linalg import inv, matrix_rank
from .scalar import Backend

__all__ = [
    "random_invertible",
    "plant_mary_pair",
    "plant_index",
    "plant_rank",
    "plant_spectral",
]


def _exact_random(rng, shape, lo=-3, hi=3):
    vals = rng.integers(lo, hi + 1, size=shape)
    out = np.empty(shape, dtype=object)
    for idx, v in np.ndenumerate(vals):
        out[idx] = Fraction(int(v))
    return out


def random_invertible(rng, n, backend="float", cond=10.0, complex_=False):
    """Random invertible matrix; float ones have condition number <= ``cond``."""
    backend = Backend(backend)
    if backend is Backend.EXACT:
        while True:
            M = _exact_random(rng, (n, n))
            if n == 0 or matrix_rank(M) == n:
                return M
    if n == 0:
        return np.zeros((0, 0), dtype=complex if complex_ else float)
    if complex_:
        G1 = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        G2 = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    else:
        G1, G2 = rng.normal(size=(n, n)), rng.normal(size=(n, n))
    U, _ = np.linalg.qr(G1)
    V, _ = np.linalg.qr(G2)
    s = rng.uniform(1.0, cond, size=n)
    return (U * s) @ V.conj().T


def _random(rng, shape, backend):
    if Backend(backend) is Backend.EXACT:
        return _exact_random(rng, shape)
    return rng.normal(size=shape)


def _zeros(shape, backend):
    if Backend(backend) is Backend.EXACT:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros(shape)


def _singular(rng, r, backend):
    """Random ``r x r`` matrix of rank ``r - 1``."""
    X = random_invertible(rng, r, backend)
    Y = random_invertible(rng, r, backend)
    d = _zeros((r, r), backend)
    for i in range(r - 1):
        d[i, i] = 1
    return X @ d @ Y


def plant_mary_pair(n, r, seed, backend="float", exists=True):
    """A pair ``(A, D)`` with ``rank D = r`` built from the block form.

    With ``exists=True`` the inverse of ``A`` along ``D`` exists: ``A`` maps
    ``R(D)`` bijectively onto a complement of ``N(D)``. With
    ``exists=False`` one of two defects is planted, chosen by the seed:
    the core block is singular, or ``A`` sends a vector of ``R(D)`` into
    ``N(D)``.
    """
    if not 1 <= r <= n:
        raise ValueError("need 1 <= r <= n")
    rng = np.random.default_rng(seed)
    S = random_invertible(rng, n, backend)
    Q = random_invertible(rng, n, backend)
    Y = random_invertible(rng, r, backend)
    A2 = _random(rng, (n - r, n - r), backend)
    block = _zeros((n, n), backend)
    block[r:, r:] = A2
    if exists:
        block[:r, :r] = random_invertible(rng, r, backend)
    elif r == n or rng.integers(2) == 0:
        block[:r, :r] = _singular(rng, r, backend)
    else:
        A1 = random_invertible(rng, r, backend)
        A1[:, 0] = 0
        block[:r, :r] = A1
        block[r, 0] = 1
    A = Q @ block @ inv(S)
    D = S[:, :r] @ Y @ inv(Q)[:r, :]
    return A, D


def _nilpotent(sizes, backend):
    m = sum(sizes)
    N = _zeros((m, m), backend)
    start = 0
    for s in sizes:
        for i in range(s - 1):
            N[start + i, start + i + 1] = 1
        start += s
    return N


def _jordan_sizes(m, index):
    sizes = []
    while m > 0:
        s = min(index, m)
        sizes.append(s)
        m -= s
    return sizes


def plant_index(n, r, index, seed, backend="float", cond=10.0):
    """``A = S diag(C, N) S^-1`` with ``C`` invertible ``r x r`` and ``N`` nilpotent.

    Returns ``(A, A_drazin, index)``; the Drazin inverse is known in closed
    form as ``S diag(C^-1, 0) S^-1``.
    """
    if r == n:
        index = 0
    elif not 1 <= index <= n - r:
        raise ValueError("index must lie in [1, n - r] for a singular plant")
    rng = np.random.default_rng(seed)
    S = random_invertible(rng, n, backend, cond)
    C = random_invertible(rng, r, backend, cond)
    block = _zeros((n, n), backend)
    block[:r, :r] = C
    if n > r:
        block[r:, r:] = _nilpotent(_jordan_sizes(n - r, index), backend)
    core = _zeros((n, n), backend)
    core[:r, :r] = inv(C)
    Sinv = inv(S)
    return S @ block @ Sinv, S @ core @ Sinv, index


def plant_rank(n, m, r, seed, backend="float", cond=10.0):
    """Random ``n x m`` matrix of rank exactly ``r``."""
    rng = np.random.default_rng(seed)
    X = random_invertible(rng, n, backend, cond)[:, :r]
    Y = random_invertible(rng, m, backend, cond)[:r, :]
    return X @ Y


def plant_spectral(n, seed, n_zero=0, index=1, complex_=True, cond=3.0):
    """Matrix with three separated eigenvalue groups.

    ``n_zero`` eigenvalues at 0 (nilpotent part of the given index), about
    half of the rest with modulus in ``[0.6, 1.0]`` and the remainder with
    modulus in ``[1.5, 3.0]``. Circles ``|z| = 0.3`` and ``|z| = 1.25``
    separate the groups with gap >= 0.5.

    Returns ``(A, groups)`` where ``groups`` maps ``"zero"``, ``"inner"``
    and ``"outer"`` to the planted eigenvalues.
    """
    rng = np.random.default_rng(seed)
    rest = n - n_zero
    n_inner = int(rng.integers(0, rest + 1)) if rest else 0

    def ring(k, lo, hi):
        rad = rng.uniform(lo, hi, size=k)
        if complex_:
            return rad * np.exp(2j * np.pi * rng.uniform(size=k))
        return rad * rng.choice([-1.0, 1.0], size=k)

    inner = ring(n_inner, 0.6, 1.0)
    outer = ring(rest - n_inner, 1.5, 3.0)
    T = np.zeros((n, n), dtype=complex if complex_ else float)
    if n_zero:
        T[:n_zero, :n_zero] = _nilpotent(_jordan_sizes(n_zero, index), "float")
    diag = np.concatenate([inner, outer])
    T[n_zero:, n_zero:] = np.diag(diag)
    upper = np.triu(rng.normal(size=(n, n)), 1) * 0.5
    upper[:n_zero, :n_zero] = 0
    T = T + upper
    S = random_invertible(rng, n, "float", cond, complex_=complex_)
    A = S @ T @ scipy.linalg.inv(S)
    groups = {"zero": np.zeros(n_zero), "inner": inner, "outer": outer}
    return A, groups
