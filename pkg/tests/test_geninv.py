from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ginv import (
    InverseKind,
    NonIdempotentError,
    NotInvertibleError,
    Subspace,
    drazin,
    drazin_index,
    dw_idempotents,
    group_inverse,
    inner_inverse,
    mary_diagnose,
    mary_inverse,
    moore_penrose,
    outer_prescribed,
    pq_inverse,
    reflexive_prescribed,
    theorem22_product,
)
from ginv.linalg import matrix_power, nullspace_basis, range_basis, relative_residual, subspace_equal
from ginv.planting import plant_index, plant_mary_pair, plant_rank
from ginv.scalar import as_float

from helpers import ex, exactly_equal

NIL = ex([[0, 1], [0, 0]])
D2 = ex([[2, 0], [1, 0]])
I2 = ex([[1, 0], [0, 1]])
Z2 = ex([[0, 0], [0, 0]])
INV3 = ex([[2, 1, 0], [1, 1, 0], [0, 0, 3]])


def col(*xs):
    return Subspace.span(ex([[x] for x in xs]))


def both(M):
    return [M, as_float(M)]


def close(X, Y, tol=1e-12):
    return relative_residual(as_float(X) if X.dtype == object else X, as_float(Y) if Y.dtype == object else Y) <= tol


def test_kind_parsing():
    assert InverseKind.parse("mp") is InverseKind.MOORE_PENROSE
    assert InverseKind.parse("pinv") is InverseKind.MOORE_PENROSE
    assert InverseKind.parse("along") is InverseKind.MARY
    assert InverseKind.parse(InverseKind.GROUP) is InverseKind.GROUP
    with pytest.raises(ValueError):
        InverseKind.parse("sideways")


class TestInner:
    def test_default_choice(self):
        A = ex([[1, 0], [0, 0]])
        assert exactly_equal(inner_inverse(A), A)

    @pytest.mark.parametrize("w", [Fraction(5), Fraction(-2, 7), Fraction(0)])
    def test_free_block(self, w):
        A = ex([[1, 0], [0, 0]])
        B = inner_inverse(A, ex([[w]]))
        assert exactly_equal(B, ex([[1, 0], [0, w]]))
        assert exactly_equal(A @ B @ A, A)

    def test_invertible_has_no_free_block(self):
        assert exactly_equal(inner_inverse(INV3), ex([[1, -1, 0], [-1, 2, 0], [0, 0, Fraction(1, 3)]]))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 10**6))
    def test_property(self, n, m, seed):
        r = int(np.random.default_rng(seed).integers(1, min(n, m) + 1))
        for backend in ("exact", "float"):
            A = plant_rank(n, m, r, seed, backend)
            W = plant_rank(m - r, n - r, min(m, n) - r, seed + 1, backend) if min(m, n) > r else None
            B = inner_inverse(A, W)
            assert close(A @ B @ A, A, 1e-9)


class TestReflexive:
    def test_projection(self):
        A = ex([[1, 0], [0, 0]])
        assert exactly_equal(reflexive_prescribed(A, col(1, 0), col(0, 1)), A)

    def test_nilpotent(self):
        assert exactly_equal(reflexive_prescribed(NIL, col(0, 1), col(0, 1)), ex([[0, 0], [1, 0]]))

    def test_invertible(self):
        like = INV3
        B = reflexive_prescribed(INV3, Subspace.full(3, like), Subspace.zero(3, like))
        assert exactly_equal(B, ex([[1, -1, 0], [-1, 2, 0], [0, 0, Fraction(1, 3)]]))

    def test_bad_complements(self):
        with pytest.raises(ValueError):
            reflexive_prescribed(NIL, col(1, 0), col(0, 1))


class TestMoorePenrose:
    @pytest.mark.parametrize(
        "A, expected",
        [(NIL, ex([[0, 0], [1, 0]])), (ex([[2, 0], [0, 0]]), ex([[Fraction(1, 2), 0], [0, 0]])), (Z2, Z2)],
    )
    def test_examples(self, A, expected):
        assert exactly_equal(moore_penrose(A), expected)
        assert close(moore_penrose(as_float(A)), expected)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 10**6))
    def test_penrose_identities(self, n, m, seed):
        r = int(np.random.default_rng(seed).integers(1, min(n, m) + 1))
        A = plant_rank(n, m, r, seed, "exact")
        B = moore_penrose(A)
        assert exactly_equal(A @ B @ A, A)
        assert exactly_equal(B @ A @ B, B)
        assert exactly_equal((A @ B).T, A @ B)
        assert exactly_equal((B @ A).T, B @ A)
        assert close(moore_penrose(as_float(A)), B, 1e-9)

    def test_complex(self):
        rng = np.random.default_rng(3)
        A = rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2))
        A = A @ (rng.normal(size=(2, 5)) + 1j * rng.normal(size=(2, 5)))
        assert relative_residual(moore_penrose(A), np.linalg.pinv(A)) <= 1e-10


class TestGroup:
    def test_idempotent_example(self):
        P = ex([[1, 0], [0, 0]])
        assert exactly_equal(group_inverse(P), P)

    def test_nilpotent_does_not_exist(self):
        for A in both(NIL):
            with pytest.raises(NotInvertibleError) as info:
                group_inverse(A)
            assert info.value.condition == "rank(A) ≠ rank(A²)"

    def test_padded_block(self):
        A = ex(np.zeros((5, 5), dtype=int))
        A[0, 1], A[1, 0] = Fraction(1, 2), Fraction(1, 3)
        G = group_inverse(A)
        expected = ex(np.zeros((5, 5), dtype=int))
        expected[0, 1], expected[1, 0] = 3, 2
        assert exactly_equal(G, expected)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 7), st.integers(0, 10**6))
    def test_planted(self, n, seed):
        r = int(np.random.default_rng(seed).integers(1, n + 1))
        A, known, _ = plant_index(n, r, 1, seed, "exact")
        G = group_inverse(A)
        assert exactly_equal(G, known)
        assert exactly_equal(A @ G, G @ A)


class TestDrazin:
    def test_nilpotent(self):
        B, k = drazin(NIL)
        assert exactly_equal(B, Z2) and k == 2

    def test_invertible(self):
        B, k = drazin(INV3)
        assert k == 0 and exactly_equal(B @ INV3, ex(np.eye(3, dtype=int)))

    def test_jordan_plus_nonzero(self):
        A = ex([[0, 1, 0], [0, 0, 0], [0, 0, 2]])
        for M in both(A):
            B, k = drazin(M)
            assert k == 2
            assert close(B, ex([[0, 0, 0], [0, 0, 0], [0, 0, Fraction(1, 2)]]))

    def test_zero_matrix(self):
        B, k = drazin(Z2)
        assert k == 1 and exactly_equal(B, Z2)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(2, 7), st.integers(0, 10**6))
    def test_planted(self, n, seed):
        rng = np.random.default_rng(seed)
        r = int(rng.integers(0, n))
        index = int(rng.integers(1, n - r + 1))
        for backend in ("exact", "float"):
            A, known, k = plant_index(n, r, index, seed, backend)
            B, found = drazin(A)
            assert found == k == drazin_index(A)
            assert close(B, known, 1e-9)
            Ak = matrix_power(A, k)
            assert close(Ak @ B @ A, Ak, 1e-9)
            assert close(B @ A @ B, B, 1e-9)
            assert close(A @ B, B @ A, 1e-9)


class TestOuter:
    def test_example(self):
        for lift in (lambda M: M, as_float):
            A = lift(NIL)
            M = Subspace.span(lift(ex([[2], [1]])))
            N = Subspace.span(lift(ex([[0], [1]])))
            assert close(outer_prescribed(A, M, N), D2)

    def test_identity(self):
        B = outer_prescribed(I2, Subspace.full(2, I2), Subspace.zero(2, I2))
        assert exactly_equal(B, I2)

    def test_range_killed(self):
        with pytest.raises(NotInvertibleError):
            outer_prescribed(NIL, col(1, 0), col(0, 1))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            outer_prescribed(NIL, col(1, 0), Subspace.full(2, NIL))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(2, 7), st.integers(0, 10**6))
    def test_range_and_nullspace(self, n, seed):
        r = int(np.random.default_rng(seed).integers(1, n + 1))
        A, D = plant_mary_pair(n, r, seed, "exact")
        M, N = range_basis(D), nullspace_basis(D)
        B = outer_prescribed(A, M, N)
        assert exactly_equal(B @ A @ B, B)
        assert subspace_equal(range_basis(B), M)
        assert subspace_equal(nullspace_basis(B), N)


class TestMary:
    @pytest.mark.parametrize("a", [1, 2, -3, Fraction(1, 5)])
    def test_example_family(self, a):
        D = ex([[2 * a, 0], [a, 0]])
        assert exactly_equal(mary_inverse(NIL, D), D2)
        assert close(mary_inverse(as_float(NIL), as_float(D)), D2)

    def test_identity(self):
        assert exactly_equal(mary_inverse(I2, I2), I2)

    def test_five_dim_shift(self):
        A = ex(np.zeros((5, 5), dtype=int))
        for i in range(4):
            A[i, i + 1] = Fraction(1, i + 2)
        T = ex(np.zeros((5, 5), dtype=int))
        T[1, 1] = T[2, 0] = 1
        expected = ex(np.zeros((5, 5), dtype=int))
        expected[1, 0], expected[2, 1] = 2, 3
        assert exactly_equal(mary_inverse(A, T), expected)

    def test_failed_conditions_are_named(self):
        with pytest.raises(NotInvertibleError) as info:
            mary_inverse(NIL, ex([[1, 0], [0, 0]]))
        assert "N(AD)" in info.value.condition
        with pytest.raises(NotInvertibleError) as info:
            mary_inverse(I2, NIL)
        assert "group" in info.value.condition

    def test_along_zero(self):
        assert exactly_equal(mary_inverse(NIL, Z2), Z2)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 7), st.integers(0, 10**6), st.booleans())
    def test_diagnosis_agrees(self, n, seed, exists):
        r = int(np.random.default_rng(seed).integers(1, n + 1))
        for backend in ("exact", "float"):
            A, D = plant_mary_pair(n, r, seed, backend, exists=exists)
            diag = mary_diagnose(A, D)
            assert diag.exists is exists
            assert diag.exists == all(
                [diag.rn_closed_complemented, diag.direct_sum_holds, diag.reduction_invertible]
            )
            if exists:
                B = mary_inverse(A, D)
                assert close(B @ A @ B, B, 1e-9)
            else:
                assert diag.failed()
                with pytest.raises(NotInvertibleError):
                    mary_inverse(A, D)


class TestDiagnose:
    def test_example_all_true(self):
        d = mary_diagnose(NIL, D2)
        assert d.rn_closed_complemented and d.direct_sum_holds and d.reduction_invertible and d.exists
        assert d.range_AT.dim == 1

    def test_direct_sum_fails(self):
        d = mary_diagnose(NIL, ex([[1, 0], [0, 0]]))
        assert not d.direct_sum_holds and not d.exists

    def test_invertible(self):
        assert mary_diagnose(INV3, ex(np.eye(3, dtype=int))).exists


class TestPQ:
    P_EX = ex([[0, 2], [0, 1]])
    Q_EX = ex([[0, 0], [0, 1]])

    def test_example(self):
        for lift in (lambda M: M, as_float):
            assert close(pq_inverse(lift(NIL), lift(self.P_EX), lift(self.Q_EX)), D2)

    def test_invertible(self):
        B = pq_inverse(INV3, ex(np.eye(3, dtype=int)), ex(np.zeros((3, 3), dtype=int)))
        assert exactly_equal(B @ INV3, ex(np.eye(3, dtype=int)))

    def test_unachievable(self):
        with pytest.raises(NotInvertibleError):
            pq_inverse(NIL, ex([[1, 0], [0, 0]]), self.Q_EX)

    def test_non_idempotent(self):
        with pytest.raises(NonIdempotentError):
            pq_inverse(NIL, ex([[2, 0], [0, 0]]), self.Q_EX)


class TestIdempotents:
    def test_example(self):
        p, q, t = dw_idempotents(NIL, D2)
        assert exactly_equal(p, ex([[0, 2], [0, 1]]))
        assert exactly_equal(q, ex([[0, 0], [0, 1]]))
        assert exactly_equal(t, ex([[0, 1], [0, 0]]))

    def test_identity(self):
        p, q, t = dw_idempotents(I2, I2)
        assert exactly_equal(p, I2) and exactly_equal(q, Z2) and exactly_equal(t, I2)

    def test_requires_existence(self):
        with pytest.raises(NotInvertibleError):
            dw_idempotents(NIL, I2)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(2, 6), st.integers(0, 10**6))
    def test_routes_agree(self, n, seed):
        r = int(np.random.default_rng(seed).integers(1, n + 1))
        A, D = plant_mary_pair(n, r, seed, "exact")
        p, q, t = dw_idempotents(A, D)
        B = mary_inverse(A, D)
        assert exactly_equal(t @ D @ t, t) and exactly_equal(D @ t @ D, D)
        assert exactly_equal(pq_inverse(A, p, q), B)
        assert exactly_equal(theorem22_product(A, D, p, q), B)


def test_product_route_identity():
    assert exactly_equal(theorem22_product(I2, I2, I2, Z2), I2)


def test_product_route_float_plant():
    A, D = plant_mary_pair(4, 2, 11, "float")
    p, q, _ = dw_idempotents(A, D)
    assert relative_residual(theorem22_product(A, D, p, q), mary_inverse(A, D)) <= 1e-9


class TestStructure:
    @settings(max_examples=8, deadline=None)
    @given(st.integers(2, 3), st.integers(0, 10**6))
    def test_uniqueness_by_brute_force(self, n, seed):
        import itertools

        from ginv.linalg import annihilator

        r = int(np.random.default_rng(seed).integers(1, 3 if n == 3 else 2))
        A, D = plant_mary_pair(n, r, seed, "exact")
        B = mary_inverse(A, D)
        U, N = range_basis(D), nullspace_basis(D)
        C = annihilator(N)
        grid = [Fraction(v, d) for v in range(-2, 3) for d in (1, 2)]
        found = 0
        for vals in itertools.product(sorted(set(grid)), repeat=r * r):
            X = ex(np.array(vals, dtype=object).reshape(r, r))
            Bp = U.basis @ X @ C
            if not exactly_equal(Bp @ A @ Bp, Bp):
                continue
            if subspace_equal(range_basis(Bp), U) and subspace_equal(nullspace_basis(Bp), N):
                assert exactly_equal(Bp, B)
                found += 1
        assert found <= 1
        from ginv.linalg import inv

        assert exactly_equal(U.basis @ inv(C @ A @ U.basis) @ C, B)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(2, 6), st.integers(0, 10**6), st.sampled_from([Fraction(-3), Fraction(1, 7), Fraction(5, 2)]))
    def test_scale_invariance_of_direction(self, n, seed, alpha):
        r = int(np.random.default_rng(seed).integers(1, n + 1))
        A, D = plant_mary_pair(n, r, seed, "exact")
        assert exactly_equal(mary_inverse(A, D * alpha), mary_inverse(A, D))
        p1, q1, _ = dw_idempotents(A, D)
        p2, q2, _ = dw_idempotents(A, D * alpha)
        assert exactly_equal(p1, p2) and exactly_equal(q1, q2)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(2, 6), st.integers(0, 10**6))
    def test_invertible_direction_gives_inverse(self, n, seed):
        A, T = plant_mary_pair(n, n, seed, "exact")
        B = mary_inverse(A, T)
        assert exactly_equal(B @ A, ex(np.eye(n, dtype=int)))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(2, 6), st.integers(0, 10**6))
    def test_block_diagonal_in_adapted_bases(self, n, seed):
        from ginv.linalg import projector_onto_along

        r = int(np.random.default_rng(seed).integers(1, n + 1))
        A, T = plant_mary_pair(n, r, seed, "exact")
        B = mary_inverse(A, T)
        P1 = projector_onto_along(range_basis(T), nullspace_basis(B @ A)).matrix
        P2 = projector_onto_along(range_basis(A @ T), nullspace_basis(T)).matrix
        I = ex(np.eye(n, dtype=int))
        assert exactly_equal(A @ P1, P2 @ A @ P1)
        assert exactly_equal(A @ (I - P1), (I - P2) @ A @ (I - P1))

    @settings(max_examples=20, deadline=None)
    @given(st.integers(2, 7), st.integers(0, 10**6))
    def test_drazin_along_higher_powers(self, n, seed):
        rng = np.random.default_rng(seed)
        r = int(rng.integers(1, n))
        A, known, k = plant_index(n, r, int(rng.integers(1, n - r + 1)), seed, "exact")
        for j in (k, k + 1):
            assert exactly_equal(mary_inverse(A, matrix_power(A, j)), known)
