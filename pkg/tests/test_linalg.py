import itertools
from math import gcd

import numpy as np
import pytest
import sympy

from tatekit.errors import ValidationError
from tatekit.linalg import (EchelonLattice, IntMatrix, hermite_normal_form, kernel_basis, lattice_basis,
                            quotient_invariants, smith_normal_form, solve_in_lattice, xgcd)


def minors_gcd(A, k):
    """gcd of all k x k minors, by enumeration (the independent oracle)."""
    g = 0
    for rows in itertools.combinations(range(A.rows), k):
        for cols in itertools.combinations(range(A.cols), k):
            M = sympy.Matrix([[A[i, j] for j in cols] for i in rows])
            g = gcd(g, int(M.det()))
    return g


def det(M):
    return int(sympy.Matrix(M.tolist()).det()) if M.rows else 1


def random_matrix(rng, max_dim=4, bound=6):
    m, n = (int(x) for x in rng.integers(1, max_dim + 1, size=2))
    return IntMatrix(rng.integers(-bound, bound + 1, size=(m, n)).tolist())


def assert_smith(A, dec):
    assert dec.U @ A @ dec.V == dec.S
    assert abs(det(dec.U)) == 1 and abs(det(dec.V)) == 1
    S = dec.S
    for i in range(S.rows):
        for j in range(S.cols):
            if i != j:
                assert S[i, j] == 0
    d = dec.diagonal
    r = dec.rank
    assert all(x > 0 for x in d[:r]) and all(x == 0 for x in d[r:])
    for a, b in zip(d[:r], d[1:r]):
        assert b % a == 0


def test_snf_examples():
    dec = smith_normal_form([[2, 4], [6, 8]])
    assert dec.S == [[2, 0], [0, 4]]
    assert smith_normal_form(IntMatrix.identity(3)).S == IntMatrix.identity(3)
    assert smith_normal_form([[0]]).S == [[0]]


def test_snf_examples_agree_with_minor_oracle():
    A = IntMatrix([[2, 4], [6, 8]])
    assert minors_gcd(A, 1) == 2 and minors_gcd(A, 2) == 8
    d = smith_normal_form(A).diagonal
    assert d[0] == 2 and d[0] * d[1] == 8


def test_snf_random_against_minors(rng):
    for _ in range(60):
        A = random_matrix(rng)
        dec = smith_normal_form(A, with_inverses=True)
        assert_smith(A, dec)
        d = dec.diagonal
        prod = 1
        for k in range(1, min(A.shape) + 1):
            prod *= d[k - 1]
            assert prod == minors_gcd(A, k)


def test_snf_round_trip_with_inverses(rng):
    for _ in range(100):
        A = random_matrix(rng, max_dim=5, bound=9)
        dec = smith_normal_form(A, with_inverses=True)
        assert dec.U @ dec.U_inv == IntMatrix.identity(A.rows)
        assert dec.V @ dec.V_inv == IntMatrix.identity(A.cols)
        assert dec.U_inv @ dec.S @ dec.V_inv == A


def test_snf_agrees_with_sympy(rng):
    from sympy.matrices.normalforms import smith_normal_form as sympy_snf
    for _ in range(20):
        A = random_matrix(rng)
        ours = smith_normal_form(A).diagonal
        theirs = sympy_snf(sympy.Matrix(A.tolist()), domain=sympy.ZZ)
        ref = sorted(abs(int(theirs[i, i])) for i in range(min(A.shape)))
        assert sorted(ours) == ref


def test_snf_empty_shapes():
    for shape in [(0, 3), (3, 0), (0, 0)]:
        A = IntMatrix.zeros(*shape)
        dec = smith_normal_form(A)
        assert dec.U @ A @ dec.V == dec.S
        assert dec.rank == 0


def test_hnf_examples():
    H, U = hermite_normal_form([[2, 0], [0, 3]])
    assert H == [[2, 0], [0, 3]]
    H, U = hermite_normal_form([[1, 2], [1, 2]])
    assert H == [[1, 2], [0, 0]]
    H, U = hermite_normal_form([[3], [5]])
    assert H == [[1], [0]]


def test_hnf_random_shape(rng):
    for _ in range(50):
        A = random_matrix(rng, max_dim=5)
        H, U = hermite_normal_form(A)
        assert U @ A == H
        assert abs(det(U)) == 1
        last = -1
        for i, row in enumerate(H.data):
            nz = [j for j, x in enumerate(row) if x]
            if not nz:
                assert all(not any(r) for r in H.data[i:])
                break
            p = nz[0]
            assert p > last and row[p] > 0
            for k in range(i):
                assert 0 <= H[k, p] < row[p]
            last = p


def test_solve_in_lattice_examples():
    assert solve_in_lattice([[2]], [4]) == [2]
    assert solve_in_lattice([[2]], [3]) is None
    assert solve_in_lattice([[-1, -1], [1, -2]], [1, 0]) is None


def test_solve_in_lattice_random(rng):
    for _ in range(50):
        A = random_matrix(rng)
        x = rng.integers(-4, 5, size=A.cols).tolist()
        b = A @ x
        y = solve_in_lattice(A, b)
        assert y is not None and A @ y == b


def test_solve_dimension_mismatch():
    with pytest.raises(ValidationError):
        solve_in_lattice([[1, 2]], [1, 2])


def test_kernel_examples():
    assert kernel_basis([[1, 1]]).columns() in ([[1, -1]], [[-1, 1]])
    assert kernel_basis(IntMatrix.identity(2)).cols == 0
    assert kernel_basis([[2, 4]]).columns() in ([[2, -1]], [[-2, 1]])


def test_kernel_rank_nullity(rng):
    for _ in range(50):
        A = random_matrix(rng, max_dim=5, bound=3)
        K = kernel_basis(A)
        assert (A @ K).is_zero() if K.cols else True
        assert smith_normal_form(A).rank + K.cols == A.cols
        # saturation: a random kernel vector scaled down is still an integer combination
        if K.cols:
            v = K @ rng.integers(-3, 4, size=K.cols).tolist()
            assert solve_in_lattice(K, v) is not None


def test_quotient_invariants_examples():
    assert quotient_invariants(IntMatrix.identity(1), [[3]]) == [3]
    assert quotient_invariants(IntMatrix.identity(2), [[-1, -1], [1, -2]]) == [3]
    assert quotient_invariants(IntMatrix.identity(2), IntMatrix.zeros(2, 0)) == [0, 0]


def test_quotient_invariants_containment_violation():
    with pytest.raises(ValidationError):
        quotient_invariants([[2]], [[3]])


def test_quotient_order_matches_determinant(rng):
    for _ in range(30):
        n = int(rng.integers(1, 4))
        M = IntMatrix(rng.integers(-5, 6, size=(n, n)).tolist())
        D = det(M)
        inv = quotient_invariants(IntMatrix.identity(n), M)
        if D == 0:
            assert 0 in inv
        else:
            assert int(np.prod(inv)) == abs(D)


def test_xgcd(rng):
    for a, b in rng.integers(-50, 51, size=(100, 2)).tolist():
        x, y, g = xgcd(a, b)
        assert g == gcd(a, b) and x * a + y * b == g


def test_echelon_lattice_matches_dense(rng):
    for _ in range(30):
        dim = int(rng.integers(1, 7))
        vecs = rng.integers(-4, 5, size=(int(rng.integers(1, 8)), dim)).tolist()
        E = EchelonLattice(dim)
        for v in vecs:
            E.add(v)
        dense = lattice_basis(IntMatrix.from_columns(vecs, dim))
        assert E.rank == dense.cols
        for v in vecs:
            assert v in E
        rows = [[row.get(i, 0) for i in range(dim)] for row in E.rows.values()]
        span = IntMatrix.from_columns(rows, dim) if rows else IntMatrix.zeros(dim, 0)
        # same lattice: each contains the other
        for c in dense.columns():
            assert solve_in_lattice(span, c) is not None
        for c in rows:
            assert solve_in_lattice(dense, c) is not None


def test_echelon_reduce_units_is_congruent(rng):
    E = EchelonLattice(4)
    for v in ([1, 2, 0, 3], [0, 2, 4, 0], [0, 0, 0, 6]):
        E.add(v)
    v = {0: 5, 1: 1, 3: 2}
    w = E.reduce_units(v)
    assert 0 not in w
    diff = [v.get(i, 0) - w.get(i, 0) for i in range(4)]
    assert diff in E
