"""Exact integer linear algebra.

Dense routines (Smith and Hermite normal forms, lattice membership, integer
kernels, quotient invariants) work on :class:`IntMatrix`, a small row-major
wrapper around lists of Python ints, so entries never overflow.

:class:`EchelonLattice` is the sparse counterpart used on cochain
differentials, which have thousands of columns but few nonzeros per column.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Optional, Sequence

from .errors import ValidationError


class IntMatrix:
    """Dense integer matrix with an explicit shape (so 0 x k matrices are legal)."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Sequence[Sequence[int]] = (), rows: Optional[int] = None, cols: Optional[int] = None):
        data = [[int(x) for x in row] for row in data]
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValidationError(f"entry count does not match shape {rows}x{cols}")
        self.rows, self.cols, self.data = rows, cols, data

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        columns = list(columns)
        return cls([[c[i] for c in columns] for i in range(rows)], rows, len(columns))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def copy(self) -> "IntMatrix":
        return IntMatrix(self.data, self.rows, self.cols)

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix([[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)], self.cols, self.rows)

    def column(self, j: int) -> list[int]:
        return [row[j] for row in self.data]

    def columns(self) -> list[list[int]]:
        return [self.column(j) for j in range(self.cols)]

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValidationError(f"shape mismatch {self.shape} @ {other.shape}")
            ot = other.T.data
            return IntMatrix([[sum(a * b for a, b in zip(row, col)) for col in ot] for row in self.data],
                             self.rows, other.cols)
        v = list(other)
        if len(v) != self.cols:
            raise ValidationError(f"shape mismatch {self.shape} @ vector of length {len(v)}")
        return [sum(a * b for a, b in zip(row, v)) for row in self.data]

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValidationError("hstack needs equal row counts")
        return IntMatrix([a + b for a, b in zip(self.data, other.data)], self.rows, self.cols + other.cols)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.data for x in row)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            other = as_matrix(other)
        return self.shape == other.shape and self.data == other.data

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.data]

    def __repr__(self) -> str:
        return f"IntMatrix({self.data!r}, rows={self.rows}, cols={self.cols})"


def as_matrix(A) -> IntMatrix:
    if isinstance(A, IntMatrix):
        return A
    return IntMatrix(A)


@dataclass
class SmithDecomposition:
    """``U @ A @ V == S`` with ``U``, ``V`` unimodular and ``S`` in Smith form."""

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix
    U_inv: Optional[IntMatrix] = None
    V_inv: Optional[IntMatrix] = None

    @property
    def diagonal(self) -> list[int]:
        return [self.S[i, i] for i in range(min(self.S.shape))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    def invariant_factors(self) -> list[int]:
        return [d for d in self.diagonal if d != 0]


# -- elementary operations on list-of-lists -----------------------------------

def _swap_rows(M, i, j):
    M[i], M[j] = M[j], M[i]


def _swap_cols(M, i, j):
    for row in M:
        row[i], row[j] = row[j], row[i]


def _add_row(M, dst, src, q):
    """row[dst] += q * row[src]"""
    if q:
        rs, rd = M[src], M[dst]
        for k, x in enumerate(rs):
            if x:
                rd[k] += q * x


def _add_col(M, dst, src, q):
    """col[dst] += q * col[src]"""
    if q:
        for row in M:
            x = row[src]
            if x:
                row[dst] += q * x


def smith_normal_form(A, with_inverses: bool = False) -> SmithDecomposition:
    """Smith normal form with unimodular transforms.

    Pivots are chosen by minimal nonzero absolute value to keep entries small.
    The diagonal satisfies ``d_1 | d_2 | ...`` with ``d_i > 0`` up to the rank.
    With ``with_inverses`` the exact inverses of ``U`` and ``V`` are tracked too.
    """
    A = as_matrix(A)
    m, n = A.shape
    S = [list(r) for r in A.data]
    U = IntMatrix.identity(m).data
    V = IntMatrix.identity(n).data
    Ui = IntMatrix.identity(m).data if with_inverses else None
    Vi = IntMatrix.identity(n).data if with_inverses else None

    def row_op(i, t, q):  # row_i += q row_t
        _add_row(S, i, t, q)
        _add_row(U, i, t, q)
        if Ui is not None:
            _add_col(Ui, t, i, -q)

    def col_op(j, t, q):  # col_j += q col_t
        _add_col(S, j, t, q)
        _add_col(V, j, t, q)
        if Vi is not None:
            _add_row(Vi, t, j, -q)

    def finish():
        dec = _finish_snf(U, S, V, m, n)
        if with_inverses:
            dec.U_inv, dec.V_inv = IntMatrix(Ui, m, m), IntMatrix(Vi, n, n)
        return dec

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                row = S[i]
                for j in range(t, n):
                    x = row[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                return finish()
            _, i, j = best
            if i != t:
                _swap_rows(S, t, i)
                _swap_rows(U, t, i)
                if Ui is not None:
                    _swap_cols(Ui, t, i)
            if j != t:
                _swap_cols(S, t, j)
                _swap_cols(V, t, j)
                if Vi is not None:
                    _swap_rows(Vi, t, j)
            p = S[t][t]
            clean = True
            for i in range(t + 1, m):
                if S[i][t]:
                    row_op(i, t, -(S[i][t] // p))
                    clean = clean and S[i][t] == 0
            for j in range(t + 1, n):
                if S[t][j]:
                    col_op(j, t, -(S[t][j] // p))
                    clean = clean and S[t][j] == 0
            if not clean:
                continue
            bad = next((i for i in range(t + 1, m) if any(S[i][j] % p for j in range(t + 1, n))), None)
            if bad is None:
                break
            # pull a non-divisible entry into row t; the next pass shrinks the pivot
            row_op(t, bad, 1)
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
            if Ui is not None:
                for row in Ui:
                    row[t] = -row[t]
    return finish()


def _finish_snf(U, S, V, m, n):
    return SmithDecomposition(IntMatrix(U, m, m), IntMatrix(S, m, n), IntMatrix(V, n, n))


def invariant_factors(A) -> list[int]:
    return smith_normal_form(A).invariant_factors()


def hermite_normal_form(A) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form ``H = U @ A``.

    ``H`` is in echelon form with positive pivots; entries above each pivot lie
    in ``[0, pivot)``; zero rows come last.
    """
    A = as_matrix(A)
    m, n = A.shape
    H = [list(r) for r in A.data]
    U = IntMatrix.identity(m).data
    r = 0
    for col in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if H[i][col]]
            if not nz:
                break
            i = min(nz, key=lambda k: abs(H[k][col]))
            if i != r:
                _swap_rows(H, r, i)
                _swap_rows(U, r, i)
            p = H[r][col]
            done = True
            for i in range(r + 1, m):
                if H[i][col]:
                    q = H[i][col] // p
                    _add_row(H, i, r, -q)
                    _add_row(U, i, r, -q)
                    done = done and H[i][col] == 0
            if done:
                break
        if H[r][col] == 0:
            continue
        if H[r][col] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        p = H[r][col]
        for i in range(r):
            q = H[i][col] // p
            if q:
                _add_row(H, i, r, -q)
                _add_row(U, i, r, -q)
        r += 1
    return IntMatrix(H, m, n), IntMatrix(U, m, m)


def solve_in_lattice(A, b: Sequence[int], dec: Optional[SmithDecomposition] = None) -> Optional[list[int]]:
    """Integer solution of ``A @ x == b``, or ``None`` if ``b`` is not in the column lattice.

    A precomputed Smith decomposition of ``A`` may be passed to solve many
    right-hand sides against the same matrix.
    """
    A = as_matrix(A)
    b = [int(x) for x in b]
    if len(b) != A.rows:
        raise ValidationError(f"dimension mismatch: matrix has {A.rows} rows, vector has {len(b)} entries")
    if dec is None:
        dec = smith_normal_form(A)
    ub = dec.U @ b
    diag = dec.diagonal
    y = [0] * A.cols
    for i, c in enumerate(ub):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if c != 0:
                return None
        else:
            if c % d:
                return None
            y[i] = c // d
    return dec.V @ y


def kernel_basis(A) -> IntMatrix:
    """Lattice basis of ``{x : A @ x == 0}`` as the columns of the result.

    The basis is returned in Hermite normal form (as rows of the transpose), so
    the output is canonical.
    """
    A = as_matrix(A)
    dec = smith_normal_form(A)
    k = dec.rank
    vecs = [dec.V.column(j) for j in range(k, A.cols)]
    if not vecs:
        return IntMatrix.zeros(A.cols, 0)
    H, _ = hermite_normal_form(IntMatrix(vecs, len(vecs), A.cols))
    rows = [r for r in H.data if any(r)]
    return IntMatrix.from_columns(rows, A.cols)


def lattice_basis(L) -> IntMatrix:
    """Columns forming a basis of the lattice spanned by the columns of ``L``."""
    L = as_matrix(L)
    if L.cols == 0:
        return IntMatrix.zeros(L.rows, 0)
    H, _ = hermite_normal_form(L.T)
    rows = [r for r in H.data if any(r)]
    return IntMatrix.from_columns(rows, L.rows)


def quotient_invariants(L, M) -> list[int]:
    """Invariant factors of ``span(L) / span(M)``.

    Factors equal to 1 are dropped; the free rank appears as trailing zeros.
    Raises :class:`ValidationError` if some column of ``M`` is outside ``span(L)``.
    """
    L, M = as_matrix(L), as_matrix(M)
    if M.cols and M.rows != L.rows:
        raise ValidationError("L and M live in different ambient lattices")
    B = lattice_basis(L)
    coords = []
    for j in range(M.cols):
        x = solve_in_lattice(B, M.column(j))
        if x is None:
            raise ValidationError(f"column {j} of M is not contained in the lattice spanned by L")
        coords.append(x)
    k = B.cols
    X = IntMatrix.from_columns(coords, k)
    inv = smith_normal_form(X).invariant_factors() if X.cols else []
    free = k - len(inv)
    return [d for d in inv if d != 1] + [0] * free


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(x, y, g)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -x0, -y0, -a
    return x0, y0, a


def matrix_gcd(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g


# -- sparse lattice -------------------------------------------------------------

def _axpy(v: dict, q: int, w: dict) -> None:
    """v += q * w in place, dropping zeros."""
    for k, c in w.items():
        x = v.get(k, 0) + q * c
        if x:
            v[k] = x
        else:
            v.pop(k, None)


def _combine(a: int, u: dict, b: int, w: dict) -> dict:
    out = {}
    for k, c in u.items():
        out[k] = a * c
    for k, c in w.items():
        x = out.get(k, 0) + b * c
        if x:
            out[k] = x
        else:
            out.pop(k, None)
    return {k: c for k, c in out.items() if c}


class EchelonLattice:
    """Sublattice of ``Z^dim`` kept in sparse row-echelon form.

    Each basis row is a dict ``{coordinate: value}`` whose smallest coordinate
    (its pivot) is distinct from every other row's and carries a positive value.
    Rows are inserted with unimodular two-row operations, so the rows always
    span exactly the lattice generated by everything added so far.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: dict[int, dict[int, int]] = {}

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def add(self, vec) -> bool:
        """Insert a vector (dict or sequence); return True if the rank grew."""
        v = _as_sparse(vec)
        rows = self.rows
        while v:
            p = min(v)
            row = rows.get(p)
            b = v[p]
            if row is None:
                if b < 0:
                    v = {k: -c for k, c in v.items()}
                rows[p] = self._tail_reduce(v, p)
                return True
            a = row[p]
            if b % a == 0:
                _axpy(v, -(b // a), row)
            elif a % b == 0:
                q = a // b
                new = v if b > 0 else {k: -c for k, c in v.items()}
                rows[p] = self._tail_reduce(new, p)
                _axpy(row, -q, v)
                v = row
            else:
                x, y, g = xgcd(a, b)
                rows[p] = self._tail_reduce(_combine(x, row, y, v), p)
                v = _combine(-(b // g), row, a // g, v)
        return False

    def _tail_reduce(self, v: dict, p: int) -> dict:
        # keeps coefficients bounded: entries past the pivot go into [0, pivot)
        rows = self.rows
        for k in sorted(v):
            if k == p or k not in v:
                continue
            row = rows.get(k)
            if row is not None and row is not v:
                q = v[k] // row[k]
                if q:
                    _axpy(v, -q, row)
        return v

    def reduce(self, vec) -> dict:
        """Fully reduce a vector: pivot entries into ``[0, pivot)``, descending in coordinate order."""
        v = _as_sparse(vec)
        heap = list(v)
        heapq.heapify(heap)
        seen = set()
        while heap:
            k = heapq.heappop(heap)
            if k in seen or k not in v:
                continue
            seen.add(k)
            row = self.rows.get(k)
            if row is None:
                continue
            q = v[k] // row[k]
            if q:
                for kk in row:
                    if kk not in v:
                        heapq.heappush(heap, kk)
                _axpy(v, -q, row)
        return v

    def reduce_units(self, vec) -> dict:
        """Eliminate every coordinate that carries a unit pivot.

        The result is congruent to ``vec`` modulo the lattice and is supported on
        non-pivot coordinates and on pivots larger than 1.
        """
        v = _as_sparse(vec)
        heap = list(v)
        heapq.heapify(heap)
        seen = set()
        while heap:
            k = heapq.heappop(heap)
            if k in seen or k not in v:
                continue
            seen.add(k)
            row = self.rows.get(k)
            if row is None or row[k] != 1:
                continue
            for kk in row:
                if kk not in v:
                    heapq.heappush(heap, kk)
            _axpy(v, -v[k], row)
        return v

    def __contains__(self, vec) -> bool:
        v = self.reduce(vec)
        return not v


def _as_sparse(vec) -> dict:
    if isinstance(vec, dict):
        return {int(k): int(c) for k, c in vec.items() if c}
    return {i: int(c) for i, c in enumerate(vec) if c}
