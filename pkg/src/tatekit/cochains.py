"""Homogeneous and inhomogeneous Tate cochains in every integer degree.

Inhomogeneous cochains of degree ``n`` are tables over ``G^arity(n)``;
homogeneous ones are equivariant tables over ``G^harity(n)``.  Tables are
``(|G|^k, rank)`` object arrays of canonical module coordinates, indexed by
tuples in lexicographic order (first entry most significant).

Differentials come from the complete standard resolution::

    p >= 1 : d(g_0..g_p)   = sum_i (-1)^i (g_0..^g_i..g_p)
    p == 0 : d(g_0)        = sum_h <h>
    p <= -1: d<g_1..g_k>   = sum_h sum_{i=0..k} (-1)^i <g_1..g_i, h, g_{i+1}..g_k>

and the coboundary of a cochain ``f`` is ``(df)(x) = f(d x)``.  The
inhomogeneous differential is that one transported through the conversion
isomorphism; :func:`inh_operator` records it as explicit linear terms.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

from .errors import SizeGuardError, ValidationError
from .groups import FiniteGroup
from .modules import GModule

MAX_DEGREE = 6


def check_degree(n: int) -> None:
    if abs(n) > MAX_DEGREE:
        raise SizeGuardError(f"degree {n} outside the supported range -{MAX_DEGREE}..{MAX_DEGREE}")


def arity(n: int) -> int:
    """Number of arguments of an inhomogeneous cochain of degree ``n``."""
    if n >= 1:
        return n
    if n >= -1:
        return 0
    return -n - 1


def harity(n: int) -> int:
    """Number of arguments of a homogeneous cochain of degree ``n``."""
    return n + 1 if n >= 0 else -n


# -- tuple bookkeeping -----------------------------------------------------------

@lru_cache(maxsize=None)
def _tuples(order: int, k: int) -> np.ndarray:
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((order,) * k).reshape(k, -1).T
    return np.ascontiguousarray(grids, dtype=np.int64)


def all_tuples(G: FiniteGroup, k: int) -> np.ndarray:
    """All of ``G^k`` as a ``(|G|^k, k)`` array in lexicographic order."""
    return _tuples(G.order, k)


def tuple_index(G: FiniteGroup, args: Sequence[int]) -> int:
    i = 0
    for a in args:
        i = i * G.order + int(a)
    return i


def _index_array(order: int, cols: Sequence[np.ndarray], n: int) -> np.ndarray:
    idx = np.zeros(n, dtype=np.int64)
    for c in cols:
        idx = idx * order + c
    return idx


def _quotients(G: FiniteGroup, cols: Sequence[np.ndarray]) -> list[np.ndarray]:
    """Consecutive quotients ``y_{i}^{-1} y_{i+1}`` of a column list."""
    mul, inv = G.mul_array, G.inv_array
    return [mul[inv[cols[i]], cols[i + 1]] for i in range(len(cols) - 1)]


def _cumulative(G: FiniteGroup, cols: Sequence[np.ndarray], n: int) -> list[np.ndarray]:
    """``[1, h_1, h_1 h_2, ...]`` as columns."""
    mul = G.mul_array
    out = [np.zeros(n, dtype=np.int64)]
    for c in cols:
        out.append(mul[out[-1], c])
    return out


def _act_rows(rho: np.ndarray, g: np.ndarray, vals: np.ndarray) -> np.ndarray:
    return np.einsum("nij,nj->ni", rho[g], vals)


# -- cochain types ------------------------------------------------------------------

class _Table:
    degree: int
    module: GModule
    table: np.ndarray

    def _k(self) -> int:
        raise NotImplementedError

    def _init(self, degree: int, module: GModule, table, canonical: bool):
        check_degree(degree)
        self.degree = int(degree)
        self.module = module
        G = module.group
        size = G.order ** self._k()
        arr = np.array(table, dtype=object).reshape(size, module.rank) if size * module.rank else \
            np.zeros((size, module.rank), dtype=object)
        self.table = module.canonical_array(arr) if canonical else arr

    @property
    def group(self) -> FiniteGroup:
        return self.module.group

    def __getitem__(self, args) -> tuple:
        if isinstance(args, (int, np.integer)):
            args = (args,)
        args = tuple(args)
        if len(args) != self._k():
            raise ValidationError(f"expected {self._k()} arguments, got {len(args)}")
        for a in args:
            self.group._check(int(a))
        return tuple(int(x) for x in self.table[tuple_index(self.group, args)])

    def items(self) -> Iterator[tuple[tuple, tuple]]:
        T = all_tuples(self.group, self._k())
        for i in range(len(T)):
            yield tuple(int(x) for x in T[i]), tuple(int(x) for x in self.table[i])

    def is_zero(self) -> bool:
        return not self.table.any() if self.table.size else True

    def _check_same(self, other) -> None:
        if type(self) is not type(other) or self.degree != other.degree:
            raise ValidationError("cochains of different type or degree")
        if not self.module.compatible(other.module):
            raise ValidationError(f"module mismatch: {self.module.name} vs {other.module.name}")

    def __eq__(self, other) -> bool:
        if type(self) is not type(other):
            return NotImplemented
        return (self.degree == other.degree and self.module.compatible(other.module)
                and bool((self.table == other.table).all()))

    def __add__(self, other):
        self._check_same(other)
        return type(self)(self.degree, self.module, self.table + other.table)

    def __sub__(self, other):
        self._check_same(other)
        return type(self)(self.degree, self.module, self.table - other.table)

    def __neg__(self):
        return type(self)(self.degree, self.module, -self.table)

    def __rmul__(self, k: int):
        return type(self)(self.degree, self.module, int(k) * self.table)

    def flat(self) -> list[int]:
        """Generator-level coordinate vector (tuple-major, then module coordinate)."""
        return [int(x) for x in self.table.reshape(-1)]


class InhCochain(_Table):
    """Inhomogeneous cochain: a table over ``G^arity(degree)``."""

    def __init__(self, degree: int, module: GModule, table, canonical: bool = True):
        self._init(degree, module, table, canonical)

    def _k(self) -> int:
        return arity(self.degree)

    @property
    def arity(self) -> int:
        return arity(self.degree)

    def __repr__(self) -> str:
        return f"InhCochain(degree={self.degree}, module={self.module.name})"

    @classmethod
    def zero(cls, module: GModule, degree: int) -> "InhCochain":
        size = module.group.order ** arity(degree)
        return cls(degree, module, np.zeros((size, module.rank), dtype=object))

    @classmethod
    def constant(cls, module: GModule, degree: int, value: Sequence[int]) -> "InhCochain":
        """Degree -1 or 0 cochain (a single element), or a constant table."""
        size = module.group.order ** arity(degree)
        return cls(degree, module, np.array([list(value)] * size, dtype=object))

    @classmethod
    def from_function(cls, module: GModule, degree: int, fn: Callable[..., Sequence[int]]) -> "InhCochain":
        T = all_tuples(module.group, arity(degree))
        rows = [list(fn(*(int(x) for x in t))) for t in T]
        return cls(degree, module, np.array(rows, dtype=object).reshape(len(T), module.rank))

    @classmethod
    def from_flat(cls, module: GModule, degree: int, vec: Sequence[int]) -> "InhCochain":
        size = module.group.order ** arity(degree)
        return cls(degree, module, np.array([int(x) for x in vec], dtype=object).reshape(size, module.rank))


class HomCochain(_Table):
    """Homogeneous cochain: an equivariant table over ``G^harity(degree)``."""

    def __init__(self, degree: int, module: GModule, table, canonical: bool = True):
        self._init(degree, module, table, canonical)

    def _k(self) -> int:
        return harity(self.degree)

    @property
    def arity(self) -> int:
        return harity(self.degree)

    def __repr__(self) -> str:
        return f"HomCochain(degree={self.degree}, module={self.module.name})"

    def equivariance_defect(self) -> Optional[tuple[int, tuple]]:
        """First ``(g, args)`` with ``f(g.args) != g.f(args)``, or None."""
        G, A = self.group, self.module
        T = all_tuples(G, self._k())
        n = len(T)
        for g in G.elements():
            shifted = _index_array(G.order, [G.mul_array[g, T[:, i]] for i in range(T.shape[1])], n)
            lhs = self.table[shifted]
            rhs = A.canonical_array(_act_rows(A.rho, np.full(n, g), self.table))
            bad = np.nonzero(~(lhs == rhs).all(axis=1))[0]
            if len(bad):
                return g, tuple(int(x) for x in T[bad[0]])
        return None

    def is_equivariant(self) -> bool:
        return self.equivariance_defect() is None


def random_cochain(module: GModule, degree: int, rng: np.random.Generator, bound: int = 3) -> InhCochain:
    size = module.group.order ** arity(degree)
    vals = rng.integers(-bound, bound + 1, size=(size, module.rank))
    return InhCochain(degree, module, vals.astype(object))


# -- conversion -------------------------------------------------------------------

def inh_to_hom(c: InhCochain) -> HomCochain:
    """``f(g_0, ..., g_k) = g_0 . c(g_0^-1 g_1, ..., g_{k-1}^-1 g_k)`` (same shape for n < 0)."""
    G, A = c.group, c.module
    k = harity(c.degree)
    T = all_tuples(G, k)
    n = len(T)
    cols = [T[:, i] for i in range(k)]
    idx = _index_array(G.order, _quotients(G, cols), n)
    vals = _act_rows(A.rho, cols[0], c.table[idx])
    return HomCochain(c.degree, A, vals)


def hom_to_inh(f: HomCochain, check: bool = True) -> InhCochain:
    """``c(h_1, ..., h_a) = f(1, h_1, h_1 h_2, ..., h_1 ... h_a)``.

    With ``check`` the equivariance precondition is verified first.
    """
    if check:
        bad = f.equivariance_defect()
        if bad is not None:
            raise ValidationError(f"homogeneous cochain is not equivariant: fails at g={bad[0]}, args={bad[1]}")
    G = f.group
    a = arity(f.degree)
    H = all_tuples(G, a)
    n = len(H)
    cum = _cumulative(G, [H[:, i] for i in range(a)], n)
    idx = _index_array(G.order, cum, n)
    return InhCochain(f.degree, f.module, f.table[idx], canonical=False)


# -- the complete standard resolution -------------------------------------------------

def resolution_boundary(G: FiniteGroup, p: int, basis: Sequence[int]) -> list[tuple[int, tuple]]:
    """Boundary of a basis tuple of the complete standard resolution in degree ``p``.

    Returns the signed formal sum as a list of ``(sign, tuple)`` pairs (not
    collected).  Degree ``p >= 0`` tuples have ``p + 1`` entries, degree
    ``p <= -1`` tuples have ``-p`` entries.
    """
    check_degree(p)
    basis = tuple(int(x) for x in basis)
    if len(basis) != harity(p):
        raise ValidationError(f"degree {p} basis tuples have {harity(p)} entries")
    if p >= 1:
        return [((-1) ** i, basis[:i] + basis[i + 1:]) for i in range(p + 1)]
    if p == 0:
        return [(1, (h,)) for h in G.elements()]
    k = -p
    return [((-1) ** i, basis[:i] + (h,) + basis[i:]) for h in G.elements() for i in range(k + 1)]


@lru_cache(maxsize=256)
def _hom_faces(G: FiniteGroup, n: int) -> tuple:
    """Faces of ``d: F^n -> F^{n+1}`` as ``(sign, index array into F^n)`` pairs,
    one array entry per basis tuple of ``F^{n+1}``."""
    T = all_tuples(G, harity(n + 1))
    m = len(T)
    cols = [T[:, i] for i in range(T.shape[1])]
    terms = []
    if n + 1 >= 1:
        for i in range(len(cols)):
            terms.append(((-1) ** i, _index_array(G.order, cols[:i] + cols[i + 1:], m)))
    elif n + 1 == 0:
        for h in G.elements():
            terms.append((1, np.full(m, h, dtype=np.int64)))
    else:
        k = len(cols)
        for h in G.elements():
            hc = np.full(m, h, dtype=np.int64)
            for i in range(k + 1):
                terms.append(((-1) ** i, _index_array(G.order, cols[:i] + [hc] + cols[i:], m)))
    return tuple(terms)


def diff_hom(f: HomCochain) -> HomCochain:
    """``(df)(x) = f(dx)`` on basis tuples of the resolution."""
    check_degree(f.degree + 1)
    G = f.group
    out = None
    for sign, idx in _hom_faces(G, f.degree):
        term = f.table[idx] if sign > 0 else -f.table[idx]
        out = term if out is None else out + term
    return HomCochain(f.degree + 1, f.module, out)


@lru_cache(maxsize=256)
def inh_operator(G: FiniteGroup, n: int) -> tuple:
    """The inhomogeneous differential ``C^n -> C^{n+1}`` as explicit terms.

    Returns ``(sign, g, idx)`` triples of arrays indexed by the tuples of
    ``C^{n+1}``: ``(dc)(o) = sum sign * g[o] . c(idx[o])``.  Derived by pushing
    each output tuple through ``f(1, h_1, h_1 h_2, ...)``, the resolution
    boundary and ``f(y) = y_0 . c(y_0^-1 y_1, ...)``.
    """
    check_degree(n)
    check_degree(n + 1)
    a = arity(n + 1)
    H = all_tuples(G, a)
    m = len(H)
    x = _cumulative(G, [H[:, i] for i in range(a)], m)
    if n + 1 == 0:
        x = x[:1]
    terms = []

    def push(sign, y):
        idx = _index_array(G.order, _quotients(G, y), m)
        terms.append((sign, y[0], idx))

    if n + 1 >= 1:
        for i in range(len(x)):
            push((-1) ** i, x[:i] + x[i + 1:])
    elif n + 1 == 0:
        for h in G.elements():
            push(1, [np.full(m, h, dtype=np.int64)])
    else:
        k = len(x)
        for h in G.elements():
            hc = np.full(m, h, dtype=np.int64)
            for i in range(k + 1):
                push((-1) ** i, x[:i] + [hc] + x[i:])
    return tuple(terms)


def diff_inh(c: InhCochain) -> InhCochain:
    """The inhomogeneous coboundary (transported homogeneous coboundary)."""
    A = c.module
    out = None
    for sign, g, idx in inh_operator(c.group, c.degree):
        term = _act_rows(A.rho, g, c.table[idx])
        if sign < 0:
            term = -term
        out = term if out is None else out + term
    return InhCochain(c.degree + 1, A, out)


def diff_inh_transported(c: InhCochain) -> InhCochain:
    """``hom_to_inh(diff_hom(inh_to_hom(c)))`` computed literally."""
    return hom_to_inh(diff_hom(inh_to_hom(c)), check=False)


def is_cocycle(c: InhCochain) -> bool:
    return diff_inh(c).is_zero()


def generator_count(module: GModule, degree: int) -> int:
    """Number of generators of ``C^degree`` as an abelian group presentation."""
    return module.group.order ** arity(degree) * module.rank


def differential_columns(module: GModule, n: int) -> list[dict[int, int]]:
    """Sparse columns of the generator-level matrix of ``d: C^n -> C^{n+1}``.

    Generator ``(tuple t, coordinate j)`` has index ``t * rank + j``.
    """
    G, r = module.group, module.rank
    action = module.action
    cols: list[dict[int, int]] = [dict() for _ in range(G.order ** arity(n) * r)]
    for sign, g, idx in inh_operator(G, n):
        for o, (gg, t) in enumerate(zip(g.tolist(), idx.tolist())):
            M = action[gg]
            ob, tb = o * r, t * r
            for j in range(r):
                col = cols[tb + j]
                for i in range(r):
                    v = M[i][j]
                    if v:
                        key = ob + i
                        s = col.get(key, 0) + sign * v
                        if s:
                            col[key] = s
                        else:
                            del col[key]
    return cols


def relation_columns(module: GModule, degree: int) -> list[dict[int, int]]:
    """Relation generators of ``C^degree = A^{|G|^arity}`` (block diagonal copies)."""
    r = module.rank
    out = []
    for t in range(module.group.order ** arity(degree)):
        for _, row in module.relation_rows:
            out.append({t * r + i: x for i, x in enumerate(row) if x})
    return out
