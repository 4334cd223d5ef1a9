"""Finitely presented abelian groups with an action of a finite group.

A module is ``Z^rank / (column lattice of relations)`` with ``g`` acting by the
integer matrix ``action[g]``.  All modules are written additively, including
models of multiplicative groups.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import ValidationError
from .groups import FiniteGroup
from .linalg import IntMatrix, as_matrix, hermite_normal_form, quotient_invariants


def _mat_mul(A, B):
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in zip(*B)) for row in A)


def _identity(r):
    return tuple(tuple(int(i == j) for j in range(r)) for i in range(r))


@dataclass(frozen=True, eq=False)
class GModule:
    """``Z^rank / span(relations)`` with a ``G``-action.

    Build through :func:`build_module` or the helper constructors; they
    validate the action laws modulo the relation lattice.
    """

    group: FiniteGroup
    rank: int
    relations: IntMatrix
    action: tuple  # action[g] is an r x r tuple-of-tuples
    name: str = "A"
    _hnf: tuple = field(init=False, repr=False)
    _rho: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        r = self.rank
        if self.relations.rows != r:
            raise ValidationError(f"module {self.name}: relation matrix has {self.relations.rows} rows, expected {r}")
        if self.relations.cols:
            H, _ = hermite_normal_form(self.relations.T)
            hnf = []
            for row in H.data:
                if any(row):
                    p = next(i for i, x in enumerate(row) if x)
                    hnf.append((p, tuple(row)))
        else:
            hnf = []
        object.__setattr__(self, "_hnf", tuple(hnf))
        rho = np.empty((self.group.order, r, r), dtype=object)
        for g, M in enumerate(self.action):
            for i in range(r):
                for j in range(r):
                    rho[g, i, j] = int(M[i][j])
        object.__setattr__(self, "_rho", rho)

    # -- basic data --------------------------------------------------------
    @property
    def is_free(self) -> bool:
        return not self._hnf

    @property
    def relation_rows(self) -> tuple:
        """Hermite basis of the relation lattice as ``(pivot, row)`` pairs."""
        return self._hnf

    @property
    def rho(self) -> np.ndarray:
        """Action matrices as an object array of shape ``(|G|, r, r)``."""
        return self._rho

    def matrix(self, g: int) -> IntMatrix:
        return IntMatrix(self.action[g], self.rank, self.rank)

    def abelian_invariants(self) -> list[int]:
        """Invariant factors of the underlying abelian group (0 for each free summand)."""
        return quotient_invariants(IntMatrix.identity(self.rank), self.relations)

    def compatible(self, other: "GModule") -> bool:
        return (self is other) or (
            self.group is other.group
            and self.rank == other.rank
            and self._hnf == other._hnf
            and self.action == other.action
        )

    # -- element arithmetic ---------------------------------------------------
    def canonical(self, v: Sequence[int]) -> tuple:
        v = [int(x) for x in v]
        if len(v) != self.rank:
            raise ValidationError(f"module {self.name}: vector of length {len(v)}, expected {self.rank}")
        for p, row in self._hnf:
            q = v[p] // row[p]
            if q:
                for k in range(p, self.rank):
                    v[k] -= q * row[k]
        return tuple(v)

    def canonical_array(self, arr: np.ndarray) -> np.ndarray:
        """Row-wise canonical forms of an ``(N, rank)`` object array (copied)."""
        arr = np.array(arr, dtype=object).reshape(-1, self.rank)
        for p, row in self._hnf:
            q = arr[:, p] // row[p]
            arr = arr - q[:, None] * np.array(row, dtype=object)[None, :]
        return arr

    def is_zero(self, v: Sequence[int]) -> bool:
        return not any(self.canonical(v))

    def apply(self, g: int, v: Sequence[int]) -> tuple:
        M = self.action[g]
        return self.canonical([sum(a * b for a, b in zip(row, v)) for row in M])

    def zero(self) -> tuple:
        return (0,) * self.rank

    def __repr__(self) -> str:
        return f"GModule({self.name}, rank={self.rank}, relations={self.relations.cols}, group={self.group.name})"


@dataclass(frozen=True)
class ModElement:
    """An element of a module, stored in canonical coordinates."""

    module: GModule = field(compare=False)
    coords: tuple

    def __eq__(self, other):
        if not isinstance(other, ModElement):
            return NotImplemented
        return self.module.compatible(other.module) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __add__(self, other: "ModElement") -> "ModElement":
        _same(self.module, other.module)
        return elem_canonical(self.module, [a + b for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> "ModElement":
        return elem_canonical(self.module, [-a for a in self.coords])

    def __sub__(self, other: "ModElement") -> "ModElement":
        return self + (-other)

    def __rmul__(self, k: int) -> "ModElement":
        return elem_canonical(self.module, [k * a for a in self.coords])


def _same(a: GModule, b: GModule) -> None:
    if not a.compatible(b):
        raise ValidationError(f"module mismatch: {a.name} vs {b.name}")


def elem_canonical(m: GModule, v: Sequence[int]) -> ModElement:
    return ModElement(m, m.canonical(v))


def act(m: GModule, g: int, v: ModElement | Sequence[int]) -> ModElement:
    if isinstance(v, ModElement):
        _same(m, v.module)
        v = v.coords
    m.group._check(g)
    return ModElement(m, m.apply(g, v))


def norm_map(m: GModule) -> IntMatrix:
    """The matrix of ``sum_g rho(g)``."""
    r = m.rank
    N = [[sum(m.action[g][i][j] for g in m.group.elements()) for j in range(r)] for i in range(r)]
    return IntMatrix(N, r, r)


# -- validation ---------------------------------------------------------------

def _column_in_relations(m: GModule, col) -> bool:
    return not any(m.canonical(col))


def validate_module(m: GModule) -> GModule:
    """Check the action laws modulo relations; raise :class:`ValidationError` naming the failing law."""
    G, r = m.group, m.rank
    if len(m.action) != G.order:
        raise ValidationError(f"module {m.name}: expected {G.order} action matrices, got {len(m.action)}")
    for g, M in enumerate(m.action):
        if len(M) != r or any(len(row) != r for row in M):
            raise ValidationError(f"module {m.name}: action matrix of element {g} is not {r}x{r}")
    I = _identity(r)
    diff = [[m.action[0][i][j] - I[i][j] for i in range(r)] for j in range(r)]
    if not all(_column_in_relations(m, c) for c in diff):
        raise ValidationError(f"module {m.name}: identity law fails (rho(1) != I modulo relations)")
    rels = m.relations.columns()
    for g in G.elements():
        M = m.action[g]
        for c in rels:
            img = [sum(a * b for a, b in zip(row, c)) for row in M]
            if not _column_in_relations(m, img):
                raise ValidationError(f"module {m.name}: rho({g}) does not preserve the relation lattice")
    for g in G.elements():
        for h in G.elements():
            P = _mat_mul(m.action[g], m.action[h])
            Q = m.action[G.table[g][h]]
            for j in range(r):
                col = [P[i][j] - Q[i][j] for i in range(r)]
                if not _column_in_relations(m, col):
                    raise ValidationError(
                        f"module {m.name}: homomorphism law fails for (g, h) = ({g}, {h}): "
                        f"rho(g) rho(h) != rho(gh) modulo relations")
    return m


def _complete_action(G: FiniteGroup, gens: Mapping[int, Sequence[Sequence[int]]], r: int, name: str):
    act_ = {0: _identity(r)}
    gens = {int(g): tuple(tuple(int(x) for x in row) for row in M) for g, M in gens.items()}
    queue = deque([0])
    while queue:
        g = queue.popleft()
        for s, Ms in gens.items():
            gs = G.table[g][s]
            M = _mat_mul(act_[g], Ms)
            if gs not in act_:
                act_[gs] = M
                queue.append(gs)
    if len(act_) != G.order:
        raise ValidationError(f"module {name}: the given generators do not generate the group")
    return tuple(act_[g] for g in G.elements())


def make_module(G: FiniteGroup, action, relations=None, name: str = "A") -> GModule:
    """Validated module from action data.

    ``action`` is either a full list (one matrix per element) or a mapping
    ``{element: matrix}`` on generators, extended multiplicatively.
    """
    if isinstance(action, Mapping):
        first = next(iter(action.values()))
        r = len(first)
        action = _complete_action(G, action, r, name)
    else:
        action = tuple(tuple(tuple(int(x) for x in row) for row in M) for M in action)
        r = len(action[0]) if action else 0
    if relations is None:
        rel = IntMatrix.zeros(r, 0)
    else:
        rel = as_matrix(relations) if not isinstance(relations, IntMatrix) else relations
        if rel.rows == 0 and rel.cols == 0:
            rel = IntMatrix.zeros(r, 0)
    return validate_module(GModule(G, r, rel, action, name))


def trivial_Z(G: FiniteGroup, name: str = "Z") -> GModule:
    return make_module(G, [((1,),)] * G.order, name=name)


def trivial_Z_mod(G: FiniteGroup, m: int, name: Optional[str] = None) -> GModule:
    if m < 0:
        raise ValidationError("modulus must be non-negative")
    rel = IntMatrix([[m]]) if m else IntMatrix.zeros(1, 0)
    return make_module(G, [((1,),)] * G.order, rel, name=name or f"Z/{m}")


def lattice(G: FiniteGroup, action, name: str = "X") -> GModule:
    return make_module(G, action, None, name=name)


def regular_ZG(G: FiniteGroup, name: str = "Z[G]") -> GModule:
    """``Z[G]`` with ``g`` acting by left translation on the basis ``e_h``."""
    n = G.order
    action = []
    for g in G.elements():
        M = [[0] * n for _ in range(n)]
        for h in G.elements():
            M[G.table[g][h]][h] = 1
        action.append(M)
    return make_module(G, action, name=name)


def augmentation_kernel(G: FiniteGroup, name: str = "I_G") -> GModule:
    """Kernel of ``Z[G] -> Z`` with basis ``e_h - e_1`` for ``h != 1``."""
    n = G.order
    idx = {h: i for i, h in enumerate(range(1, n))}
    action = []
    for g in G.elements():
        M = [[0] * (n - 1) for _ in range(n - 1)]
        for h in range(1, n):
            gh = G.table[g][h]
            if gh != 0:
                M[idx[gh]][idx[h]] += 1
            if g != 0:
                M[idx[g]][idx[h]] -= 1
        action.append(M)
    return make_module(G, action, name=name)


def tensor_module(A: GModule, B: GModule, name: Optional[str] = None) -> GModule:
    """``A (x) B`` with the diagonal action; coordinate ``(i, j)`` sits at ``i * rank_B + j``."""
    if A.group is not B.group:
        raise ValidationError(f"group mismatch in tensor product: {A.group.name} vs {B.group.name}")
    ra, rb = A.rank, B.rank
    action = []
    for g in A.group.elements():
        Ma, Mb = A.action[g], B.action[g]
        action.append([[Ma[i][k] * Mb[j][l] for k in range(ra) for l in range(rb)]
                       for i in range(ra) for j in range(rb)])
    cols = []
    for c in A.relations.columns():
        for j in range(rb):
            cols.append([c[i] if jj == j else 0 for i in range(ra) for jj in range(rb)])
    for c in B.relations.columns():
        for i in range(ra):
            cols.append([c[j] if ii == i else 0 for ii in range(ra) for j in range(rb)])
    rel = IntMatrix.from_columns(cols, ra * rb) if cols else IntMatrix.zeros(ra * rb, 0)
    return make_module(A.group, action, rel, name=name or f"{A.name}*{B.name}")


def tensor_coords(A: GModule, B: GModule, u: Sequence[int], v: Sequence[int]) -> list[int]:
    """Coordinates of ``u (x) v`` in :func:`tensor_module` ``(A, B)`` (not canonicalised)."""
    return [a * b for a in u for b in v]


def swap_coords(A: GModule, B: GModule, w: Sequence[int]) -> list[int]:
    """Image of ``w`` under ``A (x) B -> B (x) A``, ``a (x) b -> b (x) a``."""
    ra, rb = A.rank, B.rank
    return [w[i * rb + j] for j in range(rb) for i in range(ra)]


def build_module(G: FiniteGroup, spec) -> GModule:
    """Module from a description mapping with ``kind`` in
    ``trivial_Z``, ``trivial_Z_mod`` (``m``), ``lattice`` (``action``),
    ``lattice_mod`` (``action``, ``relations``), ``regular_ZG``.

    ``action`` may be a list of matrices (one per element) or a mapping from
    element index to matrix on generators; ``relations`` lists relation
    vectors (the columns of the relation matrix).
    """
    kind = spec.get("kind")
    name = spec.get("name", kind)
    if kind == "trivial_Z":
        return trivial_Z(G, name=name)
    if kind == "trivial_Z_mod":
        return trivial_Z_mod(G, int(spec["m"]), name=name)
    if kind == "regular_ZG":
        return regular_ZG(G, name=name)
    if kind in ("lattice", "lattice_mod"):
        action = spec["action"]
        relations = None
        if kind == "lattice_mod":
            r = len(next(iter(action.values()))) if isinstance(action, Mapping) else len(action[0])
            vecs = spec.get("relations", [])
            relations = IntMatrix.from_columns(vecs, r) if vecs else IntMatrix.zeros(r, 0)
        return make_module(G, action, relations, name=name)
    raise ValidationError(f"unknown module kind {kind!r}")
