"""Finite groups given by multiplication tables.

Elements are dense indices ``0..n-1`` with the identity pinned at 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as iproduct
from typing import Optional, Sequence

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group stored as a validated Cayley table.

    ``table[a][b]`` is the index of ``a*b``; ``inverses[a]`` the index of
    ``a^-1``.  Instances are immutable and should be built with
    :func:`build_group` (or :func:`from_table`), which runs every check.
    """

    table: tuple[tuple[int, ...], ...]
    inverses: tuple[int, ...]
    name: str = "G"
    _np_table: np.ndarray = field(init=False, repr=False, compare=False)
    _np_inv: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_np_table", np.array(self.table, dtype=np.int64).reshape(self.order, self.order))
        object.__setattr__(self, "_np_inv", np.array(self.inverses, dtype=np.int64))

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def identity(self) -> int:
        return 0

    def elements(self) -> range:
        return range(self.order)

    def multiply(self, a: int, b: int) -> int:
        self._check(a)
        self._check(b)
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        self._check(a)
        return self.inverses[a]

    def product(self, elems: Sequence[int]) -> int:
        """Ordered product ``elems[0] * elems[1] * ...``; empty product is 1."""
        x = 0
        for e in elems:
            x = self.table[x][e]
        return x

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inverses[a], -k
        x = 0
        for _ in range(k):
            x = self.table[x][a]
        return x

    def element_order(self, a: int) -> int:
        self._check(a)
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    def is_abelian(self) -> bool:
        t = self._np_table
        return bool((t == t.T).all())

    # vectorised helpers used by the cochain code
    @property
    def mul_array(self) -> np.ndarray:
        return self._np_table

    @property
    def inv_array(self) -> np.ndarray:
        return self._np_inv

    def _check(self, a: int) -> None:
        if not (isinstance(a, (int, np.integer)) and 0 <= a < self.order):
            raise IndexError(f"element index {a!r} out of range for group of order {self.order}")

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"


def from_table(table: Sequence[Sequence[int]], name: str = "G") -> FiniteGroup:
    """Validate an explicit Cayley table and wrap it.

    Raises :class:`ValidationError` naming the offending element(s).
    """
    n = len(table)
    if n == 0:
        raise ValidationError("group table must be non-empty")
    rows = []
    for i, row in enumerate(table):
        if len(row) != n:
            raise ValidationError(f"row {i} has length {len(row)}, expected {n}")
        rows.append(tuple(int(x) for x in row))
    full = set(range(n))
    for a in range(n):
        if set(rows[a]) != full:
            raise ValidationError(f"row {a} is not a permutation of 0..{n - 1} (Latin square violated)")
        if {rows[b][a] for b in range(n)} != full:
            raise ValidationError(f"column {a} is not a permutation of 0..{n - 1} (Latin square violated)")
        if rows[0][a] != a or rows[a][0] != a:
            raise ValidationError(f"element 0 is not a two-sided identity: fails at a={a}")
    t = np.array(rows, dtype=np.int64)
    # (a*b)*c versus a*(b*c) for all triples at once
    lhs = t[t[:, :, None], np.arange(n)[None, None, :]]
    rhs = t[np.arange(n)[:, None, None], t[None, :, :]]
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        a, b, c = (int(x) for x in bad[0])
        raise ValidationError(f"associativity fails for the triple (a, b, c) = ({a}, {b}, {c})")
    inverses = tuple(rows[a].index(0) for a in range(n))
    return FiniteGroup(tuple(rows), inverses, name)


@lru_cache(maxsize=None)
def cyclic(n: int) -> FiniteGroup:
    """The cyclic group of order ``n``; the same object is returned for equal ``n``."""
    if n < 1:
        raise ValidationError(f"cyclic group order must be >= 1, got {n}")
    return from_table([[(a + b) % n for b in range(n)] for a in range(n)], name=f"C{n}")


def direct_product(*factors: FiniteGroup) -> FiniteGroup:
    """Direct product; element tuples are encoded in mixed radix, first factor most significant."""
    if not factors:
        return cyclic(1)
    orders = [f.order for f in factors]
    elems = list(iproduct(*(range(k) for k in orders)))
    index = {e: i for i, e in enumerate(elems)}
    table = [
        [index[tuple(f.table[x][y] for f, x, y in zip(factors, a, b))] for b in elems]
        for a in elems
    ]
    return from_table(table, name="x".join(f.name for f in factors))


def build_group(spec) -> FiniteGroup:
    """Build a group from a description.

    ``spec`` is a mapping with ``kind`` one of ``"cyclic"`` (key ``n``),
    ``"product"`` (key ``factors``: list of descriptions) or ``"explicit"``
    (key ``table``).  A :class:`FiniteGroup` is passed through unchanged.
    """
    if isinstance(spec, FiniteGroup):
        return spec
    kind = spec.get("kind")
    if kind == "cyclic":
        return cyclic(int(spec["n"]))
    if kind == "product":
        return direct_product(*(build_group(f) for f in spec["factors"]))
    if kind == "explicit":
        return from_table(spec["table"], name=spec.get("name", "G"))
    raise ValidationError(f"unknown group kind {kind!r}")


def multiply(G: FiniteGroup, a: int, b: int) -> int:
    return G.multiply(a, b)


def inverse(G: FiniteGroup, a: int) -> int:
    return G.inverse(a)


def find_generator(G: FiniteGroup) -> Optional[int]:
    """Smallest element whose powers exhaust ``G``, or ``None`` if ``G`` is not cyclic."""
    for a in G.elements():
        if G.element_order(a) == G.order:
            return a
    return None
