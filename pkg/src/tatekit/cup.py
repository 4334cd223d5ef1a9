"""Cup products of Tate cochains in every pair of degrees.

The pair of degrees ``(m, n)`` falls into exactly one of six regimes, each
with an inhomogeneous formula and a homogeneous one.  ``p`` and ``q`` are
the regime parameters; ``t`` and ``s`` run independently through ``G``::

    9'   m, n >= 0                 p = m, q = n
    11'  m, n <= -1                p = -m, q = -n
    13'  m >= 0, n <= -1, m+n < 0  p = m, q = -(m+n)
    15'  m <= -1, n >= 0, m+n < 0  p = n, q = -(m+n)
    17'  n <= -1, m+n >= 0         p = m+n, q = -n
    19'  m <= -1, m+n >= 0         p = m+n, q = -m

Products land in ``tensor_module(A, B)``.  Every formula is evaluated
literally, vectorised over result tuples and summation variables.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .cochains import HomCochain, InhCochain, _act_rows, _index_array, all_tuples, check_degree, is_cocycle
from .cohomology import CohomologyGroup, reduce_class, tate_group
from .errors import NotCocycleError, SizeGuardError, ValidationError
from .groups import FiniteGroup
from .modules import GModule, tensor_module

DEFAULT_MAX_OPS = 10 ** 7


@dataclass(frozen=True)
class CupRegime:
    tag: str
    p: int
    q: int


def regime(m: int, n: int) -> CupRegime:
    if m >= 0 and n >= 0:
        return CupRegime("9'", m, n)
    if m <= -1 and n <= -1:
        return CupRegime("11'", -m, -n)
    if m >= 0:  # n <= -1
        if m + n <= -1:
            return CupRegime("13'", m, -(m + n))
        return CupRegime("17'", m + n, -n)
    # m <= -1, n >= 0
    if m + n <= -1:
        return CupRegime("15'", n, -(m + n))
    return CupRegime("19'", m + n, -m)


def max_ops() -> int:
    raw = os.environ.get("TATEKIT_MAX_OPS")
    if raw is None:
        return DEFAULT_MAX_OPS
    try:
        return int(raw)
    except ValueError:
        raise ValidationError(f"TATEKIT_MAX_OPS must be an integer, got {raw!r}") from None


@lru_cache(maxsize=64)
def _tensor(A: GModule, B: GModule) -> GModule:
    return tensor_module(A, B)


def product_module(A: GModule, B: GModule) -> GModule:
    """The coefficient module of ``A``-cochains cupped with ``B``-cochains (cached)."""
    return _tensor(A, B)


class _Grid:
    """All pairs (result tuple, summation tuple) laid out as columns."""

    def __init__(self, G: FiniteGroup, a: int, k: int, rA: int, rB: int):
        H = all_tuples(G, a)
        T = all_tuples(G, k)
        self.G = G
        self.nh, self.nt = len(H), len(T)
        ops = self.nh * self.nt * max(rA * rB, 1)
        limit = max_ops()
        if ops > limit:
            raise SizeGuardError(f"cup product needs about {ops} operations, above the limit {limit} "
                                 "(set TATEKIT_MAX_OPS to raise it)")
        self.size = self.nh * self.nt
        self.h = [np.repeat(H[:, i], self.nt) for i in range(a)]
        self.t = [np.tile(T[:, i], self.nh) for i in range(k)]

    def prod(self, cols) -> np.ndarray:
        mul = self.G.mul_array
        out = np.zeros(self.size, dtype=np.int64)
        for c in cols:
            out = mul[out, c]
        return out

    def inv(self, c) -> np.ndarray:
        return self.G.inv_array[c]

    def values(self, c, cols, g=None) -> np.ndarray:
        """Rows ``g . c(cols)``; ``g`` None means the identity."""
        idx = _index_array(self.G.order, cols, self.size)
        vals = c.table[idx]
        if g is None:
            return vals
        return _act_rows(c.module.rho, g, vals)

    def finish(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        n = self.size
        prod = np.einsum("ni,nj->nij", left, right).reshape(n, -1)
        return prod.reshape(self.nh, self.nt, -1).sum(axis=1)


def _check_pair(c1, c2) -> None:
    if c1.group is not c2.group:
        raise ValidationError("cochains live over different groups")
    check_degree(c1.degree + c2.degree)


def cup_inh(c1: InhCochain, c2: InhCochain) -> InhCochain:
    """Inhomogeneous cup product ``c1 (deg m) U c2 (deg n)``, degree ``m + n`` over ``A (x) B``."""
    _check_pair(c1, c2)
    m, n = c1.degree, c2.degree
    G = c1.group
    R = regime(m, n)
    p, q = R.p, R.q
    rA, rB = c1.module.rank, c2.module.rank
    target = _tensor(c1.module, c2.module)

    if R.tag == "9'":
        X = _Grid(G, p + q, 0, rA, rB)
        h = X.h
        left = X.values(c1, h[:p])
        right = X.values(c2, h[p:], X.prod(h[:p]))
    elif R.tag == "11'":
        X = _Grid(G, p + q - 1, 0, rA, rB)
        h = X.h
        left = X.values(c1, h[:p - 1])
        right = X.values(c2, h[p:], X.prod(h[:p]))
    elif R.tag == "13'":
        X = _Grid(G, q - 1, p, rA, rB)
        h, t = X.h, X.t
        left = X.values(c1, t)
        right = X.values(c2, [X.inv(x) for x in reversed(t)] + h, X.prod(t))
    elif R.tag == "15'":
        X = _Grid(G, q - 1, p, rA, rB)
        h, t = X.h, X.t
        left = X.values(c1, h + t)
        right = X.values(c2, [X.inv(x) for x in reversed(t)], X.prod(h + t))
    elif R.tag == "17'":
        X = _Grid(G, p, q, rA, rB)
        h, t = X.h, X.t
        left = X.values(c1, h + t)
        right = X.values(c2, [X.inv(x) for x in reversed(t[1:])], X.prod(h + t))
    else:  # 19'
        X = _Grid(G, p, q, rA, rB)
        h, t = X.h, X.t
        left = X.values(c1, t[1:], t[0])
        right = X.values(c2, [X.inv(x) for x in reversed(t)] + h, X.prod(t))
    return InhCochain(m + n, target, X.finish(left, right))


def cup_hom(f1: HomCochain, f2: HomCochain) -> HomCochain:
    """Homogeneous cup product, degree ``m + n`` over ``A (x) B``."""
    _check_pair(f1, f2)
    m, n = f1.degree, f2.degree
    G = f1.group
    R = regime(m, n)
    p, q = R.p, R.q
    rA, rB = f1.module.rank, f2.module.rank
    target = _tensor(f1.module, f2.module)

    if R.tag == "9'":
        X = _Grid(G, p + q + 1, 0, rA, rB)
        g = X.h
        left, right = X.values(f1, g[:p + 1]), X.values(f2, g[p:])
    elif R.tag == "11'":
        X = _Grid(G, p + q, 0, rA, rB)
        g = X.h
        left, right = X.values(f1, g[:p]), X.values(f2, g[p:])
    elif R.tag == "13'":
        X = _Grid(G, q, p, rA, rB)
        g, s = X.h, X.t
        left = X.values(f1, [g[0]] + s)
        right = X.values(f2, s[::-1] + g)
    elif R.tag == "15'":
        X = _Grid(G, q, p, rA, rB)
        g, s = X.h, X.t
        left = X.values(f1, g + s)
        right = X.values(f2, s[::-1] + [g[-1]])
    elif R.tag == "17'":
        X = _Grid(G, p + 1, q, rA, rB)
        g, s = X.h, X.t
        left = X.values(f1, g + s)
        right = X.values(f2, s[::-1])
    else:  # 19'
        X = _Grid(G, p + 1, q, rA, rB)
        g, s = X.h, X.t
        left = X.values(f1, s)
        right = X.values(f2, s[::-1] + g)
    return HomCochain(m + n, target, X.finish(left, right))


def cup_classes(H_m: CohomologyGroup, H_n: CohomologyGroup, c1: InhCochain, c2: InhCochain,
                target: Optional[CohomologyGroup] = None) -> tuple[InhCochain, list[int]]:
    """Cup two cocycles and reduce the product in ``H^{m+n}(G, A (x) B)``.

    ``target`` may be passed to reuse an already computed cohomology group.
    """
    for H, c, side in ((H_m, c1, "left"), (H_n, c2, "right")):
        if c.degree != H.degree or not c.module.compatible(H.module):
            raise ValidationError(f"{side} cochain does not match its cohomology group")
        if not is_cocycle(c):
            raise NotCocycleError(f"{side} factor (degree {c.degree}) is not a cocycle")
    prod = cup_inh(c1, c2)
    if not is_cocycle(prod):
        raise NotCocycleError("cup product of cocycles is not a cocycle")
    if target is None:
        target = tate_group(H_m.group, prod.module, prod.degree)
    return prod, reduce_class(target, prod)
