"""Cyclic groups: the character chi, the 2-cocycle b = delta(chi), the
fundamental-class model a = b U e, and the torus cocycles z_x.

A local field's multiplicative group is replaced by an arbitrary module ``B``
with a chosen invariant element ``e`` (written additively, so the value
"1" of a multiplicative cocycle is the zero vector here).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .cochains import InhCochain, is_cocycle
from .cohomology import (CohomologyGroup, classes_equal, connecting_hom, multiplication_sequence,
                         reduce_class, tate_group)
from .cup import cup_inh, product_module
from .errors import TatekitError, ValidationError
from .groups import FiniteGroup, cyclic, find_generator
from .linalg import IntMatrix, quotient_invariants
from .modules import GModule, augmentation_kernel, lattice, norm_map, tensor_coords, trivial_Z, trivial_Z_mod


@dataclass
class CyclicContext:
    """A cyclic group with generator ``sigma`` and a pair ``(B, e)`` with ``e`` invariant."""

    G: FiniteGroup
    sigma: int
    B: GModule
    e: tuple
    log: tuple = field(init=False, repr=False)

    def __post_init__(self):
        G = self.G
        if self.B.group is not G:
            raise ValidationError("coefficient module is defined over a different group")
        G._check(self.sigma)
        powers = [0]
        for _ in range(G.order - 1):
            powers.append(G.multiply(powers[-1], self.sigma))
        if len(set(powers)) != G.order:
            raise ValidationError(f"element {self.sigma} does not generate the group")
        log = [0] * G.order
        for i, g in enumerate(powers):
            log[g] = i
        self.log = tuple(log)
        if len(self.e) != self.B.rank:
            raise ValidationError(f"e has {len(self.e)} coordinates, module {self.B.name} has rank {self.B.rank}")
        self.e = self.B.canonical(self.e)
        for g in G.elements():
            if self.B.apply(g, self.e) != self.e:
                raise ValidationError(f"e is not invariant: element {g} moves it")

    @property
    def n(self) -> int:
        return self.G.order

    def power(self, i: int) -> int:
        """The element ``sigma^i``."""
        return self.G.power(self.sigma, i)


def cyclic_context(n: int, B: Optional[GModule] = None, e: Optional[Sequence[int]] = None,
                   G: Optional[FiniteGroup] = None) -> CyclicContext:
    """Context over ``cyclic(n)`` (or the given cyclic ``G``); defaults ``B = Z``, ``e = 1``."""
    G = G if G is not None else (B.group if B is not None else cyclic(n))
    if G.order != n:
        raise ValidationError(f"group has order {G.order}, expected {n}")
    sigma = find_generator(G)
    if sigma is None:
        raise ValidationError("group is not cyclic")
    B = B if B is not None else trivial_Z(G)
    e = tuple(e) if e is not None else (1,) + (0,) * (B.rank - 1)
    return CyclicContext(G, sigma, B, tuple(int(x) for x in e))


# -- chi, b and a ----------------------------------------------------------------------

def chi_cocycle(ctx: CyclicContext) -> InhCochain:
    """``chi(sigma^i) = i`` in ``Z/n``, the model of ``chi(sigma) = 1/n`` in ``(1/n)Z/Z``."""
    M = trivial_Z_mod(ctx.G, ctx.n)
    return InhCochain.from_function(M, 1, lambda g: [ctx.log[g]])


def b_closed_form(ctx: CyclicContext) -> InhCochain:
    n, log = ctx.n, ctx.log
    return InhCochain.from_function(trivial_Z(ctx.G), 2, lambda g, h: [int(log[g] + log[h] >= n)])


def b_cocycle(ctx: CyclicContext, certify: bool = True) -> InhCochain:
    """``b(sigma^i, sigma^j) = 1`` if ``i + j >= n``, else 0.

    With ``certify`` the table is checked to be a cocycle and to equal the
    connecting map of ``chi`` through ``0 -> Z -(x n)-> Z -> Z/n -> 0``.
    """
    b = b_closed_form(ctx)
    if certify:
        if not is_cocycle(b):
            raise TatekitError("closed-form b is not a cocycle")
        if connecting_hom(multiplication_sequence(ctx.G, ctx.n), chi_cocycle(ctx)) != b:
            raise TatekitError("closed-form b differs from the connecting map of chi")
    return b


def degree0(module: GModule, v: Sequence[int]) -> InhCochain:
    """An element viewed as a degree 0 cochain."""
    return InhCochain.constant(module, 0, v)


def degree_minus1(module: GModule, v: Sequence[int]) -> InhCochain:
    """An element viewed as a degree -1 cochain."""
    return InhCochain.constant(module, -1, v)


def untensor_Z(c: InhCochain, B: GModule) -> InhCochain:
    """Read a cochain over ``Z (x) B`` as one over ``B`` (coordinates agree)."""
    Zb = c.module
    if Zb.rank != B.rank or Zb.action != B.action:
        raise ValidationError("cochain module is not Z (x) B")
    return InhCochain(c.degree, B, c.table)


def fundamental_closed_form(ctx: CyclicContext) -> InhCochain:
    n, log, e = ctx.n, ctx.log, list(ctx.e)
    zero = [0] * ctx.B.rank
    return InhCochain.from_function(ctx.B, 2, lambda g, h: e if log[g] + log[h] >= n else zero)


def fundamental_cocycle_model(ctx: CyclicContext, certify: bool = True) -> InhCochain:
    """``a(sigma^i, sigma^j) = e`` if ``i + j >= n``, else 0, over ``B``.

    With ``certify`` the table is checked to be a cocycle and to equal
    ``b U e`` after identifying ``Z (x) B`` with ``B``.
    """
    a = fundamental_closed_form(ctx)
    if certify:
        if not is_cocycle(a):
            raise TatekitError("closed-form a is not a cocycle")
        prod = untensor_Z(cup_inh(b_cocycle(ctx, certify=False), degree0(ctx.B, ctx.e)), ctx.B)
        if prod != a:
            raise TatekitError("closed-form a differs from b U e")
    return a


# -- H^-1 of a lattice and the cocycles z_x ----------------------------------------------

def _require_lattice(X: GModule) -> None:
    if not X.is_free:
        raise ValidationError(f"module {X.name} has relations; a lattice is required")


def _norm_kills(X: GModule, x: Sequence[int]) -> bool:
    return X.is_zero(norm_map(X) @ list(x))


def h_minus1_elements(G: FiniteGroup, X: GModule) -> tuple[CohomologyGroup, list[tuple]]:
    """``H^-1(G, X)`` with each generator given as a lattice vector ``x`` with ``N x = 0``."""
    _require_lattice(X)
    if find_generator(G) is None:
        raise ValidationError("group is not cyclic")
    H = tate_group(G, X, -1)
    xs = []
    for rep in H.representatives:
        x = rep[()]
        if not _norm_kills(X, x):
            raise TatekitError("degree -1 representative is not killed by the norm")
        xs.append(x)
    return H, xs


def z_cocycle(ctx: CyclicContext, X: GModule, x: Sequence[int]) -> InhCochain:
    """``z_x(sigma^g) = sum_{t=1..g} sigma^t x (x) e`` for ``0 <= g < n``, over ``X (x) B``."""
    if X.group is not ctx.G:
        raise ValidationError("lattice is defined over a different group")
    x = [int(v) for v in x]
    if len(x) != X.rank:
        raise ValidationError(f"x has {len(x)} coordinates, module {X.name} has rank {X.rank}")
    if not _norm_kills(X, x):
        raise ValidationError("x is not killed by the norm, so z_x is not a cocycle")
    T = product_module(X, ctx.B)
    partial = [[0] * X.rank]
    for t in range(1, ctx.n):
        step = X.apply(ctx.power(t), x)
        partial.append([a + b for a, b in zip(partial[-1], step)])
    e = list(ctx.e)
    z = InhCochain.from_function(T, 1, lambda g: tensor_coords(X, ctx.B, partial[ctx.log[g]], e))
    if not is_cocycle(z):
        raise TatekitError("z_x is not a cocycle")
    return z


@dataclass
class TheoremReport:
    equal: bool
    cocycle: bool
    cup_table: list
    closed_table: list

    @property
    def passed(self) -> bool:
        return self.equal and self.cocycle


def _rows(c: InhCochain) -> list:
    return [{"args": list(a), "value": list(v)} for a, v in c.items()]


def verify_theorem_1_2(ctx: CyclicContext, X: GModule, x: Sequence[int]) -> TheoremReport:
    """Compare ``x U a`` (regime 19' with p = q = 1) with the closed form ``z_x``."""
    a = fundamental_cocycle_model(ctx)
    zc = cup_inh(degree_minus1(X, x), a)
    closed = z_cocycle(ctx, X, x)
    equal = zc == closed
    return TheoremReport(equal, is_cocycle(zc),
                         [] if equal else _rows(zc), [] if equal else _rows(closed))


# -- maps between finite cohomology groups -------------------------------------------------

@dataclass
class MapReport:
    source: list
    target: list
    images: list
    homomorphism: bool
    injective: bool
    surjective: bool

    @property
    def bijective(self) -> bool:
        return self.homomorphism and self.injective and self.surjective


def induced_map_report(source: Sequence[int], target: Sequence[int], images: Sequence[Sequence[int]]) -> MapReport:
    """Check that ``Z/d_i -> prod Z/e_j``, generator ``i -> images[i]``, is a bijective homomorphism.

    Well-definedness needs ``d_i * images[i] = 0``.  Surjectivity is the
    vanishing of the cokernel; injectivity follows by comparing orders.
    """
    source, target = list(source), list(target)
    k = len(target)
    hom = all(all((d * y) % e == 0 for y, e in zip(img, target)) for d, img in zip(source, images))
    span = [list(img) for img in images] + [[e if i == j else 0 for i in range(k)] for j, e in enumerate(target)]
    M = IntMatrix.from_columns(span, k) if span else IntMatrix.zeros(k, 0)
    surjective = not quotient_invariants(IntMatrix.identity(k), M) if k else True
    src_order = int(np.prod(source)) if source else 1
    tgt_order = int(np.prod(target)) if target else 1
    injective = hom and surjective and src_order == tgt_order
    return MapReport(source, target, [list(i) for i in images], hom, injective, surjective)


def tate_iso_check(G: FiniteGroup, X: GModule, ctx: Optional[CyclicContext] = None) -> MapReport:
    """Check that ``x -> [z_x]`` maps ``H^-1(G, X)`` isomorphically onto ``H^1(G, X (x) B)``.

    The default model is ``B = Z`` with ``e = 1``, so the class of ``b`` plays
    the role of the fundamental class.
    """
    ctx = ctx if ctx is not None else cyclic_context(G.order, G=G)
    H, xs = h_minus1_elements(G, X)
    H1 = tate_group(G, product_module(X, ctx.B), 1)
    images = [reduce_class(H1, z_cocycle(ctx, X, x)) for x in xs]
    return induced_map_report(H.invariant_factors, H1.invariant_factors, images)


def shift_invariance(ctx: CyclicContext, X: GModule, x: Sequence[int], v: Sequence[int], g: int,
                     H1: Optional[CohomologyGroup] = None) -> bool:
    """True if ``z_{x + v - g v}`` is cohomologous to ``z_x``."""
    H1 = H1 if H1 is not None else tate_group(ctx.G, product_module(X, ctx.B), 1)
    gv = X.apply(g, v)
    shifted = [a + b - c for a, b, c in zip(x, v, gv)]
    return classes_equal(H1, z_cocycle(ctx, X, x), z_cocycle(ctx, X, shifted))


def periodicity_check(ctx: CyclicContext, X: GModule, k: int) -> MapReport:
    """Check that ``c -> c U b`` maps ``H^k(G, X)`` isomorphically onto ``H^{k+2}(G, X (x) Z)``."""
    b = b_cocycle(ctx, certify=False)
    Hk = tate_group(ctx.G, X, k)
    Hk2 = tate_group(ctx.G, product_module(X, b.module), k + 2)
    images = [reduce_class(Hk2, cup_inh(rep, b)) for rep in Hk.representatives]
    return induced_map_report(Hk.invariant_factors, Hk2.invariant_factors, images)


# -- lattice battery ------------------------------------------------------------------------

def sign_lattice(G: FiniteGroup, name: str = "Z(-1)") -> GModule:
    """``Z`` with the generator acting by ``-1`` (needs even order)."""
    sigma = find_generator(G)
    if sigma is None or G.order % 2:
        raise ValidationError("the sign lattice needs a cyclic group of even order")
    return lattice(G, {sigma: [[-1]]}, name=name)


def cyclotomic_lattice(G: FiniteGroup, name: str = "Z[zeta3]") -> GModule:
    """Rank 2 lattice with ``sigma`` acting by ``[[0, -1], [1, -1]]`` (needs order 3)."""
    sigma = find_generator(G)
    if sigma is None or G.order != 3:
        raise ValidationError("the cyclotomic lattice needs a cyclic group of order 3")
    return lattice(G, {sigma: [[0, -1], [1, -1]]}, name=name)


def _signed_cycles(n: int, rank: int, rng: np.random.Generator) -> list[list[int]]:
    """Signed permutation matrix of order dividing ``n``."""
    lengths = [L for L in range(1, rank + 1) if n % L == 0]
    M = [[0] * rank for _ in range(rank)]
    i = 0
    while i < rank:
        L = int(rng.choice([L for L in lengths if L <= rank - i]))
        signs = [1] * L
        if n % (2 * L) == 0 and rng.integers(2):
            signs[-1] = -1
        for k in range(L):
            M[i + (k + 1) % L][i + k] = signs[k]
        i += L
    return M


def random_lattice(G: FiniteGroup, rank: int, rng: np.random.Generator, name: str = "X") -> GModule:
    """Random finite-order lattice: a signed permutation action conjugated by a random unimodular matrix."""
    sigma = find_generator(G)
    if sigma is None:
        raise ValidationError("random lattices are built over cyclic groups")
    M = np.array(_signed_cycles(G.order, rank, rng), dtype=object)
    P = np.eye(rank, dtype=np.int64).astype(object)
    Pi = P.copy()
    for _ in range(2 * rank):
        i, j = rng.choice(rank, size=2, replace=False) if rank > 1 else (0, 0)
        if i == j:
            break
        q = int(rng.integers(-2, 3))
        E = np.eye(rank, dtype=np.int64).astype(object)
        E[i, j] = q
        Ei = np.eye(rank, dtype=np.int64).astype(object)
        Ei[i, j] = -q
        P, Pi = E.dot(P), Pi.dot(Ei)
    S = P.dot(M).dot(Pi)
    return lattice(G, {sigma: [[int(x) for x in row] for row in S]}, name=name)


def lattice_battery(rng: Optional[np.random.Generator] = None, random_per_order: int = 1,
                    orders: Sequence[int] = (2, 3, 4, 5)) -> list[GModule]:
    """Sign lattice over C2, cyclotomic lattice over C3, augmentation kernels, random lattices."""
    out = [sign_lattice(cyclic(2)), cyclotomic_lattice(cyclic(3))]
    for n in orders:
        out.append(augmentation_kernel(cyclic(n)))
    if rng is not None:
        for n in orders:
            for i in range(random_per_order):
                r = int(rng.integers(1, 4))
                out.append(random_lattice(cyclic(n), r, rng, name=f"X{n}_{i}"))
    return out
