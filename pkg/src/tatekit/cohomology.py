"""Tate cohomology groups, class reduction and connecting homomorphisms.

``tate_group`` computes ``H^n = K / J`` where ``J`` is the image of ``d^n``
plus the relations of ``C^n`` and ``K`` the preimage of the relations of
``C^{n+1}``.  Since ``|G|`` kills Tate cohomology, ``K`` sits inside the
saturation of ``J``; the engine therefore computes the (small) torsion of
``Z^N / J`` from a sparse echelon form of ``J``, then cuts it down to the
cocycles.  :func:`tate_invariants_dense` is the literal dense
kernel-mod-image computation, kept for cross-checks on small inputs.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .cochains import (InhCochain, arity, check_degree, diff_inh, differential_columns, generator_count,
                       is_cocycle, relation_columns)
from .errors import NotCocycleError, SizeGuardError, TatekitError, ValidationError
from .groups import FiniteGroup, find_generator
from .linalg import (EchelonLattice, IntMatrix, SmithDecomposition, kernel_basis, lattice_basis, quotient_invariants,
                     smith_normal_form, solve_in_lattice)
from .modules import GModule, norm_map

MAX_GENERATORS = 20000


@dataclass
class _Reducer:
    J: EchelonLattice
    cols: list[int]              # coordinates carrying the torsion of Z^N / J
    V: IntMatrix                 # torsion coordinates y = phi(x)|cols @ V
    rank: int                    # number of torsion relations; y[rank:] are free directions
    torsion: list[int]           # d_i > 1, in the order of the first SNF
    torsion_pos: list[int]       # positions of those d_i in y
    B: IntMatrix                 # basis (columns) of the cocycle lattice L in torsion coordinates
    U: IntMatrix                 # second SNF: class coordinates = U @ B^-1 z
    factors: list[int]           # invariant factors > 1
    factor_pos: list[int]        # their positions in U @ B^-1 z
    B_snf: SmithDecomposition    # cached decomposition of B for repeated solves


@dataclass
class CohomologyGroup:
    """``H^degree(G, A)`` with one representative cocycle per invariant factor."""

    group: FiniteGroup
    module: GModule
    degree: int
    invariant_factors: list[int]
    representatives: list[InhCochain] = field(default_factory=list)
    _reducer: Optional[_Reducer] = field(default=None, repr=False)

    @property
    def order(self) -> int:
        o = 1
        for d in self.invariant_factors:
            o *= d
        return o

    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def reduce(self, c: InhCochain) -> list[int]:
        return reduce_class(self, c)


def _guard(module: GModule, n: int, limit: int) -> None:
    for k in (n - 1, n + 1):
        size = generator_count(module, k)
        if size > limit:
            raise SizeGuardError(
                f"C^{k}(G, {module.name}) has {size} generators, above the limit {limit}")


def _dense_to_sparse(col: Sequence[int]) -> dict:
    return {i: int(x) for i, x in enumerate(col) if x}


def tate_group(G: FiniteGroup, A: GModule, n: int, max_generators: int = MAX_GENERATORS) -> CohomologyGroup:
    """Compute ``H^n(G, A)`` with representatives and a class reducer."""
    if A.group is not G:
        raise ValidationError("module is defined over a different group")
    check_degree(n)
    check_degree(n - 1)
    check_degree(n + 1)
    _guard(A, n, max_generators)
    N = generator_count(A, n)

    # relations go in first: they are sparse and keep later rows reduced
    J = EchelonLattice(N)
    for col in relation_columns(A, n):
        J.add(col)
    for col in differential_columns(A, n - 1):
        if col:
            J.add(col)

    # torsion of Z^N / J: unit pivots are eliminated, the rest is a small SNF
    big = [p for p, row in J.rows.items() if row[p] > 1]
    big.sort()
    phis = [J.reduce_units(J.rows[p]) for p in big]
    cols = sorted(set().union(*[set(v) for v in phis])) if phis else []
    pos = {c: i for i, c in enumerate(cols)}
    Y = IntMatrix([[v.get(c, 0) for c in cols] for v in phis], len(phis), len(cols))
    snf = smith_normal_form(Y, with_inverses=True)
    diag = snf.diagonal
    torsion_pos = [i for i, d in enumerate(diag) if d > 1]
    torsion = [diag[i] for i in torsion_pos]
    gens = []
    for i in torsion_pos:
        w = snf.V_inv.data[i]
        gens.append({cols[k]: x for k, x in enumerate(w) if x})

    # cocycle sublattice L of the torsion group Z^s (contains diag(torsion))
    s = len(gens)
    images = [diff_inh(InhCochain.from_flat(A, n, _sparse_to_dense(w, N))) for w in gens]
    M = generator_count(A, n + 1)
    aug = EchelonLattice(M + s)
    flat_images = [{k: int(x) for k, x in enumerate(img.table.reshape(-1)) if x} for img in images]
    if A.relation_rows:
        r = A.rank
        blocks = sorted({k // r for img in flat_images for k in img})
        for t in blocks:
            for _, rel in A.relation_rows:
                aug.add({t * r + i: x for i, x in enumerate(rel) if x})
    for i, row in enumerate(flat_images):
        row[M + i] = 1
        aug.add(row)
    basis = [[row.get(M + i, 0) for i in range(s)] for p, row in sorted(aug.rows.items()) if p >= M]
    B = IntMatrix.from_columns(basis, s) if basis else IntMatrix.zeros(s, 0)
    if B.cols != s:
        raise TatekitError(f"cocycle lattice has rank {B.cols}, expected {s}")
    B_snf = smith_normal_form(B)
    X_cols = []
    for i, d in enumerate(torsion):
        e = [0] * s
        e[i] = d
        x = solve_in_lattice(B, e, B_snf)
        if x is None:
            raise TatekitError("torsion relation outside the cocycle lattice")
        X_cols.append(x)
    X = IntMatrix.from_columns(X_cols, s) if s else IntMatrix.zeros(0, 0)
    snf2 = smith_normal_form(X, with_inverses=True)
    factor_pos = [j for j, e in enumerate(snf2.diagonal) if e > 1]
    factors = [snf2.diagonal[j] for j in factor_pos]
    if any(e == 0 for e in snf2.diagonal):
        raise TatekitError("cohomology group has positive free rank")

    reps = []
    for j in factor_pos:
        z = B @ snf2.U_inv.column(j)
        vec: dict[int, int] = {}
        for i, zi in enumerate(z):
            if zi:
                for k, x in gens[i].items():
                    vec[k] = vec.get(k, 0) + zi * x
        rep = InhCochain.from_flat(A, n, _sparse_to_dense(vec, N))
        reps.append(rep)
    reducer = _Reducer(J, cols, snf.V, len(phis), torsion, torsion_pos, B, snf2.U, factors, factor_pos, B_snf)
    return CohomologyGroup(G, A, n, factors, reps, reducer)


def _sparse_to_dense(v: dict, n: int) -> list[int]:
    out = [0] * n
    for k, x in v.items():
        out[k] = x
    return out


def reduce_class(H: CohomologyGroup, c: InhCochain) -> list[int]:
    """Coordinates of the class of the cocycle ``c`` (one residue per invariant factor)."""
    if c.degree != H.degree or not c.module.compatible(H.module):
        raise ValidationError("cochain does not match the cohomology group (degree or module)")
    if not is_cocycle(c):
        raise NotCocycleError(f"degree {c.degree} cochain is not a cocycle")
    R = H._reducer
    if R is None:
        raise TatekitError("this cohomology group carries no class reducer")
    phi = R.J.reduce_units(_dense_to_sparse(c.flat()))
    pos = {k: i for i, k in enumerate(R.cols)}
    if any(k not in pos for k in phi):
        raise TatekitError("cocycle has a component in a free direction of the quotient")
    x = [0] * len(R.cols)
    for k, v in phi.items():
        x[pos[k]] = v
    y = [sum(x[i] * R.V.data[i][j] for i in range(len(x))) for j in range(R.V.cols)]
    if any(y[R.rank:]):
        raise TatekitError("cocycle is not torsion modulo coboundaries")
    z = [y[p] % d for p, d in zip(R.torsion_pos, R.torsion)]
    xb = solve_in_lattice(R.B, z, R.B_snf)
    if xb is None:
        raise TatekitError("reduced cocycle outside the cocycle lattice")
    u = R.U @ xb if R.U.rows else []
    return [u[j] % d for j, d in zip(R.factor_pos, R.factors)]


def classes_equal(H: CohomologyGroup, c1: InhCochain, c2: InhCochain) -> bool:
    return reduce_class(H, c1) == reduce_class(H, c2)


def is_coboundary(H: CohomologyGroup, c: InhCochain) -> bool:
    return not any(reduce_class(H, c))


# -- dense cross-check and the cyclic oracle ------------------------------------------

def _dense_columns(cols: list[dict], rows: int) -> IntMatrix:
    M = IntMatrix.zeros(rows, len(cols))
    for j, col in enumerate(cols):
        for i, x in col.items():
            M.data[i][j] = x
    return M


def differential_matrix(G: FiniteGroup, A: GModule, n: int,
                        max_generators: int = MAX_GENERATORS) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Generator-level matrix of ``d: C^n -> C^{n+1}`` with the relation
    matrices of domain and codomain (block diagonal)."""
    check_degree(n)
    check_degree(n + 1)
    rows = generator_count(A, n + 1)
    if rows > max_generators:
        raise SizeGuardError(f"C^{n + 1} has {rows} generators, above the limit {max_generators}")
    N = generator_count(A, n)
    D = _dense_columns(differential_columns(A, n), rows)
    R_dom = _dense_columns(relation_columns(A, n), N)
    R_cod = _dense_columns(relation_columns(A, n + 1), rows)
    return D, R_dom, R_cod


def tate_invariants_dense(G: FiniteGroup, A: GModule, n: int) -> list[int]:
    """Invariants of ``H^n`` by the literal dense kernel-mod-image computation."""
    D, R_dom, R_cod = differential_matrix(G, A, n)
    N = D.cols
    K = kernel_basis(D.hstack(R_cod))
    K = lattice_basis(IntMatrix([row for row in K.data[:N]], N, K.cols))
    D_prev, _, _ = differential_matrix(G, A, n - 1)
    return quotient_invariants(K, D_prev.hstack(R_dom))


def _preimage(M: IntMatrix, R: IntMatrix) -> IntMatrix:
    """Basis of ``{v : M v in span(R)}``."""
    r = M.cols
    K = kernel_basis(M.hstack(R))
    return lattice_basis(IntMatrix(K.data[:r], r, K.cols))


def cyclic_oracle(G: FiniteGroup, A: GModule, n: int) -> CohomologyGroup:
    """Invariants of ``H^n`` for cyclic ``G`` from the 2-periodic complex
    ``A --(sigma - 1)--> A --N--> A --(sigma - 1)--> ...``."""
    sigma = find_generator(G)
    if sigma is None:
        raise ValidationError("cyclic_oracle needs a cyclic group")
    r = A.rank
    S = IntMatrix([[A.action[sigma][i][j] - (i == j) for j in range(r)] for i in range(r)], r, r)
    Nm = norm_map(A)
    R = A.relations
    if n % 2 == 0:
        K, I = _preimage(S, R), Nm.hstack(R)
    else:
        K, I = _preimage(Nm, R), S.hstack(R)
    return CohomologyGroup(G, A, n, quotient_invariants(K, I))


# -- short exact sequences and the connecting map -------------------------------------

@dataclass
class ShortExactSeq:
    """``0 -> A --iota--> B --pi--> C -> 0`` with maps given on generators."""

    A: GModule
    B: GModule
    C: GModule
    iota: IntMatrix
    pi: IntMatrix

    def __post_init__(self):
        validate_ses(self)

    def lift(self, v: Sequence[int]) -> list[int]:
        M = self.pi.hstack(self.C.relations)
        x = solve_in_lattice(M, v)
        if x is None:
            raise ValidationError("element of C has no preimage in B")
        return x[: self.B.rank]

    def pull_back(self, w: Sequence[int]) -> list[int]:
        M = self.iota.hstack(self.B.relations)
        x = solve_in_lattice(M, w)
        if x is None:
            raise TatekitError("element of B is not in the image of A; the sequence is not exact")
        return x[: self.A.rank]


def _in_lattice(m: GModule, v) -> bool:
    return not any(m.canonical(v))


def validate_ses(S: ShortExactSeq) -> None:
    A, B, C, iota, pi = S.A, S.B, S.C, S.iota, S.pi
    if not (A.group is B.group is C.group):
        raise ValidationError("short exact sequence over different groups")
    if iota.shape != (B.rank, A.rank) or pi.shape != (C.rank, B.rank):
        raise ValidationError("map shapes do not match module ranks")
    for c in A.relations.columns():
        if not _in_lattice(B, iota @ c):
            raise ValidationError("iota does not respect the relations of A")
    for c in B.relations.columns():
        if not _in_lattice(C, pi @ c):
            raise ValidationError("pi does not respect the relations of B")
    for g in A.group.elements():
        for j in range(A.rank):
            e = [int(i == j) for i in range(A.rank)]
            lhs = B.matrix(g) @ (iota @ e)
            rhs = iota @ (A.matrix(g) @ e)
            if not _in_lattice(B, [a - b for a, b in zip(lhs, rhs)]):
                raise ValidationError(f"iota is not equivariant at g={g}")
        for j in range(B.rank):
            e = [int(i == j) for i in range(B.rank)]
            lhs = C.matrix(g) @ (pi @ e)
            rhs = pi @ (B.matrix(g) @ e)
            if not _in_lattice(C, [a - b for a, b in zip(lhs, rhs)]):
                raise ValidationError(f"pi is not equivariant at g={g}")
    # injectivity: iota^-1(relations of B) == relations of A
    pre = _preimage(iota, B.relations)
    if quotient_invariants(pre, A.relations):
        raise ValidationError("iota is not injective")
    # surjectivity: image of pi plus relations is everything
    if quotient_invariants(IntMatrix.identity(C.rank), pi.hstack(C.relations)):
        raise ValidationError("pi is not surjective")
    # exactness in the middle: pi^-1(relations of C) == image(iota) + relations of B
    ker = _preimage(pi, C.relations)
    im = iota.hstack(B.relations)
    for col in im.columns():
        if solve_in_lattice(ker, col) is None:
            raise ValidationError("pi o iota is not zero")
    if quotient_invariants(ker, im):
        raise ValidationError("image of iota differs from the kernel of pi")


def multiplication_sequence(G: FiniteGroup, n: int) -> ShortExactSeq:
    """``0 -> Z --(x n)--> Z --> Z/n -> 0`` with trivial actions."""
    from .modules import trivial_Z, trivial_Z_mod
    return ShortExactSeq(trivial_Z(G), trivial_Z(G), trivial_Z_mod(G, n),
                         IntMatrix([[n]]), IntMatrix([[1]]))


def connecting_hom(S: ShortExactSeq, c: InhCochain, n: Optional[int] = None) -> InhCochain:
    """Connecting map ``C^n(G, C) -> C^{n+1}(G, A)`` on a cocycle.

    Lifts ``c`` valuewise through ``pi``, takes the coboundary over ``B`` and
    pulls the result back through ``iota``.
    """
    n = c.degree if n is None else n
    if n != c.degree:
        raise ValidationError(f"cochain has degree {c.degree}, not {n}")
    if not c.module.compatible(S.C):
        raise ValidationError("cochain does not live over the quotient module")
    if not is_cocycle(c):
        raise NotCocycleError("connecting map needs a cocycle")
    lifts: dict[tuple, list[int]] = {}
    rows = []
    for v in (tuple(int(x) for x in row) for row in c.table):
        if v not in lifts:
            lifts[v] = S.lift(v)
        rows.append(lifts[v])
    lifted = InhCochain(n, S.B, np.array(rows, dtype=object).reshape(len(rows), S.B.rank))
    d = diff_inh(lifted)
    back: dict[tuple, list[int]] = {}
    out = []
    for w in (tuple(int(x) for x in row) for row in d.table):
        if w not in back:
            back[w] = S.pull_back(w)
        out.append(back[w])
    return InhCochain(n + 1, S.A, np.array(out, dtype=object).reshape(len(out), S.A.rank))
