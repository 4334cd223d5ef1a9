"""Property suites behind ``tatekit verify``.

Every suite draws its random data from a generator seeded by the suite name
and the user seed, so a suite gives the same report alone or inside ``all``.
Reports are plain dicts ready for JSON output.
"""
from __future__ import annotations

import zlib
from typing import Callable, Optional

import numpy as np

from .cochains import MAX_DEGREE, diff_hom, diff_inh, hom_to_inh, inh_to_hom, random_cochain
from .cohomology import connecting_hom, cyclic_oracle, multiplication_sequence, tate_group
from .cup import cup_hom, cup_inh, product_module, regime
from .cyclic_tate import (b_closed_form, chi_cocycle, cyclic_context, cyclotomic_lattice, degree0,
                          fundamental_closed_form, h_minus1_elements, periodicity_check, random_lattice,
                          shift_invariance, sign_lattice, tate_iso_check, untensor_Z, verify_theorem_1_2)
from .errors import ValidationError
from .groups import FiniteGroup, cyclic, direct_product, find_generator
from .modules import GModule, augmentation_kernel, make_module, regular_ZG, trivial_Z, trivial_Z_mod
from .problem import cochain_to_json

SUITES = ("roundtrip", "d2", "cup-transport", "leibniz", "oracle", "theorem12", "tate-iso")
LEIBNIZ_CONVENTION = "d(c1 U c2) = d(c1) U c2 + (-1)^m c1 U d(c2), m = deg c1"
MAX_FAILURES = 3


class _Report:
    def __init__(self, name: str):
        self.name = name
        self.checks = 0
        self.failures: list[dict] = []
        self.failed = 0
        self.details: dict = {}

    def check(self, ok: bool, dump: Callable[[], dict]) -> bool:
        self.checks += 1
        if not ok:
            self.failed += 1
            if len(self.failures) < MAX_FAILURES:
                self.failures.append(dump())
        return ok

    def result(self) -> dict:
        return {"suite": self.name, "passed": self.failed == 0, "checks": self.checks,
                "failed": self.failed, "failures": self.failures, "details": self.details}


def _rng(seed: int, name: str) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(name.encode())])


# -- batteries ----------------------------------------------------------------------------

def sweep_groups(max_order: int) -> list[FiniteGroup]:
    """Cyclic groups of order 2..max_order plus the Klein four-group and C2 x C3 when in range."""
    out = [cyclic(n) for n in range(2, max_order + 1)]
    if max_order >= 4:
        out.append(direct_product(cyclic(2), cyclic(2)))
    if max_order >= 6:
        out.append(direct_product(cyclic(2), cyclic(3)))
    return out


def _group_label(G: FiniteGroup) -> str:
    return f"order {G.order}, " + ("cyclic" if find_generator(G) is not None else "non-cyclic")


def _sign_module(G: FiniteGroup) -> Optional[GModule]:
    """A rank 1 lattice with a nontrivial sign character, when one is easy to write down."""
    sigma = find_generator(G)
    if sigma is not None:
        return sign_lattice(G) if G.order % 2 == 0 else None
    if G.order == 4:
        return make_module(G, {1: [[-1]], 2: [[1]]}, name="Z(-1)")
    return None


def module_battery(G: FiniteGroup, rng: np.random.Generator) -> list[GModule]:
    mods = [trivial_Z(G), trivial_Z_mod(G, 2), regular_ZG(G), augmentation_kernel(G)]
    s = _sign_module(G)
    if s is not None:
        mods.append(s)
    if find_generator(G) is not None:
        mods.append(random_lattice(G, 2, rng, name="X2"))
    return mods


def oracle_battery(G: FiniteGroup, rng: np.random.Generator) -> list[GModule]:
    mods = [trivial_Z(G), trivial_Z_mod(G, 2), trivial_Z_mod(G, 3), regular_ZG(G)]
    if G.order % 2 == 0:
        mods.append(sign_lattice(G))
    if G.order == 3:
        mods.append(cyclotomic_lattice(G))
    mods.append(random_lattice(G, 2, rng, name="X2"))
    return mods


def lattice_battery(max_order: int, rng: np.random.Generator) -> list[GModule]:
    out = []
    if max_order >= 2:
        out.append(sign_lattice(cyclic(2)))
    if max_order >= 3:
        out.append(cyclotomic_lattice(cyclic(3)))
    for n in range(2, min(max_order, 5) + 1):
        out.append(augmentation_kernel(cyclic(n)))
    for n in range(2, max_order + 1):
        out.append(random_lattice(cyclic(n), int(rng.integers(1, 4)), rng, name=f"X{n}"))
    return out


def _dump(**kw) -> dict:
    out = {}
    for k, v in kw.items():
        if hasattr(v, "table") and hasattr(v, "degree"):
            out[k] = cochain_to_json(v)
        elif isinstance(v, GModule):
            out[k] = v.name
        elif isinstance(v, FiniteGroup):
            out[k] = _group_label(v)
        else:
            out[k] = v
    return out


# -- suites -------------------------------------------------------------------------------------

def suite_roundtrip(max_order: int, max_degree: int, seed: int = 0, samples: int = 10) -> dict:
    rep = _Report("roundtrip")
    rng = _rng(seed, rep.name)
    for G in sweep_groups(max_order):
        for A in module_battery(G, rng):
            for n in range(-max_degree, max_degree + 1):
                for _ in range(samples):
                    c = random_cochain(A, n, rng)
                    f = inh_to_hom(c)
                    rep.check(hom_to_inh(f) == c, lambda: _dump(group=G, module=A, degree=n, cochain=c))
                    rep.check(inh_to_hom(hom_to_inh(f)) == f, lambda: _dump(group=G, module=A, degree=n, cochain=c))
    return rep.result()


def suite_d2(max_order: int, max_degree: int, seed: int = 0, samples: int = 10) -> dict:
    rep = _Report("d2")
    rng = _rng(seed, rep.name)
    for G in sweep_groups(max_order):
        for A in module_battery(G, rng):
            for n in range(-max_degree, max_degree + 1):
                for _ in range(samples):
                    c = random_cochain(A, n, rng)
                    rep.check(diff_inh(diff_inh(c)).is_zero(), lambda: _dump(group=G, module=A, degree=n, cochain=c))
                    f = inh_to_hom(c)
                    rep.check(diff_hom(diff_hom(f)).is_zero(), lambda: _dump(group=G, module=A, degree=n, cochain=c))
    return rep.result()


def cup_degree_pairs(bound: int = 2, total: int = 3) -> list[tuple[int, int]]:
    return [(m, n) for m in range(-bound, bound + 1) for n in range(-bound, bound + 1) if abs(m + n) <= total]


def _cup_modules(G: FiniteGroup, rng: np.random.Generator) -> list[GModule]:
    mods = [trivial_Z(G), augmentation_kernel(G)]
    s = _sign_module(G)
    mods.append(s if s is not None else trivial_Z_mod(G, 3))
    return mods


def suite_cup_transport(max_order: int, max_degree: int, seed: int = 0, samples: int = 3) -> dict:
    rep = _Report("cup-transport")
    rng = _rng(seed, rep.name)
    per_regime: dict[str, int] = {}
    for G in sweep_groups(min(max_order, 4)):
        mods = _cup_modules(G, rng)
        for m, n in cup_degree_pairs():
            tag = regime(m, n).tag
            for _ in range(samples):
                A, B = mods[int(rng.integers(len(mods)))], mods[int(rng.integers(len(mods)))]
                c1, c2 = random_cochain(A, m, rng), random_cochain(B, n, rng)
                lhs = cup_inh(c1, c2)
                rhs = hom_to_inh(cup_hom(inh_to_hom(c1), inh_to_hom(c2)))
                rep.check(lhs == rhs, lambda: _dump(group=G, regime=tag, left=c1, right=c2))
                per_regime[tag] = per_regime.get(tag, 0) + 1
    rep.details["pairs_per_regime"] = dict(sorted(per_regime.items()))
    return rep.result()


def suite_leibniz(max_order: int, max_degree: int, seed: int = 0, samples: int = 3) -> dict:
    rep = _Report("leibniz")
    rng = _rng(seed, rep.name)
    alternative_holds = True
    for G in sweep_groups(min(max_order, 4)):
        mods = _cup_modules(G, rng)
        for m, n in cup_degree_pairs():
            for _ in range(samples):
                A, B = mods[int(rng.integers(len(mods)))], mods[int(rng.integers(len(mods)))]
                c1, c2 = random_cochain(A, m, rng), random_cochain(B, n, rng)
                lhs = diff_inh(cup_inh(c1, c2))
                first, second = cup_inh(diff_inh(c1), c2), cup_inh(c1, diff_inh(c2))
                s = (-1) ** m
                rep.check(lhs == first + s * second,
                          lambda: _dump(group=G, regime=regime(m, n).tag, left=c1, right=c2))
                alternative_holds = alternative_holds and lhs == s * first + second
    rep.details["convention"] = LEIBNIZ_CONVENTION
    rep.details["alternative_sign_also_holds"] = alternative_holds
    return rep.result()


def suite_oracle(max_order: int, max_degree: int, seed: int = 0) -> dict:
    rep = _Report("oracle")
    rng = _rng(seed, rep.name)
    for k in range(2, max_order + 1):
        G = cyclic(k)
        for A in oracle_battery(G, rng):
            for n in range(-max_degree, max_degree + 1):
                got = tate_group(G, A, n).invariant_factors
                want = cyclic_oracle(G, A, n).invariant_factors
                rep.check(got == want, lambda: _dump(group=G, module=A, degree=n, engine=got, oracle=want,
                                                     action=[list(r) for r in A.action[find_generator(G)]]))
    return rep.result()


def suite_theorem12(max_order: int, max_degree: int, seed: int = 0) -> dict:
    rep = _Report("theorem12")
    rng = _rng(seed, rep.name)
    orders = range(2, max_order + 1)
    for n in orders:
        ctx = cyclic_context(n)
        G = ctx.G
        b = b_closed_form(ctx)
        delta = connecting_hom(multiplication_sequence(G, n), chi_cocycle(ctx))
        rep.check(delta == b, lambda: _dump(check="b = delta(chi)", n=n, b=b, delta=delta))
        H2 = tate_group(G, b.module, 2)
        coords = H2.reduce(b)
        rep.check(H2.invariant_factors == [n] and coords and np.gcd(coords[0], n) == 1,
                  lambda: _dump(check="class order of b", n=n, factors=H2.invariant_factors, coords=coords))
        for B in (trivial_Z(G), trivial_Z_mod(G, 2), trivial_Z_mod(G, 5)):
            c = cyclic_context(n, B, [1])
            a = fundamental_closed_form(c)
            prod = untensor_Z(cup_inh(b, degree0(B, c.e)), B)
            rep.check(prod == a, lambda: _dump(check="a = b U e", n=n, module=B, a=a, cup=prod))
    for X in lattice_battery(max_order, rng):
        G = X.group
        _, xs = h_minus1_elements(G, X)
        for m in range(1, 7):
            B = trivial_Z(G) if m == 1 else trivial_Z_mod(G, m)
            ctx = cyclic_context(G.order, B, [1])
            for x in xs:
                r = verify_theorem_1_2(ctx, X, x)
                rep.check(r.passed, lambda: _dump(check="x U a = z_x", lattice=X, coeff=B, x=list(x),
                                                  cup=r.cup_table, closed=r.closed_table))
    return rep.result()


def suite_tate_iso(max_order: int, max_degree: int, seed: int = 0, shifts: int = 5) -> dict:
    rep = _Report("tate-iso")
    rng = _rng(seed, rep.name)
    for X in lattice_battery(max_order, rng):
        G = X.group
        r = tate_iso_check(G, X)
        rep.check(r.bijective, lambda: _dump(check="tate map", lattice=X, source=r.source, target=r.target,
                                             images=r.images))
        ctx = cyclic_context(G.order, G=G)
        H1 = tate_group(G, product_module(X, ctx.B), 1)
        _, xs = h_minus1_elements(G, X)
        for x in xs:
            for _ in range(shifts):
                v = [int(t) for t in rng.integers(-3, 4, size=X.rank)]
                g = int(rng.integers(G.order))
                ok = shift_invariance(ctx, X, x, v, g, H1)
                rep.check(ok, lambda: _dump(check="shift", lattice=X, x=list(x), v=v, g=g))
        for k in range(-2, 2):
            if abs(k) > max_degree or abs(k + 2) > max_degree:
                continue
            p = periodicity_check(ctx, X, k)
            rep.check(p.bijective, lambda: _dump(check="periodicity", lattice=X, degree=k, source=p.source,
                                                 target=p.target, images=p.images))
    return rep.result()


RUNNERS = {
    "roundtrip": suite_roundtrip,
    "d2": suite_d2,
    "cup-transport": suite_cup_transport,
    "leibniz": suite_leibniz,
    "oracle": suite_oracle,
    "theorem12": suite_theorem12,
    "tate-iso": suite_tate_iso,
}


def run_suite(name: str, max_order: int = 4, max_degree: int = 3, seed: int = 0) -> dict:
    """Run one suite or ``"all"``; the result has a top-level ``passed`` flag."""
    if max_order < 2:
        raise ValidationError("max_order must be at least 2")
    if not 0 <= max_degree <= MAX_DEGREE - 2:
        raise ValidationError(f"max_degree must lie in 0..{MAX_DEGREE - 2}")
    params = {"max_order": max_order, "max_degree": max_degree, "seed": seed}
    if name == "all":
        reports = {s: RUNNERS[s](max_order, max_degree, seed) for s in SUITES}
        return {"suite": "all", "parameters": params, "passed": all(r["passed"] for r in reports.values()),
                "suites": reports}
    if name not in RUNNERS:
        raise KeyError(name)
    out = RUNNERS[name](max_order, max_degree, seed)
    out["parameters"] = params
    return out
