"""Command-line front end: ``tatekit <command> --spec problem.toml ...``.

Results go to stdout as JSON with sorted keys.  Errors are printed as a JSON
object ``{"error": {"type": ..., "message": ...}}``; the exit code is 1 for
invalid input and 2 when a size guard refuses the computation.
"""
from __future__ import annotations

import argparse
import json
import sys
from math import gcd
from pathlib import Path
from typing import Optional, Sequence

from .cochains import is_cocycle
from .cohomology import tate_group
from .cup import cup_classes, product_module
from .cyclic_tate import (b_cocycle, cyclic_context, fundamental_cocycle_model, h_minus1_elements, verify_theorem_1_2,
                          z_cocycle)
from .errors import SizeGuardError, TatekitError
from .modules import trivial_Z
from .problem import ProblemSpec, cochain_from_json, cochain_to_json, parse_spec
from .verify import SUITES, run_suite


def _load_spec(path: Optional[str]) -> ProblemSpec:
    if path is None:
        raise TatekitError("--spec is required for this command")
    return parse_spec(Path(path))


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise TatekitError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise TatekitError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def cmd_cohomology(args) -> dict:
    spec = _load_spec(args.spec)
    A = spec.module(args.module)
    H = tate_group(spec.group, A, args.degree)
    return {
        "degree": args.degree,
        "module": args.module,
        "invariant_factors": H.invariant_factors,
        "representatives": [cochain_to_json(r, args.module) for r in H.representatives],
    }


def cmd_cup(args) -> dict:
    spec = _load_spec(args.spec)
    c1 = cochain_from_json(_load_json(args.left), spec)
    c2 = cochain_from_json(_load_json(args.right), spec)
    H1 = tate_group(spec.group, c1.module, c1.degree)
    H2 = tate_group(spec.group, c2.module, c2.degree)
    target = tate_group(spec.group, product_module(c1.module, c2.module), c1.degree + c2.degree)
    prod, coords = cup_classes(H1, H2, c1, c2, target)
    return {
        "product": cochain_to_json(prod),
        "invariant_factors": target.invariant_factors,
        "class": coords,
    }


def _context(args, spec: Optional[ProblemSpec], n: Optional[int]):
    if args.coeff is not None:
        if spec is None:
            raise TatekitError("--coeff needs --spec")
        B = spec.module(args.coeff)
        e = args.e if args.e is not None else [1] + [0] * (B.rank - 1)
        G = spec.group
        if n is not None and n != G.order:
            raise TatekitError(f"--n {n} does not match the group order {G.order}")
        return cyclic_context(G.order, B, e, G=G)
    if args.e is not None:
        raise TatekitError("--e needs --coeff")
    if spec is not None:
        G = spec.group
        if n is not None and n != G.order:
            raise TatekitError(f"--n {n} does not match the group order {G.order}")
        return cyclic_context(G.order, trivial_Z(G), [1], G=G)
    if n is None:
        raise TatekitError("--n or --spec is required")
    return cyclic_context(n)


def cmd_fundamental(args) -> dict:
    spec = _load_spec(args.spec) if args.spec else None
    ctx = _context(args, spec, args.n)
    b = b_cocycle(ctx)
    a = fundamental_cocycle_model(ctx)
    H2 = tate_group(ctx.G, b.module, 2)
    coords = H2.reduce(b)
    order = _class_order(coords, H2.invariant_factors)
    return {
        "n": ctx.n,
        "sigma": ctx.sigma,
        "coefficients": ctx.B.name,
        "e": list(ctx.e),
        "b": cochain_to_json(b),
        "a": cochain_to_json(a),
        "b_class_order": order,
        "H2_invariant_factors": H2.invariant_factors,
    }


def _class_order(coords, factors) -> int:
    order = 1
    for c, d in zip(coords, factors):
        k = d // gcd(c, d)
        order = order * k // gcd(order, k)
    return order


def cmd_torus(args) -> dict:
    spec = _load_spec(args.spec)
    X = spec.module(args.module)
    ctx = _context(args, spec, None)
    H, xs = h_minus1_elements(spec.group, X)
    out = []
    for x in xs:
        z = z_cocycle(ctx, X, x)
        report = verify_theorem_1_2(ctx, X, x)
        out.append({"x": list(x), "z": cochain_to_json(z), "cocycle": is_cocycle(z),
                    "equals_cup_with_a": report.equal})
    return {"module": args.module, "coefficients": ctx.B.name, "e": list(ctx.e),
            "H_minus1_invariant_factors": H.invariant_factors, "generators": out}


def cmd_verify(args) -> dict:
    return run_suite(args.suite, args.max_order, args.max_degree, args.seed)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tatekit", description="Tate cohomology and cup products of finite groups.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("cohomology", help="invariant factors and representatives of H^n(G, A)")
    c.add_argument("--spec", required=True)
    c.add_argument("--module", required=True)
    c.add_argument("--degree", type=int, required=True)
    c.set_defaults(func=cmd_cohomology)

    c = sub.add_parser("cup", help="cup product of two cocycle files and its class")
    c.add_argument("--spec", required=True)
    c.add_argument("--left", required=True)
    c.add_argument("--right", required=True)
    c.set_defaults(func=cmd_cup)

    c = sub.add_parser("fundamental", help="the cocycles b and a = b U e over a cyclic group")
    c.add_argument("--n", type=int)
    c.add_argument("--spec")
    c.add_argument("--coeff", help="name of the coefficient module B in the problem file")
    c.add_argument("--e", type=int, nargs="+", help="coordinates of the invariant element e of B")
    c.set_defaults(func=cmd_fundamental)

    c = sub.add_parser("torus", help="H^-1 of a lattice and the cocycles z_x")
    c.add_argument("--spec", required=True)
    c.add_argument("--module", required=True)
    c.add_argument("--coeff")
    c.add_argument("--e", type=int, nargs="+")
    c.set_defaults(func=cmd_torus)

    c = sub.add_parser("verify", help="run property suites")
    c.add_argument("--suite", choices=SUITES + ("all",), default="all")
    c.add_argument("--max-order", type=int, default=4)
    c.add_argument("--max-degree", type=int, default=3)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_verify)
    return p


def _emit(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = args.func(args)
    except SizeGuardError as exc:
        _emit({"error": {"type": "SizeGuardError", "message": str(exc)}})
        return 2
    except TatekitError as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}})
        return 1
    _emit(doc)
    if args.command == "verify" and not doc["passed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
