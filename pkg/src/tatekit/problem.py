"""Problem files (TOML in) and cocycle documents (JSON out).

A problem file declares one group and any number of named modules::

    [group]
    kind = "cyclic"          # or "product" (factors = [...]) or "explicit" (table = [...])
    n = 4

    [module.X]
    kind = "lattice"         # trivial_Z, trivial_Z_mod, lattice, lattice_mod, regular_ZG,
    action_sigma = [[-1]]    # augmentation_kernel, tensor

    [module.T]
    kind = "tensor"
    factors = ["X", "X"]

Lattice actions are given by ``action_sigma`` (cyclic groups only), by
``action_generators`` (a table from element index to matrix) or by
``action`` (one matrix per element).  ``relations`` lists relation vectors.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Union

import numpy as np
import tomli

from .cochains import InhCochain, arity, check_degree, tuple_index
from .errors import ValidationError
from .groups import FiniteGroup, build_group, find_generator
from .modules import GModule, augmentation_kernel, build_module, tensor_module

MAX_GROUP_ORDER = 64


@dataclass
class ProblemSpec:
    group: FiniteGroup
    modules: dict[str, GModule] = field(default_factory=dict)
    raw: dict = field(default_factory=dict, repr=False)

    def module(self, name: str) -> GModule:
        try:
            return self.modules[name]
        except KeyError:
            known = ", ".join(sorted(self.modules)) or "none"
            raise ValidationError(f"unknown module {name!r} (declared: {known})") from None


def _load_toml(source: Union[str, Path]) -> dict:
    if isinstance(source, Path):
        path = source
        try:
            text = path.read_text()
        except OSError as exc:
            raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    else:
        text = str(source)
    try:
        return tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ValidationError(f"TOML syntax error: {exc}") from None


def _module_spec(G: FiniteGroup, name: str, desc: Mapping[str, Any]) -> dict:
    desc = dict(desc)
    desc.setdefault("name", name)
    if "action_sigma" in desc:
        sigma = find_generator(G)
        if sigma is None:
            raise ValidationError(f"module {name}: action_sigma needs a cyclic group")
        desc["action"] = {sigma: desc.pop("action_sigma")}
    elif "action_generators" in desc:
        desc["action"] = {int(k): v for k, v in desc.pop("action_generators").items()}
    if desc.get("kind") == "lattice" and desc.get("relations"):
        desc["kind"] = "lattice_mod"
    return desc


def parse_spec(source: Union[str, Path, Mapping]) -> ProblemSpec:
    """Parse and validate a problem: a ``Path``, TOML text, or an already loaded mapping."""
    raw = dict(source) if isinstance(source, Mapping) else _load_toml(source)
    if "group" not in raw:
        raise ValidationError("problem file has no [group] table")
    G = build_group(raw["group"])
    if G.order > MAX_GROUP_ORDER:
        raise ValidationError(f"group order {G.order} exceeds the limit {MAX_GROUP_ORDER}")
    decls = raw.get("module", {})
    modules: dict[str, GModule] = {}
    pending = dict(decls)
    # tensor modules may refer to modules declared after them
    while pending:
        progress = False
        for name, desc in list(pending.items()):
            kind = desc.get("kind")
            try:
                if kind == "tensor":
                    factors = desc.get("factors", [])
                    if len(factors) < 2:
                        raise ValidationError(f"module {name}: a tensor needs at least two factors")
                    if not all(f in modules for f in factors):
                        missing = [f for f in factors if f not in decls]
                        if missing:
                            raise ValidationError(f"module {name}: unknown factor {missing[0]!r}")
                        continue
                    M = modules[factors[0]]
                    for i, f in enumerate(factors[1:], 2):
                        M = tensor_module(M, modules[f], name=name if i == len(factors) else None)
                    modules[name] = M
                elif kind == "augmentation_kernel":
                    modules[name] = augmentation_kernel(G, name=name)
                else:
                    modules[name] = build_module(G, _module_spec(G, name, desc))
            except ValidationError as exc:
                msg = str(exc)
                raise ValidationError(msg if msg.startswith(f"module {name}") else f"module {name}: {msg}") from None
            except (KeyError, TypeError, IndexError) as exc:
                raise ValidationError(f"module {name}: malformed description ({exc})") from None
            del pending[name]
            progress = True
        if not progress:
            raise ValidationError(f"circular tensor definitions among {sorted(pending)}")
    return ProblemSpec(G, modules, raw)


# -- cocycle documents -----------------------------------------------------------------

def cochain_to_json(c: InhCochain, name: str | None = None) -> dict:
    return {
        "degree": c.degree,
        "arity": c.arity,
        "module": name or c.module.name,
        "table": [{"args": list(a), "value": list(v)} for a, v in c.items()],
    }


def _element(G: FiniteGroup, x: Any) -> int:
    if isinstance(x, Mapping):
        if set(x) != {"sigma_power"}:
            raise ValidationError(f"element {x!r}: expected an index or {{\"sigma_power\": k}}")
        sigma = find_generator(G)
        if sigma is None:
            raise ValidationError("sigma_power needs a cyclic group")
        return G.power(sigma, int(x["sigma_power"]))
    if isinstance(x, bool) or not isinstance(x, int):
        raise ValidationError(f"element {x!r} is not an integer index")
    if not 0 <= x < G.order:
        raise ValidationError(f"element index {x} out of range 0..{G.order - 1}")
    return x


def cochain_from_json(doc: Mapping, spec: ProblemSpec) -> InhCochain:
    """Read a cocycle document; entries missing from the table are zero."""
    try:
        n = int(doc["degree"])
        A = spec.module(doc["module"])
        table = doc["table"]
    except KeyError as exc:
        raise ValidationError(f"cochain document lacks the field {exc.args[0]!r}") from None
    check_degree(n)
    k = arity(n)
    if "arity" in doc and int(doc["arity"]) != k:
        raise ValidationError(f"degree {n} cochains have arity {k}, document says {doc['arity']}")
    G = spec.group
    vals = np.zeros((G.order ** k, A.rank), dtype=object)
    seen = set()
    for entry in table:
        args = [_element(G, x) for x in entry.get("args", [])]
        if len(args) != k:
            raise ValidationError(f"entry {entry!r} has {len(args)} arguments, expected {k}")
        value = entry.get("value")
        if not isinstance(value, list) or len(value) != A.rank:
            raise ValidationError(f"entry {entry!r}: value must list {A.rank} integers")
        i = tuple_index(G, args)
        if i in seen:
            raise ValidationError(f"duplicate table entry for arguments {args}")
        seen.add(i)
        vals[i] = [int(v) for v in value]
    return InhCochain(n, A, vals)


def group_to_json(G: FiniteGroup) -> dict:
    return {"order": G.order, "generator": find_generator(G)}

