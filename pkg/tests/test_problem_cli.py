import json

import pytest

from tatekit.cli import main
from tatekit.cochains import random_cochain
from tatekit.errors import ValidationError
from tatekit.problem import cochain_from_json, cochain_to_json, parse_spec

C4_SIGN = """
[group]
kind = "cyclic"
n = 4

[module.X]
kind = "lattice"
action_sigma = [[-1]]
"""

C2_SPEC = """
[group]
kind = "cyclic"
n = 2

[module.S]
kind = "lattice"
action_sigma = [[-1]]

[module.T]
kind = "tensor"
factors = ["S", "S"]

[module.R]
kind = "regular_ZG"

[module.Z]
kind = "trivial_Z"

[module.M]
kind = "trivial_Z_mod"
m = 2
"""


def run(capsys, *argv):
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


@pytest.fixture
def c2_file(tmp_path):
    p = tmp_path / "c2.toml"
    p.write_text(C2_SPEC)
    return p


def test_parse_examples():
    spec = parse_spec(C4_SIGN)
    assert spec.group.order == 4
    assert spec.module("X").action[spec.group.inverse(1)] == ((-1,),)
    spec = parse_spec(C2_SPEC)
    T = spec.module("T")
    assert T.rank == 1 and T.action[1] == ((1,),)


def test_tensor_forward_reference():
    spec = parse_spec("""
[group]
kind = "cyclic"
n = 3
[module.T]
kind = "tensor"
factors = ["A", "B"]
[module.A]
kind = "trivial_Z"
[module.B]
kind = "trivial_Z_mod"
m = 4
""")
    assert spec.module("T").abelian_invariants() == [4]


def test_wrong_order_action_is_named():
    with pytest.raises(ValidationError, match="module X"):
        parse_spec('[group]\nkind = "cyclic"\nn = 3\n[module.X]\nkind = "lattice"\naction_sigma = [[-1]]\n')


def test_syntax_error_has_position():
    with pytest.raises(ValidationError, match="line"):
        parse_spec('[group\nkind = "cyclic"\n')


def test_unknown_factor_and_module():
    with pytest.raises(ValidationError, match="unknown factor"):
        parse_spec('[group]\nkind = "cyclic"\nn = 2\n[module.T]\nkind = "tensor"\nfactors = ["A", "B"]\n')
    with pytest.raises(ValidationError, match="unknown module"):
        parse_spec(C2_SPEC).module("nope")


def test_cochain_json_round_trip(rng):
    spec = parse_spec(C2_SPEC)
    for name in ("S", "R", "M"):
        A = spec.module(name)
        for n in range(-3, 4):
            c = random_cochain(A, n, rng)
            doc = json.loads(json.dumps(cochain_to_json(c, name)))
            assert cochain_from_json(doc, spec) == c


def test_cochain_json_conveniences():
    spec = parse_spec(C2_SPEC)
    doc = {"degree": 1, "module": "S", "table": [{"args": [{"sigma_power": 1}], "value": [1]}]}
    c = cochain_from_json(doc, spec)
    assert c[1] == (1,) and c[0] == (0,)
    with pytest.raises(ValidationError, match="duplicate"):
        cochain_from_json({"degree": 1, "module": "S", "table": [{"args": [1], "value": [1]}] * 2}, spec)
    with pytest.raises(ValidationError, match="arity"):
        cochain_from_json({"degree": 2, "arity": 1, "module": "S", "table": []}, spec)


def test_cli_fundamental(capsys):
    code, doc = run(capsys, "fundamental", "--n", "2")
    assert code == 0
    nonzero = [e for e in doc["b"]["table"] if any(e["value"])]
    assert nonzero == [{"args": [1, 1], "value": [1]}]
    assert doc["b_class_order"] == 2


def test_cli_fundamental_with_coefficients(capsys, c2_file):
    code, doc = run(capsys, "fundamental", "--spec", str(c2_file), "--coeff", "M", "--e", "1")
    assert code == 0 and doc["coefficients"] == "M"
    code, doc = run(capsys, "fundamental", "--spec", str(c2_file), "--coeff", "S", "--e", "1")
    assert code == 1 and "invariant" in doc["error"]["message"]


def test_cli_torus(capsys, c2_file):
    code, doc = run(capsys, "torus", "--spec", str(c2_file), "--module", "S")
    assert code == 0
    assert doc["H_minus1_invariant_factors"] == [2]
    (gen,) = doc["generators"]
    assert gen["x"] == [1] and gen["cocycle"] and gen["equals_cup_with_a"]
    assert gen["z"]["table"] == [{"args": [0], "value": [0]}, {"args": [1], "value": [-1]}]


def test_cli_cohomology(capsys, c2_file):
    for d in range(-3, 4):
        code, doc = run(capsys, "cohomology", "--spec", str(c2_file), "--module", "R", "--degree", str(d))
        assert code == 0 and doc["invariant_factors"] == []
    code, doc = run(capsys, "cohomology", "--spec", str(c2_file), "--module", "Z", "--degree", "2")
    assert doc["invariant_factors"] == [2] and len(doc["representatives"]) == 1


def test_cli_cup(capsys, c2_file, tmp_path):
    z = {"degree": 1, "module": "S", "table": [{"args": [1], "value": [1]}]}
    p = tmp_path / "z.json"
    p.write_text(json.dumps(z))
    code, doc = run(capsys, "cup", "--spec", str(c2_file), "--left", str(p), "--right", str(p))
    assert code == 0
    assert doc["invariant_factors"] == [2] and doc["class"] == [1]


def test_cli_cup_rejects_non_cocycle(capsys, c2_file, tmp_path):
    bad = {"degree": 1, "module": "Z", "table": [{"args": [1], "value": [1]}]}
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(bad))
    code, doc = run(capsys, "cup", "--spec", str(c2_file), "--left", str(p), "--right", str(p))
    assert code == 1 and doc["error"]["type"] == "NotCocycleError"


def test_cli_errors(capsys, tmp_path, c2_file):
    code, doc = run(capsys, "cohomology", "--spec", str(tmp_path / "missing.toml"), "--module", "X", "--degree", "0")
    assert code == 1 and "cannot read" in doc["error"]["message"]
    code, doc = run(capsys, "cohomology", "--spec", str(c2_file), "--module", "Z", "--degree", "9")
    assert code == 2 and doc["error"]["type"] == "SizeGuardError"


def test_cli_size_guard_on_cup(capsys, c2_file, tmp_path, monkeypatch):
    z = {"degree": 1, "module": "S", "table": [{"args": [1], "value": [1]}]}
    p = tmp_path / "z.json"
    p.write_text(json.dumps(z))
    monkeypatch.setenv("TATEKIT_MAX_OPS", "2")
    code, doc = run(capsys, "cup", "--spec", str(c2_file), "--left", str(p), "--right", str(p))
    assert code == 2


def test_cli_output_is_deterministic(capsys, c2_file):
    argv = ["torus", "--spec", str(c2_file), "--module", "S"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_cli_verify_single_suite(capsys):
    code, doc = run(capsys, "verify", "--suite", "oracle", "--max-order", "3", "--max-degree", "2")
    assert code == 0 and doc["passed"]
