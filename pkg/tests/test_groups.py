import itertools

import pytest

from tatekit.errors import ValidationError
from tatekit.groups import (build_group, cyclic, direct_product, find_generator, from_table, inverse,
                            multiply)

from conftest import small_groups


def test_cyclic_1_is_trivial():
    G = build_group({"kind": "cyclic", "n": 1})
    assert G.order == 1
    assert G.table == ((0,),)


def test_cyclic_3_table_is_modular_addition():
    G = build_group({"kind": "cyclic", "n": 3})
    assert G.table[1][2] == 0
    assert G.table[2][2] == 1


def test_klein_four_from_product():
    V = build_group({"kind": "product", "factors": [{"kind": "cyclic", "n": 2}] * 2})
    assert V.order == 4
    # brute force over the table
    for a in V.elements():
        assert V.table[a][a] == 0
        assert V.inverse(a) == a
    assert V.is_abelian()


def test_explicit_table_round_trip():
    G = cyclic(5)
    H = build_group({"kind": "explicit", "table": [list(r) for r in G.table]})
    assert H.table == G.table


@pytest.mark.parametrize("G", small_groups(), ids=lambda G: G.name)
def test_axioms_hold(G):
    n = G.order
    for a, b, c in itertools.product(range(n), repeat=3):
        assert G.multiply(G.multiply(a, b), c) == G.multiply(a, G.multiply(b, c))
    for a in range(n):
        assert sorted(G.table[a]) == list(range(n))
        assert G.multiply(a, G.inverse(a)) == 0


def test_multiply_examples(klein):
    C4 = cyclic(4)
    assert multiply(C4, 3, 2) == 1
    for G in small_groups():
        for a in G.elements():
            assert multiply(G, a, 0) == a
    for a in klein.elements():
        assert multiply(klein, a, a) == 0


def test_inverse_examples():
    assert inverse(cyclic(5), 2) == 3
    assert inverse(cyclic(5), 0) == 0
    C6 = cyclic(6)
    for a in C6.elements():
        assert inverse(C6, inverse(C6, a)) == a


def test_index_out_of_range():
    with pytest.raises(IndexError):
        multiply(cyclic(3), 3, 0)
    with pytest.raises(IndexError):
        inverse(cyclic(3), -1)


def test_find_generator(klein):
    assert find_generator(cyclic(4)) == 1
    assert find_generator(klein) is None
    assert find_generator(cyclic(1)) == 0
    assert find_generator(cyclic(6)) == 1
    assert find_generator(direct_product(cyclic(2), cyclic(3))) is not None


@pytest.mark.parametrize("G", small_groups(), ids=lambda G: G.name)
def test_find_generator_matches_brute_force(G):
    def powers(a):
        seen, x = {0}, a
        while x != 0:
            seen.add(x)
            x = G.multiply(x, a)
        return seen
    cyclic_ = any(len(powers(a)) == G.order for a in G.elements())
    assert (find_generator(G) is not None) == cyclic_


def test_latin_square_violation_is_named():
    with pytest.raises(ValidationError, match="Latin square"):
        from_table([[0, 1], [1, 1]])


def test_identity_violation_is_named():
    with pytest.raises(ValidationError, match="identity"):
        from_table([[1, 0], [0, 1]])


def test_associativity_violation_names_triple():
    # a Latin square with identity 0 that is not associative (order 5 loop)
    T = [[0, 1, 2, 3, 4],
         [1, 0, 3, 4, 2],
         [2, 4, 0, 1, 3],
         [3, 2, 4, 0, 1],
         [4, 3, 1, 2, 0]]
    with pytest.raises(ValidationError, match=r"associativity fails for the triple \(a, b, c\) = \(\d+, \d+, \d+\)"):
        from_table(T)


def test_unknown_kind():
    with pytest.raises(ValidationError):
        build_group({"kind": "dihedral", "n": 3})


def test_cyclic_order_must_be_positive():
    with pytest.raises(ValidationError):
        cyclic(0)
