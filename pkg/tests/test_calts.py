import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from calbch.calts import (A, B, E, FREE2, Free2, FreeKey, LtsStructure, adjoint_exp_triple, check_ca_axioms,
                          check_derived_identities, derived_series, free2_dim, free2_triple, free_keys,
                          matrix_example_system, nested_triple, permutation_invariance, simple_sl2_system)
from calbch.errors import StructureError
from calbch.linear import LinComb

from strategies import small_rationals

a, b = LinComb.basis(A), LinComb.basis(B)
KEYS7 = free_keys(7)


def free_element(max_degree=7, size=4):
    keys = free_keys(max_degree)
    return st.dictionaries(st.sampled_from(keys), small_rationals, min_size=1, max_size=size).map(LinComb)


def test_free_keys_and_degrees():
    assert E(2, 1).degree == 5
    assert E(0, 1).bracket_label() == "[a,b,b]"
    with pytest.raises(ValueError):
        E(1, 1)
    with pytest.raises(ValueError):
        FreeKey("c")
    assert [str(k) for k in free_keys(5)] == ["a", "b", "E(0,1)", "E(1,0)", "E(0,3)", "E(1,2)", "E(2,1)", "E(3,0)"]


def test_free2_triple_rules():
    assert free2_triple(A, B, A) == LinComb.basis(E(1, 0))
    assert free2_triple(A, B, B) == LinComb.basis(E(0, 1))
    assert free2_triple(E(1, 0), A, B) == LinComb.basis(E(2, 1))
    assert free2_triple(E(1, 0), B, A) == LinComb.basis(E(2, 1))
    assert free2_triple(E(1, 0), A, A) == LinComb.basis(E(3, 0))
    assert free2_triple(B, A, A) == -LinComb.basis(E(1, 0))
    assert not free2_triple(A, B, E(1, 0))
    assert not free2_triple(A, A, B)
    assert not free2_triple(E(1, 0), E(0, 1), A)


def test_free2_truncation():
    assert not Free2(4).triple(LinComb.basis(E(1, 0)), a, a)
    assert Free2(5).triple(LinComb.basis(E(1, 0)), a, a) == LinComb.basis(E(3, 0))


def test_free2_dim():
    assert [free2_dim(n) for n in range(1, 10)] == [2, 0, 2, 0, 4, 0, 6, 0, 8]
    with pytest.raises(ValueError):
        free2_dim(0)


def test_matrix_example_triples():
    L = matrix_example_system()
    u, v = L.basis(0), L.basis(1)
    assert L.triple(v, u, v) == u * Fraction(-1, 4)
    assert not L.triple(v, u, u)
    assert not L.triple(u, u, v)
    assert check_ca_axioms(L).ok
    assert derived_series(L).dims == [1, 0] and derived_series(L).solvable


def test_free2_passes_axioms_to_degree_9():
    rep = check_ca_axioms(Free2(9), max_degree=9)
    assert rep.ok, rep.failures[:3]
    assert rep.checked["ca"] > 0


def test_simple_triple_system_is_not_ca():
    rep = check_ca_axioms(simple_sl2_system())
    axioms = {f["axiom"] for f in rep.failures}
    assert "ca" in axioms
    # it is still a Lie triple system
    assert not axioms & {"alternation", "antisymmetry", "jacobi", "lts_derivation"}


def test_axiom_checker_catches_broken_table():
    broken = LtsStructure(["x", "y"], {(0, 1, 0): {1: 1}})
    axioms = {f["axiom"] for f in check_ca_axioms(broken).failures}
    assert "antisymmetry" in axioms


def test_derived_series():
    assert derived_series(Free2(7).to_structure()).dims == [12, 0]
    assert derived_series(LtsStructure(["x", "y"], {})).dims == [0]


def test_structure_json_round_trip():
    L = Free2(5).to_structure()
    L2 = LtsStructure.from_json(json.loads(L.to_json()))
    assert L2.labels == L.labels and L2.table == L.table and L2.degrees == L.degrees


def test_structure_rejects_bad_input():
    with pytest.raises(IndexError):
        LtsStructure(["x"], {(0, 0, 3): {0: 1}})
    with pytest.raises(StructureError):
        LtsStructure(["x", "y"], {(0, 1, 0): {1: 1}}, degrees=[1, 1])


def test_adjoint_exp_triple():
    assert adjoint_exp_triple(A, B, 4) == b - LinComb.basis(E(1, 0)) / 2 - LinComb.basis(E(3, 0)) / 24
    assert adjoint_exp_triple(LinComb(), B, 9) == b
    assert adjoint_exp_triple(A, A, 9) == a


def test_nested_triple_conventions():
    assert nested_triple(FREE2, A) == a
    assert not nested_triple(FREE2, A, B)
    assert nested_triple(FREE2, A, B, A, A, B) == LinComb.basis(E(2, 1))


def test_bracket_permutation_invariance():
    assert permutation_invariance(8) == []


def test_derived_identities_on_basis():
    els = [LinComb.basis(k) for k in free_keys(3)] + [a + b * 2]
    assert check_derived_identities(Free2(7), els) == []


def test_derived_identities_fail_on_non_ca_system():
    L = simple_sl2_system()
    assert check_derived_identities(L, [L.basis(0), L.basis(1)])


@given(free_element(3, 3), free_element(3, 3), free_element(3, 3), free_element(3, 3))
def test_skew_symmetry_random(x, y, z, w):
    T = Free2(9).triple
    f = lambda p, q, r: T(p, w, T(q, w, r))
    assert f(x, y, z) == -f(y, x, z) == -f(x, z, y)


@given(free_element(3, 3), free_element(3, 3), free_element(3, 3), free_element(3, 3))
def test_ww_products_vanish_random(x, y, z, w):
    T = Free2(11).triple
    assert not T(T(x, w, w), y, T(z, w, w))
    assert not T(T(x, w, w), T(y, w, w), z)


@given(free_element(3, 3), free_element(3, 3), free_element(3, 3), free_element(3, 3), free_element(3, 3),
       st.integers(0, 3))
def test_derivation_random(w, w2, x, y, z, n):
    T = Free2(15).triple

    def D(v):
        out = T(v, w, w2)
        for _ in range(n):
            out = T(out, w, w)
        return out

    assert D(T(x, y, z)) == T(D(x), y, z) + T(x, D(y), z) + T(x, y, D(z))


@given(free_element(5), free_element(5), free_element(5))
def test_two_inner_arguments_vanish(x, y, z):
    T = Free2(15).triple
    inner, inner2 = T(x, y, z), T(y, z, x)
    assert not T(inner, inner2, x) and not T(x, inner, inner2) and not T(inner, x, inner2)


@given(free_element(7), free_element(7), free_element(7), small_rationals)
def test_trilinear(x, y, z, c):
    assert free2_triple(x * c + y, y, z) == free2_triple(x, y, z) * c + free2_triple(y, y, z)
    assert free2_triple(x, y, z) == -free2_triple(y, x, z)
