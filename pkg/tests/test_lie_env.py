import itertools
import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from calbch.calts import Free2, LtsStructure, matrix_example_system, simple_sl2_system
from calbch.env import (EnvAlgebra, EnvElement, LieStructure, antipode, coproduct, counit, env_exp, env_log,
                        eulerian_projection, free2_lie, is_grouplike, pbw_mul, primitive_part,
                        standard_embedding)
from calbch.errors import GroupLikeError, StructureError, TruncationError, ValuationError
from calbch.linear import LinComb, rank

from strategies import small_rationals

LIE = free2_lie(6)
U = EnvAlgebra(LIE, 6)
a, b = U.gen("a"), U.gen("b")
ia, ib, c00, c01, c10 = (LIE.index(l) for l in ("a", "b", "c(0,0)", "c(0,1)", "c(1,0)"))


def _monomials(alg, N):
    gens = range(alg.lie.dim)
    out = []

    def rec(start, prefix, deg):
        out.append(tuple(prefix))
        for g in gens:
            if g < start or deg + alg.lie.degrees[g] > N:
                continue
            rec(g, prefix + [g], deg + alg.lie.degrees[g])

    rec(0, [], 0)
    return out


MONOS6 = _monomials(U, 6)


def env_elements(alg=U, monos=MONOS6, size=4):
    return st.dictionaries(st.sampled_from(monos), small_rationals, max_size=size).map(alg.element)


def primitives(alg=U, max_degree=6):
    gens = [g for g in range(alg.lie.dim) if alg.lie.degrees[g] <= max_degree]
    return st.dictionaries(st.sampled_from(gens), small_rationals, min_size=1, max_size=3).map(
        lambda d: alg.element({(g,): c for g, c in d.items()}))


def test_free2_lie_structure():
    assert LIE.labels[:5] == ("a", "b", "c(0,0)", "c(0,1)", "c(1,0)")
    ab = LIE.bracket(ia, ib)
    assert ab == LinComb({c00: 2})
    assert LIE.bracket(ab, ia) * Fraction(1, 4) == LinComb.basis(c10)
    assert not LIE.bracket(c00, c10)
    assert LIE.jacobi_violations() == []
    assert LIE.graded


def test_lie_structure_validation():
    with pytest.raises(StructureError):
        LieStructure(["x", "y"], [2, 1], {})
    with pytest.raises(StructureError):
        # [x,y] = x, [x,z] = x, [y,z] = y violates Jacobi
        LieStructure(["x", "y", "z"], [1, 1, 1], {(0, 1): {0: 1}, (0, 2): {0: 1}, (1, 2): {1: 1}})
    with pytest.raises(StructureError):
        EnvAlgebra(LieStructure(["x", "y", "z"], [1, 1, 1], {(0, 1): {2: 1}}), 3)


def test_lie_json_round_trip():
    L2 = LieStructure.from_json(json.loads(LIE.to_json()))
    assert L2.labels == LIE.labels and L2.degrees == LIE.degrees
    assert all(L2.bracket_keys(p, q) == LIE.bracket_keys(p, q) for p in range(LIE.dim) for q in range(LIE.dim))


def test_pbw_examples():
    assert b * a == U.monomial("a", "b") - U.gen("c(0,0)", 2)
    assert a * a == U.element({(ia, ia): 1})
    c = U.gen("c(0,0)")
    assert (a * b) * c == a * (b * c)


def test_pbw_dimensions_match_symmetric_algebra():
    # the straightened words of each degree span exactly the sorted monomials
    alg = EnvAlgebra(free2_lie(4), 4)
    for d in range(1, 5):
        words = [w for n in range(1, d + 1) for w in itertools.product(range(alg.lie.dim), repeat=n)
                 if sum(alg.lie.degrees[g] for g in w) == d]
        span = [alg.word(w) for w in words]
        sorted_count = sum(1 for m in _monomials(alg, d) if alg.mono_degree(m) == d)
        assert rank(span) == sorted_count


def test_coproduct_examples():
    m_ab = (ia, ib)
    assert coproduct(U.element({m_ab: 1})) == {(m_ab, ()): 1, ((ia,), (ib,)): 1, ((ib,), (ia,)): 1, ((), m_ab): 1}
    assert coproduct(U.one()) == {((), ()): 1}
    m_aa = (ia, ia)
    assert coproduct(U.element({m_aa: 1})) == {(m_aa, ()): 1, ((ia,), (ia,)): 2, ((), m_aa): 1}


def test_antipode_examples():
    assert antipode(a) == -a
    assert antipode(U.monomial("a", "b")) == U.monomial("a", "b") - U.gen("c(0,0)", 2)
    assert antipode(U.one()) == U.one()


def test_primitive_part_and_counit():
    g = env_exp(a)
    assert primitive_part(g) == LinComb.basis(ia)
    assert counit(g) == 1
    assert not primitive_part(U.monomial("a", "b"))


def test_exp_and_log_examples():
    U2 = EnvAlgebra(LIE, 2)
    assert env_exp(U2.gen("a")) == U2.element({(): 1, (ia,): 1, (ia, ia): Fraction(1, 2)})
    assert env_exp(U.element()) == U.one()
    assert env_log(env_exp(a)) == a
    assert not env_log(U.one())
    assert is_grouplike(env_exp(a + b))
    with pytest.raises(ValuationError):
        env_exp(U.monomial("a", "b"))
    with pytest.raises(ValuationError):
        env_log(U.gen("a"))
    with pytest.raises(GroupLikeError):
        env_log(U.one() + U.monomial("a", "b"))
    with pytest.raises(TruncationError):
        env_exp(a, 9)


def test_log_of_symmetric_product_degree_3():
    U3 = EnvAlgebra(free2_lie(3), 3)
    half_a = {(0,): Fraction(1, 2)}
    g = U3.exp_factor_rmul(U3.exp_factor_rmul(U3.exp_factor_rmul({(): 1}, half_a), {(1,): 1}), half_a)
    Z = env_log(EnvElement(U3, g))
    assert Z.coeff("a") == 1 and Z.coeff("b") == 1
    assert Z.coeff("c(0,1)") == Fraction(1, 3)
    assert Z.coeff("c(1,0)") == Fraction(1, 6)
    assert Z.coeff("c(0,0)") == 0


def test_exp_factor_rmul_matches_product():
    p = (a + U.gen("c(0,0)", 3)).terms
    x = env_exp(b).terms
    assert U.exp_factor_rmul(x, p) == U.mul(x, U.exp(p))


def test_matrix_example_embedding():
    lie, t_index, h_pairs = standard_embedding(matrix_example_system())
    u, v = (LinComb.basis(t_index[i]) for i in (0, 1))
    assert lie.dim == 3 and lie.bracket(v, u)
    assert lie.bracket(lie.bracket(v, u), v) * Fraction(1, 4) == u * Fraction(-1, 4)


def test_abelian_embedding():
    lie, t_index, h_pairs = standard_embedding(LtsStructure(["x", "y"], {}))
    assert h_pairs == [] and lie.dim == 2
    assert not lie.bracket(0, 1)


def test_embedding_rejects_non_ca_input():
    with pytest.raises(StructureError):
        standard_embedding(simple_sl2_system())


def test_free2_embedding_matches_free2_lie():
    L = Free2(5).to_structure()
    lie, t_index, h_pairs = standard_embedding(L)
    ref = free2_lie(5)
    name = {"a": "a", "b": "b"}
    phi = {}
    for p, g in enumerate(t_index):
        lab = L.labels[p]
        phi[g] = LinComb.basis(ref.index(name.get(lab, "c" + lab[1:])))
    # D(x, y) = 1/2 [x, y] in both algebras
    for k, (p, q) in enumerate(h_pairs):
        g = lie.index(f"D({L.labels[p]},{L.labels[q]})")
        phi[g] = ref.bracket(phi[t_index[p]], phi[t_index[q]]) * Fraction(1, 2)
    assert lie.dim == ref.dim
    assert rank([phi[g].terms for g in range(lie.dim)]) == ref.dim
    for x, y in itertools.combinations(range(lie.dim), 2):
        assert lie.bracket(x, y).map_keys(phi.get) == ref.bracket(phi[x], phi[y])


def test_eulerian_is_log_on_grouplike():
    g = env_exp(a + b) * env_exp(a)
    assert eulerian_projection(g) == env_log(g)


@given(env_elements(), env_elements(), env_elements())
def test_associativity(x, y, z):
    assert (x * y) * z == x * (y * z)


@given(env_elements(), env_elements())
def test_bialgebra_law(x, y):
    lhs = coproduct(x * y)
    rhs = U.tensor_mul(coproduct(x), coproduct(y))
    assert lhs == rhs


@given(env_elements())
def test_antipode_involution(x):
    assert antipode(antipode(x)) == x


@given(env_elements())
def test_antipode_law(x):
    out = {}
    for (l, r), c in coproduct(x).items():
        for m, v in U.truncate(U.mul(U.antipode_mono(l), {r: 1})).items():
            out[m] = out.get(m, 0) + c * v
    assert {m: v for m, v in out.items() if v} == ({(): counit(x)} if counit(x) else {})


@given(primitives(max_degree=3))
def test_exp_log_round_trip(p):
    g = env_exp(p)
    assert is_grouplike(g)
    assert env_log(g) == p


@given(primitives(max_degree=2), primitives(max_degree=2))
def test_log_of_product_is_primitive(p, q):
    z = env_log(env_exp(p) * env_exp(q))
    assert z.is_primitive()
    assert env_exp(z) == env_exp(p) * env_exp(q)


@given(env_elements(), env_elements())
def test_grading(x, y):
    for m in (x * y).terms:
        assert U.mono_degree(m) <= 6
