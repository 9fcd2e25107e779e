from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from calbch.bruck import BruckEnvelope, loop_jet_F, ut_exp
from calbch.calts import A, B, E, FREE2, Free2, adjoint_exp_triple, free_keys, matrix_example_system
from calbch.errors import ResidualError
from calbch.linear import LinComb, add_into

from strategies import small_rationals

H = BruckEnvelope.free2(6)
alg = H.alg
a, b = H.letter(A), H.letter(B)
e10, e01 = H.letter(E(1, 0)), H.letter(E(0, 1))
one = {(): 1}
UT6 = H.ut_monomials(6)
UT4 = H.ut_monomials(4)


def X(*monos):
    return {m: 1 for m in monos}


def ut_elements(monos=UT4, size=3):
    return st.dictionaries(st.sampled_from(monos), small_rationals, max_size=size).map(
        lambda d: {m: c for m, c in d.items() if c})


def letters(max_degree):
    return [H.letter(k) for k in free_keys(max_degree)]


def scaled(c, x):
    return {m: c * v for m, v in x.items() if c * v}


def sub(x, y):
    out = dict(x)
    add_into(out, y, -1)
    return out


def test_halving_examples():
    assert H.r(one) == one
    assert H.r(X(a)) == {a: Fraction(1, 2)}
    assert H.r(X((a[0], a[0]))) == {(a[0], a[0]): Fraction(1, 4)}
    assert H.r(alg.exp(X(a))) == alg.exp({a: Fraction(1, 2)})


def test_halving_equation_on_basis():
    for m in H.ut_monomials(6) + [(a[0], b[0], alg.lie.index("c(0,0)"))]:
        acc = {}
        for l, rt, k in alg.coproduct_mono(m):
            add_into(acc, alg.mul(H.r_mono(l), H.r_mono(rt)), k)
        assert acc == X(m)


def test_bruck_examples():
    c00 = alg.lie.index("c(0,0)")
    assert H.bruck(X(a), X(b)) == {(a[0], b[0]): 1, (c00,): -1}
    assert H.bruck(one, X(e10, (a[0], b[0]))) == X(e10, (a[0], b[0]))
    for x, y, z in [(a, b, a), (a, b, b), (e10, a, b)]:
        quarter = alg.lie.bracket(alg.lie.bracket(x[0], y[0]), z[0]) * Fraction(1, 4)
        assert H.triple(X(x), X(y), X(z)) == {(g,): c for g, c in quarter.terms.items()}


def test_bruck_is_left_alternative_but_not_associative():
    assert alg.truncate(H.bruck(H.bruck(X(a), X(a)), X(b))) == H.bruck(X(a), H.bruck(X(a), X(b)))
    assert alg.truncate(H.bruck(H.bruck(X(b), X(a)), X(a))) != H.bruck(X(b), H.bruck(X(a), X(a)))


def test_division_examples():
    y = X(b, (a[0], b[0]))
    assert H.left_div(X(a), y) == {m: -c for m, c in H.bruck(X(a), y).items()}
    g = alg.exp(X(a))
    assert alg.truncate(H.left_div(g, g)) == one
    assert H.left_div(one, y) == y
    assert H.left_div_checked(X((a[0], b[0])), X(b)) == H.left_div(X((a[0], b[0])), X(b))


def test_embed_and_reduce():
    assert H.embed(X(a)) == X(a)
    for m in UT6:
        assert H.reduce(H.embed(X(m))) == X(m)
    assert H.reduce(H.bruck(X(a), X(b))) == X((a[0], b[0]))
    with pytest.raises(ResidualError):
        H.reduce(X((alg.lie.index("c(0,0)"),)))


def test_phi_examples():
    assert not H.phi(X(a), X(b))
    assert H.to_free(H.phi(X((a[0], a[0])), X(b))) == -LinComb.basis(E(1, 0))
    expected = adjoint_exp_triple(A, B, 5)
    assert H.to_free(H.phi(ut_exp(H, A), X(b))) == expected


def test_phi_prime_examples():
    y = X(b, (a[0], b[0]))
    assert H.phi_prime_ut(one, y) == y
    assert H.phi_prime_ut(X(a), y) == {m: -c for m, c in H.phi_ut(X(a), y).items()}
    assert not H.phi_prime_ut(X(a), X(b))


def test_dot_examples():
    y = X(b, (a[0], e10[0]), e01)
    assert H.dot(X(a), y) == H.bruck_ut(X(a), y)
    assert H.dot(X(a), X(b)) == H.dot(X(b), X(a))
    for x, y, z in [(A, B, A), (A, B, B), (B, A, A), (E(1, 0), A, B)]:
        xm, ym, zm = H.letter(x), H.letter(y), H.letter(z)
        assoc = sub(H.dot(H.dot(X(xm), X(zm)), X(ym)), H.dot(X(xm), H.dot(X(zm), X(ym))))
        want = H.from_free(FREE2.triple(LinComb.basis(x), LinComb.basis(y), LinComb.basis(z)))
        assert assoc == {m: -c for m, c in want.items()}


def test_dot_is_not_associative():
    # negative control: (a.a).b - a.(a.b) = -[a,b,a]
    assoc = sub(H.dot(H.dot(X(a), X(a)), X(b)), H.dot(X(a), H.dot(X(a), X(b))))
    assert assoc == {e10: -1}


def test_l_operators():
    z = X(b, e10)
    for x in (X(a, (a[0], b[0])), {(): 2, a: 1, (a[0], b[0]): 3}):
        for product in ("bruck", "dot"):
            assert H.l_map(x, one, z, product) == scaled(H.ut_counit(x), z)
            assert H.l_map(one, x, z, product) == scaled(H.ut_counit(x), z)
    for x, y, z in [(A, B, A), (A, B, B), (B, A, A), (A, E(0, 1), B)]:
        got = H.l_map(X(H.letter(x)), X(H.letter(y)), X(H.letter(z)), "dot")
        assert got == H.from_free(FREE2.triple(LinComb.basis(x), LinComb.basis(z), LinComb.basis(y)))


def test_ldot_factored_spot_checks():
    for x, y, z in [(X(a), X(b), X(a)), (X((a[0], b[0])), X(a), X(b)), (X(a), X((b[0], b[0])), X(a))]:
        assert H.ldot_factored(x, y, z) == H.l_map(x, y, z, "dot")


def test_loop_jet():
    H3 = BruckEnvelope.free2(3)
    ea, eb = ut_exp(H3, A), ut_exp(H3, B)
    a3, b3 = LinComb.basis(A), LinComb.basis(B)
    assert loop_jet_F(H3, H3.embed(ea), {(): 1}) == a3
    assert loop_jet_F(H3, {(): 1}, H3.embed(eb)) == b3
    want = a3 + b3 + LinComb.basis(E(0, 1)) / 3 - LinComb.basis(E(1, 0)) / 3
    assert loop_jet_F(H3, ea, eb, "dot") == want
    bruck = a3 + b3 + LinComb.basis(E(0, 1)) / 3 + LinComb.basis(E(1, 0)) / 6
    assert loop_jet_F(H3, H3.embed(ea), H3.embed(eb)) == bruck


def test_envelope_recovers_input_triple():
    L = matrix_example_system()
    G = BruckEnvelope.from_lts(L)
    for p in range(L.dim):
        for q in range(L.dim):
            for r in range(L.dim):
                got = G.triple(*({(G.gen_of[i],): 1} for i in (p, q, r)))
                assert got == {(G.gen_of[k],): c for k, c in L.triple_keys(p, q, r).items()}
    S = Free2(5).to_structure()
    G = BruckEnvelope.from_lts(S, 5)
    for p in range(S.dim):
        for q in range(S.dim):
            for r in range(S.dim):
                got = G.triple(*({(G.gen_of[i],): 1} for i in (p, q, r)))
                assert alg_trunc(G, got) == {(G.gen_of[k],): c for k, c in S.triple_keys(p, q, r).items()}


def alg_trunc(G, x):
    return G.alg.truncate(x)


@given(ut_elements(), ut_elements())
def test_dot_commutative_random(x, y):
    assert H.dot(x, y) == H.dot(y, x)


@given(ut_elements(), ut_elements())
def test_division_axioms_random(x, y):
    for product in ("bruck", "dot"):
        if product == "bruck":
            xe, ye = H.embed(x), H.embed(y)
            prod = H.bruck
        else:
            xe, ye = x, y
            prod = H.dot
        lhs = {}
        for (l, r), c in alg.coproduct(xe).items():
            add_into(lhs, prod({l: 1}, H.left_div({r: 1}, ye, product)), c)
        assert alg.truncate(lhs) == alg.truncate(scaled(xe.get((), 0), ye))


@given(ut_elements(UT6, 4))
def test_halving_is_coalgebra_map(x):
    x = H.embed(x)
    lhs = alg.coproduct(H.r(x))
    rhs = {}
    for (l, r), c in alg.coproduct(x).items():
        add_into(rhs, alg.tensor(H.r_mono(l), H.r_mono(r)), c)
    assert lhs == rhs


@given(ut_elements(), ut_elements(H.ut_monomials(2), 2))
def test_phi_prime_inverts_phi(x, y):
    acc = {}
    for (l, r), c in alg.coproduct(x).items():
        add_into(acc, H.phi_prime_ut({l: 1}, H.phi_ut({r: 1}, y)), c)
    assert acc == scaled(x.get((), 0), y)
