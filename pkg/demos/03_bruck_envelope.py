"""Non-associative products computed inside an associative enveloping algebra.

The Bruck product x y = r(x1) * y * r(x2) lives in U(L) for the graded Lie
algebra L on a, b, c(i,j).  A second product, x . y = x1 phi_{x2}(y), is
commutative and its associator recovers the triple product.
"""
from calbch.bruck import BruckEnvelope, loop_jet_F, ut_exp
from calbch.calts import A, B, E, FREE2
from calbch.linear import LinComb

H = BruckEnvelope.free2(5)
a, b, e10 = H.letter(A), H.letter(B), H.letter(E(1, 0))
X = lambda *ms: {m: 1 for m in ms}

print("a o b in PBW form:", H.format_env(H.bruck(X(a), X(b))))
print("r(a a)           :", H.format_env(H.r(X((a[0], a[0])))))
print("a o (b o a) - b o (a o a):", H.format_env(H.triple(X(a), X(b), X(a))))

print("phi_a(b)    =", H.format_env(H.phi(X(a), X(b))) if H.phi(X(a), X(b)) else "0")
print("phi_(aa)(b) =", H.to_free(H.phi(X((a[0], a[0])), X(b))).format())

ab, ba = H.dot(X(a), X(b)), H.dot(X(b), X(a))
print("a . b =", H.format_ut(ab), "| commutative:", ab == ba)

# -((x . z) . y - x . (z . y)) equals [x, y, z]
for x, y, z in [(A, B, A), (A, B, B), (E(1, 0), A, B)]:
    xm, ym, zm = X(H.letter(x)), X(H.letter(y)), X(H.letter(z))
    left = H.dot(H.dot(xm, zm), ym)
    right = H.dot(xm, H.dot(zm, ym))
    assoc = {m: right.get(m, 0) - left.get(m, 0) for m in set(left) | set(right)}
    assoc = {m: c for m, c in assoc.items() if c}
    triple = FREE2.triple(LinComb.basis(x), LinComb.basis(y), LinComb.basis(z))
    print(f"[{x},{y},{z}] = {triple.format() or '0'} ; from the associator: {H.format_ut(assoc)}")

# Tangent part of exp(a) . exp(b): the first terms of the commutative BCH series.
H3 = BruckEnvelope.free2(3)
print("F(exp a, exp b) =", loop_jet_F(H3, ut_exp(H3, A), ut_exp(H3, B), "dot").format())
