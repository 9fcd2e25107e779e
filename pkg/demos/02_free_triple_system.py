"""The free commutative automorphic triple system on two generators.

Products are closed-form rules on the basis a, b, E(i,j).  An independent model
(words in a, b modulo aab = aba and bba = bab, triple = double commutator)
reproduces every rule, and brute force recovers the dimension of each degree.
"""
from calbch.amodel import a_model_triple, check_confluence, image, key_image, oracle_mismatches, triple_span_dim
from calbch.calts import A, B, E, Free2, check_ca_axioms, derived_series, free2_dim, free2_triple

print("[a,b,a]      =", free2_triple(A, B, A).format())
print("[E(1,0),a,b] =", free2_triple(E(1, 0), A, B).format())
print("[a,b,E(1,0)] =", free2_triple(A, B, E(1, 0)).format() or "0")

# The word model computes the same thing the long way.
lhs = image(free2_triple(E(1, 0), A, B))
rhs = a_model_triple(key_image(E(1, 0)), "a", "b")
print("model agrees on [E(1,0),a,b]:", lhs == rhs, "|", rhs.format())

print("rewriting rules confluent:", check_confluence() == [])
print("mismatches up to degree 9:", len(oracle_mismatches(9)))
print("dimensions by degree:", [triple_span_dim(n) for n in range(1, 10)])
print("closed form          :", [free2_dim(n) for n in range(1, 10)])

rep = check_ca_axioms(Free2(7), max_degree=7)
print("axioms up to degree 7:", "ok" if rep.ok else rep.failures[:2], rep.checked)
print("derived series (degree <= 7):", derived_series(Free2(7).to_structure()).dims)
