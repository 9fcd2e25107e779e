"""Four independent routes to the same BCH coefficients.

genfun    : Taylor coefficients of a closed-form quotient
recursion : alpha from x/tanh x, then beta by a conversion rule
matrix    : a 3x3 matrix realization where every long bracket is -4u
hopf      : log(exp(a/2) * exp(b') * exp(a/2)) in the enveloping algebra
"""
import time

from calbch.bch import alpha_recursion, bch_symbolic, beta_from_alpha, beta_genfun, cross_validate
from calbch.matrix_model import f_closed_form, bracket_images, matrix_model
from calbch.tables import grid_differences, table_differences

N = 14
t0 = time.perf_counter()
tables = {
    "genfun": beta_genfun(N),
    "recursion": beta_from_alpha(alpha_recursion(N)),
    "matrix": matrix_model(N).beta,
}
print(f"three cheap engines at N={N}: {time.perf_counter() - t0:.2f}s")

t0 = time.perf_counter()
hopf = bch_symbolic(9, "dot")
print(f"hopf engine at N=9: {time.perf_counter() - t0:.2f}s")
tables["hopf"] = hopf.table

names = list(tables)
for i, x in enumerate(names):
    for y in names[i + 1:]:
        print(f"{x:>9} vs {y:<9}: {len(table_differences(tables[x], tables[y]))} differences")
print("genfun vs the reference 7x7 grid:", len(grid_differences(tables["genfun"])), "differences")

print("beta[6,7] =", tables["genfun"].get(6, 7))
print("matrix images of long brackets:", {v.format(lambda i: "uv"[i]) for _, _, v in bracket_images(9)})
print("closed form reproduces the (1,3) entry:", matrix_model(N).f == f_closed_form(N))

print("BCH.(a,b) to degree 5:", bch_symbolic(5, "dot").series.format())
print("BCH(a,b)  to degree 5:", bch_symbolic(5, "bruck").series.format())

rep = cross_validate({"hopf": 9, "dot_direct": 5})
print("cross validation:", "all engines agree" if rep.ok else rep.disagreements[:3])
