"""Reading BCH coefficients off an exact generating function.

The commutative automorphic coefficients beta[p,q] are Taylor coefficients of

    g(s, t) = (e^{2s} - e^{2t}) (s + t) / (2 (e^{2(s+t)} - 1)).

The denominator vanishes on s + t = 0, so a plain power-series inverse does not
exist.  The division below first strips one factor of s + t from both sides
and then inverts what is left.
"""
from calbch.bch import beta_genfun_series, xi_series
from calbch.linear import rat_pretty
from calbch.series import BiSeries, exp_linear, series_div_exact

N = 9

# Build the pieces by hand to show the exact division at work.
num = (exp_linear(N + 1, 2, 0) - exp_linear(N + 1, 0, 2)) * BiSeries(N + 1, {(1, 0): 1, (0, 1): 1})
den = (exp_linear(N + 1, 2, 2) - 1).scale(2)
g = series_div_exact(num, den)
assert g == beta_genfun_series(N)
print(f"g is known exactly up to total degree {g.N}")

# The linear part (s - t)/2 is the a + b of the series; everything else is odd degree >= 3.
print("linear part:", rat_pretty(g.coeff(1, 0)), "s", "+" if g.coeff(0, 1) > 0 else "-",
      rat_pretty(abs(g.coeff(0, 1))), "t")
for d in range(2, N + 1):
    cells = [(p, d - p) for p in range(1, d)]
    row = "  ".join(f"b[{p},{q}]={rat_pretty(g.coeff(p, q))}" for p, q in cells)
    print(f"degree {d}: {row}")

# The same division machinery with the linear form x gives x / tanh x.
print("x/tanh x:", [rat_pretty(v) for v in xi_series(10)])
