"""Independent symbolic computation of the frozen values in tests/test_bch.py.

Run with ``python tests/oracles/sympy_oracle.py`` (needs sympy).  It expands the
closed forms with sympy's own series machinery, sharing no code with calbch.
"""
import sympy as sp

s, t, x, e = sp.symbols("s t x e")
D = 8


def coeffs(expr):
    # scale both variables by e so total degree becomes the e-degree
    ser = sp.series(expr.subs({s: e * s, t: e * t}), e, 0, D + 1).removeO()
    out = {}
    for k in range(D + 1):
        ck = sp.cancel(sp.together(ser.coeff(e, k)))
        if ck == 0:
            continue
        P = sp.Poly(sp.expand(ck), s, t)
        out.update(dict(zip(P.monoms(), P.coeffs())))
    return out


f = 2 * s - 2 * t - 2 * (sp.exp(2 * (s + t)) - 2 * sp.exp(s + 2 * t) + 2 * sp.exp(s) - 1) * (s + t) / (
    sp.exp(2 * (s + t)) - 1)
g = (sp.exp(2 * s) - sp.exp(2 * t)) * (s + t) / (2 * (sp.exp(2 * (s + t)) - 1))

if __name__ == "__main__":
    cf = coeffs(f)
    print("alpha", {k: -v / 4 for k, v in sorted(cf.items()) if k[0] >= 1 and k[1] >= 1 and sum(k) <= 7})
    print("beta", {k: v for k, v in sorted(coeffs(g).items()) if sum(k) <= 7})
    print("xi", sp.series(x / sp.tanh(x), x, 0, 11))
