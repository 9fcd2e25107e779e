"""Engines for the BCH coefficients of the Bruck (alpha) and commutative automorphic (beta) loops.

BCH(a, b) = a + b + sum alpha[p,q] E(p-1, q-1) and likewise with beta for the
commutative product, where E(i, j) = [a, b, a (i times), b (j times)].
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from math import comb, factorial
from typing import Any, Callable, Dict, List, Optional, Tuple

from .calts import A, B, E, FREE2, FreeKey, adjoint_exp_triple
from .errors import GroupLikeError, InvariantViolation
from .linear import ONE, ZERO, LinComb, Rational, add_into, rat, rat_str
from .series import BiSeries, exp_linear, series_div_exact
from .tables import CoeffTable, grid_differences, table_differences

log = logging.getLogger(__name__)

MAX_DEGREE = {"genfun": 40, "recursion": 40, "matrix": 30, "hopf": 15, "dot_direct": 9}
DEFAULT_DEGREE = {"genfun": 14, "recursion": 14, "matrix": 14, "hopf": 11, "dot_direct": 7}


def xi_series(K: int) -> List[Rational]:
    """Taylor coefficients of x / tanh x = x (e^{2x} + 1) / (e^{2x} - 1) up to x^K."""
    M = K + 1
    num = (exp_linear(M, 2, 0) + 1) * BiSeries.s(M)
    den = exp_linear(M, 2, 0) - 1
    q = series_div_exact(num, den, linear=(1, 0))
    return [q.coeff(k, 0) for k in range(K + 1)]


def beta_genfun_series(N: int) -> BiSeries:
    """(e^{2s} - e^{2t})(s + t) / (2 (e^{2(s+t)} - 1)) exact to total degree N."""
    M = N + 1
    num = (exp_linear(M, 2, 0) - exp_linear(M, 0, 2)) * BiSeries(M, {(1, 0): 1, (0, 1): 1})
    den = (exp_linear(M, 2, 2) - 1).scale(2)
    return series_div_exact(num, den)


def beta_genfun(N: int) -> CoeffTable:
    g = beta_genfun_series(N)
    return CoeffTable.from_coefficients("beta", "genfun", N, {k: v for k, v in g.coeffs.items()})


def alpha_recursion(N: int, xi: Optional[List[Rational]] = None) -> CoeffTable:
    """p alpha[p,q] = xi[p+q-1] C(p+q-2, p-1) - sum xi[p+q-i-j] alpha[i,j] C(p+q-i-j-1, p-i-1)."""
    xi = xi if xi is not None else xi_series(max(N, 1))
    al: Dict[Tuple[int, int], Rational] = {}
    for d in range(3, N + 1, 2):
        for p in range(1, d):
            q = d - p
            acc = xi[d - 1] * comb(d - 2, p - 1)
            for i in range(1, p):
                for j in range(1, q + 1):
                    if (i + j) % 2 == 0:
                        continue
                    acc -= xi[d - i - j] * al[(i, j)] * comb(d - i - j - 1, p - i - 1)
            al[(p, q)] = acc / p
    return CoeffTable.from_coefficients("alpha", "recursion", N, al)


def beta_from_alpha(alpha: CoeffTable, engine: Optional[str] = None) -> CoeffTable:
    """beta[p,q] = [q=1](-1/p!) + sum_{i=1..p} alpha[i,q] / (p-i)!  for p+q odd."""
    N = alpha.max_total_degree
    be = {}
    for d in range(3, N + 1, 2):
        for p in range(1, d):
            q = d - p
            v = -ONE / factorial(p) if q == 1 else ZERO
            for i in range(1, p + 1):
                v += alpha.get(i, q) / factorial(p - i)
            be[(p, q)] = v
    return CoeffTable.from_coefficients("beta", engine or alpha.engine, N, be)


@dataclass
class SymbolicBCH:
    table: CoeffTable
    series: LinComb
    seconds: float = 0.0


def bch_symbolic(N: int, product: str = "bruck") -> SymbolicBCH:
    """log(exp(a/2) * exp(b') * exp(a/2)) in U(free2_lie(N)); b' = b (bruck) or the adjoint twist (dot)."""
    from .bruck import BruckEnvelope

    if product not in ("bruck", "dot"):
        raise ValueError(f"unknown product {product!r}")
    t0 = time.perf_counter()
    H = BruckEnvelope.free2(N)
    alg = H.alg
    half_a = {H.letter(A): ONE / 2}
    if product == "bruck":
        bprime = {H.letter(B): ONE}
    else:
        bprime = H.from_free(adjoint_exp_triple(A, B, N - 1))
    g = alg.exp_factor_rmul({(): ONE}, half_a)
    g = alg.exp_factor_rmul(g, bprime)
    g = alg.exp_factor_rmul(g, half_a)
    log.debug("group-like element has %d terms", len(g))
    Z = alg.log(g)
    for m in Z:
        if m[0] not in H.t_set:
            raise GroupLikeError(f"BCH series has a component outside T: {alg.mono_label(m)}")
    series = H.to_free(Z)
    if series.coeff(A) != 1 or series.coeff(B) != 1:
        raise InvariantViolation("BCH series must start with a + b")
    kind = "alpha" if product == "bruck" else "beta"
    coeffs = {}
    for d in range(2, N + 1):
        for p in range(1, d):
            q = d - p
            coeffs[(p, q)] = series.coeff(E(p - 1, q - 1)) if (p + q) % 2 else ZERO
    extra = [k for k in series if k.kind == "E" and k.degree > N]
    if extra:
        raise InvariantViolation(f"terms above truncation: {extra}")
    return SymbolicBCH(CoeffTable.from_coefficients(kind, "hopf", N, coeffs), series,
                       time.perf_counter() - t0)


def bch_dot_direct(N: int) -> SymbolicBCH:
    """exp(a) . exp(b) with the full commutative product, then a degree-by-degree logarithm."""
    from .bruck import BruckEnvelope, ut_exp

    if N > MAX_DEGREE["dot_direct"]:
        raise ValueError(f"dot_direct supports N <= {MAX_DEGREE['dot_direct']}")
    t0 = time.perf_counter()
    H = BruckEnvelope.free2(N)
    alg = H.alg
    g = alg.truncate(H.embed(H.dot(ut_exp(H, A), ut_exp(H, B))))
    x: Dict = {}
    for n in range(1, N + 1):
        cur = alg.exp(x) if x else {(): ONE}
        resid = {m: c for m, c in g.items() if alg.mono_degree(m) == n}
        add_into(resid, {m: c for m, c in cur.items() if alg.mono_degree(m) == n}, -ONE)
        bad = [m for m in resid if len(m) != 1 or m[0] not in H.t_set]
        if bad:
            raise GroupLikeError(f"degree {n} residual is not a T-primitive: {alg.mono_label(bad[0])}")
        add_into(x, resid)
    series = H.to_free(x)
    coeffs = {}
    for d in range(2, N + 1):
        for p in range(1, d):
            coeffs[(p, d - p)] = series.coeff(E(p - 1, d - p - 1)) if d % 2 else ZERO
    return SymbolicBCH(CoeffTable.from_coefficients("beta", "dot_direct", N, coeffs), series,
                       time.perf_counter() - t0)


def series_from_table(table: CoeffTable) -> LinComb:
    d = {A: ONE, B: ONE}
    for (p, q), v in table.entries.items():
        if v:
            d[E(p - 1, q - 1)] = v
    return LinComb(d)


def engine_table(kind: str, engine: str, N: int) -> CoeffTable:
    """Dispatch used by the CLI and cross validation."""
    if engine not in MAX_DEGREE:
        raise ValueError(f"unknown engine {engine!r}")
    if N < 1 or N > MAX_DEGREE[engine]:
        raise ValueError(f"engine {engine} supports 1 <= N <= {MAX_DEGREE[engine]}")
    if kind == "alpha":
        if engine == "recursion":
            return alpha_recursion(N)
        if engine == "matrix":
            from .matrix_model import matrix_model

            return matrix_model(N).alpha
        if engine == "hopf":
            return bch_symbolic(N, "bruck").table
        raise ValueError(f"engine {engine} does not produce alpha")
    if kind == "beta":
        if engine == "genfun":
            return beta_genfun(N)
        if engine == "recursion":
            return beta_from_alpha(alpha_recursion(N))
        if engine == "matrix":
            from .matrix_model import matrix_model

            return matrix_model(N).beta
        if engine == "hopf":
            return bch_symbolic(N, "dot").table
        if engine == "dot_direct":
            return bch_dot_direct(N).table
    raise ValueError(f"unknown kind {kind!r}")


def symmetry_violations(table: CoeffTable) -> List[Dict[str, Any]]:
    """Parity (even cells zero) and, for beta, antisymmetry beta[q,p] = -beta[p,q]."""
    out = []
    N = table.max_total_degree
    for d in range(2, N + 1):
        for p in range(1, d):
            q = d - p
            v = table.get(p, q)
            if d % 2 == 0 and v:
                out.append({"p": p, "q": q, "rule": "parity", "value": rat_str(v)})
            if table.kind == "beta" and table.get(q, p) != -v:
                out.append({"p": p, "q": q, "rule": "antisymmetry", "value": rat_str(v)})
    return out


@dataclass
class CrossReport:
    degrees: Dict[str, int]
    disagreements: List[Dict[str, Any]] = field(default_factory=list)
    timings: Dict[str, float] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def to_json_obj(self) -> Dict[str, Any]:
        return {"degrees": self.degrees, "timings": {k: round(v, 3) for k, v in self.timings.items()},
                "disagreements": self.disagreements}


def cross_validate(degrees: Optional[Dict[str, int]] = None, include_reference: bool = True) -> CrossReport:
    """Run every engine and compare all pairs on their common range."""
    deg = dict(DEFAULT_DEGREE)
    deg.update(degrees or {})
    rep = CrossReport(deg)
    alphas: List[CoeffTable] = []
    betas: List[CoeffTable] = []

    def timed(name, f):
        t0 = time.perf_counter()
        r = f()
        rep.timings[name] = time.perf_counter() - t0
        log.info("%s done in %.2fs", name, rep.timings[name])
        return r

    alphas.append(timed("alpha/recursion", lambda: alpha_recursion(deg["recursion"])))
    from .matrix_model import matrix_model

    mm = timed("matrix", lambda: matrix_model(deg["matrix"]))
    alphas.append(mm.alpha)
    alphas.append(timed("alpha/hopf", lambda: bch_symbolic(deg["hopf"], "bruck").table))
    betas.append(timed("beta/genfun", lambda: beta_genfun(deg["genfun"])))
    betas.append(timed("beta/recursion", lambda: beta_from_alpha(alpha_recursion(deg["recursion"]))))
    betas.append(mm.beta)
    betas.append(timed("beta/hopf", lambda: bch_symbolic(deg["hopf"], "dot").table))
    if deg.get("dot_direct"):
        betas.append(timed("beta/dot_direct", lambda: bch_dot_direct(deg["dot_direct"]).table))
    for group in (alphas, betas):
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                for d in table_differences(group[i], group[j]):
                    d["kind"] = group[i].kind
                    rep.disagreements.append(d)
        for t in group:
            for v in symmetry_violations(t):
                v["engine"] = t.engine
                v["kind"] = t.kind
                rep.disagreements.append(v)
    if include_reference:
        for t in betas:
            for d in grid_differences(t):
                d["engines"] = [t.engine, "reference"]
                d["kind"] = "beta"
                rep.disagreements.append(d)
    return rep
