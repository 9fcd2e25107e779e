"""Exhaustive identity checks on basis monomials of U(T) for the free system.

Every identity is multilinear, so checking all tuples of basis monomials with total
degree <= N decides it up to that degree.  Each check returns a :class:`Report`.
"""
from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from .bruck import BruckEnvelope, _splits
from .env import Mono, Terms
from .linear import ONE, ZERO, LinComb, add_into, rat

DEFAULT_DEGREES = {
    "left_bol": 5, "aip": 6, "antipode_div": 6, "monoalt": 6, "lts_op": 5, "der": 5,
    "power_assoc": 6, "dot_comm": 6, "left_automorphic": 5, "phi_flip": 5, "phi_S": 6,
    "delta_phi": 6, "ca_hopf": 5, "ldot_factored": 5, "bruck_l_aut": 5, "halving": 6,
    "div_bruck": 5, "div_dot": 5, "bruck_shortcut": 6, "phi_mult": 5, "phi_prime_inverse": 6,
    "ldot_derivation": 4, "embed_coproduct": 6,
}
MAX_DEGREE = 8


@dataclass
class Report:
    identity: str
    degree: int
    checked: int = 0
    failures: List[Dict[str, Any]] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json_obj(self) -> Dict[str, Any]:
        return {"identity": self.identity, "degree": self.degree, "checked": self.checked,
                "failures": self.failures}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())


class _Ctx:
    """Shared envelope plus a report under construction."""

    def __init__(self, H: BruckEnvelope, rep: Report, max_failures: int = 20):
        self.H = H
        self.rep = rep
        self.max_failures = max_failures

    def check(self, witness: Sequence[Any], lhs: Terms, rhs: Terms, fmt: Optional[Callable] = None) -> None:
        self.rep.checked += 1
        if lhs != rhs and len(self.rep.failures) < self.max_failures:
            f = fmt or self.H.format_env
            self.rep.failures.append({
                "witness": [w if isinstance(w, str) else self.H.ut_label(w) for w in witness],
                "lhs": f(lhs), "rhs": f(rhs)})

    def mono_tuples(self, n: int, N: int, include_unit: bool = True) -> Iterator[Tuple[Mono, ...]]:
        """n-tuples of Ut basis monomials with total degree <= N."""
        H = self.H
        monos = [m for m in H.ut_monomials(N) if include_unit or m]

        def rec(prefix, used):
            if len(prefix) == n:
                yield tuple(prefix)
                return
            for m in monos:
                d = H.degree(m)
                if used + d <= N:
                    prefix.append(m)
                    yield from rec(prefix, used + d)
                    prefix.pop()

        yield from rec([], 0)

    def letters(self, N: int) -> List[Mono]:
        return [m for m in self.H.ut_monomials(N) if len(m) == 1]


def _env(H: BruckEnvelope, m: Mono) -> Terms:
    return H.iota_mono(m)


def _tensor_fmt(H):
    def f(t):
        return " + ".join(f"{v}*({H.ut_label(a)} (x) {H.ut_label(b)})" for (a, b), v in sorted(t.items())) or "0"
    return f


# -- Bruck identities (Env coordinates) -------------------------------------------------

def _left_bol(c: _Ctx, N: int):
    # x1 (y (x2 z)) = (x1 (y x2)) z
    H = c.H
    for x, y, z in c.mono_tuples(3, N):
        X, Y, Z = _env(H, x), _env(H, y), _env(H, z)
        lhs: Terms = {}
        rhs: Terms = {}
        for l, r, k in H.alg.coproduct_mono(x):
            L, R = _env(H, l), _env(H, r)
            add_into(lhs, H.bruck(L, H.bruck(Y, H.bruck(R, Z))), k)
            add_into(rhs, H.bruck(H.bruck(L, H.bruck(Y, R)), Z), k)
        c.check((x, y, z), H.alg.truncate(lhs), H.alg.truncate(rhs))


def _aip(c: _Ctx, N: int):
    H = c.H
    S = lambda t: H.alg.truncate(H.alg.antipode(t))
    for x, y in c.mono_tuples(2, N):
        X, Y = _env(H, x), _env(H, y)
        c.check((x, y), S(H.bruck(X, Y)), H.bruck(S(X), S(Y)))


def _antipode_div(c: _Ctx, N: int):
    H = c.H
    S = lambda t: H.alg.truncate(H.alg.antipode(t))
    for x, y in c.mono_tuples(2, N):
        Y = _env(H, y)
        eps = {(): ONE} if not x else {}
        e_y = H.alg.mul(eps, Y) if eps else {}
        a: Terms = {}
        b: Terms = {}
        for l, r, k in H.alg.coproduct_mono(x):
            L, R = _env(H, l), _env(H, r)
            add_into(a, H.bruck(S(L), H.bruck(R, Y)), k)
            add_into(b, H.bruck(L, H.bruck(S(R), Y)), k)
        c.check((x, y, "S(x1)(x2 y)"), a, e_y)
        c.check((x, y, "x1(S(x2) y)"), b, e_y)


def _distinct_perms(seq: Sequence[int]) -> List[Tuple[int, ...]]:
    return sorted(set(itertools.permutations(seq)))


def _monoalt(c: _Ctx, N: int):
    # polarized L_{a^n} = L_a^n: sum over arrangements of a letter multiset
    H = c.H
    for n in range(1, N):
        for combo in itertools.combinations_with_replacement(c.letters(N), n):
            letters = [m[0] for m in combo]
            dl = sum(H.lie.degrees[g] for g in letters)
            if dl > N:
                continue
            for y in H.ut_monomials(N - dl):
                Y = _env(H, y)
                lhs: Terms = {}
                rhs: Terms = {}
                for perm in _distinct_perms(letters):
                    power: Terms = {(): ONE}
                    for g in reversed(perm):
                        power = H.bruck({(g,): ONE}, power)
                    add_into(lhs, H.bruck(power, Y))
                    acc = Y
                    for g in reversed(perm):
                        acc = H.bruck({(g,): ONE}, acc)
                    add_into(rhs, acc)
                c.check((tuple(letters), y), lhs, rhs)


def _lts_op(c: _Ctx, N: int):
    # [[L_a, L_b], L_c](y) = L_{[a,b,c]}(y)
    H = c.H
    L = lambda g, t: H.bruck({(g,): ONE}, t)
    lets = c.letters(N)
    for (a,), (b,), (cc,) in itertools.product(lets, repeat=3):
        d = sum(H.lie.degrees[g] for g in (a, b, cc))
        if d > N:
            continue
        abc = H.triple({(a,): ONE}, {(b,): ONE}, {(cc,): ONE})
        for y in H.ut_monomials(N - d):
            Y = _env(H, y)
            comm_ab = lambda t: _sub(L(a, L(b, t)), L(b, L(a, t)))
            lhs = _sub(comm_ab(L(cc, Y)), L(cc, comm_ab(Y)))
            rhs = H.bruck(abc, Y)
            c.check(((a,), (b,), (cc,), y), lhs, rhs)


def _sub(x: Terms, y: Terms) -> Terms:
    out = dict(x)
    add_into(out, y, -ONE)
    return out


def _der(c: _Ctx, N: int):
    # D = [L_a, L_b] satisfies D(yz) = D(y) z + y D(z)
    H = c.H
    L = lambda g, t: H.bruck({(g,): ONE}, t)
    lets = c.letters(N)
    for (a,), (b,) in itertools.product(lets, repeat=2):
        if a >= b:
            continue
        dab = H.lie.degrees[a] + H.lie.degrees[b]
        D = lambda t: _sub(L(a, L(b, t)), L(b, L(a, t)))
        for y, z in c.mono_tuples(2, N - dab):
            Y, Z = _env(H, y), _env(H, z)
            lhs = D(H.bruck(Y, Z))
            rhs = H.bruck(D(Y), Z)
            add_into(rhs, H.bruck(Y, D(Z)))
            c.check(((a,), (b,), y, z), lhs, rhs)


def _halving(c: _Ctx, N: int):
    H = c.H
    for m in _env_monomials(H, N):
        acc: Terms = {}
        for l, r, k in H.alg.coproduct_mono(m):
            add_into(acc, H.alg.mul(H.r_mono(l), H.r_mono(r)), k)
        c.check((H.alg.mono_label(m),), acc, {m: ONE})
        # r is a coalgebra map
        lhs = H.alg.coproduct(H.r_mono(m))
        rhs: Dict = {}
        for l, r, k in H.alg.coproduct_mono(m):
            add_into(rhs, H.alg.tensor(H.r_mono(l), H.r_mono(r)), k)
        c.check((H.alg.mono_label(m), "coalgebra"), lhs, rhs, fmt=str)


def _env_monomials(H: BruckEnvelope, N: int) -> List[Mono]:
    gens = [g for g in range(H.lie.dim) if H.lie.degrees[g] <= N]
    out = []

    def rec(start, prefix, deg):
        out.append(tuple(prefix))
        for n in range(start, len(gens)):
            d = deg + H.lie.degrees[gens[n]]
            if d <= N:
                prefix.append(gens[n])
                rec(n, prefix, d)
                prefix.pop()

    rec(0, [], 0)
    return out


def _div(c: _Ctx, N: int, product: str):
    H = c.H
    P = H.product(product)
    to = (lambda m: _env(H, m)) if product == "bruck" else (lambda m: {m: ONE})
    fmt = H.format_env if product == "bruck" else H.format_ut
    for x, y in c.mono_tuples(2, N):
        X, Y = to(x), to(y)
        eps_y = dict(Y) if not x else {}
        lhs: Terms = {}
        rhs: Terms = {}
        Xs = H.alg.coproduct(X)
        for (l, r), k in Xs.items():
            add_into(lhs, P({l: ONE}, H.left_div({r: ONE}, Y, product)), k)
            add_into(rhs, H.left_div({l: ONE}, P({r: ONE}, Y), product), k)
        c.check((x, y, "x1(x2\\y)"), lhs, eps_y, fmt)
        c.check((x, y, "x1\\(x2 y)"), rhs, eps_y, fmt)
        right: Terms = {}
        for (l, r), k in Xs.items():
            add_into(right, P(H.right_div(Y, {l: ONE}, product), {r: ONE}), k)
        c.check((y, x, "(y/x1)x2"), right, eps_y, fmt)


def _bruck_shortcut(c: _Ctx, N: int):
    H = c.H
    for x, y in c.mono_tuples(2, N):
        X, Y = _env(H, x), _env(H, y)
        rec = H.left_div(X, Y, "bruck")
        short = H.bruck(H.alg.truncate(H.alg.antipode(X)), Y)
        c.check((x, y), rec, short)


def _bruck_l_aut(c: _Ctx, N: int):
    # l(x,y)(w z) = l(x1,y1)(w) l(x2,y2)(z)
    H = c.H
    for x, y, w, z in c.mono_tuples(4, N, include_unit=False):
        X, Y, W, Z = (_env(H, m) for m in (x, y, w, z))
        lhs = H.l_map(X, Y, H.bruck(W, Z), "bruck")
        rhs: Terms = {}
        for (x1, x2), kx in H.alg.coproduct(X).items():
            for (y1, y2), ky in H.alg.coproduct(Y).items():
                add_into(rhs, H.bruck(H.l_map({x1: ONE}, {y1: ONE}, W, "bruck"),
                                      H.l_map({x2: ONE}, {y2: ONE}, Z, "bruck")), kx * ky)
        c.check((x, y, w, z), lhs, rhs)


# -- commutative product (Ut coordinates) ---------------------------------------------------

def _dot_comm(c: _Ctx, N: int):
    H = c.H
    for x, y in c.mono_tuples(2, N):
        if x > y:
            continue
        c.check((x, y), H.dot({x: ONE}, {y: ONE}), H.dot({y: ONE}, {x: ONE}), H.format_ut)


def _power_assoc(c: _Ctx, N: int):
    # polarized a^(m+n) = a^m . a^n, with a^k the left-normed power
    H = c.H

    def power(seq):
        acc: Terms = {(): ONE}
        for g in reversed(seq):
            acc = H.dot({(g,): ONE}, acc)
        return acc

    for total in range(2, N + 1):
        for combo in itertools.combinations_with_replacement(c.letters(N), total):
            letters = [m[0] for m in combo]
            if sum(H.lie.degrees[g] for g in letters) > N:
                continue
            perms = _distinct_perms(letters)
            whole: Terms = {}
            for p in perms:
                add_into(whole, power(p))
            for m in range(1, total):
                split: Terms = {}
                for p in perms:
                    add_into(split, H.dot(power(p[:m]), power(p[m:])))
                c.check((tuple(letters), f"m={m}"), split, whole, H.format_ut)


def _ldot(H: BruckEnvelope, x: Terms, y: Terms, z: Terms) -> Terms:
    return H.l_map(x, y, z, "dot")


def _left_automorphic(c: _Ctx, N: int):
    # l.(x,y)(w . z) = l.(x1,y1)(w) . l.(x2,y2)(z)
    H = c.H
    for x, y, w, z in c.mono_tuples(4, N, include_unit=False):
        X, Y, W, Z = ({m: ONE} for m in (x, y, w, z))
        lhs = _ldot(H, X, Y, H.dot(W, Z))
        rhs: Terms = {}
        for (x1, x2), kx in H.alg.coproduct(X).items():
            for (y1, y2), ky in H.alg.coproduct(Y).items():
                add_into(rhs, H.dot(_ldot(H, {x1: ONE}, {y1: ONE}, W),
                                    _ldot(H, {x2: ONE}, {y2: ONE}, Z)), kx * ky)
        c.check((x, y, w, z), lhs, rhs, H.format_ut)


def _ca_hopf(c: _Ctx, N: int):
    sub = Report("dot_comm", N)
    _dot_comm(_Ctx(c.H, sub, c.max_failures), N)
    sub2 = Report("left_automorphic", N)
    _left_automorphic(_Ctx(c.H, sub2, c.max_failures), N)
    c.rep.checked += sub.checked + sub2.checked
    c.rep.failures.extend(sub.failures + sub2.failures)


def _ldot_factored(c: _Ctx, N: int):
    H = c.H
    for x, y, z in c.mono_tuples(3, N):
        X, Y, Z = ({m: ONE} for m in (x, y, z))
        c.check((x, y, z), _ldot(H, X, Y, Z), H.ldot_factored(X, Y, Z), H.format_ut)


def _ldot_derivation(c: _Ctx, N: int):
    # l.(x, a) is a derivation of the commutative product
    H = c.H
    for (a,) in c.letters(N):
        A_ = {(a,): ONE}
        for x, w, z in c.mono_tuples(3, N - H.lie.degrees[a], include_unit=False):
            X, W, Z = ({m: ONE} for m in (x, w, z))
            D = lambda t: _ldot(H, X, A_, t)
            lhs = D(H.dot(W, Z))
            rhs = H.dot(D(W), Z)
            add_into(rhs, H.dot(W, D(Z)))
            c.check((x, (a,), w, z), lhs, rhs, H.format_ut)


def _phi_flip(c: _Ctx, N: int):
    # phi_z phi_x (y) = phi_{phi_{z1}(x)} phi_{z2} (y)
    H = c.H
    for z, x, y in c.mono_tuples(3, N):
        lhs = H.phi_ut({z: ONE}, H.phi_ut({x: ONE}, {y: ONE}))
        rhs: Terms = {}
        for l, r, k in H.alg.coproduct_mono(z):
            add_into(rhs, H.phi_ut(H.phi_ut({l: ONE}, {x: ONE}), H.phi_ut({r: ONE}, {y: ONE})), k)
        c.check((z, x, y), lhs, rhs, H.format_ut)


def _phi_S(c: _Ctx, N: int):
    H = c.H
    S = H.ut_antipode
    for x, y in c.mono_tuples(2, N):
        base = H.phi_ut({x: ONE}, {y: ONE})
        c.check((x, y, "S phi_x S"), S(H.phi_ut({x: ONE}, S({y: ONE}))), base, H.format_ut)
        c.check((x, y, "phi_S(x)"), H.phi_ut(S({x: ONE}), {y: ONE}), base, H.format_ut)


def _delta_phi(c: _Ctx, N: int):
    H = c.H
    for x, y in c.mono_tuples(2, N):
        lhs = H.ut_coproduct(H.phi_ut({x: ONE}, {y: ONE}))
        rhs: Dict = {}
        for x1, x2, kx in H.alg.coproduct_mono(x):
            for y1, y2, ky in H.alg.coproduct_mono(y):
                add_into(rhs, H.alg.tensor(H.phi_ut({x1: ONE}, {y1: ONE}), H.phi_ut({x2: ONE}, {y2: ONE})), kx * ky)
        c.check((x, y), lhs, rhs, _tensor_fmt(H))


def _phi_mult(c: _Ctx, N: int):
    # phi_x(u o v) = phi_{x1}(u) o phi_{x2}(v)
    H = c.H
    for x, u, v in c.mono_tuples(3, N):
        uv = H.reduce(H.bruck(_env(H, u), _env(H, v)))
        lhs = H.phi({x: ONE}, uv)
        rhs: Terms = {}
        for l, r, k in H.alg.coproduct_mono(x):
            add_into(rhs, H.bruck(H.phi({l: ONE}, {u: ONE}), H.phi({r: ONE}, {v: ONE})), k)
        c.check((x, u, v), lhs, rhs)


def _phi_prime_inverse(c: _Ctx, N: int):
    H = c.H
    for x, y in c.mono_tuples(2, N):
        acc: Terms = {}
        for l, r, k in H.alg.coproduct_mono(x):
            add_into(acc, H.phi_prime_ut({l: ONE}, H.phi_ut({r: ONE}, {y: ONE})), k)
        c.check((x, y), acc, {y: ONE} if not x else {}, H.format_ut)


def _embed_coproduct(c: _Ctx, N: int):
    # coproduct of Ut monomials is multiset splitting: Delta(iota(m)) = (iota x iota)(split m)
    H = c.H
    for m in H.ut_monomials(N):
        lhs = H.alg.coproduct(H.iota_mono(m))
        rhs: Dict = {}
        for l, r, k in H.alg.coproduct_mono(m):
            add_into(rhs, H.alg.tensor(H.iota_mono(l), H.iota_mono(r)), k)
        c.check((m,), lhs, rhs, str)


CATALOGUE: Dict[str, Callable[[_Ctx, int], None]] = {
    "left_bol": _left_bol,
    "aip": _aip,
    "antipode_div": _antipode_div,
    "monoalt": _monoalt,
    "lts_op": _lts_op,
    "der": _der,
    "power_assoc": _power_assoc,
    "dot_comm": _dot_comm,
    "left_automorphic": _left_automorphic,
    "phi_flip": _phi_flip,
    "phi_S": _phi_S,
    "delta_phi": _delta_phi,
    "ca_hopf": _ca_hopf,
    "ldot_factored": _ldot_factored,
    "ldot_derivation": _ldot_derivation,
    "bruck_l_aut": _bruck_l_aut,
    "halving": _halving,
    "div_bruck": lambda c, N: _div(c, N, "bruck"),
    "div_dot": lambda c, N: _div(c, N, "dot"),
    "bruck_shortcut": _bruck_shortcut,
    "phi_mult": _phi_mult,
    "phi_prime_inverse": _phi_prime_inverse,
    "embed_coproduct": _embed_coproduct,
}

HOPF_SUITE = ("left_bol", "aip", "antipode_div", "monoalt", "lts_op", "der", "power_assoc", "dot_comm",
              "left_automorphic", "phi_flip", "phi_S", "delta_phi", "ldot_factored")

_envelopes: Dict[int, BruckEnvelope] = {}


def envelope(N: int) -> BruckEnvelope:
    """Shared free2 envelope at truncation N (caches are reused across checks)."""
    H = _envelopes.get(N)
    if H is None:
        H = _envelopes[N] = BruckEnvelope.free2(N)
    return H


def verify_identity(name: str, N: Optional[int] = None, H: Optional[BruckEnvelope] = None) -> Report:
    if name not in CATALOGUE:
        raise KeyError(f"unknown identity {name!r}; known: {', '.join(sorted(CATALOGUE))}")
    N = DEFAULT_DEGREES[name] if N is None else N
    if not (0 <= N <= MAX_DEGREE):
        raise ValueError(f"degree must lie in 0..{MAX_DEGREE}")
    H = H if H is not None else envelope(N)
    if H.N is not None and H.N < N:
        raise ValueError("envelope truncation below the requested degree")
    rep = Report(name, N)
    t0 = time.perf_counter()
    CATALOGUE[name](_Ctx(H, rep), N)
    rep.seconds = time.perf_counter() - t0
    return rep


def tangent_check(N: int = 7, H: Optional[BruckEnvelope] = None) -> Report:
    """-((a . c) . b - a . (c . b)) against the free triple [a, b, c] for basis letters."""
    from .calts import FREE2

    H = H if H is not None else envelope(N)
    rep = Report("tangent", N)
    c = _Ctx(H, rep)
    lets = c.letters(N)
    for (a,), (b,), (cc,) in itertools.product(lets, repeat=3):
        if H.lie.degrees[a] + H.lie.degrees[b] + H.lie.degrees[cc] > N:
            continue
        A_, B_, C_ = {(a,): ONE}, {(b,): ONE}, {(cc,): ONE}
        assoc = H.dot(H.dot(A_, C_), B_)
        add_into(assoc, H.dot(A_, H.dot(C_, B_)), -ONE)
        lhs = {m: -v for m, v in assoc.items()}
        want = FREE2.triple(*(LinComb.basis(H.keys[g]) for g in (a, b, cc)))
        c.check(((a,), (b,), (cc,)), lhs, H.from_free(want), H.format_ut)
    return rep
