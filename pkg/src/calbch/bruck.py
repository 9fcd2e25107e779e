"""Non-associative products on an enveloping algebra U(L) and on its subalgebra U(T).

``BruckEnvelope`` fixes a Lie algebra L = T + h (by structure constants), the
generators spanning T, and a truncation degree.  It provides

* the halving map r and the Bruck product  x o y = r(x1) * y * r(x2);
* coordinates for U(T): a sorted tuple of T-letters stands for the left-normed
  Bruck product b1 o (b2 o (... o bl)); ``embed`` and ``reduce`` convert;
* the maps phi, phi', the commutative product x . y = x1 o phi_{x2}(y),
  divisions for either product and the inner maps l and l-dot.

Ut elements are dicts ``tuple_of_T_generator_indices -> rational``.
"""
from __future__ import annotations

import itertools
from typing import Any, Callable, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

from .env import EnvAlgebra, EnvElement, LieStructure, Mono, Terms, Tensor, free2_lie, free2_lie_index, standard_embedding
from .errors import InvariantViolation, ResidualError
from .linear import ONE, ZERO, LinComb, Rational, add_into, rat

HALF = ONE / 2


def _scaled(x: Terms, c) -> Terms:
    return {m: c * v for m, v in x.items()}


class BruckEnvelope:
    def __init__(self, lie: LieStructure, t_gens: Sequence[int], N: Optional[int],
                 keys: Optional[Mapping[int, Hashable]] = None):
        self.alg = EnvAlgebra(lie, N)
        self.lie = lie
        self.N = N
        self.t_gens = tuple(sorted(t_gens))
        self.t_set = frozenset(self.t_gens)
        self.keys = dict(keys) if keys else {g: lie.labels[g] for g in self.t_gens}
        self.gen_of = {k: g for g, k in self.keys.items()}
        self._r: Dict[Mono, Terms] = {(): {(): ONE}}
        self._iota: Dict[Mono, Terms] = {(): {(): ONE}}
        self._phil: Dict[Tuple[Mono, int], Terms] = {}
        self._phim: Dict[Tuple[Mono, Mono], Terms] = {}
        self._dotm: Dict[Tuple[Mono, Mono], Terms] = {}

    # -- constructors ---------------------------------------------------------
    @classmethod
    def free2(cls, N: int) -> "BruckEnvelope":
        from .calts import A, B, E

        lie = free2_lie(N)
        keys = {}
        for n, (f, i, j) in enumerate(free2_lie_index(N)):
            if f == "a":
                keys[n] = A
            elif f == "b":
                keys[n] = B
            elif (i + j) % 2 == 1:
                keys[n] = E(i, j)
        return cls(lie, list(keys), N, keys)

    @classmethod
    def from_lts(cls, lts, N: Optional[int] = None) -> "BruckEnvelope":
        lie, t_index, _ = standard_embedding(lts)
        return cls(lie, t_index, N, {g: p for p, g in enumerate(t_index)})

    # -- helpers ----------------------------------------------------------------
    def degree(self, m: Mono) -> int:
        return self.alg.mono_degree(m)

    def letter(self, key: Hashable) -> Mono:
        return (self.gen_of[key],)

    def ut_monomials(self, max_degree: int, min_degree: int = 0) -> List[Mono]:
        """Sorted T-letter tuples of degree in [min_degree, max_degree], in (degree, length, lex) order."""
        gens = [g for g in self.t_gens if self.lie.degrees[g] <= max_degree]
        out: List[Mono] = []

        def rec(start: int, prefix: List[int], deg: int):
            if deg >= min_degree:
                out.append(tuple(prefix))
            for n in range(start, len(gens)):
                g = gens[n]
                d = deg + self.lie.degrees[g]
                if d > max_degree:
                    continue
                prefix.append(g)
                rec(n, prefix, d)
                prefix.pop()

        rec(0, [], 0)
        out.sort(key=lambda m: (self.degree(m), len(m), m))
        return out

    def ut_label(self, m: Mono) -> str:
        if not m:
            return "1"
        return ".".join(str(self.keys[g]) for g in m)

    def format_ut(self, x: Terms) -> str:
        return LinComb._raw(dict(x)).format(self.ut_label, key=lambda m: (self.degree(m), len(m), m))

    def format_env(self, x: Terms) -> str:
        return repr(EnvElement(self.alg, x))

    def to_free(self, x: Terms) -> LinComb:
        """Primitive Env element (T-letters only) as a combination of system keys."""
        out = {}
        for m, c in x.items():
            if len(m) != 1 or m[0] not in self.t_set:
                raise InvariantViolation(f"{self.alg.mono_label(m)} is not a T-letter")
            out[self.keys[m[0]]] = c
        return LinComb(out)

    def from_free(self, x: LinComb) -> Terms:
        out: Terms = {}
        for k, c in x.terms.items():
            g = self.gen_of[k]
            if self.N is None or self.lie.degrees[g] <= self.N:
                out[(g,)] = c
        return out

    def triple(self, x: Terms, y: Terms, z: Terms) -> Terms:
        """x o (y o z) - y o (x o z) for primitives (equals 1/4 [[x,y],z])."""
        out = self.bruck(x, self.bruck(y, z))
        add_into(out, self.bruck(y, self.bruck(x, z)), -ONE)
        return out

    # -- halving map and Bruck product --------------------------------------------
    def r_mono(self, m: Mono) -> Terms:
        res = self._r.get(m)
        if res is not None:
            return res
        acc: Terms = {m: ONE}
        for l, rt, k in self.alg.coproduct_mono(m):
            if l and rt:
                add_into(acc, self.alg.mul(self.r_mono(l), self.r_mono(rt)), -k)
        res = _scaled(acc, HALF)
        self._r[m] = res
        return res

    def r(self, x: Terms) -> Terms:
        out: Terms = {}
        for m, c in x.items():
            add_into(out, self.r_mono(m), c)
        return out

    def bruck(self, x: Terms, y: Terms) -> Terms:
        """Left Bruck product sum r(x1) * y * r(x2)."""
        if not x or not y:
            return {}
        mul = self.alg.mul
        out: Terms = {}
        # group by left factor so that r(x1) * y is formed once per distinct x1
        right_by_left: Dict[Mono, Terms] = {}
        for m, c in x.items():
            for l, rt, k in self.alg.coproduct_mono(m):
                add_into(right_by_left.setdefault(l, {}), self.r_mono(rt), c * k)
        for l, rsum in right_by_left.items():
            if not rsum:
                continue
            left = y if not l else mul(self.r_mono(l), y)
            if not left:
                continue
            if len(rsum) == 1 and () in rsum:
                add_into(out, left, rsum[()])
            else:
                add_into(out, mul(left, rsum))
        return out

    # -- U(T) coordinates -----------------------------------------------------------
    def iota_mono(self, m: Mono) -> Terms:
        res = self._iota.get(m)
        if res is not None:
            return res
        if any(g not in self.t_set for g in m):
            raise ValueError("Ut monomials use T-letters only")
        res = self.bruck({(m[0],): ONE}, self.iota_mono(m[1:]))
        if self.N is None or self.degree(m) <= self.N:
            if res.get(m) != 1 or any(len(k) >= len(m) and k != m for k in res):
                raise InvariantViolation(f"embedding of {self.ut_label(m)} is not unitriangular")
        self._iota[m] = res
        return res

    def embed(self, x: Terms) -> Terms:
        out: Terms = {}
        for m, c in x.items():
            add_into(out, self.iota_mono(m), c)
        return out

    def reduce(self, x: Terms) -> Terms:
        """Inverse of ``embed``: eliminate top-length terms; anything left over is an error."""
        work = dict(x)
        out: Terms = {}
        while work:
            m = max(work, key=lambda k: (len(k), k))
            c = work[m]
            if any(g not in self.t_set for g in m):
                raise ResidualError(f"element leaves U(T): residual term {self.alg.mono_label(m)}")
            out[m] = c
            add_into(work, self.iota_mono(m), -c)
        return out

    def ut_coproduct(self, x: Terms) -> Tensor:
        return self.alg.coproduct(x)

    @staticmethod
    def ut_antipode(x: Terms) -> Terms:
        return {m: (-c if len(m) % 2 else c) for m, c in x.items()}

    def ut_counit(self, x: Terms) -> Rational:
        return x.get((), ZERO)

    # -- phi, phi', dot ----------------------------------------------------------------
    def phi_letter(self, xm: Mono, g: int) -> Terms:
        """phi_x(g) = S(x1) o (g o x2) for a Ut monomial x and T-letter g (primitive result)."""
        key = (xm, g)
        res = self._phil.get(key)
        if res is not None:
            return res
        res = {}
        G = {(g,): ONE}
        for l, rt, k in self.alg.coproduct_mono(xm):
            inner = self.bruck(G, self.iota_mono(rt))
            sign = -k if len(l) % 2 else k
            add_into(res, self.bruck(self.iota_mono(l), inner), sign)
        if any(len(m) != 1 or m[0] not in self.t_set for m in res):
            raise InvariantViolation(f"phi_{self.ut_label(xm)}({self.lie.labels[g]}) left T")
        self._phil[key] = res
        return res

    def phi_mono(self, xm: Mono, ym: Mono) -> Terms:
        """phi_x(y) in Env coordinates for Ut monomials x, y."""
        key = (xm, ym)
        res = self._phim.get(key)
        if res is not None:
            return res
        if not ym:
            res = {(): ONE} if not xm else {}
        else:
            res = {}
            g, rest = ym[0], ym[1:]
            for l, rt, k in self.alg.coproduct_mono(xm):
                p = self.phi_letter(l, g)
                if not p:
                    continue
                q = self.phi_mono(rt, rest)
                if q:
                    add_into(res, self.bruck(p, q), k)
        self._phim[key] = res
        return res

    def phi(self, x: Terms, y: Terms) -> Terms:
        out: Terms = {}
        for xm, cx in x.items():
            for ym, cy in y.items():
                add_into(out, self.phi_mono(xm, ym), cx * cy)
        return out

    def phi_ut(self, x: Terms, y: Terms) -> Terms:
        return self.reduce(self.phi(x, y))

    def phi_prime_ut(self, x: Terms, y: Terms) -> Terms:
        out: Terms = {}
        for xm, c in x.items():
            add_into(out, self._phi_prime_mono(xm, y), c)
        return out

    def _phi_prime_mono(self, xm: Mono, y: Terms) -> Terms:
        if not xm:
            return dict(y)
        out = {m: -c for m, c in self.phi_ut({xm: ONE}, y).items()}
        for l, rt, k in self.alg.coproduct_mono(xm):
            if l and rt:
                add_into(out, self._phi_prime_mono(l, self.phi_ut({rt: ONE}, y)), -k)
        return out

    def dot_mono(self, xm: Mono, ym: Mono) -> Terms:
        key = (xm, ym)
        res = self._dotm.get(key)
        if res is not None:
            return res
        env: Terms = {}
        for l, rt, k in self.alg.coproduct_mono(xm):
            p = self.phi_mono(rt, ym)
            if p:
                add_into(env, self.bruck(self.iota_mono(l), p), k)
        res = self.reduce(env)
        self._dotm[key] = res
        return res

    def dot(self, x: Terms, y: Terms) -> Terms:
        """Commutative automorphic product on Ut coordinates."""
        out: Terms = {}
        for xm, cx in x.items():
            for ym, cy in y.items():
                if self.N is not None and self.degree(xm) + self.degree(ym) > self.N:
                    continue
                add_into(out, self.dot_mono(xm, ym), cx * cy)
        return out

    def bruck_ut(self, x: Terms, y: Terms) -> Terms:
        """Bruck product on Ut coordinates (through Env)."""
        return self.reduce(self.bruck(self.embed(x), self.embed(y)))

    # -- divisions and inner maps ----------------------------------------------------------
    def product(self, name: str) -> Callable[[Terms, Terms], Terms]:
        if name == "bruck":
            return self.bruck
        if name == "dot":
            return self.dot
        raise ValueError(f"unknown product {name!r}")

    def left_div(self, x: Terms, y: Terms, product: str = "bruck") -> Terms:
        """x \\ y by the connected recursion x\\y = e(x)y - x y - sum' x' (x''\\y).

        ``bruck`` works in Env coordinates, ``dot`` in Ut coordinates; in both cases
        the coproduct is the multiset splitting of the respective monomials.
        """
        P = self.product(product)
        out: Terms = {}
        cache: Dict[Mono, Terms] = {}
        for m, c in x.items():
            add_into(out, self._ldiv_mono(m, y, P, cache), c)
        return out

    def _ldiv_mono(self, m: Mono, y: Terms, P, cache) -> Terms:
        if m in cache:
            return cache[m]
        if not m:
            res = dict(y)
        else:
            res = {k: -v for k, v in P({m: ONE}, y).items()}
            for l, rt, k in self.alg.coproduct_mono(m):
                if l and rt:
                    add_into(res, P({l: ONE}, self._ldiv_mono(rt, y, P, cache)), -k)
        cache[m] = res
        return res

    def right_div(self, y: Terms, x: Terms, product: str = "bruck") -> Terms:
        """y / x with (y/x1) x2 = e(x) y, by the mirrored recursion."""
        P = self.product(product)
        out: Terms = {}
        cache: Dict[Mono, Terms] = {}
        for m, c in x.items():
            add_into(out, self._rdiv_mono(y, m, P, cache), c)
        return out

    def _rdiv_mono(self, y: Terms, m: Mono, P, cache) -> Terms:
        if m in cache:
            return cache[m]
        if not m:
            res = dict(y)
        else:
            res = {k: -v for k, v in P(y, {m: ONE}).items()}
            for l, rt, k in self.alg.coproduct_mono(m):
                if l and rt:
                    add_into(res, P(self._rdiv_mono(y, l, P, cache), {rt: ONE}), -k)
        cache[m] = res
        return res

    def left_div_checked(self, x: Terms, y: Terms) -> Terms:
        """Bruck left division, cross-checked against the antipode shortcut S(x) o y."""
        rec = self.left_div(x, y, "bruck")
        short = self.alg.truncate(self.bruck(self.alg.truncate(self.alg.antipode(x)), y))
        if rec != short:
            raise InvariantViolation("left division recursion disagrees with S(x) o y")
        return rec

    def l_map(self, x: Terms, y: Terms, z: Terms, product: str = "bruck") -> Terms:
        """l(x,y)(z) = (x1 y1) \\ (x2 (y2 z)) for the chosen product."""
        P = self.product(product)
        out: Terms = {}
        xs = self.alg.coproduct(x)
        ys = self.alg.coproduct(y)
        yz_cache: Dict[Mono, Terms] = {}
        for (x1, x2), cx in xs.items():
            for (y1, y2), cy in ys.items():
                yz = yz_cache.get(y2)
                if yz is None:
                    yz = yz_cache[y2] = P({y2: ONE}, z)
                num = P({x2: ONE}, yz)
                if not num:
                    continue
                den = P({x1: ONE}, {y1: ONE})
                add_into(out, self.left_div(den, num, product), cx * cy)
        return out

    def ldot_factored(self, x: Terms, y: Terms, z: Terms) -> Terms:
        """phi'_{x1 . y1} l(x2, phi_{x3}(y2)) phi_{x4} phi_{y3} (z), all in Ut coordinates."""
        out: Terms = {}
        for xm, cx in x.items():
            for ym, cy in y.items():
                for xs, kx in _splits(self.alg, xm, 4):
                    x1, x2, x3, x4 = xs
                    for ys, ky in _splits(self.alg, ym, 3):
                        y1, y2, y3 = ys
                        w = self.phi_ut({y3: ONE}, z)
                        w = self.phi_ut({x4: ONE}, w)
                        v = self.phi_ut({x3: ONE}, {y2: ONE})
                        w = self.reduce(self.l_map(self.embed({x2: ONE}), self.embed(v), self.embed(w), "bruck"))
                        u = self.dot({x1: ONE}, {y1: ONE})
                        add_into(out, self.phi_prime_ut(u, w), cx * cy * kx * ky)
        return out


def _splits(alg: EnvAlgebra, m: Mono, parts: int) -> List[Tuple[Tuple[Mono, ...], int]]:
    """Iterated coproduct: ordered splits of a multiset into ``parts`` pieces with multiplicities."""
    if parts == 1:
        return [((m,), 1)]
    out = []
    for l, rt, k in alg.coproduct_mono(m):
        for rest, k2 in _splits(alg, rt, parts - 1):
            out.append(((l,) + rest, k * k2))
    return out


def loop_jet_F(env: BruckEnvelope, x: Terms, y: Terms, product: str = "bruck") -> LinComb:
    """Tangent component of x y; x, y are Env elements for ``bruck`` and Ut elements for ``dot``.

    The tangent component is the first Eulerian idempotent, so exp(a) exp(b)
    maps to the corresponding BCH series.
    """
    if product == "bruck":
        z = env.bruck(x, y)
    elif product == "dot":
        z = env.embed(env.dot(x, y))
    else:
        raise ValueError(f"unknown product {product!r}")
    p = env.alg.eulerian(env.alg.truncate(z))
    return env.to_free(p)


def ut_exp(env: BruckEnvelope, key: Hashable, coeff: Any = 1) -> Terms:
    """exp(c * letter) in Ut coordinates: the letter's Bruck powers are the monomials g^n."""
    from math import factorial

    g = env.gen_of[key]
    d = env.lie.degrees[g]
    c = rat(coeff)
    out: Terms = {(): ONE}
    n = 1
    while env.N is None or n * d <= env.N:
        if env.N is None and n > 64:
            raise ValueError("untruncated exponential needs a truncation degree")
        out[(g,) * n] = c ** n / factorial(n)
        n += 1
    return out
