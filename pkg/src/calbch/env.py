"""Lie algebras by structure constants and their truncated enveloping algebras.

A PBW monomial is a non-decreasing tuple of generator indices.  Elements of the
enveloping algebra are dicts ``monomial -> rational``; :class:`EnvElement` wraps
them with a reference to the algebra that fixes the truncation degree.
"""
from __future__ import annotations

import itertools
import json
from math import comb
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import GroupLikeError, StructureError, TruncationError, ValuationError
from .linear import ONE, ZERO, IncrementalBasis, LinComb, Rational, add_into, parse_rat, rat, rat_str

Mono = Tuple[int, ...]
Terms = Dict[Mono, Rational]
Tensor = Dict[Tuple[Mono, Mono], Rational]


class LieStructure:
    """Lie algebra on generators 0..d-1 with a bracket table.

    ``brackets[(p, q)]`` gives ``{idx: coeff}`` for ``[x_p, x_q]``; the table is
    completed by antisymmetry.  Generator degrees must be non-decreasing so that
    index order refines the degree order used for PBW monomials.
    """

    def __init__(self, labels: Sequence[str], degrees: Sequence[int],
                 brackets: Mapping[Tuple[int, int], Mapping[int, Any]], check: bool = True):
        self.labels = tuple(labels)
        self.degrees = tuple(int(d) for d in degrees)
        self.dim = len(self.labels)
        if len(self.degrees) != self.dim:
            raise StructureError("one degree per generator")
        if any(d < 1 for d in self.degrees):
            raise StructureError("degrees must be positive")
        if any(self.degrees[i] > self.degrees[i + 1] for i in range(self.dim - 1)):
            raise StructureError("generators must be listed by non-decreasing degree")
        br: Dict[Tuple[int, int], Dict[int, Rational]] = {}
        for (p, q), out in brackets.items():
            for i in (p, q, *out):
                if not (0 <= i < self.dim):
                    raise IndexError(f"generator index {i} out of range")
            o = {i: rat(v) for i, v in out.items() if v}
            if p == q:
                if o:
                    raise StructureError(f"[x{p}, x{p}] must vanish")
                continue
            neg = {i: -v for i, v in o.items()}
            for key, val in (((p, q), o), ((q, p), neg)):
                if key in br and br[key] != val:
                    raise StructureError(f"bracket table is not antisymmetric at {key}")
            if o:
                br[(p, q)] = o
                br[(q, p)] = neg
        self._br = br
        self.graded = all(
            all(self.degrees[i] == self.degrees[p] + self.degrees[q] for i in out)
            for (p, q), out in br.items())
        if check:
            bad = self.jacobi_violations(limit=1)
            if bad:
                raise StructureError(f"Jacobi identity fails on {bad[0]}")

    def bracket_keys(self, p: int, q: int) -> Dict[int, Rational]:
        return self._br.get((p, q), {})

    def bracket(self, x, y) -> LinComb:
        x, y = _lc(x), _lc(y)
        out: Dict = {}
        for p, cp in x.terms.items():
            for q, cq in y.terms.items():
                r = self._br.get((p, q))
                if r:
                    add_into(out, r, cp * cq)
        return LinComb._raw(out)

    def jacobi_violations(self, limit: Optional[int] = None) -> List[Tuple[int, int, int]]:
        bad = []
        for p in range(self.dim):
            for q in range(p + 1, self.dim):
                for r in range(q + 1, self.dim):
                    xs = [LinComb.basis(i) for i in (p, q, r)]
                    s = LinComb()
                    for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
                        s = s + self.bracket(self.bracket(xs[a], xs[b]), xs[c])
                    if s:
                        bad.append((p, q, r))
                        if limit and len(bad) >= limit:
                            return bad
        return bad

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def to_json_obj(self) -> Dict[str, Any]:
        return {
            "generators": [{"label": l, "degree": d} for l, d in zip(self.labels, self.degrees)],
            "brackets": [{"p": p, "q": q, "out": [{"idx": i, "value": rat_str(v)} for i, v in sorted(o.items())]}
                         for (p, q), o in sorted(self._br.items()) if p < q],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=1)

    @classmethod
    def from_json(cls, doc) -> "LieStructure":
        if isinstance(doc, str):
            doc = json.loads(doc)
        gens = doc["generators"]
        br = {(int(b["p"]), int(b["q"])): {int(o["idx"]): parse_rat(str(o["value"])) for o in b["out"]}
              for b in doc.get("brackets", [])}
        return cls([g["label"] for g in gens], [int(g["degree"]) for g in gens], br)


def _lc(x) -> LinComb:
    if isinstance(x, LinComb):
        return x
    if isinstance(x, int):
        return LinComb.basis(x)
    return LinComb(x)


# -- the free two-generated case ----------------------------------------------

def free2_lie_index(N: int) -> List[Tuple[str, int, int]]:
    """Generator list of :func:`free2_lie` as (family, i, j); family is 'a', 'b' or 'c'."""
    gens = [("a", 0, 0), ("b", 0, 0)]
    for d in range(2, N + 1):
        gens.extend(("c", i, d - 2 - i) for i in range(d - 1))
    return gens


def free2_lie(N: int) -> LieStructure:
    """Graded Lie algebra on a, b and c(i,j) (degree i+j+2 <= N).

    [a,b] = 2c(0,0), [c(i,j),a] = 2c(i+1,j), [c(i,j),b] = 2c(i,j+1); the c's commute.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    gens = free2_lie_index(N)
    idx = {g: n for n, g in enumerate(gens)}
    two = rat(2)
    br: Dict[Tuple[int, int], Dict[int, Rational]] = {}
    if ("c", 0, 0) in idx:
        br[(0, 1)] = {idx[("c", 0, 0)]: two}
    for (f, i, j), n in idx.items():
        if f != "c":
            continue
        for g, key in ((0, ("c", i + 1, j)), (1, ("c", i, j + 1))):
            if key in idx:
                br[(n, g)] = {idx[key]: two}
    labels = [f if f != "c" else f"c({i},{j})" for f, i, j in gens]
    return LieStructure(labels, [1 if f != "c" else i + j + 2 for f, i, j in gens], br, check=N <= 9)


# -- standard embedding --------------------------------------------------------

def _mat_mul(x: Dict[Tuple[int, int], Rational], y: Dict[Tuple[int, int], Rational]) -> Dict:
    rows: Dict[int, Dict[int, Rational]] = {}
    for (k, j), v in y.items():
        rows.setdefault(k, {})[j] = v
    out: Dict = {}
    for (i, k), v in x.items():
        for j, w in rows.get(k, {}).items():
            add_into(out, {(i, j): v * w})
    return out


def standard_embedding(lts, check_axioms: bool = True):
    """Lie algebra T + h with h spanned by the inner maps D(x,y) = [x, y, .].

    Brackets: [x,y] = 2 D(x,y), [D,z] = 2 D(z), [D,D'] = 2 (DD' - D'D).  Returns
    ``(lie, t_index, h_pairs)`` where ``t_index[p]`` is the generator index of basis
    element p of T and ``h_pairs`` lists the (p, q) whose D(p,q) form the basis of h.
    Graded inputs keep their grading (deg D(x,y) = deg x + deg y); otherwise T has
    degree 1 and h degree 2.
    """
    if check_axioms:
        from .calts import check_ca_axioms

        rep = check_ca_axioms(lts, max_degree=None if not lts.graded else sum(lts.degrees))
        if not rep.ok:
            raise StructureError(f"input is not a CA triple system: {rep.failures[0]}")
    d = lts.dim
    tdeg = list(lts.degrees) if lts.graded else [1] * d
    cand = sorted(((p, q) for p in range(d) for q in range(p + 1, d)),
                  key=lambda pq: (tdeg[pq[0]] + tdeg[pq[1]], pq))
    basis = IncrementalBasis()
    h_pairs: List[Tuple[int, int]] = []
    h_mats: List[Dict] = []
    h_deg: List[int] = []
    for p, q in cand:
        m = lts.operator_matrix(p, q)
        if m and basis.add(m):
            h_pairs.append((p, q))
            h_mats.append(m)
            h_deg.append(tdeg[p] + tdeg[q] if lts.graded else 2)
    # generator order: by degree, T before h inside a degree
    items = [(tdeg[p], 0, p) for p in range(d)] + [(h_deg[k], 1, k) for k in range(len(h_pairs))]
    items.sort()
    pos = {(kind, n): i for i, (_, kind, n) in enumerate(items)}
    labels = [lts.labels[n] if kind == 0 else f"D({lts.labels[h_pairs[n][0]]},{lts.labels[h_pairs[n][1]]})"
              for _, kind, n in items]
    degrees = [deg for deg, _, _ in items]
    two = rat(2)

    def h_coords(m: Dict) -> Dict[int, Rational]:
        try:
            return {pos[(1, k)]: c for k, c in basis.express(m).items()}
        except ValueError:
            raise StructureError("inner derivations are not closed under commutators") from None

    br: Dict[Tuple[int, int], Dict[int, Rational]] = {}
    for p in range(d):
        for q in range(p + 1, d):
            m = lts.operator_matrix(p, q)
            if m:
                br[(pos[(0, p)], pos[(0, q)])] = {k: two * c for k, c in h_coords(m).items()}
    for k, m in enumerate(h_mats):
        for r in range(d):
            out = {i: two * v for (i, j), v in m.items() if j == r}
            if out:
                br[(pos[(1, k)], pos[(0, r)])] = {pos[(0, i)]: v for i, v in out.items()}
        for k2 in range(k + 1, len(h_mats)):
            comm = _mat_mul(m, h_mats[k2])
            add_into(comm, _mat_mul(h_mats[k2], m), -ONE)
            if comm:
                br[(pos[(1, k)], pos[(1, k2)])] = {i: two * c for i, c in h_coords(comm).items()}
    lie = LieStructure(labels, degrees, br)
    return lie, [pos[(0, p)] for p in range(d)], h_pairs


# -- enveloping algebra --------------------------------------------------------

class EnvAlgebra:
    """Universal enveloping algebra of ``lie`` modulo degree > N (N=None: no truncation).

    Truncation needs a graded Lie algebra; ungraded ones (such as nilpotent matrix
    examples) may be used untruncated.
    """

    def __init__(self, lie: LieStructure, N: Optional[int] = None):
        if N is not None and not lie.graded:
            raise StructureError("truncation by degree needs a graded Lie algebra")
        self.lie = lie
        self.N = N
        self._deg = lie.degrees
        self._tg: Dict[Tuple[Mono, int], Terms] = {}
        self._cop: Dict[Mono, List[Tuple[Mono, Mono, int]]] = {}
        self._anti: Dict[Mono, Terms] = {}
        self._mdeg: Dict[Mono, int] = {(): 0}

    # degree bookkeeping
    def mono_degree(self, m: Mono) -> int:
        d = self._mdeg.get(m)
        if d is None:
            d = sum(self._deg[g] for g in m)
            self._mdeg[m] = d
        return d

    def keep(self, m: Mono) -> bool:
        return self.N is None or self.mono_degree(m) <= self.N

    def truncate(self, x: Terms) -> Terms:
        if self.N is None:
            return x
        return {m: c for m, c in x.items() if self.mono_degree(m) <= self.N}

    # straightening
    def times_gen(self, m: Mono, g: int) -> Terms:
        """Sorted expansion of m * x_g (exact, not truncated)."""
        key = (m, g)
        res = self._tg.get(key)
        if res is not None:
            return res
        if not m or m[-1] <= g:
            res = {m + (g,): ONE}
        else:
            x = m[-1]
            rest = m[:-1]
            res = {}
            # rest * x * g = rest * g * x + rest * [x, g]
            for m1, c1 in self.times_gen(rest, g).items():
                for m2, c2 in self.times_gen(m1, x).items():
                    v = res.get(m2, ZERO) + c1 * c2
                    if v:
                        res[m2] = v
                    else:
                        del res[m2]
            for h, cb in self.lie.bracket_keys(x, g).items():
                for m2, c2 in self.times_gen(rest, h).items():
                    v = res.get(m2, ZERO) + cb * c2
                    if v:
                        res[m2] = v
                    else:
                        del res[m2]
        self._tg[key] = res
        return res

    def rmul_gen(self, x: Terms, g: int) -> Terms:
        out: Terms = {}
        N = self.N
        dg = self._deg[g]
        for m, c in x.items():
            if N is not None and self.mono_degree(m) + dg > N:
                continue
            for m2, c2 in self.times_gen(m, g).items():
                v = out.get(m2, ZERO) + c * c2
                if v:
                    out[m2] = v
                else:
                    del out[m2]
        return out

    def word(self, letters: Sequence[int]) -> Terms:
        """Product x_{l1} * x_{l2} * ... in PBW form."""
        out: Terms = {(): ONE}
        for g in letters:
            out = self.rmul_gen(out, g)
        return out

    def mul(self, x: Terms, y: Terms) -> Terms:
        """Associative product, walking a prefix tree of the right factor."""
        if not x or not y:
            return {}
        trie: Dict = {}
        for m, c in y.items():
            node = trie
            for g in m:
                node = node.setdefault(g, {})
            node[None] = c
        out: Terms = {}
        N = self.N
        if N is not None:
            x = {m: c for m, c in x.items() if self.mono_degree(m) <= N}
        stack = [(trie, x)]
        while stack:
            node, cur = stack.pop()
            c = node.get(None)
            if c is not None:
                add_into(out, cur, c)
            for g, child in node.items():
                if g is None:
                    continue
                nxt = self.rmul_gen(cur, g)
                if nxt:
                    stack.append((child, nxt))
        return out

    # coalgebra
    def coproduct_mono(self, m: Mono) -> List[Tuple[Mono, Mono, int]]:
        """Sub-multiset splits (left, right, multiplicity) of a sorted monomial."""
        res = self._cop.get(m)
        if res is not None:
            return res
        runs: List[Tuple[int, int]] = []
        for g in m:
            if runs and runs[-1][0] == g:
                runs[-1] = (g, runs[-1][1] + 1)
            else:
                runs.append((g, 1))
        res = []
        for ks in itertools.product(*[range(n + 1) for _, n in runs]):
            left: List[int] = []
            right: List[int] = []
            mult = 1
            for (g, n), k in zip(runs, ks):
                left.extend([g] * k)
                right.extend([g] * (n - k))
                mult *= comb(n, k)
            res.append((tuple(left), tuple(right), mult))
        self._cop[m] = res
        return res

    def coproduct(self, x: Terms) -> Tensor:
        out: Tensor = {}
        for m, c in x.items():
            for l, r, k in self.coproduct_mono(m):
                add_into(out, {(l, r): c * k})
        return out

    def tensor(self, x: Terms, y: Terms) -> Tensor:
        return {(m1, m2): c1 * c2 for m1, c1 in x.items() for m2, c2 in y.items()}

    def tensor_mul(self, X: Tensor, Y: Tensor) -> Tensor:
        out: Tensor = {}
        for (a1, a2), ca in X.items():
            for (b1, b2), cb in Y.items():
                left = self.mul({a1: ONE}, {b1: ONE})
                right = self.mul({a2: ONE}, {b2: ONE})
                for m1, c1 in left.items():
                    for m2, c2 in right.items():
                        if self.N is None or self.mono_degree(m1) + self.mono_degree(m2) <= self.N:
                            add_into(out, {(m1, m2): ca * cb * c1 * c2})
        return out

    def antipode_mono(self, m: Mono) -> Terms:
        res = self._anti.get(m)
        if res is None:
            res = self.word(m[::-1])
            if len(m) % 2:
                res = {k: -v for k, v in res.items()}
            self._anti[m] = res
        return res

    def antipode(self, x: Terms) -> Terms:
        out: Terms = {}
        for m, c in x.items():
            add_into(out, self.antipode_mono(m), c)
        return out

    @staticmethod
    def counit(x: Terms) -> Rational:
        return x.get((), ZERO)

    # exponential and logarithm
    def exp(self, p: Terms, order: Optional[int] = None) -> Terms:
        if any(len(m) != 1 for m in p):
            raise ValuationError("exp needs a primitive argument (length-one monomials only)")
        K = order if order is not None else self.N
        if K is None:
            raise TruncationError("untruncated exp needs an explicit order")
        out: Terms = {(): ONE}
        term: Terms = {(): ONE}
        for k in range(1, K + 1):
            term = self.mul(term, p)
            if not term:
                break
            inv = ONE / k
            term = {m: c * inv for m, c in term.items()}
            add_into(out, term)
        return out

    def exp_factor_rmul(self, x: Terms, p: Terms, order: Optional[int] = None) -> Terms:
        """x * exp(p) for primitive p, without forming exp(p)."""
        K = order if order is not None else self.N
        out = dict(x)
        term = x
        for k in range(1, K + 1):
            nxt: Terms = {}
            for g, c in ((m[0], c) for m, c in p.items()):
                add_into(nxt, self.rmul_gen(term, g), c)
            if not nxt:
                break
            inv = ONE / k
            term = {m: c * inv for m, c in nxt.items()}
            add_into(out, term)
        return out

    def log(self, g: Terms, order: Optional[int] = None, check: bool = True) -> Terms:
        if g.get((), ZERO) != 1:
            raise ValuationError("log needs counit 1")
        K = order if order is not None else self.N
        if K is None:
            raise TruncationError("untruncated log needs an explicit order")
        h = dict(g)
        del h[()]
        out: Terms = {}
        power = h
        for k in range(1, K + 1):
            if not power:
                break
            add_into(out, power, rat(1 if k % 2 else -1) / k)
            if k < K:
                power = self.mul(power, h)
        if check:
            bad = [m for m in out if len(m) != 1]
            if bad:
                raise GroupLikeError(f"logarithm is not primitive; first offending monomial {bad[0]}")
        return out

    def eulerian(self, x: Terms) -> Terms:
        """First Eulerian idempotent sum_k (-1)^(k+1)/k J^{*k}, J = id - unit*counit.

        On group-like elements this is the logarithm; on primitives it is the identity.
        """
        out: Terms = {}
        for m, c in x.items():
            if not m:
                continue
            add_into(out, self._eulerian_mono(m), c)
        return out

    def _eulerian_mono(self, m: Mono) -> Terms:
        cache = self.__dict__.setdefault("_eul", {})
        if m in cache:
            return cache[m]
        out: Terms = {}
        for k in range(1, len(m) + 1):
            add_into(out, self._conv_power(m, k), rat(1 if k % 2 else -1) / k)
        cache[m] = out
        return out

    def _conv_power(self, m: Mono, k: int) -> Terms:
        cache = self.__dict__.setdefault("_convp", {})
        key = (m, k)
        if key in cache:
            return cache[key]
        if k == 1:
            res = {m: ONE}
        else:
            res = {}
            for l, r, mult in self.coproduct_mono(m):
                if l and r and len(r) >= k - 1:
                    add_into(res, self.mul({l: ONE}, self._conv_power(r, k - 1)), mult)
        cache[key] = res
        return res

    # element constructors
    def element(self, terms: Mapping[Mono, Any] | None = None) -> "EnvElement":
        return EnvElement(self, {tuple(m): rat(c) for m, c in (terms or {}).items() if c and self.keep(tuple(m))})

    def one(self) -> "EnvElement":
        return EnvElement(self, {(): ONE})

    def gen(self, g: int | str, coeff: Any = 1) -> "EnvElement":
        if isinstance(g, str):
            g = self.lie.index(g)
        return self.element({(g,): coeff})

    def monomial(self, *letters: int | str) -> "EnvElement":
        """Product of the given generators in the given order (straightened)."""
        ix = [self.lie.index(l) if isinstance(l, str) else l for l in letters]
        return EnvElement(self, self.truncate(self.word(ix)))

    def mono_label(self, m: Mono) -> str:
        if not m:
            return "1"
        return "*".join(self.lie.labels[g] for g in m)


class EnvElement:
    """Element of a truncated enveloping algebra (immutable by convention)."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: EnvAlgebra, terms: Terms):
        self.alg = alg
        self.terms = terms

    @property
    def N(self) -> Optional[int]:
        return self.alg.N

    def _same(self, other: "EnvElement") -> None:
        if not isinstance(other, EnvElement) or other.alg is not self.alg:
            raise ValueError("elements belong to different enveloping algebras")

    def __add__(self, other: "EnvElement") -> "EnvElement":
        self._same(other)
        t = dict(self.terms)
        add_into(t, other.terms)
        return EnvElement(self.alg, t)

    def __sub__(self, other: "EnvElement") -> "EnvElement":
        self._same(other)
        t = dict(self.terms)
        add_into(t, other.terms, -ONE)
        return EnvElement(self.alg, t)

    def __neg__(self) -> "EnvElement":
        return EnvElement(self.alg, {m: -c for m, c in self.terms.items()})

    def scale(self, a: Any) -> "EnvElement":
        a = rat(a)
        if not a:
            return EnvElement(self.alg, {})
        return EnvElement(self.alg, {m: a * c for m, c in self.terms.items()})

    def __mul__(self, other) -> "EnvElement":
        if isinstance(other, EnvElement):
            return pbw_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other) -> "EnvElement":
        return self.scale(other)

    def __eq__(self, other) -> bool:
        if isinstance(other, EnvElement):
            return self.alg is other.alg and self.terms == other.terms
        if isinstance(other, int) and other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None  # mutable-looking container; compare by value only

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coeff(self, *letters) -> Rational:
        ix = tuple(self.alg.lie.index(l) if isinstance(l, str) else l for l in letters)
        return self.terms.get(ix, ZERO)

    def counit(self) -> Rational:
        return self.terms.get((), ZERO)

    def is_primitive(self) -> bool:
        return all(len(m) == 1 for m in self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        lc = LinComb._raw(dict(self.terms))
        return lc.format(self.alg.mono_label, key=lambda m: (self.alg.mono_degree(m), len(m), m))


# -- module-level operations ------------------------------------------------------

def pbw_mul(x: EnvElement, y: EnvElement) -> EnvElement:
    x._same(y)
    return EnvElement(x.alg, x.alg.mul(x.terms, y.terms))


def coproduct(x: EnvElement) -> Tensor:
    return x.alg.coproduct(x.terms)


def antipode(x: EnvElement) -> EnvElement:
    return EnvElement(x.alg, x.alg.truncate(x.alg.antipode(x.terms)))


def primitive_part(x: EnvElement) -> LinComb:
    """Coefficients of the length-one monomials, keyed by generator index."""
    return LinComb._raw({m[0]: c for m, c in x.terms.items() if len(m) == 1})


def counit(x: EnvElement) -> Rational:
    return x.counit()


def env_exp(p: EnvElement, N: Optional[int] = None) -> EnvElement:
    alg = p.alg
    if N is not None and alg.N is not None and N > alg.N:
        raise TruncationError(f"order {N} exceeds the algebra truncation {alg.N}")
    return EnvElement(alg, alg.exp(p.terms, N))


def env_log(g: EnvElement, N: Optional[int] = None) -> EnvElement:
    return EnvElement(g.alg, g.alg.log(g.terms, N))


def eulerian_projection(x: EnvElement) -> EnvElement:
    return EnvElement(x.alg, x.alg.eulerian(x.terms))


def is_grouplike(g: EnvElement) -> bool:
    alg = g.alg
    lhs = alg.coproduct(g.terms)
    rhs = {k: v for k, v in alg.tensor(g.terms, g.terms).items()
           if alg.N is None or alg.mono_degree(k[0]) + alg.mono_degree(k[1]) <= alg.N}
    return g.counit() == 1 and lhs == rhs
