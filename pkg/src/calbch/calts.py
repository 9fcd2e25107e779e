"""Commutative automorphic Lie triple systems.

Two kinds of system share one small interface (``triple``, ``basis_keys``,
``degree``, ``sort_key``):

* :class:`LtsStructure`, a finite table of structure constants on indices 0..d-1;
* :class:`Free2`, the free system on two generators with closed-form products.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from math import factorial
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import StructureError
from .linear import ONE, ZERO, IncrementalBasis, LinComb, Rational, add_into, parse_rat, rank, rat, rat_str


# -- free keys ---------------------------------------------------------------

@dataclass(frozen=True, order=False)
class FreeKey:
    """Basis key of the free system: ``a``, ``b`` or ``E(i, j)`` with i+j odd."""

    kind: str
    i: int = 0
    j: int = 0

    def __post_init__(self):
        if self.kind in ("a", "b"):
            if self.i or self.j:
                raise ValueError("generators carry no indices")
        elif self.kind == "E":
            if self.i < 0 or self.j < 0 or (self.i + self.j) % 2 == 0:
                raise ValueError(f"E({self.i},{self.j}) needs i,j >= 0 and i+j odd")
        else:
            raise ValueError(f"unknown key kind {self.kind!r}")

    @property
    def degree(self) -> int:
        return 1 if self.kind != "E" else self.i + self.j + 2

    @property
    def sort_key(self) -> Tuple[int, int, int]:
        # deg-lex with a < b < E; inside one degree E(i, j) is ordered by i
        if self.kind == "a":
            return (1, 0, 0)
        if self.kind == "b":
            return (1, 1, 0)
        return (self.degree, 2, self.i)

    def __lt__(self, other: "FreeKey") -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        return self.kind if self.kind != "E" else f"E({self.i},{self.j})"

    __repr__ = __str__

    def bracket_label(self) -> str:
        """Left-normed bracket spelling, e.g. ``[a,b,a,a,b]`` for E(2,1)."""
        if self.kind != "E":
            return self.kind
        return "[a,b" + ",a" * self.i + ",b" * self.j + "]"


A = FreeKey("a")
B = FreeKey("b")


def E(i: int, j: int) -> FreeKey:
    return FreeKey("E", i, j)


def free_keys(max_degree: int) -> List[FreeKey]:
    """All free basis keys of degree <= max_degree, in basis order."""
    out = [A, B] if max_degree >= 1 else []
    for d in range(3, max_degree + 1, 2):
        out.extend(E(i, d - 2 - i) for i in range(d - 1))
    return out


def free2_dim(n: int) -> int:
    if n < 1:
        raise ValueError("degree must be >= 1")
    if n == 1:
        return 2
    return n - 1 if n % 2 else 0


def _free_basic(x: FreeKey, y: FreeKey, z: FreeKey) -> Optional[Tuple[FreeKey, int]]:
    """[x,y,z] on keys as (key, sign) or None for zero."""
    if x == y:
        return None
    ex, ey, ez = x.kind == "E", y.kind == "E", z.kind == "E"
    if ex + ey + ez >= 2:
        return None
    if ez:
        return None  # [s, s, E] = 0
    if not ex and not ey:
        # x, y are a, b in some order
        sign = 1 if x.kind == "a" else -1
        return (E(1, 0) if z.kind == "a" else E(0, 1)), sign
    # exactly one of x, y is E
    if ey:
        x, y = y, x
        sign = -1
    else:
        sign = 1
    i, j = x.i, x.j
    if y.kind == "a" and z.kind == "a":
        return E(i + 2, j), sign
    if y.kind == "b" and z.kind == "b":
        return E(i, j + 2), sign
    return E(i + 1, j + 1), sign


class Free2:
    """The free commutative automorphic triple system on ``a``, ``b``.

    ``max_degree`` (optional) truncates products: results above it are dropped.
    """

    graded = True

    def __init__(self, max_degree: Optional[int] = None):
        self.max_degree = max_degree

    def degree(self, k: FreeKey) -> int:
        return k.degree

    def sort_key(self, k: FreeKey):
        return k.sort_key

    def label(self, k: FreeKey) -> str:
        return str(k)

    def basis_keys(self, max_degree: Optional[int] = None) -> List[FreeKey]:
        D = max_degree if max_degree is not None else self.max_degree
        if D is None:
            raise ValueError("an explicit degree bound is needed for the infinite free system")
        return free_keys(D)

    def triple_keys(self, x: FreeKey, y: FreeKey, z: FreeKey) -> Dict[FreeKey, Rational]:
        r = _free_basic(x, y, z)
        if r is None:
            return {}
        k, sign = r
        if self.max_degree is not None and k.degree > self.max_degree:
            return {}
        return {k: rat(sign)}

    def triple(self, x: LinComb, y: LinComb, z: LinComb) -> LinComb:
        return _trilinear(self.triple_keys, x, y, z)

    def to_structure(self, max_degree: Optional[int] = None) -> "LtsStructure":
        """Finite-dimensional truncation as an :class:`LtsStructure` (with degrees)."""
        D = max_degree if max_degree is not None else self.max_degree
        keys = free_keys(D)
        index = {k: n for n, k in enumerate(keys)}
        sysD = Free2(D)
        table = {}
        for p, x in enumerate(keys):
            for q, y in enumerate(keys):
                for r, z in enumerate(keys):
                    out = sysD.triple_keys(x, y, z)
                    if out:
                        table[(p, q, r)] = {index[k]: v for k, v in out.items()}
        return LtsStructure([str(k) for k in keys], table, degrees=[k.degree for k in keys])


FREE2 = Free2()


def _trilinear(f, x: LinComb, y: LinComb, z: LinComb) -> LinComb:
    out: Dict = {}
    for kx, cx in x.terms.items():
        for ky, cy in y.terms.items():
            if kx == ky:
                continue
            cxy = cx * cy
            for kz, cz in z.terms.items():
                r = f(kx, ky, kz)
                if r:
                    add_into(out, r, cxy * cz)
    return LinComb._raw(out)


def free2_triple(x, y, z) -> LinComb:
    """Triple product in the (untruncated) free system; accepts keys or combinations."""
    return FREE2.triple(as_lc(x), as_lc(y), as_lc(z))


def as_lc(x) -> LinComb:
    if isinstance(x, LinComb):
        return x
    if isinstance(x, Mapping):
        return LinComb(x)
    return LinComb.basis(x)


# -- structure-constant systems ----------------------------------------------

class LtsStructure:
    """Triple system given by structure constants on basis indices 0..d-1.

    ``table[(p, q, r)]`` is ``{idx: coeff}`` for ``[e_p, e_q, e_r]``; absent = 0.
    ``degrees`` is optional; when given, every product must be homogeneous.
    """

    def __init__(self, labels: Sequence[str], table: Mapping[Tuple[int, int, int], Mapping[int, Any]],
                 degrees: Optional[Sequence[int]] = None):
        self.labels = tuple(labels)
        self.dim = len(self.labels)
        if self.dim < 1:
            raise StructureError("dimension must be positive")
        t: Dict[Tuple[int, int, int], Dict[int, Rational]] = {}
        for (p, q, r), out in table.items():
            for i in (p, q, r):
                self._check_index(i)
            o = {}
            for idx, v in out.items():
                self._check_index(idx)
                v = rat(v)
                if v:
                    o[idx] = v
            if o:
                t[(p, q, r)] = o
        self.table = t
        self.degrees = tuple(degrees) if degrees is not None else None
        if self.degrees is not None:
            if len(self.degrees) != self.dim or any(d < 1 for d in self.degrees):
                raise StructureError("degrees must be positive, one per basis element")
            for (p, q, r), out in t.items():
                want = self.degrees[p] + self.degrees[q] + self.degrees[r]
                if any(self.degrees[i] != want for i in out):
                    raise StructureError(f"product {(p, q, r)} is not homogeneous")
        self.graded = self.degrees is not None

    def _check_index(self, i: int) -> None:
        if not (0 <= i < self.dim):
            raise IndexError(f"basis index {i} outside 0..{self.dim - 1}")

    # interface shared with Free2
    def degree(self, k: int) -> int:
        return self.degrees[k] if self.degrees is not None else 1

    def sort_key(self, k: int):
        return (self.degree(k), k)

    def label(self, k: int) -> str:
        return self.labels[k]

    def basis_keys(self, max_degree: Optional[int] = None) -> List[int]:
        ks = list(range(self.dim))
        if max_degree is not None and self.degrees is not None:
            ks = [k for k in ks if self.degrees[k] <= max_degree]
        return ks

    def triple_keys(self, p: int, q: int, r: int) -> Dict[int, Rational]:
        return self.table.get((p, q, r), {})

    def triple(self, x, y, z) -> LinComb:
        x, y, z = as_lc(x), as_lc(y), as_lc(z)
        for v in (x, y, z):
            for k in v:
                self._check_index(k)
        out: Dict = {}
        for kx, cx in x.terms.items():
            for ky, cy in y.terms.items():
                for kz, cz in z.terms.items():
                    r = self.table.get((kx, ky, kz))
                    if r:
                        add_into(out, r, cx * cy * cz)
        return LinComb._raw(out)

    def basis(self, i: int) -> LinComb:
        self._check_index(i)
        return LinComb.basis(i)

    def operator_matrix(self, x: int, y: int) -> Dict[Tuple[int, int], Rational]:
        """Sparse matrix of z -> [e_x, e_y, z] as {(row, col): coeff}."""
        m = {}
        for r in range(self.dim):
            for idx, v in self.table.get((x, y, r), {}).items():
                m[(idx, r)] = v
        return m

    # serialization
    def to_json_obj(self) -> Dict[str, Any]:
        obj: Dict[str, Any] = {"dim": self.dim, "labels": list(self.labels)}
        if self.degrees is not None:
            obj["degrees"] = list(self.degrees)
        obj["triples"] = [
            {"p": p, "q": q, "r": r, "out": [{"idx": i, "value": rat_str(v)} for i, v in sorted(out.items())]}
            for (p, q, r), out in sorted(self.table.items())
        ]
        return obj

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=1)

    @classmethod
    def from_json(cls, doc: str | Mapping[str, Any]) -> "LtsStructure":
        if isinstance(doc, str):
            doc = json.loads(doc)
        dim = int(doc["dim"])
        labels = doc.get("labels") or [f"e{i}" for i in range(dim)]
        if len(labels) != dim:
            raise StructureError("label count differs from dim")
        table = {}
        for t in doc.get("triples", []):
            table[(int(t["p"]), int(t["q"]), int(t["r"]))] = {
                int(o["idx"]): parse_rat(str(o["value"])) for o in t["out"]}
        return cls(labels, table, degrees=doc.get("degrees"))

    @classmethod
    def from_matrices(cls, labels: Sequence[str], mats: Sequence[Sequence[Sequence[Any]]],
                      scale: Any = rat(1) / 4) -> "LtsStructure":
        """Triple ``scale * [[x, y], z]`` on a space of square matrices closed under it."""
        import numpy as np  # object arrays keep the entries exact

        ms = [np.array([[rat(v) for v in row] for row in m], dtype=object) for m in mats]
        flat = [{(i, j): v for (i, j), v in np.ndenumerate(m) if v} for m in ms]
        basis = IncrementalBasis()
        for f in flat:
            if not basis.add(f):
                raise StructureError("matrices are linearly dependent")
        s = rat(scale)
        table = {}
        for p, x in enumerate(ms):
            for q, y in enumerate(ms):
                xy = x.dot(y) - y.dot(x)
                for r, z in enumerate(ms):
                    w = (xy.dot(z) - z.dot(xy)) * s
                    vec = {(i, j): v for (i, j), v in np.ndenumerate(w) if v}
                    if not vec:
                        continue
                    try:
                        table[(p, q, r)] = basis.express(vec)
                    except ValueError:
                        raise StructureError(f"not closed: [{labels[p]},{labels[q]},{labels[r]}]") from None
        return cls(labels, table)


def matrix_example_system() -> LtsStructure:
    """Two-dimensional system spanned by ``u``, ``v`` inside 3x3 matrices with triple 1/4[[x,y],z]."""
    from .matrix_model import U_MATRIX, V_MATRIX

    return LtsStructure.from_matrices(["u", "v"], [U_MATRIX, V_MATRIX])


def simple_sl2_system() -> LtsStructure:
    """The 2-dim system with [e,f,e] = e, [e,f,f] = -f (a Lie triple system that is not CA)."""
    table = {
        (0, 1, 0): {0: 1}, (1, 0, 0): {0: -1},
        (0, 1, 1): {1: -1}, (1, 0, 1): {1: 1},
    }
    return LtsStructure(["e", "f"], table)


# -- left-normed brackets and derived quantities -----------------------------

def nested_triple(system, *args) -> LinComb:
    """Left-normed bracket [[[x1,x2,x3],x4,x5],...]; 0 for an even count, x1 for one argument."""
    if not args:
        raise ValueError("need at least one argument")
    if len(args) % 2 == 0:
        return LinComb()
    acc = as_lc(args[0])
    rest = args[1:]
    for k in range(0, len(rest), 2):
        if not acc:
            return acc
        acc = system.triple(acc, as_lc(rest[k]), as_lc(rest[k + 1]))
    return acc


def adjoint_exp_triple(x, y, N: int, system=None) -> LinComb:
    """Sum over m of 1/m! [y, x, ..., x] (m copies of x); odd m vanish, m runs up to N."""
    system = system if system is not None else FREE2
    x, y = as_lc(x), as_lc(y)
    out = y
    term = y
    for m in range(2, N + 1, 2):
        term = system.triple(term, x, x)
        if not term:
            break
        out = out + term * (ONE / factorial(m))
    return out


# -- axiom checks --------------------------------------------------------------

@dataclass
class AxiomReport:
    system: str
    checked: Dict[str, int] = field(default_factory=dict)
    failures: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json_obj(self) -> Dict[str, Any]:
        return {"system": self.system, "checked": self.checked, "failures": self.failures}


def _tuples(keys: Sequence, n: int, degree, bound: Optional[int]):
    if bound is None:
        yield from itertools.product(keys, repeat=n)
        return
    by = sorted(keys, key=degree)

    def rec(prefix, used):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        left = n - len(prefix) - 1
        for k in by:
            d = used + degree(k)
            if d + left > bound:
                break
            prefix.append(k)
            yield from rec(prefix, d)
            prefix.pop()

    yield from rec([], 0)


def check_ca_axioms(system, max_degree: Optional[int] = 9, max_failures: int = 1000) -> AxiomReport:
    """Alternation, Jacobi and the CA identity on all basis tuples.

    For graded systems only tuples of total degree <= ``max_degree`` are visited;
    ungraded finite tables are checked on every tuple.
    """
    if isinstance(system, Free2):
        bound = max_degree if max_degree is not None else system.max_degree
        keys = system.basis_keys(bound)
        name = f"free2<= {bound}"
    else:
        bound = max_degree if system.graded else None
        keys = system.basis_keys(bound)
        name = f"lts dim {system.dim}"
    deg = system.degree if bound is not None else (lambda k: 1)
    rep = AxiomReport(name)
    T = lambda x, y, z: system.triple(LinComb.basis(x), LinComb.basis(y), LinComb.basis(z))

    def fail(axiom, witness, residual):
        if len(rep.failures) < max_failures:
            rep.failures.append({"axiom": axiom, "witness": [system.label(k) for k in witness],
                                 "residual": residual.format(system.label)})

    n = 0
    for x, z in _tuples(keys, 2, deg, None if bound is None else bound - 1):
        n += 1
        r = T(x, x, z)
        if r:
            fail("alternation", (x, x, z), r)
    rep.checked["alternation"] = n
    n = 0
    for x, y, z in _tuples(keys, 3, deg, bound):
        n += 1
        r = T(x, y, z) + T(y, x, z)
        if r:
            fail("antisymmetry", (x, y, z), r)
        r = T(x, y, z) + T(y, z, x) + T(z, x, y)
        if r:
            fail("jacobi", (x, y, z), r)
    rep.checked["jacobi"] = n
    n = 0
    for a, b, c, a2, b2 in _tuples(keys, 5, deg, bound):
        n += 1
        la, lb, lc, la2, lb2 = (LinComb.basis(k) for k in (a, b, c, a2, b2))
        lhs = system.triple(system.triple(la, lb, lc), la2, lb2)
        rhs = (system.triple(system.triple(la, la2, lb2), lb, lc)
               + system.triple(la, system.triple(lb, la2, lb2), lc)
               + system.triple(la, lb, system.triple(lc, la2, lb2)))
        if lhs != rhs:
            fail("ca", (a, b, c, a2, b2), lhs - rhs)
    rep.checked["ca"] = n
    # derivation axiom of Lie triple systems (implied by CA but checked on its own)
    n = 0
    for a, b, x, y, z in _tuples(keys, 5, deg, bound):
        n += 1
        la, lb, lx, ly, lz = (LinComb.basis(k) for k in (a, b, x, y, z))
        lhs = system.triple(la, lb, system.triple(lx, ly, lz))
        rhs = (system.triple(system.triple(la, lb, lx), ly, lz)
               + system.triple(lx, system.triple(la, lb, ly), lz)
               + system.triple(lx, ly, system.triple(la, lb, lz)))
        if lhs != rhs:
            fail("lts_derivation", (a, b, x, y, z), lhs - rhs)
    rep.checked["lts_derivation"] = n
    return rep


def check_derived_identities(system, elements: Sequence[LinComb]) -> List[Dict[str, Any]]:
    """Consequences of the CA axioms, evaluated on the given elements.

    Returns a list of failures (empty on success).  Checks: skew-symmetry of
    (x, y, z) -> [x,w,[y,w,z]]; [[x,w,w],y,[z,w,w]] = 0 = [[x,w,w],[y,w,w],z];
    R_{w,w}^n R_{w,w'} is a derivation for n <= 3; any product with two
    arguments in [T,T,T] vanishes.
    """
    T = system.triple
    fails: List[Dict[str, Any]] = []
    els = [as_lc(e) for e in elements]

    def bad(name, *ws):
        fails.append({"identity": name, "witness": [w.format(system.label) for w in ws]})

    for x, y, z, w in itertools.product(els, repeat=4):
        f = lambda p, q, r: T(p, w, T(q, w, r))
        base = f(x, y, z)
        if base != -f(y, x, z) or base != -f(x, z, y):
            bad("skew_xwywz", x, y, z, w)
        xw = T(x, w, w)
        zw = T(z, w, w)
        if T(xw, y, zw) or T(xw, T(y, w, w), z):
            bad("ww_vanish", x, y, z, w)
    for w, w2 in itertools.product(els, repeat=2):
        for n in range(4):
            def D(v, n=n):
                out = T(v, w, w2)
                for _ in range(n):
                    out = T(out, w, w)
                return out
            for x, y, z in itertools.product(els, repeat=3):
                if D(T(x, y, z)) != T(D(x), y, z) + T(x, D(y), z) + T(x, y, D(z)):
                    bad(f"derivation_n{n}", w, w2, x, y, z)
    for p, q, r, s, t in itertools.product(els, repeat=5):
        inner = T(p, q, r)
        inner2 = T(q, s, t)
        if T(inner, inner2, s) or T(inner, s, inner2) or T(s, inner, inner2):
            bad("two_inner", p, q, r, s, t)
    return fails


def permutation_invariance(max_len: int) -> List[Tuple[str, ...]]:
    """Words w over {a,b} with len <= max_len (odd) where [a,b,w] depends on the order of w.

    Returns the offending words; empty when every rearrangement gives the same element.
    """
    bad = []
    for n in range(2, max_len + 1, 2):
        for word in itertools.product("ab", repeat=n):
            ref = nested_triple(FREE2, A, B, *[A if c == "a" else B for c in sorted(word)])
            got = nested_triple(FREE2, A, B, *[A if c == "a" else B for c in word])
            if got != ref:
                bad.append(word)
    return bad


@dataclass
class DerivedSeries:
    dims: List[int]
    solvable: bool


def _span_rows(vectors: Iterable[LinComb]) -> List[Dict]:
    from .linear import rref

    return rref([v.terms for v in vectors if v])[0]


def derived_series(L: LtsStructure, max_steps: int = 64) -> DerivedSeries:
    """Dimensions of T1 = [T,T,T], T(i+1) = [T, T(i), T(i)] until they stabilize."""
    full = [LinComb.basis(i) for i in range(L.dim)]
    cur = [LinComb(r) for r in _span_rows(L.triple(x, y, z) for x in full for y in full for z in full)]
    dims = [len(cur)]
    for _ in range(max_steps):
        if not cur:
            break
        nxt = [LinComb(r) for r in _span_rows(L.triple(x, y, z) for x in full for y in cur for z in cur)]
        if len(nxt) == len(cur):
            break
        cur = nxt
        dims.append(len(cur))
    return DerivedSeries(dims, dims[-1] == 0)
