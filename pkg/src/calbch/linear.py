"""Exact rationals, sparse linear combinations and row reduction.

Scalars are ``gmpy2.mpq``.  They compare and hash equal to ``fractions.Fraction``
and ``int``, so callers may pass either; results are always ``mpq``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Any, Callable, Dict, Hashable, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from gmpy2 import mpq

Rational = type(mpq(0))
ZERO = mpq(0)
ONE = mpq(1)


def rat(x: Any) -> Rational:
    """Coerce int, Fraction, mpq or a ``"num/den"`` string to an exact rational."""
    if isinstance(x, Rational):
        return x
    if isinstance(x, (int, Fraction)):
        return mpq(x)
    if isinstance(x, str):
        return parse_rat(x)
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a Fraction or a string")
    return mpq(x)


def parse_rat(s: str) -> Rational:
    s = s.strip()
    if not s:
        raise ValueError("empty rational")
    if "/" in s:
        num, den = s.split("/", 1)
        d = int(den)
        if d == 0:
            raise ZeroDivisionError(s)
        return mpq(int(num), d)
    return mpq(int(s))


def rat_str(q: Any) -> str:
    """Serialize as ``num/den`` with a positive denominator (``0/1`` for zero)."""
    q = rat(q)
    return f"{int(q.numerator)}/{int(q.denominator)}"


def rat_pretty(q: Any) -> str:
    q = rat(q)
    if q.denominator == 1:
        return str(int(q.numerator))
    return f"{int(q.numerator)}/{int(q.denominator)}"


def to_fraction(q: Any) -> Fraction:
    q = rat(q)
    return Fraction(int(q.numerator), int(q.denominator))


# -- raw dict helpers (hot loops use these directly) -----------------------

def add_into(acc: Dict, terms: Mapping, scale: Any = ONE) -> None:
    """acc += scale * terms, dropping cancelled keys."""
    if not scale:
        return
    for k, c in terms.items():
        v = acc.get(k, ZERO) + scale * c
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)


def clean(terms: Mapping) -> Dict:
    return {k: rat(c) for k, c in terms.items() if c}


class LinComb(Mapping):
    """Immutable sparse linear combination ``key -> rational`` with no zero entries.

    Missing keys read as zero through :meth:`coeff`; ``lc[k]`` keeps the usual
    ``Mapping`` contract and raises ``KeyError``.
    """

    __slots__ = ("_t", "_h")

    def __init__(self, terms: Optional[Mapping] = None):
        self._t: Dict = clean(terms) if terms else {}
        self._h: Optional[int] = None

    @classmethod
    def _raw(cls, terms: Dict) -> "LinComb":
        obj = cls.__new__(cls)
        obj._t = terms
        obj._h = None
        return obj

    @classmethod
    def basis(cls, key: Hashable, coeff: Any = ONE) -> "LinComb":
        return cls({key: coeff})

    def __getitem__(self, k):
        return self._t[k]

    def __iter__(self) -> Iterator:
        return iter(self._t)

    def __len__(self) -> int:
        return len(self._t)

    def coeff(self, k) -> Rational:
        return self._t.get(k, ZERO)

    @property
    def terms(self) -> Dict:
        return self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def __add__(self, other: "LinComb") -> "LinComb":
        if not isinstance(other, LinComb):
            return NotImplemented
        d = dict(self._t)
        add_into(d, other._t)
        return LinComb._raw(d)

    def __sub__(self, other: "LinComb") -> "LinComb":
        if not isinstance(other, LinComb):
            return NotImplemented
        d = dict(self._t)
        add_into(d, other._t, -ONE)
        return LinComb._raw(d)

    def __neg__(self) -> "LinComb":
        return LinComb._raw({k: -c for k, c in self._t.items()})

    def __mul__(self, s) -> "LinComb":
        if isinstance(s, LinComb):
            return NotImplemented
        s = rat(s)
        if not s:
            return LinComb()
        return LinComb._raw({k: s * c for k, c in self._t.items()})

    __rmul__ = __mul__

    def __truediv__(self, s) -> "LinComb":
        return self * (ONE / rat(s))

    def __eq__(self, other) -> bool:
        if isinstance(other, LinComb):
            return self._t == other._t
        if isinstance(other, int) and other == 0:
            return not self._t
        if isinstance(other, Mapping):
            return self._t == clean(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._h is None:
            self._h = hash(frozenset(self._t.items()))
        return self._h

    def sorted_items(self, key: Optional[Callable] = None) -> List[Tuple[Any, Rational]]:
        return sorted(self._t.items(), key=(lambda kv: key(kv[0])) if key else None)

    def map_keys(self, f: Callable[[Any], "LinComb | Mapping | None"]) -> "LinComb":
        """Linear extension of ``f`` (key -> combination, or None for zero)."""
        d: Dict = {}
        for k, c in self._t.items():
            img = f(k)
            if img:
                add_into(d, img.terms if isinstance(img, LinComb) else img, c)
        return LinComb._raw(d)

    def format(self, label: Callable[[Any], str] = str, key: Optional[Callable] = None) -> str:
        if not self._t:
            return "0"
        out = []
        for k, c in self.sorted_items(key):
            lab = label(k)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            body = lab if a == 1 and lab else (f"{rat_pretty(a)}" + (f" {lab}" if lab else ""))
            out.append((sign, body))
        first = ("-" if out[0][0] == "-" else "") + out[0][1]
        return " ".join([first] + [f"{s} {b}" for s, b in out[1:]])

    def __repr__(self) -> str:
        return f"LinComb({self.format(repr)})"


# -- row reduction ----------------------------------------------------------

def rref(rows: Sequence[Mapping]) -> Tuple[List[Dict], List]:
    """Reduced row echelon form of sparse rows (column keys must be orderable).

    Returns (reduced rows, pivot columns).
    """
    pivots: Dict[Any, Dict] = {}
    for row in rows:
        r = clean(row)
        for p, prow in pivots.items():
            c = r.get(p)
            if c:
                add_into(r, prow, -c)
        if not r:
            continue
        p = min(r)
        inv = ONE / r[p]
        r = {k: v * inv for k, v in r.items()}
        for q, qrow in pivots.items():
            c = qrow.get(p)
            if c:
                add_into(qrow, r, -c)
        pivots[p] = r
    order = sorted(pivots)
    return [pivots[p] for p in order], order


def rank(rows: Sequence[Mapping]) -> int:
    return len(rref(rows)[0])


class IncrementalBasis:
    """Greedy basis selection: keeps the inserted vectors that are independent of earlier ones.

    ``express(v)`` writes ``v`` in terms of the kept vectors (or raises if outside the span).
    """

    def __init__(self):
        self._echelon: Dict[Any, Tuple[Dict, Dict[int, Rational]]] = {}
        self.vectors: List[Dict] = []

    def _reduce(self, v: Mapping) -> Tuple[Dict, Dict[int, Rational]]:
        r = clean(v)
        combo: Dict[int, Rational] = {}
        changed = True
        while r and changed:
            changed = False
            for p in sorted(r):
                if p in self._echelon:
                    prow, pcombo = self._echelon[p]
                    c = r[p]
                    add_into(r, prow, -c)
                    add_into(combo, pcombo, -c)
                    changed = True
                    break
        return r, combo

    def add(self, v: Mapping) -> bool:
        r, combo = self._reduce(v)
        if not r:
            return False
        idx = len(self.vectors)
        self.vectors.append(clean(v))
        combo[idx] = ONE
        # r = v + sum(combo[k] * vectors[k]); normalize on its leading key
        p = min(r)
        inv = ONE / r[p]
        self._echelon[p] = ({k: c * inv for k, c in r.items()}, {k: c * inv for k, c in combo.items()})
        return True

    def express(self, v: Mapping) -> Dict[int, Rational]:
        r, combo = self._reduce(v)
        if r:
            raise ValueError("vector outside the span")
        return {k: -c for k, c in combo.items() if c}

    def __len__(self) -> int:
        return len(self.vectors)
