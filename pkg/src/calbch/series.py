"""Truncated bivariate power series in s, t over the rationals."""
from __future__ import annotations

import json
from math import factorial
from typing import Any, Dict, Iterator, List, Mapping, Tuple

from .errors import DegreeMismatchError, NotDivisibleError, TruncationError, ValuationError
from .linear import ONE, ZERO, Rational, add_into, clean, parse_rat, rat, rat_str

Key = Tuple[int, int]


class BiSeries:
    """Immutable element of Q[[s,t]] modulo total degree > N.

    Coefficients live in a dict keyed by (i, j) for s^i t^j; zeros are never stored.
    """

    __slots__ = ("N", "_c")

    def __init__(self, N: int, coeffs: Mapping[Key, Any] | None = None):
        if N < 0:
            raise ValueError("truncation degree must be non-negative")
        self.N = N
        c = {}
        for (i, j), v in (coeffs or {}).items():
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent {(i, j)}")
            if i + j <= N:
                v = rat(v)
                if v:
                    c[(i, j)] = v
        self._c: Dict[Key, Rational] = c

    @classmethod
    def _raw(cls, N: int, c: Dict[Key, Rational]) -> "BiSeries":
        obj = cls.__new__(cls)
        obj.N = N
        obj._c = c
        return obj

    # constructors
    @classmethod
    def const(cls, N: int, v: Any = 1) -> "BiSeries":
        return cls(N, {(0, 0): v})

    @classmethod
    def s(cls, N: int) -> "BiSeries":
        return cls(N, {(1, 0): 1})

    @classmethod
    def t(cls, N: int) -> "BiSeries":
        return cls(N, {(0, 1): 1})

    @classmethod
    def zero(cls, N: int) -> "BiSeries":
        return cls._raw(N, {})

    # access
    def coeff(self, p: int, q: int) -> Rational:
        if p < 0 or q < 0:
            raise ValueError("negative exponent")
        if p + q > self.N:
            raise TruncationError(f"coefficient ({p},{q}) lies above truncation {self.N}")
        return self._c.get((p, q), ZERO)

    def items(self) -> List[Tuple[Key, Rational]]:
        return sorted(self._c.items())

    def __iter__(self) -> Iterator[Key]:
        return iter(sorted(self._c))

    def __len__(self) -> int:
        return len(self._c)

    @property
    def coeffs(self) -> Dict[Key, Rational]:
        return dict(self._c)

    def constant(self) -> Rational:
        return self._c.get((0, 0), ZERO)

    def valuation(self) -> int | None:
        """Lowest total degree present (None for zero)."""
        return min((i + j for i, j in self._c), default=None)

    def homogeneous(self, d: int) -> Dict[Key, Rational]:
        return {k: v for k, v in self._c.items() if k[0] + k[1] == d}

    def truncate(self, M: int) -> "BiSeries":
        if M > self.N:
            raise TruncationError(f"cannot raise truncation from {self.N} to {M}")
        return BiSeries._raw(M, {k: v for k, v in self._c.items() if k[0] + k[1] <= M})

    def __bool__(self) -> bool:
        return bool(self._c)

    # arithmetic
    def _check(self, other: "BiSeries") -> None:
        if not isinstance(other, BiSeries):
            raise TypeError(f"expected BiSeries, got {type(other).__name__}")
        if other.N != self.N:
            raise DegreeMismatchError(f"truncations differ: {self.N} vs {other.N}")

    def _lift(self, other: Any) -> "BiSeries":
        if isinstance(other, BiSeries):
            self._check(other)
            return other
        return BiSeries.const(self.N, other)

    def __add__(self, other) -> "BiSeries":
        other = self._lift(other)
        c = dict(self._c)
        add_into(c, other._c)
        return BiSeries._raw(self.N, c)

    __radd__ = __add__

    def __sub__(self, other) -> "BiSeries":
        other = self._lift(other)
        c = dict(self._c)
        add_into(c, other._c, -ONE)
        return BiSeries._raw(self.N, c)

    def __rsub__(self, other) -> "BiSeries":
        return (-self) + other

    def __neg__(self) -> "BiSeries":
        return BiSeries._raw(self.N, {k: -v for k, v in self._c.items()})

    def scale(self, a: Any) -> "BiSeries":
        a = rat(a)
        if not a:
            return BiSeries.zero(self.N)
        return BiSeries._raw(self.N, {k: a * v for k, v in self._c.items()})

    def __mul__(self, other) -> "BiSeries":
        if not isinstance(other, BiSeries):
            return self.scale(other)
        self._check(other)
        N = self.N
        out: Dict[Key, Rational] = {}
        right = sorted(other._c.items(), key=lambda kv: kv[0][0] + kv[0][1])
        for (i, j), a in self._c.items():
            room = N - i - j
            for (k, l), b in right:
                if k + l > room:
                    break
                key = (i + k, j + l)
                v = out.get(key, ZERO) + a * b
                if v:
                    out[key] = v
                else:
                    del out[key]
        return BiSeries._raw(N, out)

    def __rmul__(self, other) -> "BiSeries":
        return self.scale(other)

    def __truediv__(self, a) -> "BiSeries":
        if isinstance(a, BiSeries):
            return series_div_exact(self, a)
        return self.scale(ONE / rat(a))

    def __pow__(self, k: int) -> "BiSeries":
        if k < 0:
            raise ValueError("negative power")
        out = BiSeries.const(self.N, 1)
        for _ in range(k):
            out = out * self
        return out

    def substitute_linear(self, a: Tuple[Any, Any], b: Tuple[Any, Any]) -> "BiSeries":
        """Compose with s -> a0 s + a1 t, t -> b0 s + b1 t."""
        S = BiSeries(self.N, {(1, 0): a[0], (0, 1): a[1]})
        T = BiSeries(self.N, {(1, 0): b[0], (0, 1): b[1]})
        spow = [BiSeries.const(self.N)]
        tpow = [BiSeries.const(self.N)]
        for _ in range(self.N):
            spow.append(spow[-1] * S)
            tpow.append(tpow[-1] * T)
        out = BiSeries.zero(self.N)
        for (i, j), v in self._c.items():
            out = out + (spow[i] * tpow[j]).scale(v)
        return out

    def swap(self) -> "BiSeries":
        return BiSeries._raw(self.N, {(j, i): v for (i, j), v in self._c.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, BiSeries):
            return self.N == other.N and self._c == other._c
        if isinstance(other, int):
            return self._c == ({(0, 0): rat(other)} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.N, frozenset(self._c.items())))

    def __repr__(self) -> str:
        if not self._c:
            return f"BiSeries(N={self.N}, 0)"
        parts = []
        for (i, j), v in self.items():
            mono = "*".join(x for x in ((f"s^{i}" if i > 1 else "s") if i else "",
                                        (f"t^{j}" if j > 1 else "t") if j else "") if x)
            parts.append(f"({rat_str(v)})" + (f"*{mono}" if mono else ""))
        return f"BiSeries(N={self.N}, " + " + ".join(parts) + ")"

    # serialization
    def to_json_obj(self) -> List[Dict[str, Any]]:
        return [{"i": i, "j": j, "value": rat_str(v)} for (i, j), v in self.items()]

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json(cls, N: int, data: str | List[Dict[str, Any]]) -> "BiSeries":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(N, {(int(d["i"]), int(d["j"])): parse_rat(str(d["value"])) for d in data})


def series_arith(x: BiSeries, y: Any, kind: str) -> BiSeries:
    """Dispatch helper: kind in {'add', 'mul', 'scale'} (y is a rational for 'scale')."""
    if kind == "add":
        if not isinstance(y, BiSeries):
            raise TypeError("add needs two series")
        return x + y
    if kind == "mul":
        if not isinstance(y, BiSeries):
            raise TypeError("mul needs two series")
        return x * y
    if kind == "scale":
        return x.scale(y)
    raise ValueError(f"unknown kind {kind!r}")


def series_exp(x: BiSeries) -> BiSeries:
    if x.constant():
        raise ValuationError("exp needs a series with zero constant term")
    N = x.N
    out = BiSeries.const(N)
    term = BiSeries.const(N)
    for k in range(1, N + 1):
        term = (term * x).scale(mpq_inv(k))
        if not term:
            break
        out = out + term
    return out


def series_log(g: BiSeries) -> BiSeries:
    if g.constant() != 1:
        raise ValuationError("log needs constant term 1")
    h = g - 1
    out = BiSeries.zero(g.N)
    power = BiSeries.const(g.N)
    for k in range(1, g.N + 1):
        power = power * h
        if not power:
            break
        out = out + power.scale(rat(1 if k % 2 else -1) / k)
    return out


def mpq_inv(k: int) -> Rational:
    return ONE / k


def _div_linear(p: BiSeries, cs: Rational, ct: Rational) -> BiSeries:
    """Exact division by the linear form cs*s + ct*t; the result has truncation N-1.

    Each homogeneous slice is divided separately; a nonzero remainder raises.
    """
    N = p.N
    if p.constant():
        raise NotDivisibleError("constant term is not divisible by a linear form")
    out: Dict[Key, Rational] = {}
    for d in range(1, N + 1):
        hom = p.homogeneous(d)
        if not hom:
            continue
        # hom(s,t) = (cs s + ct t) * q(s,t), q homogeneous of degree d-1
        # coefficient of s^i t^(d-i): cs*q[i-1] + ct*q[i] = hom[i]
        q: Dict[int, Rational] = {}
        if ct:
            for i in range(0, d):
                prev = q.get(i - 1, ZERO) if i >= 1 else ZERO
                q[i] = (hom.get((i, d - i), ZERO) - cs * prev) / ct
            rem = hom.get((d, 0), ZERO) - cs * q[d - 1]
        else:
            for i in range(1, d + 1):
                q[i - 1] = hom.get((i, d - i), ZERO) / cs
            rem = hom.get((0, d), ZERO)
        if rem:
            raise NotDivisibleError(f"nonzero remainder in degree {d}")
        for i, v in q.items():
            if v:
                out[(i, d - 1 - i)] = v
    return BiSeries._raw(N - 1, out)


def _inverse_unit(u: BiSeries) -> BiSeries:
    c0 = u.constant()
    if not c0:
        raise ValuationError("unit part has zero constant term")
    inv0 = ONE / c0
    # u = c0 (1 - h) with h having zero constant term
    h = (u.scale(inv0) - 1).scale(-1)
    out = BiSeries.const(u.N)
    power = BiSeries.const(u.N)
    for _ in range(u.N):
        power = power * h
        if not power:
            break
        out = out + power
    return out.scale(inv0)


def series_div_exact(num: BiSeries, den: BiSeries, linear: Tuple[Any, Any] = (1, 1)) -> BiSeries:
    """Exact quotient num/den where den = L^k * unit, L = cs*s + ct*t (default s+t).

    The k factors of L are removed from both operands by exact long division, so the
    result is known to total degree N - k.
    """
    num._check(den)
    if not den:
        raise ZeroDivisionError("division by the zero series")
    cs, ct = rat(linear[0]), rat(linear[1])
    if not cs and not ct:
        raise ValueError("linear form must be nonzero")
    while not den.constant():
        if den.N == 0:
            raise ZeroDivisionError("denominator vanishes at this truncation")
        den = _div_linear(den, cs, ct)
        num = _div_linear(num, cs, ct)
    return num * _inverse_unit(den)


def series_coeff(x: BiSeries, p: int, q: int) -> Rational:
    return x.coeff(p, q)


def exp_linear(N: int, cs: Any, ct: Any) -> BiSeries:
    """exp(cs*s + ct*t) directly from the binomial expansion."""
    cs, ct = rat(cs), rat(ct)
    c = {}
    for i in range(N + 1):
        for j in range(N + 1 - i):
            v = cs ** i * ct ** j / (factorial(i) * factorial(j))
            if v:
                c[(i, j)] = v
    return BiSeries._raw(N, c)
