"""The 3x3 matrix realization: a two-dimensional CA triple system inside 3x3 matrices.

With a_bar = -2(u - v), b_bar = 2(u + v) every bracket [a_bar, b_bar, ...] of odd
total degree >= 3 equals -4u, so the product exp(s/2 a_bar) exp(t b_bar) exp(s/2 a_bar)
determines the BCH coefficients through a single matrix entry.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, List, Sequence, Tuple

from .errors import InvariantViolation, ValuationError
from .linear import ONE, ZERO, Rational, rat
from .series import BiSeries, exp_linear, series_div_exact
from .tables import CoeffTable

U_MATRIX = ((0, 0, 1), (0, 0, 0), (0, 0, 0))
# Sign chosen so that the (1,2) entry of log G is +2(s+t); conjugating by
# diag(1,-1,1) flips v and leaves u and every triple product of the model unchanged.
V_MATRIX = ((0, 1, 0), (1, 0, 0), (0, 0, 0))


class MatrixSeries:
    """3x3 matrix of BiSeries with one common truncation."""

    __slots__ = ("N", "rows")

    def __init__(self, N: int, rows: Sequence[Sequence[BiSeries]]):
        self.N = N
        self.rows: Tuple[Tuple[BiSeries, ...], ...] = tuple(tuple(r) for r in rows)
        if len(self.rows) != 3 or any(len(r) != 3 for r in self.rows):
            raise ValueError("3x3 shape expected")
        if any(e.N != N for r in self.rows for e in r):
            raise ValueError("entries must share the truncation")

    @classmethod
    def constant(cls, N: int, m: Sequence[Sequence[Any]]) -> "MatrixSeries":
        return cls(N, [[BiSeries.const(N, v) for v in row] for row in m])

    @classmethod
    def identity(cls, N: int) -> "MatrixSeries":
        return cls.constant(N, [[1 if i == j else 0 for j in range(3)] for i in range(3)])

    def __getitem__(self, ij: Tuple[int, int]) -> BiSeries:
        return self.rows[ij[0]][ij[1]]

    def __add__(self, o: "MatrixSeries") -> "MatrixSeries":
        return MatrixSeries(self.N, [[self[i, j] + o[i, j] for j in range(3)] for i in range(3)])

    def __sub__(self, o: "MatrixSeries") -> "MatrixSeries":
        return MatrixSeries(self.N, [[self[i, j] - o[i, j] for j in range(3)] for i in range(3)])

    def scale(self, c: BiSeries | Any) -> "MatrixSeries":
        if isinstance(c, BiSeries):
            return MatrixSeries(self.N, [[self[i, j] * c for j in range(3)] for i in range(3)])
        return MatrixSeries(self.N, [[self[i, j].scale(c) for j in range(3)] for i in range(3)])

    def __matmul__(self, o: "MatrixSeries") -> "MatrixSeries":
        out = []
        for i in range(3):
            row = []
            for j in range(3):
                acc = BiSeries.zero(self.N)
                for k in range(3):
                    if self[i, k] and o[k, j]:
                        acc = acc + self[i, k] * o[k, j]
                row.append(acc)
            out.append(row)
        return MatrixSeries(self.N, out)

    def is_zero(self) -> bool:
        return not any(self[i, j] for i in range(3) for j in range(3))

    def constant_part(self) -> List[List[Rational]]:
        return [[self[i, j].constant() for j in range(3)] for i in range(3)]


def mat_exp(X: MatrixSeries) -> MatrixSeries:
    if any(X[i, j].constant() for i in range(3) for j in range(3)):
        raise ValuationError("matrix exponential needs entries without constant term")
    out = MatrixSeries.identity(X.N)
    term = MatrixSeries.identity(X.N)
    for k in range(1, X.N + 1):
        term = (term @ X).scale(ONE / k)
        if term.is_zero():
            break
        out = out + term
    return out


def mat_log(G: MatrixSeries) -> MatrixSeries:
    """sum (-1)^(k+1) (G - I)^k / k; needs G - I without constant terms."""
    H = G - MatrixSeries.identity(G.N)
    if any(H[i, j].constant() for i in range(3) for j in range(3)):
        raise ValuationError("G - I has a constant term")
    out = MatrixSeries.constant(G.N, [[0] * 3] * 3)
    power = MatrixSeries.identity(G.N)
    for k in range(1, G.N + 1):
        power = power @ H
        if power.is_zero():
            break
        out = out + power.scale(rat(1 if k % 2 else -1) / k)
    return out


def _lin(N: int, cs: Any, ct: Any) -> BiSeries:
    return BiSeries(N, {(1, 0): cs, (0, 1): ct})


def a_bar() -> List[List[Rational]]:
    return [[-2 * rat(u) + 2 * rat(v) for u, v in zip(ru, rv)] for ru, rv in zip(U_MATRIX, V_MATRIX)]


def b_bar() -> List[List[Rational]]:
    return [[2 * rat(u) + 2 * rat(v) for u, v in zip(ru, rv)] for ru, rv in zip(U_MATRIX, V_MATRIX)]


def phi_cosh(N: int) -> BiSeries:
    """4 (cosh s - 1)."""
    return (exp_linear(N, 1, 0) + exp_linear(N, -1, 0)).scale(2) - 4


def f_closed_form(N: int) -> BiSeries:
    """2s - 2t - 2 (e^{2(s+t)} - 2e^{s+2t} + 2e^s - 1)(s+t) / (e^{2(s+t)} - 1), exact to degree N."""
    M = N + 1
    st = _lin(M, 1, 1)
    num = (exp_linear(M, 2, 2) - exp_linear(M, 1, 2).scale(2) + exp_linear(M, 1, 0).scale(2) - 1) * st
    den = exp_linear(M, 2, 2) - 1
    q = series_div_exact(num, den)
    return _lin(N, 2, -2) - q.scale(2)


@dataclass
class MatrixModelResult:
    alpha: CoeffTable
    beta: CoeffTable
    A: MatrixSeries
    f: BiSeries


def matrix_model(N: int) -> MatrixModelResult:
    """log(exp(s/2 a_bar) exp(t b_bar) exp(s/2 a_bar)) and the coefficient tables it encodes."""
    ab = MatrixSeries.constant(N, a_bar())
    bb = MatrixSeries.constant(N, b_bar())
    half_s = _lin(N, rat(1) / 2, 0)
    t = _lin(N, 0, 1)
    Ea = mat_exp(ab.scale(half_s))
    Eb = mat_exp(bb.scale(t))
    G = Ea @ Eb @ Ea
    A = mat_log(G)
    two_st = _lin(N, 2, 2)
    zero = BiSeries.zero(N)
    expected = {(0, 1): two_st, (1, 0): two_st, (1, 1): zero, (1, 2): zero,
                (0, 0): zero, (2, 0): zero, (2, 1): zero, (2, 2): zero}
    for (i, j), want in expected.items():
        if A[i, j] != want:
            raise InvariantViolation(f"log matrix entry ({i + 1},{j + 1}) is {A[i, j]}, expected {want}")
    f = _lin(N, 2, -2) + A[0, 2]
    alpha = {(p, q): -v / 4 for (p, q), v in f.coeffs.items() if p >= 1 and q >= 1}
    ph = phi_cosh(N)
    rhs = t * ph + f + (ph * f).scale(rat(1) / 4)
    beta = {(p, q): -v / 4 for (p, q), v in rhs.coeffs.items() if p >= 1 and q >= 1}
    return MatrixModelResult(
        CoeffTable.from_coefficients("alpha", "matrix", N, alpha),
        CoeffTable.from_coefficients("beta", "matrix", N, beta),
        A, f)


def bracket_images(max_degree: int) -> List[Tuple[int, int, Any]]:
    """[a_bar, b_bar, (i-1) a_bar, (j-1) b_bar] in the matrix system for i+j odd up to max_degree.

    Returns (i, j, result) triples; every result should equal -4u.
    """
    from .calts import LtsStructure, nested_triple
    from .linear import IncrementalBasis, LinComb

    sys_ = LtsStructure.from_matrices(["u", "v"], [U_MATRIX, V_MATRIX])
    # coordinates in the (u, v) basis
    a = LinComb({0: -2, 1: 2})
    b = LinComb({0: 2, 1: 2})
    out = []
    for d in range(3, max_degree + 1, 2):
        for i in range(1, d):
            j = d - i
            args = [a, b] + [a] * (i - 1) + [b] * (j - 1)
            out.append((i, j, nested_triple(sys_, *args)))
    return out
