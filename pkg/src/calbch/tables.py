"""Coefficient tables for the two BCH series and their serializations."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple

from .errors import InvariantViolation, TruncationError
from .linear import ZERO, Rational, parse_rat, rat, rat_str

KINDS = ("alpha", "beta")
ENGINES = ("genfun", "recursion", "hopf", "matrix", "dot_direct", "reference")


@dataclass
class CoeffTable:
    """(p, q) -> coefficient for p, q >= 1 and p+q <= N.

    Only odd p+q is stored; even total degree reads as zero.  Build through
    :meth:`from_coefficients` to have the parity checked.
    """

    kind: str
    engine: str
    max_total_degree: int
    entries: Dict[Tuple[int, int], Rational] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        if self.engine not in ENGINES:
            raise ValueError(f"engine must be one of {ENGINES}")
        for (p, q), v in list(self.entries.items()):
            if p < 1 or q < 1 or p + q > self.max_total_degree:
                raise ValueError(f"entry {(p, q)} outside the table range")
            if (p + q) % 2 == 0:
                raise ValueError(f"entry {(p, q)} has even total degree")
            self.entries[(p, q)] = rat(v)

    @classmethod
    def from_coefficients(cls, kind: str, engine: str, N: int,
                          coeffs: Mapping[Tuple[int, int], Any]) -> "CoeffTable":
        """Keep the odd cells of ``coeffs`` (missing = 0); a nonzero even cell is an error."""
        entries = {}
        for (p, q), v in coeffs.items():
            if p < 1 or q < 1 or p + q > N:
                continue
            v = rat(v)
            if (p + q) % 2 == 0:
                if v:
                    raise InvariantViolation(f"{engine}: nonzero {kind} coefficient at even total degree {(p, q)}")
                continue
            entries[(p, q)] = v
        for p, q in odd_cells(N):
            entries.setdefault((p, q), ZERO)
        return cls(kind, engine, N, entries)

    def get(self, p: int, q: int) -> Rational:
        if p < 1 or q < 1:
            raise ValueError("indices start at 1")
        if p + q > self.max_total_degree:
            raise TruncationError(f"({p},{q}) lies above degree {self.max_total_degree}")
        return self.entries.get((p, q), ZERO)

    __call__ = get

    def cells(self) -> List[Tuple[int, int]]:
        return sorted(self.entries, key=lambda pq: (pq[0] + pq[1], pq[0]))

    def restrict(self, N: int) -> "CoeffTable":
        if N > self.max_total_degree:
            raise TruncationError("cannot extend a table")
        return CoeffTable(self.kind, self.engine, N, {k: v for k, v in self.entries.items() if sum(k) <= N})

    # serialization
    def to_json_obj(self) -> Dict[str, Any]:
        return {"kind": self.kind, "engine": self.engine, "max_total_degree": self.max_total_degree,
                "entries": [{"p": p, "q": q, "value": rat_str(self.entries[(p, q)])} for p, q in self.cells()]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=1) + "\n"

    @classmethod
    def from_json(cls, doc) -> "CoeffTable":
        if isinstance(doc, (str, bytes)):
            doc = json.loads(doc)
        return cls(doc["kind"], doc["engine"], int(doc["max_total_degree"]),
                   {(int(e["p"]), int(e["q"])): parse_rat(str(e["value"])) for e in doc["entries"]})

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p", "q", "value"])
        for p, q in self.cells():
            w.writerow([p, q, rat_str(self.entries[(p, q)])])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, kind: str, engine: str, N: int) -> "CoeffTable":
        rows = list(csv.DictReader(io.StringIO(text)))
        return cls(kind, engine, N, {(int(r["p"]), int(r["q"])): parse_rat(r["value"]) for r in rows})

    def to_latex(self, size: Optional[int] = None) -> str:
        """Square array of the coefficients, rows p and columns q from 1 to ``size``."""
        if size is None:
            size = 7 if self.max_total_degree >= 14 else self.max_total_degree // 2
        if 2 * size > self.max_total_degree:
            raise TruncationError(f"a {size}x{size} grid needs degree {2 * size}")
        lines = ["\\begin{array}{" + "c" * size + "}"]
        for p in range(1, size + 1):
            lines.append(" & ".join(_latex_rat(self.get(p, q)) for q in range(1, size + 1)) + " \\\\")
        lines.append("\\end{array}")
        return "\n".join(lines) + "\n"

    def emit(self, fmt: str) -> bytes:
        if fmt == "json":
            return self.to_json().encode()
        if fmt == "csv":
            return self.to_csv().encode()
        if fmt == "latex":
            return self.to_latex().encode()
        raise ValueError(f"unknown format {fmt!r}")

    def same_values(self, other: "CoeffTable") -> bool:
        return self.kind == other.kind and self.max_total_degree == other.max_total_degree \
            and self.entries == other.entries


def emit_table(table: CoeffTable, fmt: str) -> bytes:
    return table.emit(fmt)


def _latex_rat(v: Rational) -> str:
    if v.denominator == 1:
        return str(int(v.numerator))
    sign = "-" if v < 0 else ""
    return f"{sign}\\frac{{{abs(int(v.numerator))}}}{{{int(v.denominator)}}}"


def odd_cells(N: int) -> List[Tuple[int, int]]:
    return [(p, d - p) for d in range(3, N + 1, 2) for p in range(1, d)]


def table_differences(a: CoeffTable, b: CoeffTable) -> List[Dict[str, Any]]:
    """Cells on the common degree range where the two tables differ."""
    if a.kind != b.kind:
        raise ValueError("tables of different kinds")
    N = min(a.max_total_degree, b.max_total_degree)
    out = []
    for d in range(2, N + 1):
        for p in range(1, d):
            q = d - p
            va, vb = a.get(p, q), b.get(p, q)
            if va != vb:
                out.append({"p": p, "q": q, "engines": [a.engine, b.engine],
                            "values": [rat_str(va), rat_str(vb)]})
    return out


def _r(s: str) -> Rational:
    return parse_rat(s)


# Reference 7x7 table of the commutative automorphic coefficients, rows p, columns q.
REFERENCE_BETA_GRID: Tuple[Tuple[str, ...], ...] = (
    ("0", "1/3", "0", "-1/45", "0", "2/945", "0"),
    ("-1/3", "0", "-4/45", "0", "4/315", "0", "-8/4725"),
    ("0", "4/45", "0", "16/945", "0", "-64/14175", "0"),
    ("1/45", "0", "-16/945", "0", "-16/4725", "0", "32/22275"),
    ("0", "-4/315", "0", "16/4725", "0", "128/155925", "0"),
    ("-2/945", "0", "64/14175", "0", "-128/155925", "0", "-48896/212837625"),
    ("0", "8/4725", "0", "-32/22275", "0", "48896/212837625", "0"),
)


def reference_beta_table() -> CoeffTable:
    """The grid as a degree-14 table.  Cells outside the 7x7 grid read as zero, so
    compare against it with :func:`grid_differences`, not :func:`table_differences`."""
    coeffs = {(p + 1, q + 1): _r(v) for p, row in enumerate(REFERENCE_BETA_GRID) for q, v in enumerate(row)}
    return CoeffTable.from_coefficients("beta", "reference", 14, coeffs)


def grid_differences(table: CoeffTable, size: int = 7) -> List[Dict[str, Any]]:
    """Cells of the reference 7x7 grid (within the degree of ``table``) where ``table`` disagrees."""
    out = []
    for p in range(1, size + 1):
        for q in range(1, size + 1):
            if p + q > table.max_total_degree:
                continue
            want = _r(REFERENCE_BETA_GRID[p - 1][q - 1])
            got = table.get(p, q)
            if got != want:
                out.append({"p": p, "q": q, "expected": rat_str(want), "got": rat_str(got)})
    return out
