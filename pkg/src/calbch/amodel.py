"""Associative word model used as a brute-force oracle for the free triple system.

Words over {a, b} are reduced with the rewriting rules ``aab -> aba`` and
``bba -> bab`` (leftmost redex first).  The triple is the double commutator
[[x, y], z] and a free key E(i, j) corresponds to ``c a^i b^j`` with c = ab - ba.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .calts import A, B, FreeKey, free_keys
from .linear import ONE, LinComb, add_into, rank

RULES: Tuple[Tuple[str, str], ...] = (("aab", "aba"), ("bba", "bab"))
DEFAULT_MAX_LENGTH = 24


class WordLengthError(ValueError):
    pass


@lru_cache(maxsize=None)
def normal_form(word: str) -> str:
    """Apply the rules to the leftmost redex until none remains.

    The rules preserve length and push letters towards alternation, so this terminates;
    a visited-set guard turns any cycle into an error instead of a hang.
    """
    seen = set()
    w = word
    while True:
        pos, rule = _leftmost_redex(w)
        if pos < 0:
            return w
        if w in seen:
            raise RuntimeError(f"rewriting cycles on {word!r}")
        seen.add(w)
        lhs, rhs = rule
        w = w[:pos] + rhs + w[pos + len(lhs):]


def _leftmost_redex(w: str):
    best = (-1, None)
    for lhs, rhs in RULES:
        p = w.find(lhs)
        if p >= 0 and (best[0] < 0 or p < best[0]):
            best = (p, (lhs, rhs))
    return best


def is_normal(word: str) -> bool:
    return all(lhs not in word for lhs, _ in RULES)


def critical_pairs() -> List[Tuple[str, str, str]]:
    """Overlaps of rule left-hand sides as (overlap word, result via first, result via second)."""
    out = []
    for (l1, r1), (l2, r2) in itertools.product(RULES, repeat=2):
        for k in range(1, min(len(l1), len(l2))):
            if l1[-k:] == l2[:k]:
                w = l1 + l2[k:]
                out.append((w, r1 + l2[k:], l1[:-k] + r2))
        # inclusion overlaps
        if l1 != l2 and l2 in l1:
            p = l1.find(l2)
            out.append((l1, r1, l1[:p] + r2 + l1[p + len(l2):]))
    return out


def check_confluence() -> List[Tuple[str, str, str]]:
    """Critical pairs whose two reducts have different normal forms (empty = locally confluent)."""
    return [(w, x, y) for w, x, y in critical_pairs() if normal_form(x) != normal_form(y)]


def check_termination(max_length: int) -> bool:
    """Every word of length <= max_length reaches a normal form without revisiting a word."""
    for n in range(max_length + 1):
        for letters in itertools.product("ab", repeat=n):
            normal_form("".join(letters))
    return True


WordComb = Dict[str, object]


def _reduce(terms: Mapping[str, object], max_length: int) -> LinComb:
    out: Dict[str, object] = {}
    for w, c in terms.items():
        if len(w) > max_length:
            raise WordLengthError(f"word of length {len(w)} exceeds bound {max_length}")
        add_into(out, {normal_form(w): c})
    return LinComb._raw(out)


def word_mul(x: LinComb, y: LinComb, max_length: int = DEFAULT_MAX_LENGTH) -> LinComb:
    out: Dict[str, object] = {}
    for u, cu in x.terms.items():
        for v, cv in y.terms.items():
            add_into(out, {u + v: cu * cv})
    return _reduce(out, max_length)


def commutator(x: LinComb, y: LinComb, max_length: int = DEFAULT_MAX_LENGTH) -> LinComb:
    return word_mul(x, y, max_length) - word_mul(y, x, max_length)


def a_model_triple(x, y, z, max_length: int = DEFAULT_MAX_LENGTH) -> LinComb:
    """[[x, y], z] in the rewriting model; inputs are words or word combinations."""
    x, y, z = (_as_words(v, max_length) for v in (x, y, z))
    return commutator(commutator(x, y, max_length), z, max_length)


def _as_words(v, max_length) -> LinComb:
    if isinstance(v, str):
        v = LinComb.basis(v)
    elif not isinstance(v, LinComb):
        v = LinComb(v)
    return _reduce(v.terms, max_length)


C = LinComb({"ab": 1, "ba": -1})


@lru_cache(maxsize=None)
def key_image(key: FreeKey) -> LinComb:
    """a -> a, b -> b, E(i,j) -> c a^i b^j (normalized words)."""
    if key.kind == "a":
        return LinComb.basis("a")
    if key.kind == "b":
        return LinComb.basis("b")
    return word_mul(C, LinComb.basis("a" * key.i + "b" * key.j), key.degree)


def image(x: LinComb) -> LinComb:
    return x.map_keys(key_image)


def oracle_mismatches(max_degree: int = 9) -> List[Tuple[FreeKey, FreeKey, FreeKey]]:
    """Basis triples of total degree <= max_degree where the closed form disagrees with the model."""
    from .calts import free2_triple

    keys = free_keys(max_degree)
    bad = []
    for x, y, z in itertools.product(keys, repeat=3):
        if x.degree + y.degree + z.degree > max_degree:
            continue
        lhs = image(free2_triple(x, y, z))
        rhs = a_model_triple(key_image(x), key_image(y), key_image(z), max_degree)
        if lhs != rhs:
            bad.append((x, y, z))
    return bad


def triple_span_dim(n: int) -> int:
    """Dimension of the degree-n part of the triple system generated by a, b inside the model.

    Built by brute force: start from {a, b} and close under all triple products of
    homogeneous spanning elements whose degrees add to n.
    """
    if n < 1:
        raise ValueError("degree must be >= 1")
    spans: Dict[int, List[LinComb]] = {1: [LinComb.basis("a"), LinComb.basis("b")]}
    for d in range(2, n + 1):
        gens: List[LinComb] = []
        for d1 in range(1, d - 1):
            for d2 in range(1, d - d1):
                d3 = d - d1 - d2
                if d3 < 1:
                    continue
                for x in spans.get(d1, []):
                    for y in spans.get(d2, []):
                        xy = commutator(x, y, d)
                        if not xy:
                            continue
                        for z in spans.get(d3, []):
                            v = commutator(xy, z, d)
                            if v:
                                gens.append(v)
        spans[d] = _independent(gens)
    return len(spans[n])


def _independent(vectors: List[LinComb]) -> List[LinComb]:
    from .linear import rref

    rows, _ = rref([v.terms for v in vectors])
    return [LinComb(r) for r in rows]
