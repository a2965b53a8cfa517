"""Exact multivariate polynomials in the spectral symbols.

A polynomial is a plain ``dict`` mapping an exponent tuple (one slot per
entry of :data:`SYMBOLS`) to a nonzero rational coefficient.  Exponents may
be negative; this is only used for the auxiliary limit parameter ``t``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Mapping, Tuple, Union

SYMBOLS: Tuple[str, ...] = ("x", "y", "t", "x1", "x2", "y1", "y2")
NSYM = len(SYMBOLS)
SYMBOL_INDEX = {s: i for i, s in enumerate(SYMBOLS)}

Mono = Tuple[int, ...]
Poly = Dict[Mono, Union[int, Fraction]]
Rational = Union[int, Fraction]

ONE_MONO: Mono = (0,) * NSYM


def normalize_coeff(c: Rational) -> Rational:
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c.numerator)
    return c


def const(c: Rational) -> Poly:
    c = normalize_coeff(c)
    return {ONE_MONO: c} if c else {}


def symbol(name: str, power: int = 1) -> Poly:
    e = [0] * NSYM
    e[SYMBOL_INDEX[name]] = power
    return {tuple(e): 1}


def add(p: Poly, q: Poly) -> Poly:
    out = dict(p)
    for m, c in q.items():
        v = out.get(m, 0) + c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def add_into(acc: Poly, q: Poly, scale: Rational = 1) -> None:
    for m, c in q.items():
        v = acc.get(m, 0) + scale * c
        if v:
            acc[m] = v
        else:
            acc.pop(m, None)


def scale(p: Poly, c: Rational) -> Poly:
    if not c:
        return {}
    return {m: normalize_coeff(v * c) for m, v in p.items()}


def neg(p: Poly) -> Poly:
    return {m: -v for m, v in p.items()}


def mul(p: Poly, q: Poly) -> Poly:
    if len(p) == 1 and ONE_MONO in p:
        return scale(q, p[ONE_MONO])
    if len(q) == 1 and ONE_MONO in q:
        return scale(p, q[ONE_MONO])
    out: Poly = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = tuple(a + b for a, b in zip(m1, m2))
            v = out.get(m, 0) + c1 * c2
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def power(p: Poly, k: int) -> Poly:
    out = const(1)
    for _ in range(k):
        out = mul(out, p)
    return out


def from_linear(**terms: Rational) -> Poly:
    """``from_linear(x=1, x1=1)`` is the polynomial ``x + x1``; key ``c`` is the constant."""
    out: Poly = {}
    for name, c in terms.items():
        if name == "c":
            add_into(out, const(c))
        else:
            add_into(out, symbol(name), c)
    return out


def compose(p: Poly, images: Mapping[str, Poly]) -> Poly:
    """Substitute polynomials for symbols.  Symbols absent from ``images`` are kept."""
    if not images:
        return dict(p)
    idx = {SYMBOL_INDEX[s]: q for s, q in images.items()}
    out: Poly = {}
    cache: Dict[Tuple[int, int], Poly] = {}
    for m, c in p.items():
        kept = list(m)
        term: Poly = {ONE_MONO: c}
        for i, q in idx.items():
            e = m[i]
            if e == 0:
                continue
            if e < 0:
                raise ValueError(f"cannot substitute into negative power of {SYMBOLS[i]}")
            kept[i] = 0
            key = (i, e)
            if key not in cache:
                cache[key] = power(q, e)
            term = mul(term, cache[key])
        term = mul(term, {tuple(kept): 1})
        add_into(out, term)
    return out


def swap_symbols(p: Poly, a: str, b: str) -> Poly:
    i, j = SYMBOL_INDEX[a], SYMBOL_INDEX[b]
    out: Poly = {}
    for m, c in p.items():
        e = list(m)
        e[i], e[j] = e[j], e[i]
        out[tuple(e)] = c
    return out


def evaluate(p: Poly, values: Mapping[str, Rational]) -> Poly:
    """Bind some symbols to rational values; the remaining symbols stay formal."""
    idx = [(SYMBOL_INDEX[s], Fraction(v)) for s, v in values.items()]
    out: Poly = {}
    for m, c in p.items():
        e = list(m)
        v = Fraction(c)
        for i, val in idx:
            if e[i]:
                v *= val ** e[i]
                e[i] = 0
        mm = tuple(e)
        s = out.get(mm, 0) + v
        if s:
            out[mm] = normalize_coeff(s)
        else:
            out.pop(mm, None)
    return out


def degree(p: Poly, name: str) -> int:
    i = SYMBOL_INDEX[name]
    if not p:
        return -(10**9)
    return max(m[i] for m in p)


def coefficient(p: Poly, name: str, k: int) -> Poly:
    """Coefficient of ``name**k`` (a polynomial in the other symbols)."""
    i = SYMBOL_INDEX[name]
    out: Poly = {}
    for m, c in p.items():
        if m[i] == k:
            e = list(m)
            e[i] = 0
            out[tuple(e)] = c
    return out


def is_constant(p: Poly) -> bool:
    return not p or (len(p) == 1 and ONE_MONO in p)


def constant_value(p: Poly) -> Rational:
    if not is_constant(p):
        raise ValueError("polynomial is not constant")
    return p.get(ONE_MONO, 0)


def to_str(p: Poly) -> str:
    if not p:
        return "0"
    parts = []
    for m in sorted(p, reverse=True):
        c = p[m]
        mon = "*".join(
            (SYMBOLS[i] if e == 1 else f"{SYMBOLS[i]}^{e}") for i, e in enumerate(m) if e
        )
        if not mon:
            parts.append(str(c))
        elif c == 1:
            parts.append(mon)
        elif c == -1:
            parts.append("-" + mon)
        else:
            parts.append(f"{c}*{mon}")
    return " + ".join(parts).replace("+ -", "- ")
