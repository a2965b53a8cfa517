"""Exact arithmetic in the superoscillator algebra.

Elements are finite sums of normal-ordered words (all creators to the left of
all annihilators) with coefficients that are polynomials in the spectral
symbols.  The only nonzero supercommutator between generators is
``[g, partner(g)] = 1`` for an annihilator ``g``; everything else
supercommutes.  Normal ordering is done by a memoized word-times-generator
rewrite, so a product of two words is a fold over the right factor.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Tuple, Union

from . import poly as P
from .poly import Poly, Rational

CREATION = 0
ANNIHILATION = 1

INHOMOGENEOUS = "inhomogeneous"


class AlgebraError(Exception):
    pass


class ParityError(AlgebraError):
    pass


class TruncationError(AlgebraError):
    pass


class HomomorphismError(AlgebraError):
    pass


class Generator(NamedTuple):
    """A single superoscillator.

    Tuple order doubles as the canonical order inside normal words: creators
    sort before annihilators, then by family, copy, row and column.
    """

    kind: int
    family: str
    copy: int
    row: int
    col: int
    parity: int

    @property
    def partner(self) -> "Generator":
        return Generator(1 - self.kind, self.family, self.copy, self.col, self.row, self.parity)

    @property
    def is_creation(self) -> bool:
        return self.kind == CREATION

    def label(self) -> str:
        bar = "~" if self.kind == CREATION else ""
        cp = f"[{self.copy}]" if self.copy else ""
        return f"{self.family}{bar}{cp}_{self.row},{self.col}"


def annihilator(family: str, row: int, col: int, parity: int, copy: int = 0) -> Generator:
    return Generator(ANNIHILATION, family, copy, row, col, parity % 2)


def creator(family: str, row: int, col: int, parity: int, copy: int = 0) -> Generator:
    return Generator(CREATION, family, copy, row, col, parity % 2)


# Generator interning.  Append-only tables; words are tuples of ids.
_IDS: Dict[Generator, int] = {}
_GENS: List[Generator] = []
_PAR: List[int] = []
_ANN: List[bool] = []
_PARTNER: List[int] = []


def gen_id(g: Generator) -> int:
    i = _IDS.get(g)
    if i is not None:
        return i
    i = len(_GENS)
    _IDS[g] = i
    _GENS.append(g)
    _PAR.append(g.parity)
    _ANN.append(g.kind == ANNIHILATION)
    _PARTNER.append(-1)
    j = gen_id(g.partner)
    _PARTNER[i] = j
    _PARTNER[j] = i
    return i


def generator_of(i: int) -> Generator:
    return _GENS[i]


Word = Tuple[int, ...]


def word_parity(w: Word) -> int:
    return sum(_PAR[i] for i in w) % 2


def _insert_creation(word: Word, g: int, n_cre: int) -> Tuple[Optional[Word], int]:
    """Insert creator ``g`` at the right end of the creator block and sort it in."""
    key = _GENS[g]
    fermi = _PAR[g]
    sign = 1
    pos = n_cre
    while pos > 0 and _GENS[word[pos - 1]] > key:
        if fermi and _PAR[word[pos - 1]]:
            sign = -sign
        pos -= 1
    if fermi and pos > 0 and word[pos - 1] == g:
        return None, 0
    return word[:pos] + (g,) + word[pos:], sign


@lru_cache(maxsize=None)
def _times_gen(word: Word, g: int) -> Tuple[Tuple[Word, int], ...]:
    fermi = _PAR[g]
    if _ANN[g]:
        key = _GENS[g]
        sign = 1
        pos = len(word)
        while pos > 0 and _ANN[word[pos - 1]] and _GENS[word[pos - 1]] > key:
            if fermi and _PAR[word[pos - 1]]:
                sign = -sign
            pos -= 1
        if fermi and pos > 0 and word[pos - 1] == g:
            return ()
        return ((word[:pos] + (g,) + word[pos:], sign),)

    n_cre = 0
    while n_cre < len(word) and not _ANN[word[n_cre]]:
        n_cre += 1
    out: Dict[Word, int] = {}
    partner = _PARTNER[g]
    sign = 1
    for idx in range(len(word) - 1, n_cre - 1, -1):
        h = word[idx]
        if h == partner:
            w = word[:idx] + word[idx + 1:]
            out[w] = out.get(w, 0) + sign
        if fermi and _PAR[h]:
            sign = -sign
    w, s = _insert_creation(word, g, n_cre)
    if w is not None:
        out[w] = out.get(w, 0) + sign * s
    return tuple((w, c) for w, c in out.items() if c)


@lru_cache(maxsize=None)
def multiply_words(u: Word, v: Word) -> Tuple[Tuple[Word, int], ...]:
    """Normal-ordered expansion of the product ``u * v`` with integer coefficients."""
    acc: Dict[Word, int] = {u: 1}
    for g in v:
        nxt: Dict[Word, int] = {}
        for w, c in acc.items():
            for w2, c2 in _times_gen(w, g):
                nxt[w2] = nxt.get(w2, 0) + c * c2
        acc = {w: c for w, c in nxt.items() if c}
        if not acc:
            return ()
    return tuple(acc.items())


def clear_caches() -> None:
    _times_gen.cache_clear()
    multiply_words.cache_clear()


Scalar = Union[int, Fraction]


class AlgebraElement:
    """Immutable element: ``{word: polynomial}`` with no zero entries."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Word, Poly]] = None):
        self.terms: Dict[Word, Poly] = terms if terms is not None else {}

    # -- construction -------------------------------------------------
    @classmethod
    def from_generator(cls, g: Generator, coeff: Scalar = 1) -> "AlgebraElement":
        if not coeff:
            return ZERO
        return cls({(gen_id(g),): P.const(coeff)})

    @classmethod
    def scalar(cls, c: Union[Scalar, Poly]) -> "AlgebraElement":
        p = c if isinstance(c, dict) else P.const(c)
        return cls({(): dict(p)}) if p else ZERO

    @classmethod
    def symbol(cls, name: str) -> "AlgebraElement":
        return cls({(): P.symbol(name)})

    @classmethod
    def from_flat(cls, flat: Mapping[Tuple[Tuple[int, ...], Tuple[Generator, ...]], Scalar]) -> "AlgebraElement":
        """Build from a ``{(monomial, generator sequence): coeff}`` map; sequences need not be ordered."""
        out = ZERO
        for (mono, gens), c in flat.items():
            term = cls.scalar({tuple(mono): c})
            for g in gens:
                term = term * cls.from_generator(g)
            out = out + term
        return out

    # -- views ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def flat_terms(self) -> Dict[Tuple[Tuple[int, ...], Tuple[Generator, ...]], Scalar]:
        return {
            (m, tuple(_GENS[i] for i in w)): c
            for w, p in self.terms.items()
            for m, c in p.items()
        }

    def n_terms(self) -> int:
        return sum(len(p) for p in self.terms.values())

    def generators(self) -> set:
        return {_GENS[i] for w in self.terms for i in w}

    def parity(self):
        pars = {word_parity(w) for w in self.terms}
        if not pars:
            return 0
        if len(pars) > 1:
            return INHOMOGENEOUS
        return pars.pop()

    def is_scalar(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def scalar_part(self) -> Poly:
        return dict(self.terms.get((), {}))

    def max_word_length(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other) -> "AlgebraElement":
        other = _coerce(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = {w: dict(p) for w, p in self.terms.items()}
        for w, p in other.terms.items():
            q = out.get(w)
            if q is None:
                out[w] = dict(p)
            else:
                P.add_into(q, p)
                if not q:
                    del out[w]
        return AlgebraElement(out)

    __radd__ = __add__

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement({w: P.neg(p) for w, p in self.terms.items()})

    def __sub__(self, other) -> "AlgebraElement":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "AlgebraElement":
        return _coerce(other) - self

    def scale(self, c: Union[Scalar, Poly]) -> "AlgebraElement":
        if isinstance(c, dict):
            if not c:
                return ZERO
            out = {}
            for w, p in self.terms.items():
                q = P.mul(p, c)
                if q:
                    out[w] = q
            return AlgebraElement(out)
        if not c:
            return ZERO
        if c == 1:
            return self
        return AlgebraElement({w: P.scale(p, c) for w, p in self.terms.items()})

    def __mul__(self, other) -> "AlgebraElement":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, dict):
            return self.scale(other)
        return multiply(self, other)

    def __rmul__(self, other) -> "AlgebraElement":
        if isinstance(other, (int, Fraction, dict)):
            return self.scale(other)
        return multiply(_coerce(other), self)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = AlgebraElement.scalar(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset((w, frozenset(p.items())) for w, p in self.terms.items()))

    # -- spectral symbols ----------------------------------------------
    def map_coefficients(self, fn) -> "AlgebraElement":
        out = {}
        for w, p in self.terms.items():
            q = fn(p)
            if q:
                out[w] = q
        return AlgebraElement(out)

    def subs_symbols(self, images: Mapping[str, Poly]) -> "AlgebraElement":
        return self.map_coefficients(lambda p: P.compose(p, images))

    def swap_symbols(self, a: str, b: str) -> "AlgebraElement":
        return self.map_coefficients(lambda p: P.swap_symbols(p, a, b))

    def evaluate(self, values: Mapping[str, Rational]) -> "AlgebraElement":
        return self.map_coefficients(lambda p: P.evaluate(p, values))

    def degree(self, name: str) -> int:
        return max((P.degree(p, name) for p in self.terms.values()), default=-(10**9))

    def coefficient(self, name: str, k: int) -> "AlgebraElement":
        return self.map_coefficients(lambda p: P.coefficient(p, name, k))

    # -- display -----------------------------------------------------------
    def __repr__(self) -> str:
        return f"AlgebraElement({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=lambda w: (len(w), [_GENS[i] for i in w])):
            p = self.terms[w]
            ws = " ".join(_GENS[i].label() for i in w)
            cs = P.to_str(p)
            if not ws:
                parts.append(cs)
            elif cs == "1":
                parts.append(ws)
            else:
                parts.append(f"({cs}) {ws}")
        return " + ".join(parts)


ZERO = AlgebraElement({})
ONE = AlgebraElement({(): P.const(1)})


def _coerce(x) -> AlgebraElement:
    if isinstance(x, AlgebraElement):
        return x
    if isinstance(x, (int, Fraction)):
        return AlgebraElement.scalar(x)
    if isinstance(x, dict):
        return AlgebraElement.scalar(x)
    if isinstance(x, Generator):
        return AlgebraElement.from_generator(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to AlgebraElement")


def element(x) -> AlgebraElement:
    return _coerce(x)


def multiply(lhs: AlgebraElement, rhs: AlgebraElement) -> AlgebraElement:
    if not lhs.terms or not rhs.terms:
        return ZERO
    out: Dict[Word, Poly] = {}
    for w1, p1 in lhs.terms.items():
        for w2, p2 in rhs.terms.items():
            prods = multiply_words(w1, w2)
            if not prods:
                continue
            pp = P.mul(p1, p2)
            for w, c in prods:
                acc = out.get(w)
                if acc is None:
                    out[w] = P.scale(pp, c)
                else:
                    P.add_into(acc, pp, c)
                    if not acc:
                        del out[w]
    return AlgebraElement(out)


def parity(elem: AlgebraElement):
    """``0``/``1`` for homogeneous elements, :data:`INHOMOGENEOUS` otherwise."""
    return elem.parity()


def supercommutator(lhs, rhs) -> AlgebraElement:
    lhs, rhs = _coerce(lhs), _coerce(rhs)
    pa, pb = lhs.parity(), rhs.parity()
    if pa == INHOMOGENEOUS or pb == INHOMOGENEOUS:
        raise ParityError("supercommutator of an inhomogeneous element")
    ab = lhs * rhs
    ba = rhs * lhs
    return ab + ba if (pa and pb) else ab - ba


def sum_elements(items: Iterable[AlgebraElement]) -> AlgebraElement:
    out: Dict[Word, Poly] = {}
    for e in items:
        for w, p in e.terms.items():
            acc = out.get(w)
            if acc is None:
                out[w] = dict(p)
            else:
                P.add_into(acc, p)
                if not acc:
                    del out[w]
    return AlgebraElement(out)


def conjugate_by_exponential(T: AlgebraElement, X: AlgebraElement, max_depth: int = 32) -> AlgebraElement:
    """``exp(T) X exp(-T)`` as the adjoint series, which must terminate within ``max_depth`` steps."""
    T, X = _coerce(T), _coerce(X)
    if T.parity() != 0:
        raise ParityError("exponent must be parity-even")
    total = X
    term = X
    for k in range(1, max_depth + 2):
        term = T * term - term * T
        if term.is_zero():
            return total
        if k > max_depth:
            break
        total = total + term.scale(Fraction(1, factorial(k)))
    raise TruncationError(f"adjoint series did not terminate within {max_depth} steps")


class Substitution:
    """A generator-to-scaled-generator map extended multiplicatively.

    Generators outside the map are fixed.  Call :meth:`check_homomorphism`
    before trusting the result; :meth:`apply` does not check by itself.
    """

    def __init__(self, mapping: Mapping[Generator, Tuple[Scalar, Generator]], name: str = ""):
        self.mapping = dict(mapping)
        self.name = name
        self._ids = {gen_id(g): (c, gen_id(h)) for g, (c, h) in self.mapping.items()}

    def image(self, g: Generator) -> AlgebraElement:
        c, h = self.mapping.get(g, (1, g))
        return AlgebraElement.from_generator(h, c)

    def _word_image(self, w: Word, cache: Dict[Word, AlgebraElement]) -> AlgebraElement:
        r = cache.get(w)
        if r is not None:
            return r
        out = ONE
        for i in w:
            c, j = self._ids.get(i, (1, i))
            out = out * AlgebraElement({(j,): P.const(c)})
        cache[w] = out
        return out

    def apply(self, elem: AlgebraElement) -> AlgebraElement:
        cache: Dict[Word, AlgebraElement] = {}
        parts = []
        for w, p in elem.terms.items():
            parts.append(self._word_image(w, cache).scale(p))
        return sum_elements(parts)

    def __call__(self, elem):
        return self.apply(_coerce(elem))

    def violations(self) -> List[str]:
        gens = set(self.mapping)
        gens |= {g.partner for g in self.mapping}
        gens = sorted(gens)
        bad = []
        for g in gens:
            if self.image(g).parity() != g.parity:
                bad.append(f"parity of {g.label()} not preserved")
        for i, g in enumerate(gens):
            for h in gens[i:]:
                want = supercommutator(AlgebraElement.from_generator(g), AlgebraElement.from_generator(h))
                got = supercommutator(self.image(g), self.image(h))
                if got != want:
                    bad.append(f"[{g.label()}, {h.label()}] = {want} but images give {got}")
        return bad

    def check_homomorphism(self) -> "Substitution":
        bad = self.violations()
        if bad:
            raise HomomorphismError(f"{self.name or 'substitution'}: {bad[0]}")
        return self

    def is_homomorphism(self) -> bool:
        return not self.violations()

    def compose(self, other: "Substitution") -> "Substitution":
        """``self`` after ``other``."""
        m: Dict[Generator, Tuple[Scalar, Generator]] = {}
        for g, (c, h) in other.mapping.items():
            c2, h2 = self.mapping.get(h, (1, h))
            m[g] = (c * c2, h2)
        for g, v in self.mapping.items():
            if g not in m:
                m[g] = v
        return Substitution(m, name=f"{self.name}.{other.name}")


def substitute(elem: AlgebraElement, mapping, verify: bool = True) -> AlgebraElement:
    sub = mapping if isinstance(mapping, Substitution) else Substitution(mapping)
    if verify:
        sub.check_homomorphism()
    return sub.apply(_coerce(elem))
