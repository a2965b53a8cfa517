"""Operator-valued matrices with parity metadata.

Entries are :class:`~osplax.algebra.AlgebraElement`.  With the sign
convention used throughout (entry ``(i, j)`` carries the extra sign
``(-1)^{|i||j|+|j|}`` when viewed as an element of ``End V (x) A``), products
and conjugations by even scalar matrices are computed row-by-column as usual.
Indices are 0-based in storage; the signature helpers take 1-based indices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import poly as P
from .algebra import ONE, ZERO, AlgebraElement, INHOMOGENEOUS, element, sum_elements


class MatrixError(Exception):
    pass


class DivergenceError(MatrixError):
    pass


@dataclass(frozen=True)
class SuperSignature:
    """Rank data of ``osp(N|2m)`` with the fixed parity sequences used here."""

    N: int
    m: int

    def __post_init__(self):
        if self.N < 0 or self.m < 0:
            raise ValueError("N and m must be non-negative")

    @property
    def n(self) -> int:
        return self.N // 2

    @property
    def odd(self) -> bool:
        return self.N % 2 == 1

    @property
    def dim(self) -> int:
        return self.N + 2 * self.m

    @property
    def kappa(self) -> Fraction:
        return Fraction(self.N, 2) - self.m - 1

    @property
    def parity(self) -> Tuple[int, ...]:
        n, m = self.n, self.m
        if self.odd:
            return (0,) * n + (1,) * m + (0,) + (1,) * m + (0,) * n
        return (0,) * n + (1,) * (2 * m) + (0,) * n

    @property
    def theta(self) -> Tuple[int, ...]:
        n, m = self.n, self.m
        head = n + m + (1 if self.odd else 0)
        return (1,) * head + (-1,) * m + (1,) * n

    def p(self, i: int) -> int:
        return self.parity[i - 1]

    def th(self, i: int) -> int:
        return self.theta[i - 1]

    def prime(self, i: int) -> int:
        return self.dim + 1 - i

    def check(self) -> List[str]:
        bad = []
        d = self.dim
        for i in range(1, d + 1):
            if self.p(i) != self.p(self.prime(i)):
                bad.append(f"parity not symmetric at {i}")
            if self.th(self.prime(i)) != (-1) ** self.p(i) * self.th(i):
                bad.append(f"theta relation fails at {i}")
        for i in range(1, self.n + self.m + 1):
            if self.th(i) != 1:
                bad.append(f"theta_{i} != 1")
        if sum(1 for x in self.parity if x == 0) != self.N:
            bad.append("even dimension mismatch")
        return bad


@dataclass(frozen=True)
class LaxFamilyDescriptor:
    tag: str
    n: int = 0
    m: int = 0
    a: int = 0
    N: Optional[int] = None
    shifts: Tuple[Tuple[str, str], ...] = field(default_factory=tuple)

    TAGS = (
        "gl-L_a", "gl-Lbar_a", "gl-hat", "gl-nondeg",
        "osp-lin-deg", "osp-lin-degbar", "osp-lin-nondeg",
        "osp-quad-fused", "osp-quad-deg", "osp-quad-deg-odd", "osp-quad-hat",
        "osp-quad-hattilde", "osp-quad-nondeg", "osp-quad-nondeg-full", "plain",
    )

    def __post_init__(self):
        if self.tag not in self.TAGS:
            raise ValueError(f"unknown family tag {self.tag!r}")
        if self.tag.startswith("osp-quad") and self.tag != "osp-quad-deg-odd" and self.n < 1:
            raise ValueError(f"{self.tag} requires n >= 1")

    @property
    def kind(self) -> str:
        return "gl" if self.tag.startswith("gl") else ("plain" if self.tag == "plain" else "osp")

    def name(self) -> str:
        if self.kind == "gl":
            return f"{self.tag}(n={self.n},m={self.m},a={self.a})"
        N = self.N if self.N is not None else 2 * self.n
        return f"{self.tag}(N={N},m={self.m})"


PLAIN = LaxFamilyDescriptor("plain")


class SpectralMatrix:
    """Square matrix of algebra elements over a graded basis."""

    __slots__ = ("entries", "parity", "signature", "descriptor")

    def __init__(self, entries: Sequence[Sequence], parity: Sequence[int],
                 signature: Optional[SuperSignature] = None,
                 descriptor: LaxFamilyDescriptor = PLAIN):
        rows = [[element(e) for e in row] for row in entries]
        d = len(parity)
        if len(rows) != d or any(len(r) != d for r in rows):
            raise MatrixError(f"expected a {d}x{d} matrix")
        self.entries: List[List[AlgebraElement]] = rows
        self.parity: Tuple[int, ...] = tuple(parity)
        self.signature = signature
        self.descriptor = descriptor

    # -- constructors ----------------------------------------------------
    @classmethod
    def zeros(cls, parity, **kw) -> "SpectralMatrix":
        d = len(parity)
        return cls([[ZERO] * d for _ in range(d)], parity, **kw)

    @classmethod
    def identity(cls, parity, **kw) -> "SpectralMatrix":
        d = len(parity)
        return cls([[ONE if i == j else ZERO for j in range(d)] for i in range(d)], parity, **kw)

    @classmethod
    def scalar(cls, rows: Sequence[Sequence], parity, **kw) -> "SpectralMatrix":
        return cls([[AlgebraElement.scalar(Fraction(v)) for v in row] for row in rows], parity, **kw)

    # -- basics -----------------------------------------------------------
    @property
    def size(self) -> int:
        return len(self.parity)

    def __getitem__(self, ij) -> AlgebraElement:
        i, j = ij
        return self.entries[i][j]

    def entry(self, i: int, j: int) -> AlgebraElement:
        """1-based access."""
        return self.entries[i - 1][j - 1]

    def with_meta(self, signature=None, descriptor=None) -> "SpectralMatrix":
        return SpectralMatrix(self.entries, self.parity,
                              signature if signature is not None else self.signature,
                              descriptor if descriptor is not None else self.descriptor)

    def map(self, fn) -> "SpectralMatrix":
        return SpectralMatrix([[fn(e) for e in row] for row in self.entries], self.parity,
                              self.signature, self.descriptor)

    def subs_symbols(self, images) -> "SpectralMatrix":
        return self.map(lambda e: e.subs_symbols(images))

    def evaluate(self, values) -> "SpectralMatrix":
        return self.map(lambda e: e.evaluate(values))

    def at(self, sym: str, poly) -> "SpectralMatrix":
        """Replace the spectral symbol ``sym`` by ``poly`` (e.g. ``L(x+x1)``)."""
        return self.subs_symbols({sym: poly})

    def is_scalar(self) -> bool:
        return all(e.is_scalar() for row in self.entries for e in row)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpectralMatrix):
            return NotImplemented
        return self.size == other.size and all(
            a == b for ra, rb in zip(self.entries, other.entries) for a, b in zip(ra, rb))

    __hash__ = None

    def diff(self, other: "SpectralMatrix") -> List[Tuple[int, int, AlgebraElement]]:
        """Nonzero entries of ``self - other`` as ``(i, j, residual)`` with 1-based indices."""
        if self.size != other.size:
            raise MatrixError("size mismatch")
        out = []
        for i in range(self.size):
            for j in range(self.size):
                r = self.entries[i][j] - other.entries[i][j]
                if not r.is_zero():
                    out.append((i + 1, j + 1, r))
        return out

    def __add__(self, other: "SpectralMatrix") -> "SpectralMatrix":
        return SpectralMatrix([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)],
                              self.parity, self.signature)

    def __sub__(self, other: "SpectralMatrix") -> "SpectralMatrix":
        return SpectralMatrix([[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)],
                              self.parity, self.signature)

    def __neg__(self) -> "SpectralMatrix":
        return self.map(lambda e: -e)

    def __matmul__(self, other: "SpectralMatrix") -> "SpectralMatrix":
        return matmul(self, other)

    def transpose_plain(self) -> "SpectralMatrix":
        return SpectralMatrix([list(r) for r in zip(*self.entries)], self.parity, self.signature)

    def scalar_rows(self) -> List[List[Fraction]]:
        out = []
        for row in self.entries:
            r = []
            for e in row:
                if not e.is_scalar():
                    raise MatrixError("matrix is not scalar")
                r.append(Fraction(P.constant_value(e.scalar_part())))
            out.append(r)
        return out

    def __repr__(self) -> str:
        return f"SpectralMatrix(size={self.size}, {self.descriptor.name()})"

    def pretty(self) -> str:
        lines = []
        for i, row in enumerate(self.entries, 1):
            for j, e in enumerate(row, 1):
                if not e.is_zero():
                    lines.append(f"  [{i},{j}] {e}")
        return "\n".join(lines)


def _check_sizes(a: SpectralMatrix, b: SpectralMatrix) -> None:
    if a.size != b.size:
        raise MatrixError(f"size mismatch {a.size} vs {b.size}")


def matmul(lhs: SpectralMatrix, rhs: SpectralMatrix) -> SpectralMatrix:
    _check_sizes(lhs, rhs)
    d = lhs.size
    cols = [[rhs.entries[k][j] for k in range(d)] for j in range(d)]
    out = []
    for i in range(d):
        row = lhs.entries[i]
        nz = [(k, e) for k, e in enumerate(row) if not e.is_zero()]
        new_row = []
        for j in range(d):
            col = cols[j]
            new_row.append(sum_elements(e * col[k] for k, e in nz if not col[k].is_zero()))
        out.append(new_row)
    return SpectralMatrix(out, lhs.parity, lhs.signature or rhs.signature)


def matmul_all(*mats: SpectralMatrix) -> SpectralMatrix:
    out = mats[0]
    for m in mats[1:]:
        out = matmul(out, m)
    return out


def scalar_inverse(rows: Sequence[Sequence]) -> List[List[Fraction]]:
    """Exact Gauss-Jordan inverse; raises :class:`MatrixError` if singular."""
    d = len(rows)
    a = [[Fraction(v) for v in r] + [Fraction(int(i == j)) for j in range(d)] for i, r in enumerate(rows)]
    for c in range(d):
        piv = next((r for r in range(c, d) if a[r][c] != 0), None)
        if piv is None:
            raise MatrixError("singular scalar matrix")
        a[c], a[piv] = a[piv], a[c]
        pv = a[c][c]
        a[c] = [v / pv for v in a[c]]
        for r in range(d):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [r[d:] for r in a]


def scalar_matrix(rows, parity, check_even: bool = True) -> SpectralMatrix:
    M = SpectralMatrix.scalar(rows, parity)
    if check_even:
        bad = check_evenness(M)
        if bad:
            raise MatrixError(f"scalar matrix is not even: {bad[0]}")
    return M


def conjugate(mat: SpectralMatrix, J) -> SpectralMatrix:
    """``J mat J^{-1}`` for an invertible even scalar matrix ``J``."""
    Jm = J if isinstance(J, SpectralMatrix) else scalar_matrix(J, mat.parity)
    inv = scalar_matrix(scalar_inverse(Jm.scalar_rows()), mat.parity, check_even=False)
    out = matmul(matmul(Jm, mat), inv)
    return out.with_meta(mat.signature, mat.descriptor)


def check_evenness(mat: SpectralMatrix) -> List[Tuple[int, int, str]]:
    """Entries whose parity differs from ``|i|+|j|`` (1-based indices)."""
    bad = []
    for i, row in enumerate(mat.entries):
        for j, e in enumerate(row):
            if e.is_zero():
                continue
            p = e.parity()
            want = (mat.parity[i] + mat.parity[j]) % 2
            if p == INHOMOGENEOUS or p != want:
                bad.append((i + 1, j + 1, f"parity {p}, expected {want}"))
    return bad


def diag_poly(values: Sequence) -> List[Dict]:
    out = []
    for v in values:
        out.append(v if isinstance(v, dict) else P.const(Fraction(v)))
    return out


def scaled_limit(family: SpectralMatrix, left_diag: Optional[Sequence] = None,
                 right_diag: Optional[Sequence] = None, param: str = "t") -> SpectralMatrix:
    """``lim_{t->oo} left . M(t) . right`` where the diagonals may contain powers ``t**-k``.

    Every entry must end up with non-positive ``t``-degree; the ``t**0`` part is returned.
    """
    d = family.size
    left = diag_poly(left_diag) if left_diag is not None else [P.const(1)] * d
    right = diag_poly(right_diag) if right_diag is not None else [P.const(1)] * d
    out = []
    for i in range(d):
        row = []
        for j in range(d):
            e = family.entries[i][j].scale(P.mul(left[i], right[j]))
            deg = e.degree(param)
            if deg > 0:
                raise DivergenceError(f"entry ({i + 1},{j + 1}) has {param}-degree {deg}")
            row.append(e.coefficient(param, 0))
        out.append(row)
    return SpectralMatrix(out, family.parity, family.signature)


def _sgn(k: int) -> int:
    return -1 if k % 2 else 1


def tensor_lift(mat: SpectralMatrix, slot: int) -> SpectralMatrix:
    """Ordinary-product form of ``L (x) Id`` (slot 1) or ``Id (x) L`` (slot 2) on ``V (x) V``.

    Basis ``v_i (x) v_k`` has index ``i*d + k`` and parity ``|i|+|k|``.  Entry
    signs come from the graded action and the sign convention of the module
    docstring, applied once to ``V`` and once to ``V (x) V``.
    """
    bad = check_evenness(mat)
    if bad:
        raise MatrixError(f"cannot lift an uneven matrix: {bad[0]}")
    d = mat.size
    p = mat.parity
    big_par = tuple((p[i] + p[k]) % 2 for i in range(d) for k in range(d))
    out = [[ZERO] * (d * d) for _ in range(d * d)]
    for i in range(d):
        for j in range(d):
            e = mat.entries[i][j]
            if e.is_zero():
                continue
            base = _sgn(p[i] * p[j] + p[j])
            for k in range(d):
                if slot == 1:
                    I, J = i * d + k, j * d + k
                    s = base
                else:
                    I, J = k * d + i, k * d + j
                    s = base * _sgn((p[i] + p[j]) * p[k])
                pI, pJ = big_par[I], big_par[J]
                s *= _sgn(pI * pJ + pJ)
                out[I][J] = e if s == 1 else -e
    return SpectralMatrix(out, big_par)


def from_blocks(blocks: Sequence[Sequence], parity, signature=None, descriptor=PLAIN) -> SpectralMatrix:
    """Assemble from a grid of blocks; each block is a list of rows (scalars/elements) or ``None`` for zero."""
    heights = []
    for brow in blocks:
        h = next((len(b) for b in brow if b is not None and not isinstance(b, int)), None)
        heights.append(h)
    widths = []
    for c in range(len(blocks[0])):
        w = next((len(brow[c][0]) for brow in blocks if brow[c] is not None and not isinstance(brow[c], int) and len(brow[c]) > 0), None)
        widths.append(w)
    if any(h is None for h in heights) or any(w is None for w in widths):
        raise MatrixError("cannot infer block sizes")
    rows = []
    for bi, brow in enumerate(blocks):
        for r in range(heights[bi]):
            row = []
            for bj, b in enumerate(brow):
                if b is None:
                    row.extend([ZERO] * widths[bj])
                else:
                    row.extend(element(v) for v in b[r])
            rows.append(row)
    return SpectralMatrix(rows, parity, signature, descriptor)
