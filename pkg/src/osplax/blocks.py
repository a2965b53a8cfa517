"""Rectangular blocks of algebra elements with explicit shapes.

Used to assemble Lax matrices from their displayed block forms.  Shapes are
stored separately so that empty blocks (``0 x k``) compose correctly.
"""
from __future__ import annotations

from typing import Iterable, List, Sequence

from .algebra import AlgebraElement, ZERO, element, sum_elements


class Blk:
    __slots__ = ("rows", "nr", "nc")

    def __init__(self, rows: Sequence[Sequence], nr: int = None, nc: int = None):
        self.rows: List[List[AlgebraElement]] = [[element(v) for v in r] for r in rows]
        self.nr = len(self.rows) if nr is None else nr
        self.nc = (len(self.rows[0]) if self.rows else 0) if nc is None else nc
        if len(self.rows) != self.nr or any(len(r) != self.nc for r in self.rows):
            raise ValueError(f"block shape mismatch: expected {self.nr}x{self.nc}")

    @classmethod
    def zeros(cls, nr: int, nc: int) -> "Blk":
        return cls([[ZERO] * nc for _ in range(nr)], nr, nc)

    @classmethod
    def ident(cls, k: int, c=1) -> "Blk":
        e = element(c)
        return cls([[e if i == j else ZERO for j in range(k)] for i in range(k)], k, k)

    @classmethod
    def scalar(cls, rows: Sequence[Sequence], nr: int = None, nc: int = None) -> "Blk":
        return cls([[AlgebraElement.scalar(v) if not isinstance(v, AlgebraElement) else v for v in r] for r in rows], nr, nc)

    @classmethod
    def row(cls, items: Sequence) -> "Blk":
        return cls([list(items)], 1, len(items))

    @classmethod
    def col(cls, items: Sequence) -> "Blk":
        return cls([[v] for v in items], len(items), 1)

    @property
    def shape(self):
        return (self.nr, self.nc)

    def __getitem__(self, ij) -> AlgebraElement:
        return self.rows[ij[0]][ij[1]]

    def __matmul__(self, other: "Blk") -> "Blk":
        if self.nc != other.nr:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = [[other.rows[k][j] for k in range(other.nr)] for j in range(other.nc)]
        out = []
        for r in self.rows:
            nz = [(k, e) for k, e in enumerate(r) if not e.is_zero()]
            out.append([sum_elements(e * col[k] for k, e in nz if not col[k].is_zero()) for col in cols])
        return Blk(out, self.nr, other.nc)

    def __add__(self, other: "Blk") -> "Blk":
        self._same(other)
        return Blk([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)], self.nr, self.nc)

    def __sub__(self, other: "Blk") -> "Blk":
        self._same(other)
        return Blk([[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)], self.nr, self.nc)

    def __neg__(self) -> "Blk":
        return Blk([[-a for a in r] for r in self.rows], self.nr, self.nc)

    def scale(self, c) -> "Blk":
        """Multiply by a rational or a polynomial (coefficient ring element)."""
        return Blk([[a.scale(c) for a in r] for r in self.rows], self.nr, self.nc)

    def map(self, fn) -> "Blk":
        return Blk([[fn(a) for a in r] for r in self.rows], self.nr, self.nc)

    @property
    def T(self) -> "Blk":
        """Plain (bosonic) transpose."""
        return Blk([[self.rows[i][j] for i in range(self.nr)] for j in range(self.nc)], self.nc, self.nr)

    def _same(self, other: "Blk") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def entry(self) -> AlgebraElement:
        if self.shape != (1, 1):
            raise ValueError(f"not a 1x1 block: {self.shape}")
        return self.rows[0][0]

    def __eq__(self, other) -> bool:
        return isinstance(other, Blk) and self.shape == other.shape and all(
            a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb))

    __hash__ = None

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.rows for e in r)

    def first_difference(self, other: "Blk"):
        self._same(other)
        for i, (ra, rb) in enumerate(zip(self.rows, other.rows)):
            for j, (a, b) in enumerate(zip(ra, rb)):
                if a != b:
                    return i + 1, j + 1, a - b
        return None


def assemble(grid: Sequence[Sequence[Blk]]) -> List[List[AlgebraElement]]:
    """Concatenate a grid of blocks; heights must agree along rows and widths down columns."""
    out: List[List[AlgebraElement]] = []
    for brow in grid:
        h = brow[0].nr
        if any(b.nr != h for b in brow):
            raise ValueError("block heights disagree")
        for r in range(h):
            row: List[AlgebraElement] = []
            for b in brow:
                row.extend(b.rows[r])
            out.append(row)
    widths = [b.nc for b in grid[0]]
    for brow in grid:
        if [b.nc for b in brow] != widths:
            raise ValueError("block widths disagree")
    return out


def split(rows: Sequence[Sequence[AlgebraElement]], rsizes: Iterable[int], csizes: Iterable[int]) -> List[List[Blk]]:
    rsizes, csizes = list(rsizes), list(csizes)
    out = []
    r0 = 0
    for h in rsizes:
        c0 = 0
        brow = []
        for w in csizes:
            brow.append(Blk([list(rows[r][c0:c0 + w]) for r in range(r0, r0 + h)], h, w))
            c0 += w
        out.append(brow)
        r0 += h
    return out


def jmat(k: int, sign: int = 1) -> Blk:
    return Blk.scalar([[sign if i + j == k - 1 else 0 for j in range(k)] for i in range(k)], k, k)


def scalar_block(rows: Sequence[Sequence[int]], nr: int, nc: int) -> Blk:
    return Blk.scalar(rows, nr, nc)
