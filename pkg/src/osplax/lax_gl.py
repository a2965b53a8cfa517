"""Lax matrices for the general linear super Yangian built from superoscillators.

Oscillators ``xi_{ij}`` (annihilators, ``i > a >= j``) pair with ``xi~_{ji}``.
The parity sequence of the auxiliary space is an explicit argument; the
default is ``(0,)*n + (1,)*m``.
"""
from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from . import poly as P
from .algebra import (AlgebraElement, Generator, ONE, Substitution, ZERO, annihilator,
                      conjugate_by_exponential, creator, sum_elements)
from .checks import Witness, compare
from .matrices import LaxFamilyDescriptor, SpectralMatrix, conjugate, matmul, scaled_limit

__all__ = [
    "default_parity", "gl_blocks", "build_gl_La", "build_gl_Lbar", "build_gl_nondeg", "gl_hat_from_bar",
    "gl_ph_map", "gl_fusion_exponent", "check_gl_fusion", "check_gl_transform", "gl_limit_La", "gl_limit_Lbar",
]

XI = "xi"


def default_parity(n: int, m: int) -> Tuple[int, ...]:
    return (0,) * n + (1,) * m


def _desc(tag: str, parity, a: int) -> LaxFamilyDescriptor:
    n = sum(1 for p in parity if p == 0)
    return LaxFamilyDescriptor(tag, n=n, m=len(parity) - n, a=a)


def _check_a(parity, a: int) -> None:
    if not 0 <= a <= len(parity):
        raise ValueError(f"a={a} out of range 0..{len(parity)}")


def _gen(g: Generator, c=1) -> AlgebraElement:
    return AlgebraElement.from_generator(g, c)


def gl_blocks(parity: Sequence[int], a: int, copy: int = 0, family: str = XI):
    """``(Kbar, K)``: ``Kbar[r][c] = xi~_{r, a+c}`` (a x (d-a)), ``K[r][c] = (-1)^{|c|} xi_{a+r, c}``."""
    _check_a(parity, a)
    d = len(parity)
    Kbar = [[_gen(creator(family, r, a + c, parity[r - 1] + parity[a + c - 1], copy))
             for c in range(1, d - a + 1)] for r in range(1, a + 1)]
    K = [[_gen(annihilator(family, a + r, c, parity[a + r - 1] + parity[c - 1], copy),
               -1 if parity[c - 1] else 1)
          for c in range(1, a + 1)] for r in range(1, d - a + 1)]
    return Kbar, K


def _mm(A, B, ncols: Optional[int] = None) -> List[List[AlgebraElement]]:
    if not B:
        return [[ZERO] * (ncols or 0) for _ in A]
    return [[sum_elements(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))]
            for i in range(len(A))]


def _blocks(tl, tr, bl, br, parity, desc) -> SpectralMatrix:
    a = len(tl)
    rows = [list(tl[i]) + list(tr[i]) for i in range(a)]
    rows += [list(bl[i]) + list(br[i]) for i in range(len(br))]
    return SpectralMatrix(rows, parity, None, desc)


def _scalar_id(k: int, poly) -> List[List[AlgebraElement]]:
    e = AlgebraElement.scalar(poly)
    return [[e if i == j else ZERO for j in range(k)] for i in range(k)]


def _sub(A, B, sa=1, sb=1):
    return [[x * sa + y * sb for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def _neg(A):
    return [[-x for x in r] for r in A]


def build_gl_La(n: int = 0, m: int = 0, a: int = 0, copy: int = 0, parity: Optional[Sequence[int]] = None,
                family: str = XI) -> SpectralMatrix:
    """``[[x Id - Kbar K, Kbar], [-K, Id]]``."""
    parity = tuple(parity) if parity is not None else default_parity(n, m)
    Kbar, K = gl_blocks(parity, a, copy, family)
    d = len(parity)
    x = P.symbol("x")
    tl = _sub(_scalar_id(a, x), _mm(Kbar, K, a), 1, -1)
    return _blocks(tl, Kbar, _neg(K), _scalar_id(d - a, P.const(1)), parity, _desc("gl-L_a", parity, a))


def build_gl_Lbar(n: int = 0, m: int = 0, a: int = 0, copy: int = 0, parity: Optional[Sequence[int]] = None,
                  family: str = XI) -> SpectralMatrix:
    """``[[Id, Kbar], [K, x Id + K Kbar]]``."""
    parity = tuple(parity) if parity is not None else default_parity(n, m)
    Kbar, K = gl_blocks(parity, a, copy, family)
    d = len(parity)
    br = _sub(_scalar_id(d - a, P.symbol("x")), _mm(K, Kbar, d - a))
    return _blocks(_scalar_id(a, P.const(1)), Kbar, K, br, parity, _desc("gl-Lbar_a", parity, a))


def _nondeg_from_blocks(Kbar, K, parity, a, x1, x2, desc) -> SpectralMatrix:
    d = len(parity)
    KbK = _mm(Kbar, K, a)
    tl = _sub(_scalar_id(a, P.add(P.symbol("x"), x1)), KbK, 1, -1)
    inner = _sub(_scalar_id(a, P.add(x2, P.neg(x1))), KbK)
    tr = _mm(inner, Kbar, d - a)
    br = _sub(_scalar_id(d - a, P.add(P.symbol("x"), x2)), _mm(K, Kbar, d - a))
    return _blocks(tl, tr, _neg(K), br, parity, desc)


def _shift(v) -> P.Poly:
    if isinstance(v, dict):
        return v
    if isinstance(v, str):
        return P.symbol(v)
    return P.const(v)


def build_gl_nondeg(n: int = 0, m: int = 0, a: int = 0, x1="x1", x2="x2", copy: int = 1,
                    parity: Optional[Sequence[int]] = None, family: str = XI) -> SpectralMatrix:
    """``L_{x1,x2}(x)``; shifts may be symbol names, rationals or polynomials."""
    parity = tuple(parity) if parity is not None else default_parity(n, m)
    Kbar, K = gl_blocks(parity, a, copy, family)
    desc = _desc("gl-nondeg", parity, a)
    return _nondeg_from_blocks(Kbar, K, parity, a, _shift(x1), _shift(x2), desc)


def gl_ph_map(parity: Sequence[int], a: int, src: str = XI, dst: str = "xih", copy: int = 0) -> Substitution:
    """Particle-hole map taking the conjugated ``Lbar_a`` to ``L_{d-a}`` on the reversed parity sequence.

    ``xi~_{i'j'} -> -(-1)^{|j'|} xi'_{ij}`` and ``xi_{j'i'} -> (-1)^{|i'|} xi'~_{ji}``
    for ``1 <= j <= d-a < i <= d``; the target family lives on the reversed sequence.
    """
    d = len(parity)
    ab = d - a
    rev = tuple(reversed(parity))
    pr = lambda i: d + 1 - i
    par = lambda i: parity[i - 1]
    mp = {}
    for i in range(ab + 1, d + 1):
        for j in range(1, ab + 1):
            p = rev[i - 1] + rev[j - 1]
            src_cre = creator(src, pr(i), pr(j), par(pr(i)) + par(pr(j)), copy)
            mp[src_cre] = (-(-1) ** par(pr(j)), annihilator(dst, i, j, p, copy))
            src_ann = annihilator(src, pr(j), pr(i), par(pr(i)) + par(pr(j)), copy)
            mp[src_ann] = ((-1) ** par(pr(i)), creator(dst, j, i, p, copy))
    return Substitution(mp, "gl-particle-hole")


def _jmat(d: int):
    return [[1 if i + j == d - 1 else 0 for j in range(d)] for i in range(d)]


def gl_hat_from_bar(n: int = 0, m: int = 0, a: int = 0, parity: Optional[Sequence[int]] = None,
                    copy: int = 0, verify: bool = True) -> SpectralMatrix:
    """``J Lbar_a J^{-1}`` followed by the particle-hole map; lives on the reversed sequence."""
    parity = tuple(parity) if parity is not None else default_parity(n, m)
    d = len(parity)
    Lb = build_gl_Lbar(parity=parity, a=a, copy=copy)
    rev = tuple(reversed(parity))
    J = SpectralMatrix.scalar(_jmat(d), rev)
    hat = conjugate(Lb.with_meta(), J)
    sub = gl_ph_map(parity, a, copy=copy)
    if verify:
        sub.check_homomorphism()
    out = SpectralMatrix(hat.map(sub.apply).entries, rev, None, _desc("gl-L_a", rev, d - a))
    return out


def gl_fusion_exponent(parity: Sequence[int], a: int, family: str = XI) -> AlgebraElement:
    """``T = sum_{i <= a < j} xi~[1]_{ij} xi[2]_{ji}``, so that ``S_a = exp T``."""
    d = len(parity)
    terms = []
    for i in range(1, a + 1):
        for j in range(a + 1, d + 1):
            p = parity[i - 1] + parity[j - 1]
            terms.append(_gen(creator(family, i, j, p, 1)) * _gen(annihilator(family, j, i, p, 2)))
    return sum_elements(terms)


def _conj_matrix(T: AlgebraElement, M: SpectralMatrix) -> SpectralMatrix:
    cache = {}

    def f(e):
        key = id(e)
        if key not in cache:
            cache[key] = conjugate_by_exponential(T, e)
        return cache[key]
    return M.map(f)


def check_gl_transform(n: int = 0, m: int = 0, a: int = 0, parity=None) -> Optional[Witness]:
    """``S K_r S^{-1}`` from the adjoint series equals ``K_1 - K_2``, ``Kbar_1``, ``Kbar_2 + Kbar_1``, ``K_2``."""
    parity = tuple(parity) if parity is not None else default_parity(n, m)
    T = gl_fusion_exponent(parity, a)
    Kb1, K1 = gl_blocks(parity, a, 1)
    Kb2, K2 = gl_blocks(parity, a, 2)
    expected = [(K1, _sub(K1, K2, 1, -1)), (Kb1, Kb1), (Kb2, _sub(Kb2, Kb1)), (K2, K2)]
    names = ["K1'", "Kbar1'", "Kbar2'", "K2'"]
    for name, (src, want) in zip(names, expected):
        for r, (row_s, row_w) in enumerate(zip(src, want)):
            for c, (s, w) in enumerate(zip(row_s, row_w)):
                got = conjugate_by_exponential(T, s)
                if got != w:
                    return Witness(f"{name}[{r + 1},{c + 1}]", (got - w).n_terms(), str(got - w))
    return None


def check_gl_fusion(n: int = 0, m: int = 0, a: int = 0, parity=None) -> Optional[Witness]:
    """``L_a[1](x+x1) Lbar_a[2](x+x2) = S L_{x1,x2}(x) [[Id, Kbar_2],[0, Id]] S^{-1}``."""
    parity = tuple(parity) if parity is not None else default_parity(n, m)
    d = len(parity)
    w = check_gl_transform(parity=parity, a=a)
    if w is not None:
        return w
    xs1, xs2 = P.from_linear(x=1, x1=1), P.from_linear(x=1, x2=1)
    lhs = matmul(build_gl_La(parity=parity, a=a, copy=1).at("x", xs1),
                 build_gl_Lbar(parity=parity, a=a, copy=2).at("x", xs2))
    calL = build_gl_nondeg(parity=parity, a=a, copy=1)
    Kb2, _ = gl_blocks(parity, a, 2)
    H = _blocks(_scalar_id(a, P.const(1)), Kb2, [[ZERO] * a for _ in range(d - a)],
                _scalar_id(d - a, P.const(1)), parity, calL.descriptor)
    T = gl_fusion_exponent(parity, a)
    rhs = _conj_matrix(T, matmul(calL, H))
    return compare(lhs, rhs)


def _flip_all(L: SpectralMatrix) -> SpectralMatrix:
    mp = {}
    for row in L.entries:
        for e in row:
            for g in e.generators():
                mp[g] = (-1, g)
                mp[g.partner] = (-1, g.partner)
    sub = Substitution(mp, "sign-flip").check_homomorphism()
    return L.map(sub.apply)


def gl_limit_La(n: int = 0, m: int = 0, a: int = 0, parity=None) -> SpectralMatrix:
    """``lim_t L_{0,t}(x) diag(1^a, (1/t)^{d-a})``."""
    parity = tuple(parity) if parity is not None else default_parity(n, m)
    d = len(parity)
    fam = build_gl_nondeg(parity=parity, a=a, x1=0, x2="t", copy=0)
    right = [P.const(1)] * a + [P.symbol("t", -1)] * (d - a)
    return scaled_limit(fam, None, right).with_meta(descriptor=_desc("gl-L_a", parity, a))


def gl_limit_Lbar(n: int = 0, m: int = 0, a: int = 0, parity=None) -> SpectralMatrix:
    """``lim_t diag((1/t)^a, 1^{d-a}) L_{t,0}(x)`` followed by ``xi -> -xi``, ``xi~ -> -xi~``."""
    parity = tuple(parity) if parity is not None else default_parity(n, m)
    d = len(parity)
    fam = build_gl_nondeg(parity=parity, a=a, x1="t", x2=0, copy=0)
    left = [P.symbol("t", -1)] * a + [P.const(1)] * (d - a)
    lim = scaled_limit(fam, left, None)
    return _flip_all(lim).with_meta(descriptor=_desc("gl-Lbar_a", parity, a))
