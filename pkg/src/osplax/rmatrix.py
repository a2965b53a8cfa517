"""Rational R-matrices of gl and osp type, their symmetries and the Yang-Baxter check.

Operators on ``V (x) V`` are stored as action matrices: column ``i*d + j``
holds the image of ``v_i (x) v_j``.  An R-matrix is a short sum
``sum_k c_k(x) A_k`` over the scalar operators ``Id``, ``P`` and ``Q``, which
turns the Yang-Baxter equation into a finite set of integer matrix identities,
one per monomial in ``x`` and ``y``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import poly as P
from .matrices import MatrixError, SuperSignature, scalar_matrix

__all__ = [
    "ROperator", "Residual", "build_signature", "build_R", "perm_operator", "q_operator",
    "q_operator_from_sum", "check_ybe", "build_invariance_matrix", "check_invariance",
    "q_projector_scalar", "InvarianceError",
]


class InvarianceError(ValueError):
    pass


def build_signature(N: int, m: int) -> SuperSignature:
    return SuperSignature(N, m)


def _sgn(k: int) -> int:
    return -1 if k % 2 else 1


def perm_operator(parity: Sequence[int]) -> np.ndarray:
    d = len(parity)
    A = np.zeros((d * d, d * d), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            A[j * d + i, i * d + j] = _sgn(parity[i] * parity[j])
    return A


def q_operator(sig: SuperSignature) -> np.ndarray:
    """``Q`` from its action: ``v_a (x) v_a' -> (-1)^{|a|} theta_a sum_i theta_i v_i (x) v_i'``."""
    d = sig.dim
    A = np.zeros((d * d, d * d), dtype=np.int64)
    for a in range(1, d + 1):
        col = (a - 1) * d + sig.prime(a) - 1
        pref = _sgn(sig.p(a)) * sig.th(a)
        for i in range(1, d + 1):
            A[(i - 1) * d + sig.prime(i) - 1, col] = pref * sig.th(i)
    return A


def q_operator_from_sum(sig: SuperSignature) -> np.ndarray:
    """``Q = sum (-1)^{|i||j|} theta_i theta_j e_ij (x) e_i'j'`` through the graded tensor action."""
    d = sig.dim
    A = np.zeros((d * d, d * d), dtype=np.int64)
    p = sig.p
    for i in range(1, d + 1):
        for j in range(1, d + 1):
            k, l = sig.prime(i), sig.prime(j)
            c = _sgn(p(i) * p(j)) * sig.th(i) * sig.th(j)
            # (e_ij (x) e_kl)(v_j (x) v_l) = (-1)^{(|k|+|l|)|j|} v_i (x) v_k
            c *= _sgn((p(k) + p(l)) * p(j))
            A[(i - 1) * d + k - 1, (j - 1) * d + l - 1] += c
    return A


@dataclass
class ROperator:
    """``R(x) = sum_k coeffs[k](x) * ops[k]`` with polynomial coefficients in ``x``."""

    kind: str
    parity: Tuple[int, ...]
    coeffs: List[P.Poly]
    ops: List[np.ndarray]
    names: List[str]
    signature: Optional[SuperSignature] = None

    @property
    def dim(self) -> int:
        return len(self.parity)

    @property
    def kappa(self) -> Fraction:
        return self.signature.kappa if self.signature is not None else Fraction(0)

    def at(self, arg: P.Poly) -> List[Tuple[P.Poly, np.ndarray]]:
        """Terms of ``R(arg)`` for a polynomial argument."""
        return [(P.compose(c, {"x": arg}), A) for c, A in zip(self.coeffs, self.ops)]

    def poly_matrix(self, arg: Optional[P.Poly] = None) -> List[List[P.Poly]]:
        """Dense ``d^2 x d^2`` matrix of polynomials (action convention)."""
        terms = self.at(arg) if arg is not None else list(zip(self.coeffs, self.ops))
        D = self.dim ** 2
        out = [[{} for _ in range(D)] for _ in range(D)]
        for c, A in terms:
            rows, cols = np.nonzero(A)
            for r, s in zip(rows.tolist(), cols.tolist()):
                P.add_into(out[r][s], c, int(A[r, s]))
        return out

    def numeric(self, x: Fraction) -> np.ndarray:
        out = np.zeros((self.dim ** 2,) * 2, dtype=object)
        for c, A in zip(self.coeffs, self.ops):
            v = Fraction(P.constant_value(P.evaluate(c, {"x": x})))
            out = out + A.astype(object) * v
        return out


def build_R(sig, kind: str = "osp") -> ROperator:
    """``x Id + P`` (gl, ``sig`` a parity sequence) or ``x(x+k) Id + (x+k) P - x Q`` (osp)."""
    if kind == "gl":
        parity = tuple(sig.parity) if isinstance(sig, SuperSignature) else tuple(sig)
        d = len(parity)
        return ROperator("gl", parity, [P.symbol("x"), P.const(1)],
                         [np.eye(d * d, dtype=np.int64), perm_operator(parity)], ["Id", "P"])
    if kind != "osp":
        raise ValueError(f"unknown R-matrix kind {kind!r}")
    if not isinstance(sig, SuperSignature):
        raise TypeError("osp R-matrix needs a SuperSignature")
    k = sig.kappa
    d = sig.dim
    x = P.symbol("x")
    xk = P.from_linear(x=1, c=k)
    return ROperator("osp", sig.parity, [P.mul(x, xk), xk, P.neg(x)],
                     [np.eye(d * d, dtype=np.int64), perm_operator(sig.parity), q_operator(sig)],
                     ["Id", "P", "Q"], sig)


@dataclass
class Residual:
    ok: bool
    monomial: Optional[Tuple[int, ...]] = None
    entry: Optional[Tuple[int, int]] = None
    value: Optional[Fraction] = None
    n_nonzero: int = 0

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "zero residual"
        mono = P.to_str({self.monomial: 1}) if self.monomial else "?"
        return f"monomial {mono}, entry {self.entry}: {self.value} ({self.n_nonzero} nonzero entries)"


def _common_denominator(polys: Sequence[P.Poly]) -> int:
    L = 1
    for p in polys:
        for c in p.values():
            if isinstance(c, Fraction):
                L = lcm(L, c.denominator)
    return L


def _collect(pieces: List[Tuple[P.Poly, np.ndarray]]) -> Residual:
    """Sum ``poly * matrix`` pieces grouped by monomial and report the first nonzero group."""
    L = _common_denominator([c for c, _ in pieces])
    acc: Dict[Tuple[int, ...], np.ndarray] = {}
    for c, D in pieces:
        if not D.any():
            continue
        for mono, v in c.items():
            iv = Fraction(v) * L
            assert iv.denominator == 1
            if mono in acc:
                acc[mono] += int(iv) * D
            else:
                acc[mono] = int(iv) * D
    for mono in sorted(acc):
        M = acc[mono]
        nz = np.argwhere(M != 0)
        if len(nz):
            r, s = (int(v) for v in nz[0])
            return Residual(False, mono, (r, s), Fraction(int(M[r, s]), L), len(nz))
    return Residual(True)


def check_ybe(R: ROperator) -> Residual:
    """``R12(x) R13(x+y) R23(y) = R23(y) R13(x+y) R12(x)`` on ``V (x) V (x) V``.

    R is even, so ``R12 = R (x) Id`` and ``R23 = Id (x) R`` are plain Kronecker
    products in the action basis; ``R13 = P23 R12 P23`` with the graded ``P``.
    """
    d = R.dim
    I = np.eye(d, dtype=np.int64)
    Pm = perm_operator(R.parity)
    P23 = np.kron(I, Pm)
    ops12 = [np.kron(A, I) for A in R.ops]
    ops23 = [np.kron(I, A) for A in R.ops]
    ops13 = [P23 @ A @ P23 for A in ops12]
    c12 = R.at(P.symbol("x"))
    c13 = R.at(P.from_linear(x=1, y=1))
    c23 = R.at(P.symbol("y"))
    pieces = []
    for a, (ca, _) in enumerate(c12):
        for b, (cb, _) in enumerate(c13):
            for c, (cc, _) in enumerate(c23):
                coeff = P.mul(P.mul(ca, cb), cc)
                if not coeff:
                    continue
                D = ops12[a] @ ops13[b] @ ops23[c] - ops23[c] @ ops13[b] @ ops12[a]
                pieces.append((coeff, D))
    return _collect(pieces)


def _jrows(r: int, sign: int = 1) -> List[List[int]]:
    return [[sign if i + j == r - 1 else 0 for j in range(r)] for i in range(r)]


def _place(M: List[List[int]], block: List[List[int]], r0: int, c0: int) -> None:
    for i, row in enumerate(block):
        for j, v in enumerate(row):
            M[r0 + i][c0 + j] = v


def g_matrix(n: int, m: int) -> List[List[int]]:
    """``G_{n,m} = [[0, -J_n], [J_m, 0]]`` of size ``n+m``."""
    M = [[0] * (n + m) for _ in range(n + m)]
    _place(M, _jrows(n, -1), 0, m)
    _place(M, _jrows(m), n, 0)
    return M


def _j_theta(sig: SuperSignature) -> List[List[int]]:
    n, d = sig.n, sig.dim
    M = [[0] * d for _ in range(d)]
    _place(M, _jrows(n, -1), 0, d - n)
    _place(M, _jrows(d - n), n, 0)
    return M


def _j_tilde(sig: SuperSignature) -> List[List[int]]:
    d = sig.dim
    if d < 2 or sig.p(1) != 0:
        raise InvarianceError("J-tilde needs an even first basis vector (n >= 1)")
    M = [[int(i == j) for j in range(d)] for i in range(d)]
    M[0][0] = M[d - 1][d - 1] = 0
    M[0][d - 1] = M[d - 1][0] = 1
    return M


def _matmul_int(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def _j_hat(sig: SuperSignature) -> List[List[int]]:
    return _matmul_int(_j_tilde(sig), _j_theta(sig))


def _j_hat_closed(sig: SuperSignature) -> List[List[int]]:
    """The block form ``diag(1, [[0, G], [J, 0]], -1)`` with ``G = G_{n-1,m}``."""
    if sig.odd:
        raise InvarianceError("closed block form is stated for even N")
    n, m, d = sig.n, sig.m, sig.dim
    k = n + m - 1
    M = [[0] * d for _ in range(d)]
    M[0][0] = 1
    M[d - 1][d - 1] = -1
    _place(M, g_matrix(n - 1, m), 1, 1 + k)
    _place(M, _jrows(k), 1 + k, 1)
    return M


def _id_theta(sig: SuperSignature) -> List[List[int]]:
    if sig.N != 0:
        raise InvarianceError("Id_theta is defined for N = 0 only")
    m = sig.m
    return [[(1 if i < m else -1) if i == j else 0 for j in range(2 * m)] for i in range(2 * m)]


def _generalized(sig: SuperSignature, entries) -> List[List[int]]:
    """``sum_i a_i e_ii + b_i e_ii' + c_i e_i'i + d_i e_i'i'`` with the constancy precondition."""
    if sig.odd:
        raise InvarianceError("generalized invariance matrices are built for even N only")
    h = sig.n + sig.m
    if len(entries) != h:
        raise InvarianceError(f"expected {h} (a, b, c, d) tuples")
    d = sig.dim
    M = [[0] * d for _ in range(d)]
    gammas = []
    for i, (a, b, c, dd) in enumerate(entries, 1):
        ip = sig.prime(i)
        if b == 0 and c == 0 and a in (1, -1) and dd in (1, -1):
            gammas.append(a * dd)
        elif a == 0 and dd == 0 and b in (1, -1) and c in (1, -1):
            gammas.append(_sgn(sig.p(i)) * b * c)
        else:
            raise InvarianceError(f"entry {i}: need (a,d) in ±1 with b=c=0 or (b,c) in ±1 with a=d=0")
        M[i - 1][i - 1] = a
        M[i - 1][ip - 1] = b
        M[ip - 1][i - 1] = c
        M[ip - 1][ip - 1] = dd
    if len(set(gammas)) > 1:
        raise InvarianceError(f"gamma values {gammas} are not all equal")
    return M


def build_invariance_matrix(tag: str, sig: SuperSignature, entries=None) -> List[List[int]]:
    """Tags: ``J_theta``, ``J_tilde``, ``J_hat``, ``Id_theta``, ``generalized``."""
    if tag == "J_theta":
        M = _j_theta(sig)
    elif tag == "J_tilde":
        M = _j_tilde(sig)
    elif tag == "J_hat":
        M = _j_hat(sig)
    elif tag == "Id_theta":
        M = _id_theta(sig)
    elif tag == "generalized":
        M = _generalized(sig, entries)
    else:
        raise InvarianceError(f"unknown invariance tag {tag!r}")
    try:
        scalar_matrix(M, sig.parity)
    except MatrixError as exc:
        raise InvarianceError(str(exc)) from exc
    return M


def check_invariance(R: ROperator, J) -> Residual:
    """``[R(x), J (x) J] = 0``; for an even scalar ``J`` the lift is a plain Kronecker product."""
    Jm = np.array(J, dtype=np.int64)
    if Jm.shape != (R.dim, R.dim):
        raise MatrixError("size mismatch")
    for i in range(R.dim):
        for j in range(R.dim):
            if Jm[i, j] and R.parity[i] != R.parity[j]:
                raise MatrixError("J is not even")
    JJ = np.kron(Jm, Jm)
    return _collect([(c, A @ JJ - JJ @ A) for c, A in zip(R.coeffs, R.ops)])


def q_projector_scalar(sig: SuperSignature) -> Fraction:
    """``c`` with ``Q^2 = c Q``, read off from ``Q`` applied twice to ``v_1 (x) v_1'``."""
    Q = q_operator(sig)
    d = sig.dim
    e = np.zeros(d * d, dtype=np.int64)
    e[sig.prime(1) - 1] = 1
    w = Q @ e
    w2 = Q @ w
    k = int(np.flatnonzero(w)[0])
    c = Fraction(int(w2[k]), int(w[k]))
    if not np.array_equal(w2 * c.denominator, w * c.numerator):
        raise ArithmeticError("Q(Qv) is not proportional to Qv")
    return c
