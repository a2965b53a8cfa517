"""RTT verification of Lax matrices and the report record shared by all checks."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from . import poly as P
from .algebra import AlgebraElement, ZERO, sum_elements
from .matrices import SpectralMatrix, SuperSignature, matmul, tensor_lift
from .rmatrix import ROperator, build_R

__all__ = ["CheckReport", "Witness", "check_rtt_componentwise", "check_rtt_matrix", "timed", "compare",
           "rtt_relation"]

VERDICTS = ("pass", "fail", "error", "unverified")


@dataclass
class Witness:
    where: str
    n_terms: int
    detail: str = ""

    def as_dict(self) -> dict:
        return {"where": self.where, "terms": self.n_terms, "detail": self.detail}


@dataclass
class CheckReport:
    check: str
    family: str = "plain"
    n: Optional[int] = None
    m: Optional[int] = None
    verdict: str = "pass"
    witness: Optional[Witness] = None
    millis: float = 0.0
    notes: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"bad verdict {self.verdict!r}")
        if self.verdict == "fail" and self.witness is None:
            raise ValueError("a failing report needs a witness")

    @property
    def ok(self) -> bool:
        return self.verdict == "pass"

    def as_dict(self) -> dict:
        return {
            "check": self.check, "family": self.family, "n": self.n, "m": self.m,
            "verdict": self.verdict,
            "witness": self.witness.as_dict() if self.witness else None,
            "millis": round(self.millis, 3),
        }


def compare(lhs: SpectralMatrix, rhs: SpectralMatrix) -> Optional[Witness]:
    """``None`` if equal entrywise, else a witness at the first differing entry."""
    d = lhs.diff(rhs)
    if not d:
        return None
    i, j, r = d[0]
    return Witness(f"entry ({i},{j})", r.n_terms(), f"{len(d)} differing entries; residual {_short(r)}")


def _short(e: AlgebraElement, limit: int = 160) -> str:
    s = str(e)
    return s if len(s) <= limit else s[:limit] + "..."


def timed(check: str, fn: Callable[[], Optional[Witness]], family: str = "plain",
          n: Optional[int] = None, m: Optional[int] = None) -> CheckReport:
    """Run ``fn``; ``None`` means pass, a :class:`Witness` means fail, an exception means error."""
    t0 = time.perf_counter()
    try:
        w = fn()
        verdict = "pass" if w is None else "fail"
    except Exception as exc:  # reported, not raised
        w = Witness("exception", 0, f"{type(exc).__name__}: {exc}")
        verdict = "error"
    return CheckReport(check, family, n, m, verdict, w, (time.perf_counter() - t0) * 1000)


def _sgn(k: int) -> int:
    return -1 if k % 2 else 1


def _infer_kind(L: SpectralMatrix, kind: Optional[str]) -> str:
    if kind is not None:
        return kind
    k = L.descriptor.kind
    if k in ("gl", "osp"):
        return k
    return "osp" if L.signature is not None else "gl"


def rtt_residuals(L: SpectralMatrix, kind: Optional[str] = None, first_only: bool = True
                  ) -> List[Tuple[Tuple[int, int, int, int], AlgebraElement]]:
    """Nonzero residuals of the componentwise relations, denominators cleared.

    gl: ``(x-y)[L_ij(x), L_kl(y)] - s (L_kj(y)L_il(x) - L_kj(x)L_il(y))``.
    osp: the same multiplied by ``x-y+kappa``, minus ``(x-y)`` times the two
    ``delta``-terms.  ``L`` must depend on ``x`` but not on ``y``.
    """
    kind = _infer_kind(L, kind)
    d = L.size
    par = L.parity
    for row in L.entries:
        for e in row:
            if e.degree("y") > 0:
                raise ValueError("Lax matrix must not contain the symbol y")
    Lx = L.entries
    Ly = [[e.swap_symbols("x", "y") for e in row] for row in Lx]
    nz = [[not e.is_zero() for e in row] for row in Lx]

    prod_cache: Dict[Tuple[int, int, int, int], AlgebraElement] = {}
    swap_cache: Dict[Tuple[int, int, int, int], AlgebraElement] = {}

    def pr(a, b, c, e):
        key = (a, b, c, e)
        v = prod_cache.get(key)
        if v is None:
            v = Lx[a][b] * Ly[c][e] if (nz[a][b] and nz[c][e]) else ZERO
            prod_cache[key] = v
        return v

    def sw(a, b, c, e):
        key = (a, b, c, e)
        v = swap_cache.get(key)
        if v is None:
            v = pr(a, b, c, e).swap_symbols("x", "y")
            swap_cache[key] = v
        return v

    rel = _RelationData(L, kind)
    out = []
    for i in range(d):
        for j in range(d):
            for k in range(d):
                for l in range(d):
                    lhs, rhs = rel.sides(pr, sw, i, j, k, l)
                    res = lhs - rhs
                    if not res.is_zero():
                        out.append(((i + 1, j + 1, k + 1, l + 1), res))
                        if first_only:
                            return out
    return out


class _RelationData:
    """Sign and index data of the componentwise relation for one matrix."""

    def __init__(self, L: SpectralMatrix, kind: str):
        self.kind = kind
        self.d = L.size
        self.par = L.parity
        self.xmy = P.from_linear(x=1, y=-1)
        if kind == "osp":
            sig: SuperSignature = L.signature
            if sig is None:
                raise ValueError("osp check needs a signature")
            self.xmyk = P.from_linear(x=1, y=-1, c=sig.kappa)
            self.prime = [sig.prime(i + 1) - 1 for i in range(self.d)]
            self.th = sig.theta

    def sides(self, pr, sw, i, j, k, l) -> Tuple[AlgebraElement, AlgebraElement]:
        """Left side (cleared commutator) and right side of relation ``(i,j,k,l)``, 0-based."""
        par, d, xmy = self.par, self.d, self.xmy
        pij, pkl = par[i] + par[j], par[k] + par[l]
        comm = pr(i, j, k, l) - sw(k, l, i, j) * _sgn(pij * pkl)
        s = _sgn(par[i] * par[j] + par[i] * par[k] + par[j] * par[k])
        gl_rhs = (sw(k, j, i, l) - pr(k, j, i, l)) * s
        if self.kind == "gl":
            return comm.scale(xmy), gl_rhs
        prime, th = self.prime, self.th
        terms = []
        if k == prime[i]:
            for p in range(d):
                sg = _sgn(par[i] + par[i] * par[j] + par[j] * par[p]) * th[i] * th[p]
                terms.append(pr(p, j, prime[p], l) * sg)
        if l == prime[j]:
            for p in range(d):
                sg = _sgn(par[p] + par[j] + par[i] * par[k] + par[i] * par[p] + par[j] * par[k]) * th[p] * th[j]
                terms.append(sw(k, prime[p], i, p) * (-sg))
        extra = sum_elements(terms)
        return comm.scale(P.mul(xmy, self.xmyk)), gl_rhs.scale(self.xmyk) + extra.scale(xmy)


def rtt_relation(L: SpectralMatrix, i: int, j: int, k: int, l: int, kind: Optional[str] = None
                 ) -> Tuple[AlgebraElement, AlgebraElement]:
    """Both sides of the cleared componentwise relation at 1-based ``(i,j,k,l)``."""
    kind = _infer_kind(L, kind)
    Lx = L.entries
    Ly = [[e.swap_symbols("x", "y") for e in row] for row in Lx]

    def pr(a, b, c, e):
        return Lx[a][b] * Ly[c][e]

    def sw(a, b, c, e):
        return pr(a, b, c, e).swap_symbols("x", "y")
    return _RelationData(L, kind).sides(pr, sw, i - 1, j - 1, k - 1, l - 1)


def check_rtt_componentwise(L: SpectralMatrix, kind: Optional[str] = None, check: str = "rtt-componentwise"
                            ) -> CheckReport:
    def run():
        res = rtt_residuals(L, kind)
        if not res:
            return None
        (i, j, k, l), r = res[0]
        return Witness(f"(i,j,k,l)=({i},{j},{k},{l})", r.n_terms(), _short(r))
    d = L.descriptor
    return timed(check, run, d.name(), d.n, d.m)


def r_matrix_for(L: SpectralMatrix, kind: Optional[str] = None) -> ROperator:
    kind = _infer_kind(L, kind)
    return build_R(L.signature if kind == "osp" else L.parity, kind)


def matrix_rtt_residual(L: SpectralMatrix, kind: Optional[str] = None) -> SpectralMatrix:
    """``R(x-y) L1(x) L2(y) - L2(y) L1(x) R(x-y)`` with the graded lifts of :func:`tensor_lift`."""
    R = r_matrix_for(L, kind)
    Rp = R.poly_matrix(P.from_linear(x=1, y=-1))
    big = tuple((a + b) % 2 for a in L.parity for b in L.parity)
    Rm = SpectralMatrix([[AlgebraElement.scalar(c) for c in row] for row in Rp], big)
    L1 = tensor_lift(L, 1)
    L2 = tensor_lift(L.map(lambda e: e.swap_symbols("x", "y")), 2)
    return matmul(matmul(Rm, L1), L2) - matmul(matmul(L2, L1), Rm)


def check_rtt_matrix(L: SpectralMatrix, kind: Optional[str] = None) -> CheckReport:
    def run():
        res = matrix_rtt_residual(L, kind)
        for i, row in enumerate(res.entries):
            for j, e in enumerate(row):
                if not e.is_zero():
                    return Witness(f"entry ({i + 1},{j + 1})", e.n_terms(), _short(e))
        return None
    d = L.descriptor
    return timed("rtt-matrix", run, d.name(), d.n, d.m)
