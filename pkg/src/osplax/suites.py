"""Named verification suites over rank sweeps, and report emission.

Every suite maps one rank pair to a list of :class:`CheckReport`.  Rank pairs
are ``(n, m)`` except for ``ybe`` and ``odd-conjecture``, which take the
superalgebra data ``(N, m)`` directly.
"""
from __future__ import annotations

import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, IO, List, Optional, Sequence, Tuple

from . import fock
from . import lax_gl as G
from . import lax_osp as O
from .checks import CheckReport, Witness, compare, rtt_residuals, matrix_rtt_residual, timed, _short
from .matrices import SpectralMatrix
from .rmatrix import InvarianceError, build_R, build_invariance_matrix, build_signature, check_invariance, check_ybe

__all__ = ["SUITES", "DEFAULT_RANKS", "EXTENDED_RANKS", "SuiteOptions", "run_suite", "emit_report",
           "exit_code", "UnknownSuiteError"]

Rank = Tuple[int, int]


class UnknownSuiteError(KeyError):
    pass


@dataclass
class SuiteOptions:
    seed: int = 0
    cutoff: int = 4
    odd: bool = False
    workers: int = 1
    matrix_max_dim: int = 6
    tau_samples: Sequence[Tuple[int, ...]] = ((2, 3), (5, 7), (1, 1))
    extra: Dict[str, str] = field(default_factory=dict)


# --------------------------------------------------------------------------- witnesses


def _rtt_witness(L: SpectralMatrix) -> Optional[Witness]:
    res = rtt_residuals(L)
    if not res:
        return None
    (i, j, k, l), r = res[0]
    return Witness(f"(i,j,k,l)=({i},{j},{k},{l})", r.n_terms(), _short(r))


def _matrix_witness(L: SpectralMatrix) -> Optional[Witness]:
    res = matrix_rtt_residual(L)
    for i, row in enumerate(res.entries):
        for j, e in enumerate(row):
            if not e.is_zero():
                return Witness(f"entry ({i + 1},{j + 1})", e.n_terms(), _short(e))
    return None


def _agree_witness(L: SpectralMatrix) -> Optional[Witness]:
    a = _rtt_witness(L) is None
    b = _matrix_witness(L) is None
    if a == b:
        return None
    return Witness("verdicts", 1, f"componentwise {'pass' if a else 'fail'}, matrix form {'pass' if b else 'fail'}")


def _residual_witness(res, where: str) -> Optional[Witness]:
    if res.ok:
        return None
    return Witness(where, res.n_nonzero, res.describe())


class _Run:
    """Collects reports for one rank instance."""

    def __init__(self, n: int, m: int, opt: SuiteOptions):
        self.n, self.m = n, m
        self.matrix_max_dim = opt.matrix_max_dim
        self.out: List[CheckReport] = []

    def check(self, name: str, family: str, fn: Callable[[], Optional[Witness]]) -> None:
        self.out.append(timed(name, fn, family, self.n, self.m))

    def rtt(self, family: str, build: Callable[[], SpectralMatrix]) -> None:
        """Componentwise RTT, plus the matrix-form verdict comparison on small matrices."""
        built: List[SpectralMatrix] = []

        def componentwise():
            built.append(build())
            return _rtt_witness(built[0])
        self.check("rtt-componentwise", family, componentwise)
        if built and built[0].size <= self.matrix_max_dim:
            self.check("rtt-matrix-agree", family, lambda: _agree_witness(built[0]))

    def equal(self, name: str, family: str, a: Callable[[], SpectralMatrix], b: Callable[[], SpectralMatrix]) -> None:
        self.check(name, family, lambda: compare(a(), b()))


# --------------------------------------------------------------------------- suites


def _ybe(N: int, m: int, opt: SuiteOptions) -> List[CheckReport]:
    run = _Run(N, m, opt)
    run.check("ybe", f"osp-R(N={N},m={m})",
              lambda: _residual_witness(check_ybe(build_R(build_signature(N, m), "osp")), "ybe"))
    run.check("ybe", f"gl-R(n={N},m={m})",
              lambda: _residual_witness(check_ybe(build_R(G.default_parity(N, m), "gl")), "ybe"))
    return run.out


def _invariance(n: int, m: int, opt: SuiteOptions) -> List[CheckReport]:
    run = _Run(n, m, opt)
    sig = build_signature(2 * n, m)
    R = build_R(sig, "osp")
    fam = f"osp-R(N={2 * n},m={m})"
    tags = ["J_theta"] + (["J_tilde", "J_hat"] if n >= 1 else []) + (["Id_theta"] if n == 0 else [])
    for tag in tags:
        run.check(f"invariance-{tag}", fam,
                  lambda tag=tag: _residual_witness(check_invariance(R, build_invariance_matrix(tag, sig)), tag))

    def generalized():
        h = n + m
        good = [(0, 1, (-1) ** sig.p(i), 0) for i in range(1, h + 1)]
        w = _residual_witness(check_invariance(R, build_invariance_matrix("generalized", sig, good)), "generalized")
        if w is not None:
            return w
        if h < 2:
            return None
        bad = [(1, 0, 0, 1)] + [(1, 0, 0, -1)] * (h - 1)
        try:
            build_invariance_matrix("generalized", sig, bad)
        except InvarianceError:
            return None
        return Witness("generalized", 1, "inconsistent gamma values were accepted")
    run.check("invariance-generalized", fam, generalized)
    return run.out


def _gl_lax(n: int, m: int, opt: SuiteOptions) -> List[CheckReport]:
    run = _Run(n, m, opt)
    d = n + m
    par = G.default_parity(n, m)
    rev = tuple(reversed(par))
    for a in range(d + 1):
        tag = f"(n={n},m={m},a={a})"
        run.rtt(f"gl-L_a{tag}", lambda a=a: G.build_gl_La(n, m, a))
        run.rtt(f"gl-Lbar_a{tag}", lambda a=a: G.build_gl_Lbar(n, m, a))
        run.rtt(f"gl-hat{tag}", lambda a=a: G.gl_hat_from_bar(n, m, a))
        run.equal("constructive-vs-closed", f"gl-hat{tag}", lambda a=a: G.gl_hat_from_bar(n, m, a),
                  lambda a=a: G.build_gl_La(parity=rev, a=d - a, family="xih"))
        run.rtt(f"gl-nondeg{tag}", lambda a=a: G.build_gl_nondeg(n, m, a))
    return run.out


def _osp_linear(n: int, m: int, opt: SuiteOptions) -> List[CheckReport]:
    run = _Run(n, m, opt)
    fam = f"(N={2 * n},m={m})"
    run.rtt("osp-lin-deg" + fam, lambda: O.build_osp_linear_deg(n, m))
    run.rtt("osp-lin-degbar" + fam, lambda: O.build_osp_linear_degbar(n, m))
    run.rtt("osp-lin-nondeg" + fam, lambda: O.build_osp_linear_nondeg(n, m))
    run.equal("constructive-vs-closed", "osp-lin-degbar" + fam, lambda: O.build_osp_linear_degbar(n, m),
              lambda: O.osp_linear_degbar_closed(n, m))
    run.equal("conjugated-vs-theta-blocks", "osp-lin-degbar" + fam, lambda: O.osp_linear_conjugated(n, m),
              lambda: O.osp_linear_conjugated_closed(n, m))
    run.check("matrix-equalities", "osp-lin" + fam, lambda: O.check_quadsimp(n, m))
    if n == 0:
        run.check("n0-reductions", "osp-lin" + fam, lambda: O.check_n0_reductions(m))
    return run.out


def _osp_quadratic(n: int, m: int, opt: SuiteOptions) -> List[CheckReport]:
    if opt.odd:
        return _odd(2 * n + 1, m, opt)
    run = _Run(n, m, opt)
    N = 2 * n
    fam = f"(N={N},m={m})"
    run.check("block-form", "osp-quad" + fam, lambda: O.check_kpkm(n, m))
    run.rtt("osp-quad-hat" + fam, lambda: O.build_osp_quad_hatL(n, m))
    run.equal("constructive-vs-closed", "osp-quad-hat" + fam, lambda: O.build_osp_quad_hatL(n, m),
              lambda: O.build_osp_quad_hatL(n, m, constructive=False))
    run.rtt("osp-quad-deg" + fam, lambda: O.build_osp_quad_deg(N, m))
    run.equal("triple-vs-explicit", "osp-quad-deg" + fam, lambda: O.build_osp_quad_deg(N, m, form="triple"),
              lambda: O.build_osp_quad_deg(N, m))
    run.rtt("osp-quad-hattilde" + fam, lambda: O.build_osp_quad_hatTilde(N, m))
    run.equal("constructive-vs-closed", "osp-quad-hattilde" + fam, lambda: O.build_osp_quad_hatTilde(N, m),
              lambda: O.build_osp_quad_hatTilde_closed(N, m))
    run.rtt("osp-quad-fused" + fam, lambda: O.build_osp_quad_fused(n, m))
    run.rtt("osp-quad-nondeg" + fam, lambda: O.build_osp_quad_nondeg(N, m))
    run.rtt("osp-quad-nondeg-full" + fam, lambda: O.build_osp_quad_nondeg_full(n, m))
    run.check("transforms", "osp-quad" + fam, lambda: O.check_osp_quad_transforms(n, m))
    return run.out


def _odd(N: int, m: int, opt: SuiteOptions) -> List[CheckReport]:
    if N % 2 == 0:
        raise ValueError(f"odd-conjecture ranks are (N, m) with N odd, got N={N}")
    run = _Run(N, m, opt)
    fam = f"(N={N},m={m})"
    run.rtt("osp-quad-deg-odd" + fam, lambda: O.build_osp_quad_deg(N, m))
    run.equal("triple-vs-explicit", "osp-quad-deg-odd" + fam, lambda: O.build_osp_quad_deg(N, m, form="triple"),
              lambda: O.build_osp_quad_deg(N, m))
    return run.out


def _limits(n: int, m: int, opt: SuiteOptions) -> List[CheckReport]:
    run = _Run(n, m, opt)
    for a in range(n + m + 1):
        tag = f"(n={n},m={m},a={a})"
        run.equal("limit", "gl-L_a" + tag, lambda a=a: G.gl_limit_La(n, m, a), lambda a=a: G.build_gl_La(n, m, a))
        run.equal("limit", "gl-Lbar_a" + tag, lambda a=a: G.gl_limit_Lbar(n, m, a),
                  lambda a=a: G.build_gl_Lbar(n, m, a))
    fam = f"(N={2 * n},m={m})"
    run.check("limit", "osp-lin" + fam, lambda: O.check_osp_limits(n, m))
    if n >= 1:
        run.check("limit", "osp-quad" + fam, lambda: O.check_quad_limits(2 * n, m))
        run.check("limit", "osp-quad-nondeg-full" + fam, lambda: O.check_quad_full_limits(n, m))
    return run.out


def _fusion(n: int, m: int, opt: SuiteOptions) -> List[CheckReport]:
    run = _Run(n, m, opt)
    for a in range(1, n + m):
        run.check("fusion", f"gl(n={n},m={m},a={a})", lambda a=a: G.check_gl_fusion(n, m, a))
    fam = f"(N={2 * n},m={m})"
    run.check("fusion", "osp-lin" + fam, lambda: O.check_osp_linear_fusion(n, m))
    if n >= 1:
        run.check("fusion", "osp-quad" + fam, lambda: O.check_osp_quad_fusion(n, m))
        run.check("factorisation", "osp-quad-nondeg" + fam, lambda: O.check_osp_quad_nondeg_factorisation(2 * n, m))
        run.check("factorisation", "osp-quad-nondeg-full" + fam,
                  lambda: O.check_osp_quad_nondeg_full_factorisation(n, m))
    return run.out


def _fock(n: int, m: int, opt: SuiteOptions) -> List[CheckReport]:
    run = _Run(n, m, opt)
    fam = f"(N={2 * n},m={m})"
    if n >= 1:
        run.check("vacuum-specialization", "osp-quad" + fam,
                  lambda: fock.check_vacuum_specialization(n, m, cutoff=opt.cutoff))
    for ident in fock.IDENTITIES:
        if ident == "quad-triple" and n < 1:
            continue
        run.check(f"numeric-{ident}", fam,
                  lambda ident=ident: fock.numeric_crosscheck(ident, cutoff=opt.cutoff, n=n, m=m, seed=opt.seed))
    run.check("copy-trivialization", "osp-lin" + fam, lambda: fock.check_copy_trivialization(n, m))
    return run.out


def _taus(h: int, opt: SuiteOptions, salt: int) -> List[Tuple[Fraction, ...]]:
    rng = random.Random(opt.seed * 1000003 + salt)
    out = []
    for t in opt.tau_samples:
        t = tuple(t)
        out.append(tuple(Fraction(v) for v in (t + tuple(rng.randint(2, 9) for _ in range(h)))[:h]))
    out.append(tuple(Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 9)) for _ in range(h)))
    return out


def _twists(n: int, m: int, opt: SuiteOptions) -> List[CheckReport]:
    run = _Run(n, m, opt)
    cases = [("osp-lin-deg", 2 * n)]
    if n >= 1:
        cases.append(("osp-quad-deg", 2 * n))
    cases.append(("osp-quad-deg-odd", 2 * n + 1))
    for k, (family, N) in enumerate(cases):
        for tau in _taus(n + m, opt, k):
            spec = fock.TwistSpec(family, N, m, tau)
            label = ",".join(str(t) for t in tau)
            run.check(f"twist-invariance(tau={label})", f"{family}(N={N},m={m})",
                      lambda spec=spec: fock.check_twist_invariance(spec, cutoff=opt.cutoff))
    return run.out


SUITES: Dict[str, Callable[[int, int, SuiteOptions], List[CheckReport]]] = {
    "ybe": _ybe,
    "invariance": _invariance,
    "gl-lax": _gl_lax,
    "osp-linear": _osp_linear,
    "osp-quadratic": _osp_quadratic,
    "odd-conjecture": _odd,
    "limits": _limits,
    "fusion": _fusion,
    "fock": _fock,
    "twists": _twists,
}

DEFAULT_RANKS: Dict[str, List[Rank]] = {
    "ybe": [(2, 0), (0, 1), (2, 1), (4, 1), (3, 1)],
    "invariance": [(1, 1), (2, 1), (0, 1), (0, 2)],
    "gl-lax": [(1, 1), (2, 1), (1, 2)],
    "osp-linear": [(1, 1), (2, 1), (1, 2)],
    "osp-quadratic": [(1, 1), (2, 1)],
    "odd-conjecture": [(3, 1), (3, 2)],
    "limits": [(1, 1), (2, 1)],
    "fusion": [(1, 1)],
    "fock": [(1, 1), (2, 1)],
    "twists": [(1, 1), (2, 1)],
}

# Opt-in ranks.  Measured cost of the extra odd-N instances: about 1 s each.
EXTENDED_RANKS: Dict[str, List[Rank]] = {
    "osp-linear": [(2, 2)],
    "osp-quadratic": [(1, 2)],
    "odd-conjecture": [(5, 1), (5, 2)],
    "fusion": [(2, 1)],
}


def _run_one(name: str, rank: Rank, opt: SuiteOptions) -> List[CheckReport]:
    try:
        return SUITES[name](rank[0], rank[1], opt)
    except Exception as exc:  # a malformed rank is reported, not raised
        return [CheckReport(name, "-", rank[0], rank[1], "error",
                            Witness("exception", 0, f"{type(exc).__name__}: {exc}"))]


def run_suite(name: str, ranks: Optional[Sequence[Rank]] = None, options: Optional[SuiteOptions] = None
              ) -> List[CheckReport]:
    """Run suite ``name`` over ``ranks`` (default sweep if ``None``); report order follows the ranks."""
    if name not in SUITES:
        raise UnknownSuiteError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    opt = options or SuiteOptions()
    ranks = list(DEFAULT_RANKS[name] if ranks is None else ranks)
    if opt.workers > 1 and len(ranks) > 1:
        with ProcessPoolExecutor(max_workers=opt.workers) as pool:
            parts = list(pool.map(_run_one, [name] * len(ranks), ranks, [opt] * len(ranks)))
    else:
        parts = [_run_one(name, r, opt) for r in ranks]
    return [rep for part in parts for rep in part]


# --------------------------------------------------------------------------- reports

TSV_COLUMNS = ("check", "family", "n", "m", "verdict", "millis", "witness")


def exit_code(reports: Sequence[CheckReport]) -> int:
    verdicts = {r.verdict for r in reports}
    if "error" in verdicts:
        return 2
    if "fail" in verdicts:
        return 1
    return 0


def _witness_text(r: CheckReport) -> str:
    if r.witness is None:
        return ""
    w = r.witness
    return f"{w.where}; terms={w.n_terms}; {w.detail}".replace("\t", " ").replace("\n", " ")


def emit_report(reports: Sequence[CheckReport], fmt: str = "text", stream: Optional[IO[str]] = None,
                suite: str = "") -> str:
    """Serialise reports as TSV text or versioned JSON; write to ``stream`` if given."""
    if fmt == "json":
        body = json.dumps({"schema": 1, "suite": suite, "results": [r.as_dict() for r in reports]}, indent=2) + "\n"
    elif fmt == "text":
        lines = ["\t".join(TSV_COLUMNS)]
        for r in reports:
            lines.append("\t".join([r.check, r.family, "" if r.n is None else str(r.n),
                                    "" if r.m is None else str(r.m), r.verdict, f"{r.millis:.1f}",
                                    _witness_text(r)]))
        body = "\n".join(lines) + "\n"
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    if stream is not None:
        stream.write(body)
    return body
