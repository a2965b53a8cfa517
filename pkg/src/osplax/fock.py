"""Exact truncated Fock representation of the superoscillator algebra.

Basis states are occupation profiles over a fixed, sorted tuple of modes (one
mode per annihilator).  The unnormalised basis ``|k> = a~^k |0>`` is used, so
a creator raises an occupation with amplitude 1 and an annihilator lowers
``k`` to ``k-1`` with amplitude ``k``.  Fermionic modes carry a sign string
over the fermionic modes that precede them in the mode order.

Bosonic occupations live in ``0..cutoff-1``.  Any amplitude pushed to
``cutoff`` is dropped and the result carries ``boundary = True``; a state whose
image carries no flag is *safe* for that operator and the truncated action on
it is exact.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from . import poly as P
from .algebra import ANNIHILATION, AlgebraElement, Generator, generator_of
from .blocks import Blk
from .checks import Witness, rtt_relation
from .matrices import SpectralMatrix, matmul

__all__ = [
    "BoundaryError", "UnboundSymbolError", "FockSpace", "FockVector", "apply", "vacuum_project",
    "check_vacuum_specialization", "TwistSpec", "twist_spec_for", "check_twist_invariance",
    "IDENTITIES", "numeric_crosscheck", "check_copy_trivialization",
]

Profile = Tuple[int, ...]


class BoundaryError(Exception):
    """An action left the truncated space where exactness was required."""


class UnboundSymbolError(ValueError):
    """A coefficient still depends on a spectral symbol."""


def _mode(g: Generator) -> Generator:
    return g if g.kind == ANNIHILATION else g.partner


@dataclass(frozen=True)
class FockSpace:
    """Modes (annihilators, in canonical order) and the bosonic cutoff."""

    modes: Tuple[Generator, ...]
    cutoff: int
    index: Dict[Generator, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.cutoff < 1:
            raise ValueError("cutoff must be at least 1")
        modes = tuple(sorted(set(self.modes)))
        if any(g.kind != ANNIHILATION for g in modes):
            raise ValueError("modes are labelled by annihilators")
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "index", {g: i for i, g in enumerate(modes)})

    @classmethod
    def for_elements(cls, elems: Iterable[AlgebraElement], cutoff: int,
                     extra: Iterable[Generator] = ()) -> "FockSpace":
        modes = {_mode(g) for e in elems for g in e.generators()}
        modes.update(_mode(g) for g in extra)
        return cls(tuple(modes), cutoff)

    def limit(self, k: int) -> int:
        return 2 if self.modes[k].parity else self.cutoff

    def vacuum(self) -> "FockVector":
        return FockVector(self, {(0,) * len(self.modes): Fraction(1)})

    def state(self, profile: Sequence[int], amp=1) -> "FockVector":
        profile = tuple(profile)
        if len(profile) != len(self.modes) or any(not 0 <= o < self.limit(k) for k, o in enumerate(profile)):
            raise ValueError(f"profile {profile} outside the truncated space")
        return FockVector(self, {profile: Fraction(amp)})

    def basis(self) -> Iterator[Profile]:
        return itertools.product(*(range(self.limit(k)) for k in range(len(self.modes))))

    def random_vector(self, rng: random.Random, n_terms: int = 3, max_occ: Optional[int] = None) -> "FockVector":
        """A random combination of basis states with small rational amplitudes."""
        top = self.cutoff if max_occ is None else min(max_occ + 1, self.cutoff)
        amps: Dict[Profile, Fraction] = {}
        for _ in range(n_terms):
            prof = tuple(rng.randrange(min(top, self.limit(k))) for k in range(len(self.modes)))
            amps[prof] = amps.get(prof, Fraction(0)) + Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        return FockVector(self, amps)


class FockVector:
    """Immutable exact vector; ``boundary`` records a truncation during its construction."""

    __slots__ = ("space", "amps", "boundary")

    def __init__(self, space: FockSpace, amps: Mapping[Profile, Fraction], boundary: bool = False):
        self.space = space
        self.amps: Dict[Profile, Fraction] = {p: Fraction(a) for p, a in amps.items() if a}
        self.boundary = boundary

    def __add__(self, other: "FockVector") -> "FockVector":
        out = dict(self.amps)
        for p, a in other.amps.items():
            out[p] = out.get(p, 0) + a
        return FockVector(self.space, out, self.boundary or other.boundary)

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self + other.scale(-1)

    def scale(self, c) -> "FockVector":
        return FockVector(self.space, {p: a * c for p, a in self.amps.items()}, self.boundary)

    def is_zero(self) -> bool:
        return not self.amps

    def __eq__(self, other) -> bool:
        return isinstance(other, FockVector) and self.amps == other.amps

    __hash__ = None

    def __repr__(self) -> str:
        if not self.amps:
            return "0"
        return " + ".join(f"({a})|{','.join(map(str, p))}>" for p, a in sorted(self.amps.items()))


def _compile(elem: AlgebraElement, values: Optional[Mapping[str, Fraction]]) -> List[Tuple[Tuple[int, ...], Fraction]]:
    if values:
        elem = elem.evaluate(values)
    out = []
    for w, p in elem.terms.items():
        if not P.is_constant(p):
            free = sorted({P.SYMBOLS[i] for mono in p for i, e in enumerate(mono) if e})
            raise UnboundSymbolError(f"unbound spectral symbols {free}")
        out.append((w, Fraction(P.constant_value(p))))
    return out


def _act_word(space: FockSpace, word: Tuple[int, ...], prof: Profile) -> Tuple[Optional[Profile], int, bool]:
    """Apply a normal-ordered word (rightmost letter first) to one basis state.

    Returns ``(profile or None, amplitude, crossed_cutoff)``.
    """
    occ = list(prof)
    amp = 1
    for gid in reversed(word):
        g = generator_of(gid)
        k = space.index.get(_mode(g))
        if k is None:
            raise KeyError(f"mode {_mode(g).label()} is not part of this Fock space")
        if g.parity == 0:
            if g.kind == ANNIHILATION:
                if occ[k] == 0:
                    return None, 0, False
                amp *= occ[k]
                occ[k] -= 1
            else:
                occ[k] += 1
                if occ[k] >= space.cutoff:
                    return None, 0, True
        else:
            sign = -1 if sum(occ[q] for q in range(k) if space.modes[q].parity) % 2 else 1
            if g.kind == ANNIHILATION:
                if occ[k] == 0:
                    return None, 0, False
                occ[k] = 0
            else:
                if occ[k] == 1:
                    return None, 0, False
                occ[k] = 1
            amp *= sign
    return tuple(occ), amp, False


def apply(elem: AlgebraElement, vec: FockVector, cutoff: Optional[int] = None,
          values: Optional[Mapping[str, Fraction]] = None) -> FockVector:
    """Act with ``elem`` on ``vec``; spectral symbols must be bound through ``values``.

    ``cutoff`` overrides the cutoff of the vector's space for this action.
    """
    space = vec.space if cutoff is None or cutoff == vec.space.cutoff else FockSpace(vec.space.modes, cutoff)
    terms = _compile(elem, values)
    out: Dict[Profile, Fraction] = {}
    boundary = vec.boundary
    for prof, a in vec.amps.items():
        for w, c in terms:
            img, amp, crossed = _act_word(space, w, prof)
            if crossed:
                boundary = True
            if img is None or not amp:
                continue
            out[img] = out.get(img, 0) + a * c * amp
    return FockVector(space, out, boundary)


def vacuum_project(elem: AlgebraElement, copy: int) -> AlgebraElement:
    """``<0|elem|0>`` over the modes of one copy, for a normal-ordered element.

    A normal word containing any generator of that copy has zero vacuum
    expectation there, so the projection keeps exactly the other words.
    """
    return AlgebraElement({w: p for w, p in elem.terms.items()
                           if all(generator_of(g).copy != copy for g in w)})


# --------------------------------------------------------------------------- vacuum specialization


def _blk_elems(X: Blk) -> List[AlgebraElement]:
    return [e for r in X.rows for e in r]


def check_vacuum_specialization(n: int, m: int, cutoff: int = 4, copy: int = 1,
                                samples: Sequence[Tuple[Fraction, Fraction]] = ((Fraction(1, 3), Fraction(-2, 5)),
                                                                                (Fraction(7, 2), Fraction(3))),
                                shift_error: Fraction = Fraction(0)) -> Optional[Witness]:
    """Vacuum identities of the circle blocks used for the degenerate quadratic family.

    ``K K~ |0> = (kappa-1)|0>``, ``K~ K K~ |0> = (kappa-1) K~|0>`` and
    ``L_{x1, x1-kappa+1}(x)|0> = (x+x1)|0>`` at the sampled ``(x, x1)``.
    ``shift_error`` moves ``x2`` away from the required value.
    Raises :class:`BoundaryError` if the cutoff is too small for exactness.
    """
    if n < 1:
        raise ValueError("vacuum specialization needs n >= 1")
    from .lax_osp import circle_blocks, inner_linear_lax
    kap = Fraction(n - m - 1)
    cb = circle_blocks(n, m, copy)
    Kb, K = cb.Kbar, cb.K
    r = Kb.nr
    KKb = K @ Kb
    KbKKb = Kb @ KKb
    space = FockSpace.for_elements(_blk_elems(Kb) + _blk_elems(K), cutoff)
    vac = space.vacuum()

    def act(e: AlgebraElement, v: FockVector = vac, values=None) -> FockVector:
        out = apply(e, v, values=values)
        if out.boundary:
            raise BoundaryError(f"cutoff {cutoff} too small for the vacuum identities")
        return out

    for i in range(r):
        for j in range(r):
            got = act(KKb[i, j])
            want = vac.scale(kap - 1) if i == j else FockVector(space, {})
            if got != want:
                return Witness(f"K Kbar|0> entry ({i + 1},{j + 1})", len((got - want).amps), repr(got - want))
            got = act(KbKKb[i, j])
            want = act(Kb[i, j]).scale(kap - 1)
            if got != want:
                return Witness(f"Kbar K Kbar|0> entry ({i + 1},{j + 1})", len((got - want).amps), repr(got - want))
    for x, x1 in samples:
        x2 = x1 - kap + 1 + shift_error
        calL = inner_linear_lax(n, m, x1, x2, copy, x)
        for i in range(calL.nr):
            for j in range(calL.nc):
                got = act(calL[i, j])
                want = vac.scale(x + x1) if i == j else FockVector(space, {})
                if got != want:
                    return Witness(f"inner Lax|0> entry ({i + 1},{j + 1}) at x={x}, x1={x1}",
                                   len((got - want).amps), repr(got - want))
    return None


# --------------------------------------------------------------------------- twists

TWIST_FAMILIES = ("osp-lin-deg", "osp-quad-deg", "osp-quad-deg-odd")


@dataclass(frozen=True)
class TwistSpec:
    """Transfer-matrix twist ``D`` and oscillator twist ``D_osc`` for one family.

    ``N`` and ``m`` are the superalgebra data; ``tau`` has ``n+m`` nonzero
    entries with ``n = floor(N/2)``.  ``exponent_sign = -1`` flips every
    exponent of ``D_osc`` (used only to build corrupted inputs).
    """

    family: str
    N: int
    m: int
    tau: Tuple[Fraction, ...]
    exponent_sign: int = 1

    def __post_init__(self):
        if self.family not in TWIST_FAMILIES:
            raise ValueError(f"no oscillator twist for family {self.family!r}")
        if (self.family == "osp-quad-deg-odd") != (self.N % 2 == 1):
            raise ValueError(f"family {self.family!r} does not match N={self.N}")
        tau = tuple(Fraction(t) for t in self.tau)
        if len(tau) != self.n + self.m:
            raise ValueError(f"need {self.n + self.m} twist parameters, got {len(tau)}")
        if any(t == 0 for t in tau):
            raise ValueError("twist parameters must be nonzero")
        object.__setattr__(self, "tau", tau)

    @property
    def n(self) -> int:
        return self.N // 2

    @property
    def dim(self) -> int:
        return self.N + 2 * self.m

    @property
    def D(self) -> Tuple[Fraction, ...]:
        mid = (Fraction(1),) if self.N % 2 else ()
        return self.tau + mid + tuple(1 / t for t in reversed(self.tau))

    def mode_exponents(self, g: Generator) -> Dict[int, int]:
        """Exponents of ``tau_1..tau_{n+m}`` (1-based keys) per quantum in mode ``g``."""
        n, m, d = self.n, self.m, self.dim
        fam, row, col = g.family, g.row, g.col
        out: Dict[int, int] = {}

        def bump(i, e):
            out[i] = out.get(i, 0) + e * self.exponent_sign

        if self.family == "osp-lin-deg":
            i, j = col, d + 1 - row
            ok = {"a": 1 <= i < j <= n, "b": n + 1 <= i <= j <= n + m,
                  "c": 1 <= i <= n < j <= n + m}.get(fam, False)
            if not ok:
                raise ValueError(f"mode {g.label()} is not covered by the oscillator twist")
            bump(i, -1)
            bump(j, -1)
            return out
        if col != 1 or not 2 <= row <= d - 1:
            raise ValueError(f"mode {g.label()} is not covered by the oscillator twist")
        want_fam = "a" if (row <= n or row > d - n or (self.N % 2 and row == n + m + 1)) else "c"
        if fam != want_fam:
            raise ValueError(f"mode {g.label()} has the wrong family for its index")
        bump(1, -1)
        if self.N % 2 and row == n + m + 1:
            return out
        if row <= n + m:
            bump(row, 1)
        else:
            bump(d + 1 - row, -1)
        return out

    def dosc(self, space: FockSpace, profile: Profile) -> Fraction:
        """Eigenvalue of ``D_osc`` on a basis state."""
        val = Fraction(1)
        for g, occ in zip(space.modes, profile):
            if occ:
                for i, e in self.mode_exponents(g).items():
                    val *= self.tau[i - 1] ** (e * occ)
        return val


def twist_spec_for(family: str, N: int, m: int, tau: Sequence, exponent_sign: int = 1) -> TwistSpec:
    return TwistSpec(family, N, m, tuple(tau), exponent_sign)


def _twist_matrix(spec: TwistSpec) -> SpectralMatrix:
    from .lax_osp import build_osp_linear_deg, build_osp_quad_deg
    if spec.family == "osp-lin-deg":
        if spec.N % 2:
            raise ValueError("the linear family needs even N")
        return build_osp_linear_deg(spec.n, spec.m)
    return build_osp_quad_deg(spec.N, spec.m)


def check_twist_invariance(spec: TwistSpec, cutoff: int = 4,
                           xs: Sequence[Fraction] = (Fraction(3, 7), Fraction(-5, 2))) -> Optional[Witness]:
    """``D L(x) D^{-1} = D_osc^{-1} L(x) D_osc`` entrywise on every cutoff-safe basis state."""
    L = _twist_matrix(spec)
    space = FockSpace.for_elements([e for row in L.entries for e in row], cutoff)
    D = spec.D
    lam = {p: spec.dosc(space, p) for p in space.basis()}
    safe = 0
    for x in xs:
        Lx = L.at("x", P.const(x))
        for i in range(L.size):
            for j in range(L.size):
                e = Lx[i, j]
                if e.is_zero():
                    continue
                lhs_factor = D[i] / D[j]
                for prof in lam:
                    img = apply(e, space.state(prof))
                    if img.boundary:
                        continue
                    safe += 1
                    for t, a in img.amps.items():
                        if lhs_factor * a != lam[prof] / lam[t] * a:
                            return Witness(f"entry ({i + 1},{j + 1}) on state {prof} -> {t} at x={x}", 1,
                                           f"D-side factor {lhs_factor}, D_osc-side factor {lam[prof] / lam[t]}")
    if not safe:
        raise BoundaryError(f"cutoff {cutoff} leaves no safe state")
    return None


# --------------------------------------------------------------------------- numeric cross-checks


def _entry_pairs(lhs: SpectralMatrix, rhs: SpectralMatrix) -> List[Tuple[str, AlgebraElement, AlgebraElement]]:
    return [(f"entry ({i + 1},{j + 1})", lhs.entries[i][j], rhs.entries[i][j])
            for i in range(lhs.size) for j in range(lhs.size)]


def _rtt_pairs(n: int, m: int, rng: random.Random):
    from .lax_osp import build_osp_linear_deg
    L = build_osp_linear_deg(n, m)
    d = L.size
    out = []
    for _ in range(12):
        idx = tuple(rng.randint(1, d) for _ in range(4))
        lhs, rhs = rtt_relation(L, *idx)
        out.append((f"(i,j,k,l)={idx}", lhs, rhs))
    # the delta-term branches are always exercised
    for idx in ((1, 1, d, d), (1, d, d, 1)):
        lhs, rhs = rtt_relation(L, *idx)
        out.append((f"(i,j,k,l)={idx}", lhs, rhs))
    return out


def _quadsimp_pairs(n: int, m: int, rng: random.Random):
    from .lax_osp import quadsimp_lhs, quadsimp_rhs
    return [(f"identity {w} {lbl}", a, b) for w in (1, 2)
            for lbl, a, b in _entry_pairs(quadsimp_lhs(n, m, w), quadsimp_rhs(n, m, w))]


def _fusion_pairs(n: int, m: int, rng: random.Random):
    from .lax_osp import osp_linear_fusion_sides
    return _entry_pairs(*osp_linear_fusion_sides(n, m))


def _triple_pairs(n: int, m: int, rng: random.Random):
    from .lax_osp import build_osp_quad_deg
    N = 2 * n
    return _entry_pairs(build_osp_quad_deg(N, m, form="triple"), build_osp_quad_deg(N, m))


IDENTITIES: Dict[str, Callable[[int, int, random.Random], list]] = {
    "rtt-componentwise": _rtt_pairs,
    "quadsimp": _quadsimp_pairs,
    "osp-linear-fusion": _fusion_pairs,
    "quad-triple": _triple_pairs,
}


def numeric_crosscheck(identity: str, samples: int = 5, cutoff: int = 4, n: int = 1, m: int = 1,
                       seed: int = 0) -> Optional[Witness]:
    """Re-evaluate a symbolically verified identity on random Fock states.

    Spectral symbols take random rational values; the vacuum is always among
    the states.  Agreement is required exactly on the basis states where
    neither side crosses the cutoff.  Raises :class:`BoundaryError` if no
    state is safe.
    """
    if identity not in IDENTITIES:
        raise KeyError(f"unknown identity {identity!r}; known: {sorted(IDENTITIES)}")
    rng = random.Random(seed)
    pairs = IDENTITIES[identity](n, m, rng)
    space = FockSpace.for_elements([e for _, a, b in pairs for e in (a, b)], cutoff)
    vectors = [space.vacuum()] + [space.random_vector(rng, max_occ=1) for _ in range(max(samples - 1, 0))]
    checked = 0
    for v in vectors:
        values = {s: Fraction(rng.randint(-20, 20), rng.randint(1, 7)) for s in P.SYMBOLS if s != "t"}
        for where, a, b in pairs:
            total = FockVector(space, {})
            for prof, amp in v.amps.items():
                st = space.state(prof, amp)
                la, lb = apply(a, st, values=values), apply(b, st, values=values)
                if la.boundary or lb.boundary:
                    continue
                checked += 1
                total = total + la - lb
            if not total.is_zero():
                return Witness(f"{identity} {where}", len(total.amps), repr(total)[:160])
    if not checked:
        raise BoundaryError(f"cutoff {cutoff} leaves no safe state")
    return None


def check_copy_trivialization(n: int, m: int) -> Optional[Witness]:
    """Projecting the copy-2 oscillators on their vacuum collapses both sides of the
    linear fusion identity to ``L[1](x+x1)`` times the projected second factor."""
    from .checks import compare
    from .lax_osp import build_osp_linear_deg, osp_linear_degbar_closed, osp_linear_fusion_sides
    lhs, rhs = osp_linear_fusion_sides(n, m)
    proj = lambda M: M.map(lambda e: vacuum_project(e, 2))  # noqa: E731
    L1 = build_osp_linear_deg(n, m, 1).at("x", P.from_linear(x=1, x1=1))
    Lb2 = proj(osp_linear_degbar_closed(n, m, 2).at("x", P.from_linear(x=1, x2=1)))
    if any(g.copy == 2 for row in Lb2.entries for e in row for g in e.generators()):
        return Witness("projection", 1, "copy-2 generators survive the projection")
    want = matmul(L1, Lb2)
    return compare(proj(lhs), want) or compare(proj(rhs), want)
