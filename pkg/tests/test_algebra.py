from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from osplax import poly as P
from osplax.algebra import (INHOMOGENEOUS, ONE, ZERO, AlgebraElement, HomomorphismError, ParityError,
                            Substitution, TruncationError, annihilator, conjugate_by_exponential, creator,
                            parity, substitute, sum_elements, supercommutator)
from osplax.fock import FockSpace, apply


def el(g, c=1):
    return AlgebraElement.from_generator(g, c)


a12, ab21 = annihilator("a", 1, 2, 0), creator("a", 2, 1, 0)
c12, cb21 = annihilator("c", 1, 2, 1), creator("c", 2, 1, 1)


# --------------------------------------------------------------------------- examples


def test_boson_pair_normal_orders_with_unit():
    assert el(a12) * el(ab21) == el(ab21) * el(a12) + ONE


def test_fermion_squares_to_zero():
    assert (el(c12) * el(c12)).is_zero()
    assert (el(cb21) * el(cb21)).is_zero()


def test_fermion_pair_anticommutes_to_unit():
    assert el(c12) * el(cb21) == -(el(cb21) * el(c12)) + ONE


def test_supercommutator_examples():
    xi, xib = annihilator("xi", 2, 1, 1), creator("xi", 1, 2, 1)
    assert supercommutator(el(xi), el(xib)) == ONE
    c1, c2 = creator("c", 2, 1, 1), creator("c", 3, 1, 1)
    assert supercommutator(el(c1), el(c2)).is_zero()
    num = el(ab21) * el(a12)
    assert supercommutator(num, el(a12)) == -el(a12)


def test_supercommutator_rejects_inhomogeneous():
    with pytest.raises(ParityError):
        supercommutator(el(a12) + el(c12), el(a12))


def test_parity_examples():
    assert parity(el(c12)) == 1
    assert parity(el(ab21) * el(a12)) == 0
    assert parity(el(a12) + el(c12)) == INHOMOGENEOUS


def test_conjugation_examples():
    a1, a2 = annihilator("a", 2, 1, 0, copy=1), annihilator("a", 2, 1, 0, copy=2)
    T = el(a1.partner) * el(a2)
    assert conjugate_by_exponential(T, el(a1)) == el(a1) - el(a2)
    assert conjugate_by_exponential(T, ONE) == ONE
    with pytest.raises(TruncationError):
        conjugate_by_exponential(el(ab21) * el(a12), el(a12), max_depth=8)


def test_conjugation_rejects_odd_exponent():
    with pytest.raises(ParityError):
        conjugate_by_exponential(el(c12), el(a12))


def test_identity_substitution_and_bosonic_particle_hole():
    x = el(ab21) * el(a12) + el(c12)
    assert Substitution({}, "id").check_homomorphism().apply(x) == x
    # b_{ij} -> 2 b~_{ji} on the antidiagonal, b~_{ji} -> -b_{ij}/2
    b, bb = annihilator("b", 3, 2, 0), creator("b", 2, 3, 0)
    ph = Substitution({b: (2, bb), bb: (Fraction(-1, 2), b)}, "ph").check_homomorphism()
    assert ph(el(b)) == el(bb, 2)
    assert supercommutator(ph(el(b)), ph(el(bb))) == ONE


def test_fermionic_particle_hole_is_homomorphism():
    ph = Substitution({c12: (1, cb21), cb21: (1, c12)}, "phc").check_homomorphism()
    assert supercommutator(ph(el(c12)), ph(el(cb21))) == ONE


def test_non_homomorphism_is_reported():
    bad = Substitution({a12: (1, ab21), ab21: (1, a12)}, "swap")
    with pytest.raises(HomomorphismError, match="swap"):
        bad.check_homomorphism()
    with pytest.raises(HomomorphismError):
        substitute(el(a12), {a12: (1, ab21), ab21: (1, a12)})


def test_canonical_form_is_unique():
    u = el(ab21) * el(a12) + ONE
    v = el(a12) * el(ab21)
    assert u == v and hash(u) == hash(v)
    assert (u - v).is_zero()
    assert ZERO.n_terms() == 0


def test_coefficients_are_polynomials():
    x = AlgebraElement.symbol("x")
    e = (x * el(a12)).scale(P.from_linear(y=1))
    assert e.degree("x") == 1 and e.degree("y") == 1
    assert e.swap_symbols("x", "y") == e
    assert e.evaluate({"x": 2, "y": 3}) == el(a12, 6)


# --------------------------------------------------------------------------- properties

FAMS = (("a", 0), ("b", 0), ("c", 1))


@st.composite
def generators(draw):
    fam, par = draw(st.sampled_from(FAMS))
    row, col = draw(st.integers(1, 2)), draw(st.integers(1, 2))
    copy = draw(st.integers(0, 1))
    make = draw(st.sampled_from((annihilator, creator)))
    return make(fam, row, col, par, copy)


@st.composite
def words(draw, max_len=3):
    gens = draw(st.lists(generators(), min_size=0, max_size=max_len))
    coeff = draw(st.fractions(min_value=-3, max_value=3, max_denominator=3))
    out = AlgebraElement.scalar(coeff)
    for g in gens:
        out = out * el(g)
    return out


@st.composite
def homogeneous_words(draw):
    gens = draw(st.lists(generators(), min_size=1, max_size=2))
    out = ONE
    for g in gens:
        out = out * el(g)
    return out


@settings(max_examples=300)
@given(words(), words(), words())
def test_associativity(u, v, w):
    assert (u * v) * w == u * (v * w)


@settings(max_examples=300)
@given(st.lists(generators(), min_size=2, max_size=5), st.integers(1, 4))
def test_confluence_of_bracketings(gens, split):
    split = min(split, len(gens) - 1)
    left = ONE
    for g in gens:
        left = left * el(g)
    right = ONE
    for g in reversed(gens):
        right = el(g) * right
    a, b = ONE, ONE
    for g in gens[:split]:
        a = a * el(g)
    for g in gens[split:]:
        b = b * el(g)
    assert left == right == a * b


@settings(max_examples=300)
@given(generators(), generators())
def test_graded_antisymmetry(g, h):
    pg, ph_ = g.parity, h.parity
    lhs = supercommutator(el(g), el(h))
    rhs = supercommutator(el(h), el(g)).scale(-(-1) ** (pg * ph_))
    assert lhs == rhs


@settings(max_examples=300)
@given(homogeneous_words(), homogeneous_words(), homogeneous_words())
def test_graded_jacobi(x, y, z):
    px, py, pz = x.parity(), y.parity(), z.parity()
    t1 = supercommutator(x, supercommutator(y, z)).scale((-1) ** (px * pz))
    t2 = supercommutator(y, supercommutator(z, x)).scale((-1) ** (py * px))
    t3 = supercommutator(z, supercommutator(x, y)).scale((-1) ** (pz * py))
    assert sum_elements([t1, t2, t3]).is_zero()


def _ph_all():
    """Particle-hole on every small generator: a -> -a~, a~ -> a, c <-> c~, b -> b~, b~ -> -b."""
    mp = {}
    for fam, par in FAMS:
        for copy in (0, 1):
            for r in (1, 2):
                for c in (1, 2):
                    g = annihilator(fam, r, c, par, copy)
                    if par:
                        mp[g], mp[g.partner] = (1, g.partner), (1, g)
                    else:
                        mp[g], mp[g.partner] = (-1, g.partner), (1, g)
    return Substitution(mp, "ph-all").check_homomorphism()


PH = _ph_all()


@settings(max_examples=300)
@given(words(), words())
def test_homomorphism_commutes_with_multiply(u, v):
    assert PH(u * v) == PH(u) * PH(v)


def _nilpotent_T():
    a1, a2 = annihilator("a", 2, 1, 0, 1), annihilator("a", 2, 1, 0, 2)
    c1, c2 = annihilator("c", 2, 1, 1, 1), annihilator("c", 2, 1, 1, 2)
    return el(a1.partner) * el(a2) + el(c1.partner) * el(c2)


@st.composite
def cross_copy_words(draw):
    fams = (("a", 0), ("c", 1))
    out = ONE
    for _ in range(draw(st.integers(0, 2))):
        fam, par = draw(st.sampled_from(fams))
        make = draw(st.sampled_from((annihilator, creator)))
        copy = draw(st.integers(1, 2))
        g = annihilator(fam, 2, 1, par, copy)
        out = out * el(g if make is annihilator else g.partner)
    return out


@settings(max_examples=200)
@given(cross_copy_words(), cross_copy_words())
def test_conjugation_is_multiplicative(x, y):
    T = _nilpotent_T()
    assert conjugate_by_exponential(T, x * y) == conjugate_by_exponential(T, x) * conjugate_by_exponential(T, y)


@settings(max_examples=200)
@given(st.lists(generators(), min_size=1, max_size=4))
def test_product_agrees_with_fock_action(gens):
    """Independent oracle: the normal-ordered product acts like the factors applied in turn."""
    prod = ONE
    for g in gens:
        prod = prod * el(g)
    space = FockSpace.for_elements([el(g) for g in gens], cutoff=12)
    for prof in [(0,) * len(space.modes), tuple(min(1, space.limit(k) - 1) for k in range(len(space.modes)))]:
        v = space.state(prof)
        w = v
        for g in reversed(gens):
            w = apply(el(g), w)
        got = apply(prod, v)
        assert not w.boundary and not got.boundary
        assert got == w
