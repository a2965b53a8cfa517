from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from osplax import poly as P
from osplax.algebra import ONE, ZERO, AlgebraElement, annihilator, creator
from osplax.checks import check_rtt_componentwise, check_rtt_matrix
from osplax.lax_gl import build_gl_La
from osplax.lax_osp import build_osp_linear_deg, build_osp_linear_nondeg, osp_limit_L
from osplax.matrices import (DivergenceError, LaxFamilyDescriptor, MatrixError, SpectralMatrix, SuperSignature,
                             check_evenness, conjugate, matmul, scalar_inverse, scaled_limit, tensor_lift)
from osplax.rmatrix import build_invariance_matrix


@pytest.mark.parametrize("N,m", [(2, 1), (4, 0), (0, 1), (3, 1), (4, 2), (5, 1)])
def test_signature_invariants(N, m):
    sig = SuperSignature(N, m)
    assert sig.check() == []
    assert sig.kappa == Fraction(N, 2) - m - 1
    assert len(sig.parity) == sig.dim


def test_identity_product_and_top_left_entry():
    L = build_osp_linear_deg(1, 1)
    Id = SpectralMatrix.identity(L.parity)
    assert matmul(Id, L) == L
    assert matmul(L, Id) == L
    # top-left entry of L(x) is x minus the (1,1) entry of Kbar K
    from osplax.lax_osp import osp_blocks
    b = osp_blocks(1, 1)
    assert L[0, 0] == AlgebraElement.symbol("x") - (b.Kbar @ b.K)[0, 0]


def test_conjugate_identity_and_inverse():
    L = build_osp_linear_deg(1, 1)
    sig = L.signature
    Id = [[int(i == j) for j in range(4)] for i in range(4)]
    assert conjugate(L, Id) == L
    J = build_invariance_matrix("J_theta", sig)
    Jinv = scalar_inverse(J)
    assert conjugate(conjugate(L, J), Jinv) == L


def test_j_tilde_swaps_first_and_last():
    L = build_osp_linear_deg(1, 1)
    J = build_invariance_matrix("J_tilde", L.signature)
    C = conjugate(L, J)
    d = L.size
    perm = [d - 1] + list(range(1, d - 1)) + [0]
    for i in range(d):
        for j in range(d):
            assert C[i, j] == L[perm[i], perm[j]]


def test_scaled_limit_trivial_and_divergent():
    L = build_osp_linear_deg(1, 1)
    assert scaled_limit(L) == L
    fam = build_osp_linear_nondeg(1, 1, x1=0, x2="t", copy=0)
    with pytest.raises(DivergenceError):
        scaled_limit(fam)


def test_scaled_limit_reproduces_linear_family():
    assert osp_limit_L(1, 1) == build_osp_linear_deg(1, 1)


def test_scaled_limit_commutes_with_oscillator_rescaling():
    from osplax.algebra import Substitution
    fam = build_osp_linear_nondeg(1, 1, x1=0, x2="t", copy=0)
    gens = {g for row in fam.entries for e in row for g in e.generators()}
    mp = {}
    for g in gens:
        if g.kind == 1:
            mp[g] = (3, g)
            mp[g.partner] = (Fraction(1, 3), g.partner)
    sub = Substitution(mp, "rescale").check_homomorphism()
    right = [P.const(1)] * 2 + [P.symbol("t", -1)] * 2
    a = scaled_limit(fam.map(sub.apply), None, right)
    b = scaled_limit(fam, None, right).map(sub.apply)
    assert a == b


def test_check_evenness():
    assert check_evenness(build_osp_linear_deg(1, 1)) == []
    assert check_evenness(SpectralMatrix.zeros((0, 1))) == []
    c = AlgebraElement.from_generator(annihilator("c", 2, 1, 1))
    bad = SpectralMatrix([[c, ZERO], [ZERO, ONE]], (0, 1))
    assert check_evenness(bad) == [(1, 1, "parity 1, expected 0")]
    with pytest.raises(MatrixError):
        tensor_lift(bad, 1)


def test_tensor_lift_of_identity():
    for par in [(0, 1), (0, 1, 1, 0)]:
        Id = SpectralMatrix.identity(par)
        for slot in (1, 2):
            big = tensor_lift(Id, slot)
            assert big == SpectralMatrix.identity(big.parity)


def test_even_lifts_of_scalar_matrix_commute():
    S = SpectralMatrix.scalar([[1, 2], [3, 4]], (0, 0))
    assert matmul(tensor_lift(S, 1), tensor_lift(S, 2)) == matmul(tensor_lift(S, 2), tensor_lift(S, 1))


def test_matrix_rtt_agrees_with_componentwise_for_gl11():
    L = build_gl_La(1, 1, 1)
    assert check_rtt_componentwise(L).verdict == "pass"
    assert check_rtt_matrix(L).verdict == "pass"


def test_descriptor_validation():
    with pytest.raises(ValueError):
        LaxFamilyDescriptor("nonsense")
    with pytest.raises(ValueError):
        LaxFamilyDescriptor("osp-quad-deg", n=0, m=1)
    assert LaxFamilyDescriptor("gl-L_a", 1, 1, 1).kind == "gl"


ints = st.integers(-3, 3)


def _even_matrix(v):
    """A 2x2 even matrix on parity (0, 1) with bosonic diagonal and fermionic off-diagonal entries."""
    x = AlgebraElement.symbol("x")
    a, ab = annihilator("a", 1, 2, 0), creator("a", 2, 1, 0)
    c, cb = annihilator("c", 2, 1, 1), creator("c", 1, 2, 1)
    g = AlgebraElement.from_generator
    return SpectralMatrix([[x * v[0] + g(a, v[1]), g(c, v[2])],
                           [g(cb, v[3]), g(ab, v[4]) + v[5]]], (0, 1))


@settings(max_examples=100)
@given(st.lists(ints, min_size=18, max_size=18))
def test_matmul_associative_on_even_matrices(vals):
    A, B, C = _even_matrix(vals[:6]), _even_matrix(vals[6:12]), _even_matrix(vals[12:])
    assert check_evenness(A) == []
    assert matmul(matmul(A, B), C) == matmul(A, matmul(B, C))
