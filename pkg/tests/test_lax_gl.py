import pytest

from osplax import poly as P
from osplax.algebra import ONE, AlgebraElement, annihilator, conjugate_by_exponential, creator, supercommutator
from osplax.checks import check_rtt_componentwise, check_rtt_matrix
from osplax.lax_gl import (build_gl_La, build_gl_Lbar, build_gl_nondeg, check_gl_fusion, check_gl_transform,
                           default_parity, gl_blocks, gl_fusion_exponent, gl_hat_from_bar, gl_limit_La,
                           gl_limit_Lbar, gl_ph_map, _nondeg_from_blocks, _desc)
from osplax.matrices import SpectralMatrix, check_evenness

RANKS = [(1, 1, 0), (1, 1, 1), (2, 1, 1), (1, 2, 2)]
x = AlgebraElement.symbol("x")


def test_a_zero_is_identity():
    L = build_gl_La(1, 1, 0)
    assert L == SpectralMatrix.identity(L.parity)
    assert build_gl_Lbar(1, 1, 2) == SpectralMatrix.identity((0, 1))
    # Lbar_0 = x Id, so its conjugate is x Id as well
    assert gl_hat_from_bar(1, 1, 0) == SpectralMatrix([[x, 0], [0, x]], (1, 0))


def test_La_top_left_entry():
    xi, xib = annihilator("xi", 2, 1, 1), creator("xi", 1, 2, 1)
    L = build_gl_La(1, 1, 1)
    assert L[0, 0] == x - AlgebraElement.from_generator(xib) * AlgebraElement.from_generator(xi)


def test_Lbar_lower_right_entry():
    xi, xib = annihilator("xi", 2, 1, 1), creator("xi", 1, 2, 1)
    Lb = build_gl_Lbar(1, 1, 1)
    # K = (-1)^{|1|} xi_21 = xi_21, so the entry is x + xi_21 xi~_12 before normal ordering
    assert Lb[1, 1] == x + AlgebraElement.from_generator(xi) * AlgebraElement.from_generator(xib)


@pytest.mark.parametrize("n,m,a", RANKS)
@pytest.mark.parametrize("builder", [build_gl_La, build_gl_Lbar, build_gl_nondeg])
def test_rtt_all_families(builder, n, m, a):
    L = builder(n, m, a)
    assert check_evenness(L) == []
    assert check_rtt_componentwise(L).verdict == "pass"


@pytest.mark.parametrize("n,m,a", RANKS)
def test_hat_family_rtt_and_closed_form(n, m, a):
    H = gl_hat_from_bar(n, m, a)
    assert check_rtt_componentwise(H).verdict == "pass"
    rev = tuple(reversed(default_parity(n, m)))
    assert H == build_gl_La(parity=rev, a=n + m - a, family="xih")


def test_particle_hole_map_is_homomorphism():
    assert gl_ph_map(default_parity(1, 1), 1).is_homomorphism()


@pytest.mark.parametrize("n,m,a", [(1, 1, 1), (2, 1, 1)])
def test_matrix_form_agrees(n, m, a):
    L = build_gl_La(n, m, a)
    assert check_rtt_matrix(L).verdict == check_rtt_componentwise(L).verdict == "pass"


def test_corrupted_entry_fails_with_witness():
    L = build_gl_La(1, 1, 1)
    rows = [list(r) for r in L.entries]
    rows[0][1] = -rows[0][1]
    bad = SpectralMatrix(rows, L.parity, None, L.descriptor)
    rep = check_rtt_componentwise(bad)
    assert rep.verdict == "fail" and rep.witness.n_terms > 0


def test_nondeg_with_zero_blocks_is_diagonal():
    par = default_parity(1, 1)
    z = [[AlgebraElement()]]
    L = _nondeg_from_blocks(z, z, par, 1, P.const(0), P.const(0), _desc("gl-nondeg", par, 1))
    assert L == SpectralMatrix([[x, 0], [0, x]], par)


def test_fusion_and_transforms():
    assert check_gl_transform(1, 1, 1) is None
    assert check_gl_fusion(1, 1, 1) is None
    assert check_gl_fusion(1, 1, 0) is None


def test_primed_oscillators_keep_their_relations():
    par = default_parity(1, 1)
    T = gl_fusion_exponent(par, 1)
    gens = []
    for copy in (1, 2):
        Kb, K = gl_blocks(par, 1, copy)
        gens += [e for r in Kb for e in r] + [e for r in K for e in r]
    images = [conjugate_by_exponential(T, g) for g in gens]
    for i, g in enumerate(gens):
        for j, h in enumerate(gens):
            assert supercommutator(images[i], images[j]) == supercommutator(g, h)


@pytest.mark.parametrize("n,m,a", RANKS)
def test_renormalized_limits(n, m, a):
    assert gl_limit_La(n, m, a) == build_gl_La(n, m, a)
    assert gl_limit_Lbar(n, m, a) == build_gl_Lbar(n, m, a)
