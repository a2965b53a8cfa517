import pytest

from osplax.checks import check_rtt_componentwise, check_rtt_matrix
from osplax.lax_osp import (build_osp_quad_deg, build_osp_quad_fused, build_osp_quad_hatL,
                            build_osp_quad_hatTilde, build_osp_quad_hatTilde_closed, build_osp_quad_nondeg,
                            build_osp_quad_nondeg_full, check_kpkm, check_osp_quad_fusion,
                            check_osp_quad_nondeg_factorisation, check_osp_quad_nondeg_full_factorisation,
                            check_osp_quad_transforms, check_quad_full_limits, check_quad_limits,
                            check_quad_symmetries, hat_rename_map, hat_tilde_ph_map, lindec_closed)
from osplax.matrices import check_evenness

RANKS = [(1, 1), (2, 1)]


def _rtt_pass(L):
    return check_rtt_componentwise(L).verdict == "pass"


@pytest.mark.parametrize("n,m", RANKS)
def test_block_form_of_linear_lax(n, m):
    assert check_kpkm(n, m) is None
    assert lindec_closed(n, m).size == 2 * (n + m)


@pytest.mark.parametrize("n,m", RANKS)
def test_hat_family(n, m):
    H = build_osp_quad_hatL(n, m)
    assert check_evenness(H) == []
    assert _rtt_pass(H)
    assert H == build_osp_quad_hatL(n, m, constructive=False)


@pytest.mark.parametrize("n,m", RANKS)
def test_degenerate_quadratic(n, m):
    L = build_osp_quad_deg(2 * n, m)
    assert _rtt_pass(L)
    assert build_osp_quad_deg(2 * n, m, form="triple") == L


def test_degenerate_quadratic_leading_corner():
    L = build_osp_quad_deg(2, 1)
    assert L[0, 0].degree("x") == 2
    assert L[L.size - 1, L.size - 1].degree("x") == 0


@pytest.mark.parametrize("n,m", RANKS)
def test_hat_tilde_family(n, m):
    L = build_osp_quad_hatTilde(2 * n, m)
    assert _rtt_pass(L)
    assert L == build_osp_quad_hatTilde_closed(2 * n, m)


@pytest.mark.parametrize("n,m", [(1, 1)])
def test_particle_hole_maps_are_homomorphisms(n, m):
    assert hat_tilde_ph_map(2 * n, m).is_homomorphism()
    assert hat_rename_map(n, m).is_homomorphism()


@pytest.mark.parametrize("n,m", RANKS)
def test_fused_and_nondegenerate_rtt(n, m):
    assert _rtt_pass(build_osp_quad_fused(n, m))
    assert _rtt_pass(build_osp_quad_nondeg(2 * n, m))


@pytest.mark.parametrize("n,m", RANKS)
def test_full_nondegenerate_rtt(n, m):
    assert _rtt_pass(build_osp_quad_nondeg_full(n, m))


def test_matrix_form_agrees_on_small_quadratic():
    L = build_osp_quad_deg(2, 1)
    assert check_rtt_matrix(L).verdict == "pass"


@pytest.mark.parametrize("N,m", [(3, 1), (3, 2)])
def test_odd_rank_degenerate_quadratic(N, m):
    L = build_osp_quad_deg(N, m)
    assert L.size == N + 2 * m
    assert _rtt_pass(L)
    assert build_osp_quad_deg(N, m, form="triple") == L


def test_factorisations_at_11():
    assert check_quad_symmetries(2, 1) is None
    assert check_osp_quad_nondeg_factorisation(2, 1) is None
    assert check_osp_quad_nondeg_full_factorisation(1, 1) is None


def test_fusion_and_transforms_at_11():
    assert check_osp_quad_transforms(1, 1) is None
    assert check_osp_quad_fusion(1, 1) is None


@pytest.mark.parametrize("n,m", RANKS)
def test_limits(n, m):
    assert check_quad_limits(2 * n, m) is None
    assert check_quad_full_limits(n, m) is None


def test_printed_corner_breaks_factorisation_and_rtt():
    w = check_osp_quad_nondeg_full_factorisation(1, 1, printed_corner=True)
    assert w is not None and w.where.startswith("entry (1,1)")
    assert not _rtt_pass(build_osp_quad_nondeg_full(1, 1, printed_corner=True))

