import pytest

from osplax import poly as P
from osplax.algebra import AlgebraElement
from osplax.checks import check_rtt_componentwise, check_rtt_matrix, rtt_relation
from osplax.lax_osp import (build_osp_linear_deg, build_osp_linear_degbar, build_osp_linear_nondeg,
                            check_auxiliary_identities, check_n0_reductions, check_osp_limits,
                            check_osp_linear_fusion, check_osp_linear_transform, check_quadsimp,
                            osp_linear_conjugated, osp_linear_conjugated_closed, osp_linear_degbar_closed,
                            osp_linear_fusion_sides, osp_linear_ph_map, osp_limit_L, quadsimp_lhs, quadsimp_rhs)
from osplax.matrices import SpectralMatrix, check_evenness

RANKS = [(1, 1), (2, 1), (1, 2)]
x = AlgebraElement.symbol("x")


def _perturb(L: SpectralMatrix, i: int, j: int, factor: int = 2) -> SpectralMatrix:
    rows = [list(r) for r in L.entries]
    rows[i][j] = rows[i][j] * AlgebraElement.scalar(factor)
    return SpectralMatrix(rows, L.parity, L.signature, L.descriptor)


@pytest.mark.parametrize("n,m", RANKS)
@pytest.mark.parametrize("builder", [build_osp_linear_deg, build_osp_linear_degbar, build_osp_linear_nondeg])
def test_rtt_linear_families(builder, n, m):
    L = builder(n, m)
    assert check_evenness(L) == []
    assert check_rtt_componentwise(L).verdict == "pass"


def test_deg_shape_at_11():
    L = build_osp_linear_deg(1, 1)
    assert L.size == 4 and L.parity == (0, 1, 1, 0)
    # the x-dependence is exactly diag(x, x, 0, 0)
    assert L - L.at("x", P.const(0)) == SpectralMatrix([[x, 0, 0, 0], [0, x, 0, 0], [0] * 4, [0] * 4], L.parity)
    assert L[2, 2] == AlgebraElement.scalar(1) and L[3, 3] == AlgebraElement.scalar(1)
    assert L[2, 3].is_zero() and L[3, 2].is_zero()


@pytest.mark.parametrize("n,m", RANKS)
def test_degbar_constructive_equals_closed(n, m):
    assert build_osp_linear_degbar(n, m) == osp_linear_degbar_closed(n, m)
    assert osp_linear_conjugated(n, m) == osp_linear_conjugated_closed(n, m)


@pytest.mark.parametrize("n,m", RANKS)
def test_particle_hole_map_is_homomorphism(n, m):
    assert osp_linear_ph_map(n, m).is_homomorphism()


@pytest.mark.parametrize("n,m", [(1, 1), (1, 2)])
def test_matrix_form_agrees_with_componentwise(n, m):
    L = build_osp_linear_deg(n, m)
    assert check_rtt_matrix(L).verdict == check_rtt_componentwise(L).verdict == "pass"


def test_corrupted_kbar_entry_fails_rtt():
    L = build_osp_linear_degbar(1, 1)
    i, j = next((i, j) for i in range(L.size) for j in range(L.size)
                if i != j and not L[i, j].is_scalar())
    bad = _perturb(L, i, j)
    rep = check_rtt_componentwise(bad)
    assert rep.verdict == "fail"
    assert rep.witness is not None and rep.witness.n_terms > 0
    assert check_rtt_matrix(bad).verdict == "fail"


def test_rtt_relation_sides_match_on_one_component():
    L = build_osp_linear_deg(1, 1)
    lhs, rhs = rtt_relation(L, 1, 3, 3, 1)
    assert not lhs.is_zero()
    assert (lhs - rhs).is_zero()


@pytest.mark.parametrize("n,m", RANKS + [(2, 2)])
def test_quadsimp_and_auxiliaries(n, m):
    assert check_quadsimp(n, m) is None
    assert check_auxiliary_identities(n, m) is None


def test_quadsimp_sides_agree_at_11():
    for which in (1, 2):
        lhs, rhs = quadsimp_lhs(1, 1, which), quadsimp_rhs(1, 1, which)
        assert lhs == rhs


@pytest.mark.parametrize("m", [1, 2])
def test_n0_reductions(m):
    assert check_n0_reductions(m) is None
    for builder in (build_osp_linear_deg, build_osp_linear_degbar, build_osp_linear_nondeg):
        assert check_rtt_componentwise(builder(0, m)).verdict == "pass"


@pytest.mark.parametrize("n,m", [(1, 1), (2, 1), (1, 2)])
def test_adjoint_series_transform(n, m):
    assert check_osp_linear_transform(n, m) is None


def test_fusion_at_11():
    assert check_osp_linear_fusion(1, 1) is None
    lhs, rhs = osp_linear_fusion_sides(1, 1)
    assert lhs == rhs
    # the comparison is sensitive to a single rescaled corner entry
    bad = _perturb(rhs, 0, rhs.size - 1, factor=3)
    assert lhs != bad


@pytest.mark.parametrize("n,m", RANKS)
def test_renormalized_limits(n, m):
    assert check_osp_limits(n, m) is None


def test_limit_differs_from_unscaled_family():
    # without the renormalization the t -> oo limit does not reproduce L
    fam = build_osp_linear_nondeg(1, 1, 0, "t", copy=0)
    assert fam != osp_limit_L(1, 1)
    assert max(e.degree("t") for row in fam.entries for e in row) == 1


@pytest.mark.parametrize("n,m", [(1, 1), (2, 1)])
def test_printed_l12_sign_fails_off_diagonal(n, m):
    w = check_auxiliary_identities(n, m, printed_l12_sign=True)
    assert w is not None and w.where.startswith("L12relation")
    j, l = eval(w.where.split(" ", 1)[1])
    assert j != l
