from fractions import Fraction

import numpy as np
import pytest

from osplax import poly as P
from osplax.rmatrix import (InvarianceError, ROperator, _j_hat_closed, build_R, build_invariance_matrix,
                            build_signature, check_invariance, check_ybe, perm_operator, q_operator,
                            q_operator_from_sum, q_projector_scalar)


def test_signature_examples():
    s = build_signature(2, 1)
    assert s.theta == (1, 1, -1, 1) and s.kappa == -1
    assert build_signature(4, 0).theta == (1, 1, 1, 1)
    s0 = build_signature(0, 1)
    assert s0.theta == (1, -1) and s0.parity == (1, 1)


def test_gl_R_at_zero_is_permutation():
    R = build_R((0, 1), "gl")
    assert (R.numeric(Fraction(0)) == perm_operator((0, 1))).all()


def test_osp_R_kappa_zero_at_2_0():
    R = build_R(build_signature(2, 0), "osp")
    assert R.kappa == 0
    x = P.symbol("x")
    assert R.coeffs == [P.mul(x, x), x, P.neg(x)]


def _v(d, i, j):
    e = np.zeros(d * d, dtype=object)
    e[(i - 1) * d + j - 1] = 1
    return e


@pytest.mark.parametrize("N,m", [(2, 1), (4, 1), (3, 1)])
def test_R_entries_against_explicit_actions(N, m):
    """Oracle: act on basis vectors with the stated P and Q rules directly."""
    sig = build_signature(N, m)
    R = build_R(sig, "osp")
    d, k = sig.dim, sig.kappa
    x = Fraction(5, 2)
    Rx = R.numeric(x)
    for i in range(1, d + 1):
        for j in range(1, d + 1):
            want = np.zeros(d * d, dtype=object)
            want[(i - 1) * d + j - 1] += x * (x + k)
            want[(j - 1) * d + i - 1] += (x + k) * (-1) ** (sig.p(i) * sig.p(j))
            if j == sig.prime(i):
                pref = (-1) ** sig.p(i) * sig.th(i)
                for a in range(1, d + 1):
                    want[(a - 1) * d + sig.prime(a) - 1] -= x * pref * sig.th(a)
            assert list(Rx @ _v(d, i, j)) == list(want)


def test_q_constructions_agree():
    s = build_signature(2, 1)
    assert np.array_equal(q_operator(s), q_operator_from_sum(s))


@pytest.mark.parametrize("N,m,c", [(2, 0, 2), (0, 1, -2), (2, 1, 0), (4, 1, 2), (3, 1, 1)])
def test_q_projector_scalar(N, m, c):
    s = build_signature(N, m)
    assert q_projector_scalar(s) == c
    Q = q_operator(s)
    assert np.array_equal(Q @ Q, c * Q)


@pytest.mark.parametrize("N,m", [(2, 0), (0, 1), (2, 1), (4, 1), (3, 1)])
def test_p_squares_to_identity_and_q_support(N, m):
    s = build_signature(N, m)
    d = s.dim
    Pm = perm_operator(s.parity)
    assert np.array_equal(Pm @ Pm, np.eye(d * d, dtype=np.int64))
    Q = q_operator(s)
    for i in range(1, d + 1):
        for j in range(1, d + 1):
            if j != s.prime(i):
                assert not Q[:, (i - 1) * d + j - 1].any()


@pytest.mark.parametrize("N,m", [(2, 0), (0, 1), (2, 1), (4, 1), (3, 1)])
def test_ybe_osp(N, m):
    assert check_ybe(build_R(build_signature(N, m), "osp")).ok


@pytest.mark.parametrize("n,m", [(1, 1), (2, 1)])
def test_ybe_gl(n, m):
    assert check_ybe(build_R((0,) * n + (1,) * m, "gl")).ok


def test_ybe_pure_permutation_and_corrupted_Q():
    par = (0, 1)
    Pm = perm_operator(par)
    assert check_ybe(ROperator("gl", par, [P.const(1)], [Pm], ["P"])).ok
    sig = build_signature(2, 1)
    R = build_R(sig, "osp")
    bad = ROperator("osp", R.parity, [R.coeffs[0], R.coeffs[1], P.symbol("x")], R.ops, R.names, sig)
    res = check_ybe(bad)
    assert not res.ok and res.n_nonzero > 0


def test_invariance_matrices():
    s = build_signature(2, 1)
    Jt = build_invariance_matrix("J_theta", s)
    assert Jt == [[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]]
    Jtil = build_invariance_matrix("J_tilde", s)
    assert Jtil == [[0, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 0]]
    Jh = build_invariance_matrix("J_hat", s)
    assert (np.array(Jh) == np.array(Jtil) @ np.array(Jt)).all()
    s2 = build_signature(4, 1)
    assert build_invariance_matrix("J_hat", s2) == _j_hat_closed(s2)


@pytest.mark.parametrize("n,m", [(1, 1), (2, 1)])
@pytest.mark.parametrize("tag", ["J_theta", "J_tilde", "J_hat"])
def test_invariance_lemmas(n, m, tag):
    s = build_signature(2 * n, m)
    assert check_invariance(build_R(s), build_invariance_matrix(tag, s)).ok


@pytest.mark.parametrize("m", [1, 2])
def test_id_theta_invariance(m):
    s = build_signature(0, m)
    assert check_invariance(build_R(s), build_invariance_matrix("Id_theta", s)).ok
    d = s.dim
    assert check_invariance(build_R(s), np.eye(d, dtype=np.int64)).ok


def test_id_theta_needs_N_zero():
    with pytest.raises(InvarianceError):
        build_invariance_matrix("Id_theta", build_signature(2, 1))


def test_generalized_invariance():
    s = build_signature(2, 1)
    R = build_R(s)
    good = [(1, 0, 0, 1), (0, 1, -1, 0)]
    assert check_invariance(R, build_invariance_matrix("generalized", s, good)).ok
    with pytest.raises(InvarianceError, match="gamma"):
        build_invariance_matrix("generalized", s, [(1, 0, 0, 1), (1, 0, 0, -1)])
    with pytest.raises(InvarianceError):
        build_invariance_matrix("generalized", s, [(1, 1, 0, 1), (1, 0, 0, 1)])
