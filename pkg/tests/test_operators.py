import math

import numpy as np
import pytest

from momenta.errors import (CommutationError, DomainError, HypothesisError,
                            OrderExhaustedError)
from momenta.operators import (WeightedShift2, cauchy_dual, dual_subnormality_decision,
                               isometry_report, newton_expansion, norm_net,
                               random_admissible_shift, two_isometry_shift,
                               separate_2iso_check, shift_from_net,
                               shift_from_poly, toral_m_isometry_check)
from momenta.poly_core import BilinearPoly
from momenta.serialize import dumps, loads

N = 8


def ones(n=N):
    return WeightedShift2(np.ones((n + 1, n + 1)), np.ones((n + 1, n + 1)))


def grid(n=N):
    return np.meshgrid(np.arange(n + 1.0), np.arange(n + 1.0), indexing="ij")


# -- construction

def test_isometric_shift():
    s = shift_from_poly(BilinearPoly(1, 0, 0, 0), N)
    assert np.all(s.w1 == 1) and np.all(s.w2 == 1)


def test_example_weights():
    s = shift_from_poly(BilinearPoly(1, 1, 2, 3), N)
    assert s.w2[1, 0] == pytest.approx(math.sqrt(7 / 2), rel=1e-15)
    assert s.w2[0, 0] == pytest.approx(math.sqrt(3), rel=1e-15)
    assert s.w2[1, 0] > s.w2[0, 0]


def test_boundary_weights():
    s = shift_from_poly(BilinearPoly(1, 1, 2, 2), N)
    assert s.w2[1, 0] == pytest.approx(s.w2[0, 0], rel=1e-15)


def test_commutation_enforced():
    w = np.ones((4, 4))
    w2 = w.copy()
    w2[1, 0] = 2.0
    with pytest.raises(CommutationError):
        WeightedShift2(w, w2)


def test_weights_positive():
    with pytest.raises(DomainError):
        WeightedShift2(np.zeros((3, 3)), np.ones((3, 3)))


# -- norm net

def test_norm_net_ones():
    assert np.all(norm_net(ones()).values == 1)


def test_norm_net_telescopes():
    p = BilinearPoly(1, 1.5, 0.5, 2)
    i, j = grid()
    assert np.allclose(norm_net(shift_from_poly(p, N)).values, p(i, j) / p(0, 0), rtol=1e-13)


def test_norm_net_two_isometry():
    i, j = grid()
    assert np.allclose(norm_net(two_isometry_shift(1.0, 2.0, N)).values, 1 + i + 2 * j, rtol=1e-13)


def test_norm_net_detects_path_dependence():
    s = ones(4)
    s.w1[2, 1] = 1.5  # bypass the constructor check
    with pytest.raises(CommutationError):
        norm_net(s)


# -- isometry checks

def test_toral_checks_example():
    s = shift_from_poly(BilinearPoly(1, 1, 2, 3), N)
    assert toral_m_isometry_check(s, 3)[0]
    assert not toral_m_isometry_check(s, 2)[0]
    assert toral_m_isometry_check(ones(), 1)[0]
    assert toral_m_isometry_check(two_isometry_shift(1.0, 2.0, N), 2)[0]


def test_toral_order_exhausted():
    with pytest.raises(OrderExhaustedError):
        toral_m_isometry_check(ones(2), 3)


def test_separate_examples():
    ok, b, c, d = separate_2iso_check(shift_from_poly(BilinearPoly(1, 1, 2, 3), N))
    assert ok and (b, c, d) == pytest.approx((1, 2, 3), abs=1e-12)
    assert separate_2iso_check(ones()) == (True, 0.0, 0.0, 0.0)
    cubic = shift_from_net(lambda i, j: 1 + i + j + i * i * j, N)
    assert not separate_2iso_check(cubic)[0]


def test_report_monotone_in_m():
    for p in [BilinearPoly(1, 1, 2, 3), BilinearPoly(1, 1, 2, 0), BilinearPoly(1, 0, 0, 0)]:
        rep = isometry_report(shift_from_poly(p, N), ms=(1, 2, 3, 4, 5))
        flags = [rep.is_toral_m[m] for m in sorted(rep.is_toral_m)]
        assert flags == sorted(flags)
        assert rep.rectangle == (N + 1, N + 1)


# -- dual

def test_dual_examples():
    assert np.all(cauchy_dual(ones()).w1 == 1)
    p = BilinearPoly(1, 1, 2, 3)
    i, j = grid()
    dual = norm_net(cauchy_dual(shift_from_poly(p, N))).values
    assert np.allclose(dual, p(0, 0) / p(i, j), rtol=1e-13)


def test_dual_involution():
    s, _ = random_admissible_shift(np.random.default_rng(3), N)
    back = cauchy_dual(cauchy_dual(s))
    assert np.array_equal(back.w1, s.w1) and np.array_equal(back.w2, s.w2)


def test_decision_examples():
    res = dual_subnormality_decision(shift_from_poly(BilinearPoly(1, 1, 2, 3), N))
    assert res.decision is False and res.method_agreement
    res = dual_subnormality_decision(shift_from_poly(BilinearPoly(1, 1, 2, 0), N))
    assert res.decision is True and res.method_agreement
    res = dual_subnormality_decision(shift_from_poly(BilinearPoly(1, 1, 2, 2), N))
    assert res.decision is True and res.method_agreement


def test_decision_hypothesis():
    cubic = shift_from_net(lambda i, j: 1 + i + j + i * i * j, N)
    with pytest.raises(HypothesisError):
        dual_subnormality_decision(cubic)


def test_decision_sees_strong_violation():
    # d far above bc leaves a witness inside order 6
    res = dual_subnormality_decision(shift_from_poly(BilinearPoly(1, 0, 0, 5), N))
    assert res.decision is False and res.details["jcm_confirms_fail"]


# -- invariants

def test_commutation_symmetry_of_decision():
    rng = np.random.default_rng(11)
    for _ in range(100):
        s, _ = random_admissible_shift(rng, N)
        assert (s.w2[1, 0] <= s.w2[0, 0]) == (s.w1[0, 1] <= s.w1[0, 0])


def test_newton_reconstruction():
    rng = np.random.default_rng(12)
    for _ in range(20):
        s, _ = random_admissible_shift(rng, N)
        for m in (3, 4):
            assert toral_m_isometry_check(s, m)[0]
            net = norm_net(s)
            rec = newton_expansion(net, m - 1)
            assert np.max(np.abs(rec - net.values)) <= 1e-9 * np.max(net.values)


def test_separate_implies_toral3():
    rng = np.random.default_rng(13)
    for _ in range(50):
        s, _ = random_admissible_shift(rng, N)
        if separate_2iso_check(s)[0]:
            assert toral_m_isometry_check(s, 3)[0]


def test_expansivity():
    rng = np.random.default_rng(14)
    for _ in range(50):
        s, _ = random_admissible_shift(rng, N)
        assert np.all(s.w1 >= 1 - 1e-12) and np.all(s.w2 >= 1 - 1e-12)
        d = cauchy_dual(s)
        assert np.all(d.w1 <= 1 + 1e-12) and np.all(d.w2 <= 1 + 1e-12)


def test_shift_json_roundtrip():
    s, _ = random_admissible_shift(np.random.default_rng(5), 4)
    back = WeightedShift2.from_dict(loads(dumps(s)))
    assert np.array_equal(back.w1, s.w1) and np.array_equal(back.w2, s.w2)
    rep = isometry_report(s)
    assert loads(dumps(rep)) == loads(dumps(loads(dumps(rep))))
