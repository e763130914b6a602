from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from momenta.errors import (DegreeError, DomainError, NearCoincidentPoleError,
                            OrderExhaustedError)
from momenta.poly_core import (BilinearPoly, FactoredPoly, MomentNet,
                               PencilPoly, eval_pencil, falling_factorial,
                               forward_difference, net_from_pencil,
                               partial_fractions)


def pencil(broots, aroots, b0=1.0, a0=1.0):
    return PencilPoly(b=FactoredPoly(b0, tuple(broots)), a=FactoredPoly(a0, tuple(aroots)))


def net_of(f, n=8):
    m, k = np.meshgrid(np.arange(n + 1.0), np.arange(n + 1.0), indexing="ij")
    return MomentNet(f(m, k))


# -- types

def test_factored_poly_validates():
    with pytest.raises(DomainError):
        FactoredPoly(0.0, (1.0,))
    with pytest.raises(DomainError):
        FactoredPoly(1.0, (-1.0,))
    assert FactoredPoly(2.0, (3.0, 1.0)).roots == (1.0, 3.0)


def test_bilinear_validates():
    with pytest.raises(DomainError):
        BilinearPoly(0.0, 1, 1, 1)
    with pytest.raises(DomainError):
        BilinearPoly(1.0, -1, 1, 1)
    assert BilinearPoly(1, 1, 2, 3).M == -1


def test_coeffs_match_numpy():
    p = FactoredPoly(2.0, (1.0, 4.0, 0.5))
    x = np.linspace(0, 5, 7)
    assert np.allclose(np.polynomial.polynomial.polyval(x, p.coeffs()), p(x), rtol=1e-14)


def test_derivative_against_finite_difference():
    p = FactoredPoly(1.5, (1.0, 2.0, 7.0))
    x, h = 1.3, 1e-6
    assert p.derivative(x) == pytest.approx((p(x + h) - p(x - h)) / (2 * h), rel=1e-8)


# -- eval_pencil

def test_eval_pencil_examples():
    p = pencil((1, 4), (2, 3))
    assert eval_pencil(p, 0, 0) == 4
    assert eval_pencil(p, 0, 1) == 10
    assert eval_pencil(pencil((1, 2), (3, 4)), 1, 1) == 26


def test_eval_pencil_domain():
    with pytest.raises(DomainError):
        eval_pencil(pencil((1,), (2,)), -1, 0)


# -- differences

def test_difference_of_constant_is_zero():
    net = net_of(lambda m, n: np.ones_like(m))
    for beta in [(1, 0), (0, 1), (2, 3)]:
        assert np.all(forward_difference(net, beta).values == 0)


def test_mixed_difference_of_mn():
    out = forward_difference(net_of(lambda m, n: m * n), (1, 1))
    assert np.all(out.values == 1)


def test_third_difference_kills_m2n():
    out = forward_difference(net_of(lambda m, n: m ** 2 * n), (3, 0))
    assert np.all(out.values == 0)


def test_difference_order_exhausted():
    with pytest.raises(OrderExhaustedError):
        forward_difference(net_of(lambda m, n: m, 3), (4, 0))


@settings(max_examples=40, deadline=None)
@given(st.tuples(st.integers(0, 3), st.integers(0, 3)), st.tuples(st.integers(0, 3), st.integers(0, 3)),
       st.integers(0, 10_000))
def test_difference_composition(beta, gamma, seed):
    vals = np.random.default_rng(seed).integers(-50, 50, size=(9, 9)).astype(float)
    net = MomentNet(vals)
    lhs = forward_difference(forward_difference(net, beta), gamma).values
    rhs = forward_difference(net, (beta[0] + gamma[0], beta[1] + gamma[1])).values
    assert np.array_equal(lhs, rhs)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 10_000))
def test_difference_annihilates_low_degree(g1, g2, seed):
    coef = np.random.default_rng(seed).integers(-5, 5, size=(g1 + 1, g2 + 1)).astype(float)
    net = net_of(lambda m, n: np.polynomial.polynomial.polyval2d(m, n, coef))
    k = g1 + g2 + 1
    for b1 in range(k + 1):
        assert np.all(forward_difference(net, (b1, k - b1)).values == 0)


# -- falling factorial

def test_falling_factorial_examples():
    assert falling_factorial((5, 3), (0, 0)) == 1
    assert falling_factorial((5, 3), (2, 1)) == 60
    assert falling_factorial((1, 1), (2, 0)) == 0


# -- partial fractions

def _linear_system_oracle(num, den, poles):
    """Solve num/den = c0 + sum c_j/(x + a_j) from evaluations at 0..k."""
    k = len(poles)
    x = np.arange(k + 1, dtype=float)
    A = np.column_stack([np.ones(k + 1)] + [1.0 / (x + a) for a in poles])
    return np.linalg.solve(A, num(x) / den(x))


def test_pfrac_degree2_pencil():
    num, den = FactoredPoly(1, (1, 4)), FactoredPoly(1, (2, 3))
    pf = partial_fractions(num, den)
    oracle = _linear_system_oracle(num, den, (2, 3))
    assert pf.c0 == pytest.approx(oracle[0], abs=1e-12) and pf.c0 == 1
    assert [(p, o) for p, o, _ in pf.terms] == [(2, 1), (3, 1)]
    assert np.allclose([c for *_, c in pf.terms], oracle[1:], atol=1e-12)
    assert np.allclose([c for *_, c in pf.terms], [-2, 2])


def test_pfrac_second_degree2_pencil():
    # the linear-system oracle gives +2 and -6 here
    num, den = FactoredPoly(1, (1, 2)), FactoredPoly(1, (3, 4))
    pf = partial_fractions(num, den)
    oracle = _linear_system_oracle(num, den, (3, 4))
    assert np.allclose([c for *_, c in pf.terms], oracle[1:], atol=1e-12)
    assert np.allclose([c for *_, c in pf.terms], [2, -6])


def test_pfrac_identity():
    p = FactoredPoly(2, (1, 5))
    pf = partial_fractions(p, p)
    assert pf.quotient == (1.0,) and pf.terms == ()


def test_pfrac_repeated_pole():
    num, den = FactoredPoly(1, (1,)), FactoredPoly(1, (2, 2))
    pf = partial_fractions(num, den)
    assert len(pf.terms) == 2
    # (x+1)/(x+2)^2 = 1/(x+2) - 1/(x+2)^2
    assert np.allclose([c for *_, c in pf.terms], [1, -1], atol=1e-10)
    assert pf.residual(num, den) <= 1e-10


def test_pfrac_near_coincident():
    with pytest.raises(NearCoincidentPoleError) as info:
        partial_fractions(FactoredPoly(1, (1,)), FactoredPoly(1, (2, 2 + 1e-7)))
    assert info.value.pair == (2.0, 2 + 1e-7)


def test_pfrac_needs_denominator():
    with pytest.raises(DegreeError):
        partial_fractions(FactoredPoly(1, (1,)), FactoredPoly(1, ()))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(0, 5), st.integers(0, 10_000))
def test_pfrac_reconstructs(k, kn, seed):
    rng = np.random.default_rng(seed)
    den_roots = np.sort(rng.uniform(0, 10, k))
    if np.min(np.diff(den_roots), initial=1.0) < 1e-3:
        den_roots = np.arange(k) * 2.0 + 0.5
    num = FactoredPoly(rng.uniform(0.5, 2), tuple(rng.uniform(0, 10, kn)))
    den = FactoredPoly(rng.uniform(0.5, 2), tuple(den_roots))
    pf = partial_fractions(num, den)
    assert pf.residual(num, den, rng.uniform(0, 10, 20)) <= 1e-9
    if kn == k:
        assert pf.c0 == pytest.approx(num.lead / den.lead, rel=1e-14)


# -- nets

def test_net_examples():
    assert net_from_pencil(BilinearPoly(1, 1, 1, 1), 1, 4)[1, 1] == 0.25
    assert net_from_pencil(pencil((1, 4), (2, 3)), 1, 4)[0, 0] == 0.25
    assert net_from_pencil(BilinearPoly(1, 0, 1, 1), 1, 4)[1, 1] == pytest.approx(1 / 3)


def test_net_exact_mode():
    net = net_from_pencil(BilinearPoly(1, 0, 1, 1), 2, 3, exact=True)
    assert net.exact and net[1, 1] == Fraction(1, 9)


def test_net_entries_positive():
    net = net_from_pencil(pencil((1, 4), (2, 3)), 3, 10)
    assert np.all(net.values > 0) and net.order == 10
