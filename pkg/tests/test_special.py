import math

import mpmath
import numpy as np
import pytest

from momenta.errors import DomainError, TruncationError
from momenta.special import (bessel_I, bessel_J, g_function, g_series,
                             iv_scaled, log_g)


def test_I_examples():
    assert bessel_I(0, 0).value == 1.0
    oracle = sum(1 / math.factorial(k) ** 2 for k in range(30))
    assert bessel_I(0, 2).value == pytest.approx(oracle, rel=1e-15)
    assert bessel_I(0, 2).value == pytest.approx(2.2795853, abs=1e-7)
    assert bessel_I(1, 0).value == 0.0


def test_I_increasing():
    vals = [bessel_I(1.5, z).value for z in np.linspace(0, 50, 101)]
    assert np.all(np.diff(vals) > 0)


def test_J_examples():
    assert bessel_J(0, 0).value == 1.0
    j = bessel_J(0, 3).value
    assert j < 0 and j == pytest.approx(-0.26, abs=5e-3)


def test_J0_first_zero_by_bisection():
    lo, hi = 2.0, 3.0
    assert bessel_J(0, lo).value > 0 > bessel_J(0, hi).value
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if bessel_J(0, mid).value > 0:
            lo = mid
        else:
            hi = mid
    assert 2 < lo < 3
    assert lo == pytest.approx(float(mpmath.besseljzero(0, 1)), abs=1e-12)


@pytest.mark.parametrize("nu", [0, 1, 2, 0.5, 3.7])
@pytest.mark.parametrize("z", [0.1, 1.0, 5.0, 20.0, 80.0])
def test_against_mpmath(nu, z):
    i = bessel_I(nu, z)
    j = bessel_J(nu, z)
    assert i.value == pytest.approx(float(mpmath.besseli(nu, z)), rel=1e-13)
    ref = float(mpmath.besselj(nu, z))
    assert abs(j.value - ref) <= 1e-13 * max(abs(ref), 1e-3 * float(mpmath.besseli(nu, 0) + 1))


def test_truncation_bound_invariant():
    for nu in (0, 1, 2.5):
        for z in (0.5, 3, 30, 300):
            e = bessel_I(nu, z)
            assert e.truncation_bound <= 1e-14 * abs(e.value) or e.terms_used == 500


@pytest.mark.parametrize("z", [0.5, 1, 2, 5])
def test_recurrence(z):
    lhs = bessel_I(0, z).value - bessel_I(2, z).value
    rhs = 2 / z * bessel_I(1, z).value
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_caps_and_domain():
    with pytest.raises(TruncationError):
        bessel_I(0, 701)
    with pytest.raises(TruncationError):
        bessel_J(0, 701)
    with pytest.raises(OverflowError):
        bessel_I(0, 1000)
    with pytest.raises(DomainError):
        bessel_I(-1, 1)
    with pytest.raises(DomainError):
        bessel_J(0, -1)


def test_J_large_argument_hits_term_cap():
    # the alternating series needs more than 500 terms well before the cap
    with pytest.raises(TruncationError):
        bessel_J(0, 650)


def test_g_function_against_series():
    for nu in (0, 1, 2):
        for y in (-400.0, -30.0, -2.0, -1e-3, 0.0, 1e-8, 0.5, 10.0, 300.0):
            ref = g_series(nu, y)
            got = float(g_function(nu, np.array([y]))[0])
            assert abs(got - ref) <= 1e-12 * max(abs(ref), 1e-3 / math.gamma(nu + 1))


def test_log_g_large_argument():
    y = 1e5
    ref = float(mpmath.log(mpmath.besseli(1, 2 * mpmath.sqrt(y)) / mpmath.sqrt(y)))
    assert float(log_g(1, np.array([y]))[0]) == pytest.approx(ref, rel=1e-13)


def test_iv_scaled_domain():
    with pytest.raises(DomainError):
        iv_scaled(0, np.array([-1.0]))
