"""Bessel functions of the first kind by their power series.

``I_nu(z) = (z/2)^nu sum_k (z^2/4)^k / (k! Gamma(nu + k + 1))`` and the
alternating series for ``J_nu``.  Scalar evaluators report the number of terms
and a bound on the discarded tail.

Array helpers for density evaluation on large grids delegate to
``scipy.special`` and build the entire function
``G_nu(y) = sum_k y^k / (k! Gamma(k + nu + 1))``, which equals
``y^(-nu/2) I_nu(2 sqrt(y))`` for y > 0 and ``|y|^(-nu/2) J_nu(2 sqrt|y|)``
for y < 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np
import scipy.special as sc

from .errors import DomainError, TruncationError

MAX_TERMS = 500
Z_CAP = 700.0
STOP_RTOL = 1e-16
# J series in double precision loses about z/ln(10) digits to cancellation;
# above this argument the same series is summed with extra working precision
J_DOUBLE_LIMIT = 8.0


@dataclass(frozen=True)
class BesselEval:
    nu: float
    z: float
    value: float
    terms_used: int
    truncation_bound: float


def _check(nu, z):
    if nu < 0:
        raise DomainError("order nu must be >= 0")
    if z < 0:
        raise DomainError("only the real branch z >= 0 is supported")
    if z > Z_CAP:
        raise TruncationError(f"argument {z} exceeds the series safety bound {Z_CAP}")


def _tail_bound(q, k, nu, last):
    r = abs(q) / ((k + 1) * (nu + k + 1))
    return abs(last) * r / (1 - r) if r < 1 else math.inf


def _series(nu: float, z: float, sign: int):
    """Sum the series in double precision; returns (sum, terms, last term, ratio arg)."""
    q = sign * z * z / 4.0
    term = math.exp(-math.lgamma(nu + 1.0))
    total = term
    k = 0
    while True:
        term *= q / ((k + 1) * (nu + k + 1))
        k += 1
        total += term
        if term == 0 or abs(term) < STOP_RTOL * abs(total):
            break
        if k + 1 >= MAX_TERMS:
            raise TruncationError(f"series for nu={nu}, z={z} did not converge in {MAX_TERMS} terms")
    return total, k + 1, term, q


def _series_mp(nu: float, z: float, sign: int):
    """Same series in extended precision (used for J at larger z)."""
    dps = 20 + int(z / math.log(10)) + 5
    with mpmath.workdps(dps):
        zz, nn = mpmath.mpf(z), mpmath.mpf(nu)
        q = sign * zz * zz / 4
        term = 1 / mpmath.gamma(nn + 1)
        total = term
        k = 0
        while True:
            # the order must stay in working precision: cancellation amplifies
            # any rounding in the denominators
            term *= q / ((k + 1) * (nn + k + 1))
            k += 1
            total += term
            if term == 0 or abs(term) < STOP_RTOL * abs(total):
                break
            if k + 1 >= MAX_TERMS:
                raise TruncationError(f"series for nu={nu}, z={z} did not converge in {MAX_TERMS} terms")
        value = (zz / 2) ** nn * total
        return float(value), k + 1, float(term * (zz / 2) ** nn), float(q)


def _prefactor(nu, z):
    if nu == 0:
        return 1.0
    return (z / 2.0) ** nu


def bessel_I(nu: float, z: float) -> BesselEval:
    """Modified Bessel function I_nu(z) for z in [0, 700]."""
    nu, z = float(nu), float(z)
    _check(nu, z)
    total, terms, last, q = _series(nu, z, +1)
    pre = _prefactor(nu, z)
    bound = _tail_bound(q, terms - 1, nu, last * pre)
    return BesselEval(nu, z, pre * total, terms, bound)


def bessel_J(nu: float, z: float) -> BesselEval:
    """Bessel function J_nu(z) for z in [0, 700]."""
    nu, z = float(nu), float(z)
    _check(nu, z)
    if z > J_DOUBLE_LIMIT:
        value, terms, last, q = _series_mp(nu, z, -1)
        return BesselEval(nu, z, value, terms, _tail_bound(q, terms - 1, nu, last))
    total, terms, last, q = _series(nu, z, -1)
    pre = _prefactor(nu, z)
    return BesselEval(nu, z, pre * total, terms, _tail_bound(q, terms - 1, nu, last * pre))


# ---------------------------------------------------------------- array helpers

def _series_array(nu: float, z: np.ndarray, sign: int) -> np.ndarray:
    """Vectorised series sum without the (z/2)^nu prefactor."""
    q = sign * z * z / 4.0
    term = np.full_like(z, math.exp(-math.lgamma(nu + 1.0)))
    total = term.copy()
    for k in range(MAX_TERMS - 1):
        term = term * q / ((k + 1) * (nu + k + 1))
        total = total + term
        if not np.any((term != 0) & (np.abs(term) >= STOP_RTOL * np.abs(total))):
            return total
    raise TruncationError(f"array series for nu={nu} did not converge in {MAX_TERMS} terms")


def iv_scaled(nu: float, z) -> np.ndarray:
    """e^{-z} I_nu(z) for arrays z >= 0 (no overflow for large z)."""
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise DomainError("z must be >= 0")
    return sc.ive(nu, z)


def jv_array(nu: float, z) -> np.ndarray:
    """J_nu(z) for arrays z >= 0."""
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise DomainError("z must be >= 0")
    return sc.jv(nu, z)


def log_g(nu: float, y) -> np.ndarray:
    """log G_nu(y) for y >= 0, with G_nu(y) = sum y^k / (k! Gamma(k + nu + 1))."""
    y = np.asarray(y, dtype=float)
    if np.any(y < 0):
        raise DomainError("log_g needs y >= 0")
    out = np.empty_like(y)
    tiny = y < 1e-6
    if tiny.any():
        yt = y[tiny]
        out[tiny] = -math.lgamma(nu + 1.0) + np.log1p(yt / (nu + 1.0) + yt * yt / (2.0 * (nu + 1.0) * (nu + 2.0)))
    rest = ~tiny
    if rest.any():
        yr = y[rest]
        z = 2.0 * np.sqrt(yr)
        out[rest] = np.log(iv_scaled(nu, z)) + z - 0.5 * nu * np.log(yr)
    return out


def g_function(nu: float, y) -> np.ndarray:
    """G_nu(y) for real y (I form for y >= 0, J form for y < 0)."""
    y = np.asarray(y, dtype=float)
    out = np.empty_like(y)
    pos = y >= 0
    if pos.any():
        out[pos] = np.exp(log_g(nu, y[pos]))
    neg = ~pos
    if neg.any():
        a = -y[neg]
        z = 2.0 * np.sqrt(a)
        small = z <= J_DOUBLE_LIMIT
        vals = np.empty_like(a)
        if small.any():
            # no prefactor cancellation issue: evaluate the G series directly
            vals[small] = _series_array(nu, z[small], -1)
        if (~small).any():
            vals[~small] = jv_array(nu, z[~small]) * a[~small] ** (-0.5 * nu)
        out[neg] = vals
    return out


def g_series(nu: float, y: float, terms: int = MAX_TERMS) -> float:
    """Raw power series of G_nu at a scalar, summed in extended precision."""
    with mpmath.workdps(40 + int(2 * math.sqrt(abs(y)) / math.log(10))):
        y = mpmath.mpf(y)
        term = 1 / mpmath.gamma(nu + 1)
        total = term
        for k in range(terms - 1):
            term *= y / ((k + 1) * (nu + k + 1))
            total += term
            if abs(term) < mpmath.mpf(10) ** (-35) * max(abs(total), mpmath.mpf(10) ** (-300)):
                break
        return float(total)
