"""Weighted 2-shifts: isometry classes, the toral Cauchy dual and its subnormality.

A weighted 2-shift on the index rectangle {0..N}^2 is stored by its two weight
arrays.  Everything is expressed through the squared-norm net
``||W^alpha e_0||^2``: toral m-isometries are the shifts whose net is a
polynomial of total degree below m, and the Cauchy dual has the reciprocal net.
Identities are asserted only where every shifted index exists.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import (CommutationError, DomainError, HypothesisError,
                     OrderExhaustedError)
from .monotonicity import Decision, is_jcm_net
from .poly_core import BilinearPoly, MomentNet, _diff, falling_factorial

COMMUTE_TOL = 1e-12
PATH_TOL = 1e-10
DEFAULT_TOL = 1e-9


@dataclass
class WeightedShift2:
    """Weights w1[alpha], w2[alpha] for alpha in {0..N}^2."""

    w1: np.ndarray
    w2: np.ndarray
    check: bool = field(default=True, repr=False, compare=False)
    _primal: Optional["WeightedShift2"] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.w1 = np.asarray(self.w1, dtype=float)
        self.w2 = np.asarray(self.w2, dtype=float)
        if self.w1.shape != self.w2.shape or self.w1.ndim != 2 or self.w1.shape[0] != self.w1.shape[1]:
            raise DomainError("w1 and w2 must be equal square arrays")
        if not (np.all(self.w1 > 0) and np.all(self.w2 > 0)):
            raise DomainError("weights must be > 0")
        if self.check:
            err = self.commutation_defect()
            if err > COMMUTE_TOL:
                raise CommutationError(f"weights do not commute: relative defect {err:.3g}")

    @property
    def order(self) -> int:
        return self.w1.shape[0] - 1

    def commutation_defect(self) -> float:
        """max |w1(a) w2(a+e1) - w2(a) w1(a+e2)| / |w1(a) w2(a+e1)|."""
        lhs = self.w1[:-1, :-1] * self.w2[1:, :-1]
        rhs = self.w2[:-1, :-1] * self.w1[:-1, 1:]
        if lhs.size == 0:
            return 0.0
        return float(np.max(np.abs(lhs - rhs) / np.abs(lhs)))

    def to_dict(self):
        return {"order": self.order, "w1": self.w1.tolist(), "w2": self.w2.tolist()}

    @classmethod
    def from_dict(cls, d):
        return cls(np.array(d["w1"], dtype=float), np.array(d["w2"], dtype=float))


def shift_from_net(net: Callable, N: int) -> WeightedShift2:
    """Shift whose squared-norm net is net(alpha) / net(0); net must be > 0."""
    i, j = np.meshgrid(np.arange(N + 1.0), np.arange(N + 1.0), indexing="ij")
    base = np.asarray(net(i, j), dtype=float)
    if np.any(base <= 0):
        raise DomainError("net values must be > 0 on the rectangle")
    w1 = np.sqrt(np.asarray(net(i + 1, j), dtype=float) / base)
    w2 = np.sqrt(np.asarray(net(i, j + 1), dtype=float) / base)
    return WeightedShift2(w1, w2)


def shift_from_poly(p: BilinearPoly, N: int) -> WeightedShift2:
    """w^(j)_alpha = sqrt(p(alpha + e_j) / p(alpha))."""
    if N < 1:
        raise DomainError("N >= 1")
    return shift_from_net(p, N)


def _path_net(shift: WeightedShift2, first_axis: int) -> np.ndarray:
    """Products of squared weights along axis-aligned two-leg paths."""
    s1, s2 = shift.w1 ** 2, shift.w2 ** 2
    n = shift.order + 1
    out = np.ones((n, n))
    if first_axis == 0:
        leg = np.concatenate([[1.0], np.cumprod(s1[:-1, 0])])  # along (k, 0)
        for i in range(n):
            out[i, :] = leg[i] * np.concatenate([[1.0], np.cumprod(s2[i, :-1])])
    else:
        leg = np.concatenate([[1.0], np.cumprod(s2[0, :-1])])
        for j in range(n):
            out[:, j] = leg[j] * np.concatenate([[1.0], np.cumprod(s1[:-1, j])])
    return out


def _random_path_value(shift: WeightedShift2, alpha, rng) -> float:
    s1, s2 = shift.w1 ** 2, shift.w2 ** 2
    steps = [0] * alpha[0] + [1] * alpha[1]
    rng.shuffle(steps)
    pos = [0, 0]
    val = 1.0
    for ax in steps:
        val *= s1[pos[0], pos[1]] if ax == 0 else s2[pos[0], pos[1]]
        pos[ax] += 1
    return val


def norm_net(shift: WeightedShift2, seed: int = 0) -> MomentNet:
    """||W^alpha e_0||^2 on the rectangle, via the staircase path.

    The alternate staircase and one random path per entry must agree to
    relative 1e-10.
    """
    net = _path_net(shift, 0)
    alt = _path_net(shift, 1)
    rel = np.abs(net - alt) / np.abs(net)
    if np.max(rel) > PATH_TOL:
        raise CommutationError(f"path-dependent norms: relative gap {np.max(rel):.3g}")
    rng = np.random.default_rng(seed)
    n = shift.order + 1
    alpha = (int(rng.integers(n)), int(rng.integers(n)))
    val = _random_path_value(shift, alpha, rng)
    if abs(val - net[alpha]) > PATH_TOL * abs(net[alpha]):
        raise CommutationError(f"random path to {alpha} disagrees with the staircase")
    return MomentNet(net)


def toral_m_isometry_check(shift: WeightedShift2, m: int, tol: float = DEFAULT_TOL):
    """(passes, max_defect): all |beta| = m differences of the net vanish.

    The defect is measured relative to max |net|.
    """
    if m < 1:
        raise DomainError("m >= 1")
    if m > shift.order:
        raise OrderExhaustedError(f"m = {m} exceeds the shift order {shift.order}")
    v = norm_net(shift).values
    scale = float(np.max(np.abs(v)))
    defect = 0.0
    for b1 in range(m + 1):
        d = _diff(_diff(v, b1, 0), m - b1, 1)
        if d.size:
            defect = max(defect, float(np.max(np.abs(d))) / scale)
    return bool(defect <= tol), defect


def newton_expansion(net: MomentNet, degree: int) -> np.ndarray:
    """sum over |beta| <= degree of Delta^beta net(0) / beta! * (alpha)_beta."""
    v = np.asarray(net.values, dtype=float)
    rows, cols = v.shape
    out = np.zeros_like(v)
    for b1 in range(degree + 1):
        for b2 in range(degree + 1 - b1):
            if b1 >= rows or b2 >= cols:
                continue
            coef = _diff(_diff(v, b1, 0), b2, 1)[0, 0] / (math.factorial(b1) * math.factorial(b2))
            ff = np.array([[falling_factorial((i, j), (b1, b2)) for j in range(cols)]
                           for i in range(rows)], dtype=float)
            out += coef * ff
    return out


def bcd_from_weights(shift: WeightedShift2):
    """(b, c, d) of the candidate net 1 + b a1 + a2 (c + a1 d)."""
    w10, w20, w2e1 = shift.w1[0, 0] ** 2, shift.w2[0, 0] ** 2, shift.w2[1, 0] ** 2
    return float(w10 - 1.0), float(w20 - 1.0), float(1.0 - w10 - w20 + w10 * w2e1)


def separate_2iso_check(shift: WeightedShift2, tol: float = DEFAULT_TOL):
    """(passes, b, c, d): the net equals 1 + a1 b + a2 (c + a1 d) within tol * max|net|."""
    b, c, d = bcd_from_weights(shift)
    v = norm_net(shift).values
    i, j = np.meshgrid(np.arange(v.shape[0]), np.arange(v.shape[1]), indexing="ij")
    model = 1.0 + i * b + j * (c + i * d)
    gap = float(np.max(np.abs(v - model))) / float(np.max(np.abs(v)))
    return bool(gap <= tol), b, c, d


def cauchy_dual(shift: WeightedShift2) -> WeightedShift2:
    """Entrywise reciprocal weights.

    The dual remembers its source, so dualizing twice returns the original
    weights bit for bit instead of 1/(1/w).
    """
    if shift._primal is not None:
        return shift._primal
    return WeightedShift2(1.0 / shift.w1, 1.0 / shift.w2, _primal=shift)


@dataclass
class IsometryReport:
    is_toral_m: dict
    is_separate_2: bool
    bcd: tuple
    max_defect: float
    rectangle: tuple = (0, 0)

    def to_dict(self):
        return {"is_toral_m": {str(k): v for k, v in self.is_toral_m.items()},
                "is_separate_2": self.is_separate_2, "bcd": list(self.bcd),
                "max_defect": self.max_defect, "rectangle": list(self.rectangle)}


def isometry_report(shift: WeightedShift2, ms=(1, 2, 3), tol: float = DEFAULT_TOL) -> IsometryReport:
    res, worst = {}, 0.0
    for m in ms:
        ok, defect = toral_m_isometry_check(shift, m, tol)
        res[m] = ok
        if ok:
            worst = max(worst, defect)
    sep, b, c, d = separate_2iso_check(shift, tol)
    n = shift.order + 1
    return IsometryReport(res, sep, (b, c, d), worst, (n, n))


@dataclass
class DualDecision:
    decision: bool
    method_agreement: bool
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return {"decision": self.decision, "method_agreement": self.method_agreement,
                "details": dict(self.details)}


def dual_subnormality_decision(shift: WeightedShift2, cross_check_order: int = 6,
                               tol: float = DEFAULT_TOL) -> DualDecision:
    """Whether the Cauchy dual of a toral 3-isometric, separate 2-isometric shift is subnormal.

    The decision is d = 0 or w^(2)_{e1} <= w^(2)_0.  It is compared with
    d <= bc and with a truncated joint complete-monotonicity scan of the
    dual's norm net.  A truncated scan that finds no violation is
    inconclusive (it cannot certify monotonicity) and agrees with either
    decision; only a witness against a positive decision is a disagreement.
    """
    ok3, defect = toral_m_isometry_check(shift, 3, tol)
    sep, b, c, d = separate_2iso_check(shift, tol)
    if not (ok3 and sep):
        raise HypothesisError("the shift must be a toral 3-isometry and a separate 2-isometry "
                              f"(toral-3 defect {defect:.3g}, separate-2 {sep})")
    scale = max(1.0, abs(b * c), abs(d))
    d_zero = abs(d) <= tol * scale
    by_weights = bool(d_zero or shift.w2[1, 0] <= shift.w2[0, 0] * (1.0 + tol))
    by_bcd = bool(d <= b * c + tol * scale)
    dual_net = MomentNet(1.0 / norm_net(shift).values)
    verdict = is_jcm_net(dual_net, min(cross_check_order, dual_net.order))
    witness = verdict.decision is Decision.FAIL
    agree = by_weights == by_bcd and not (by_weights and witness)
    return DualDecision(by_weights, bool(agree), {
        "b": b, "c": c, "d": d, "weights": by_weights, "d_le_bc": by_bcd,
        "jcm": verdict.decision.value, "jcm_confirms_fail": bool(witness and not by_weights), "jcm_witness": verdict.to_dict()["witness"],
        "w2_e1": float(shift.w2[1, 0]), "w2_0": float(shift.w2[0, 0]),
        "w1_e2": float(shift.w1[0, 1]), "w1_0": float(shift.w1[0, 0])})


def random_admissible_shift(rng: np.random.Generator, N: int = 8):
    """Draw (b, c, d) with b, c in [0, 5], d in [0, bc + 2] and build the shift."""
    b, c = rng.uniform(0, 5, size=2)
    d = rng.uniform(0, b * c + 2)
    return shift_from_poly(BilinearPoly(1.0, b, c, d), N), (float(b), float(c), float(d))


def two_isometry_shift(b: float, c: float, N: int) -> WeightedShift2:
    """Toral 2-isometry with net 1 + b a1 + c a2, weights read off the net."""
    return shift_from_net(lambda i, j: 1.0 + b * i + c * j, N)


def shift_json_roundtrip(shift: WeightedShift2) -> Optional[WeightedShift2]:
    return WeightedShift2.from_dict(shift.to_dict())
