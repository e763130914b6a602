"""Complete monotonicity of sequences and nets, and the root criteria for pencils.

Difference tests scan ``(-1)^|beta| Delta^beta f(alpha)`` order by order.  A
truncated scan can certify failure but never monotonicity, so a clean scan is
reported as ``Pass`` meaning "no violation up to the checked order".

Tolerances are relative: at order ``k`` a value is a violation when it is
below ``-tol * scale_k``, where ``scale_k`` is the largest magnitude among all
differences of that order.  Float nets also have a rounding floor of roughly
``2^k * eps * max|f|``.  A violation larger than the floor is a witness; one
hidden inside the floor makes the verdict ``Inconclusive``.  Nets of
``Fraction`` entries are scanned exactly and have no rounding floor.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (CoincidentRootError, DegreeError, DomainError,
                     OrderExhaustedError, PreconditionError)
from .poly_core import (BilinearPoly, FactoredPoly, MomentNet, PencilPoly,
                        _diff)

DEFAULT_TOL = 1e-9
_EPS = np.finfo(float).eps


class Decision(str, enum.Enum):
    PASS = "Pass"
    FAIL = "FailWitness"
    INCONCLUSIVE = "Inconclusive"


class MixedVerdict(str, enum.Enum):
    SUFFICIENT = "Sufficient"
    NECESSARY_FAIL = "NecessaryFail"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class JcmVerdict:
    """Outcome of a truncated difference scan.

    ``witness`` is ``(beta, alpha, value)`` with ``value`` the signed quantity
    ``(-1)^|beta| Delta^beta f(alpha)``; ``margin`` is the smallest such value
    met during the scan.
    """

    decision: Decision
    witness: Optional[tuple] = None
    max_order_checked: int = 0
    margin: float = math.inf
    tol: float = DEFAULT_TOL
    exact: bool = False

    @property
    def passed(self) -> bool:
        return self.decision is Decision.PASS

    def to_dict(self):
        w = None
        if self.witness is not None:
            beta, alpha, value = self.witness
            w = {"beta": list(beta), "alpha": list(alpha), "value": float(value)}
        return {"decision": self.decision.value, "witness": w,
                "max_order_checked": self.max_order_checked,
                "margin": float(self.margin), "tol": self.tol, "exact": self.exact}


def _is_exact(values: np.ndarray) -> bool:
    return values.dtype == object


def _scan(blocks: Iterable, tol: float, exact: bool, fmax: float) -> JcmVerdict:
    """Shared decision logic.

    ``blocks`` yields ``(k, beta, signed_array)`` grouped by increasing k;
    ``signed_array`` already carries the factor (-1)^k.
    """
    margin = math.inf
    inconclusive = None
    checked = 0
    by_order: dict = {}
    for k, beta, arr in blocks:
        by_order.setdefault(k, []).append((beta, arr))
    for k in sorted(by_order):
        group = by_order[k]
        if exact:
            scale = max((abs(v) for _, arr in group for v in arr.flat), default=Fraction(0))
            thresh = Fraction(tol) * scale
            floor = Fraction(0)
        else:
            scale = max((float(np.max(np.abs(arr))) for _, arr in group if arr.size), default=0.0)
            thresh = tol * scale
            floor = 4.0 * (2.0 ** k) * _EPS * fmax
        for beta, arr in group:
            if arr.size == 0:
                continue
            lo = arr.min()
            margin = min(margin, float(lo))
            if lo >= -thresh:
                continue
            # first alpha in lexicographic order below the threshold
            bad = np.argwhere(arr < -max(thresh, floor))
            if bad.size:
                alpha = tuple(int(i) for i in bad[0])
                return JcmVerdict(Decision.FAIL, (tuple(beta), alpha, float(arr[alpha])),
                                  k, margin, tol, exact)
            if inconclusive is None:
                idx = tuple(int(i) for i in np.argwhere(arr < -thresh)[0])
                inconclusive = (tuple(beta), idx, float(arr[idx]))
        checked = k
    if inconclusive is not None:
        return JcmVerdict(Decision.INCONCLUSIVE, inconclusive, checked, margin, tol, exact)
    return JcmVerdict(Decision.PASS, None, checked, margin, tol, exact)


def _as_array(seq) -> np.ndarray:
    if isinstance(seq, np.ndarray):
        return seq
    items = list(seq)
    if any(isinstance(v, Fraction) for v in items):
        out = np.empty(len(items), dtype=object)
        out[:] = [Fraction(v) for v in items]
        return out
    return np.asarray(items, dtype=float)


def is_cm_sequence(seq: Sequence, max_order: int, tol: float = DEFAULT_TOL) -> JcmVerdict:
    """Truncated complete-monotonicity test of a sequence.

    A sequence of ``Fraction`` values is tested in exact arithmetic.
    """
    arr = _as_array(seq)
    if max_order >= len(arr):
        raise OrderExhaustedError(f"need more than {max_order} terms, got {len(arr)}")
    exact = _is_exact(arr)
    fmax = 0.0 if exact else float(np.max(np.abs(arr)))

    def blocks():
        d = arr
        for k in range(max_order + 1):
            yield k, (k,), d if k % 2 == 0 else -d
            d = np.diff(d)
    return _scan(blocks(), tol, exact, fmax)


def is_jcm_net(net: MomentNet, max_total_order: int, tol: float = DEFAULT_TOL) -> JcmVerdict:
    """Truncated joint complete-monotonicity test of a net.

    All beta with |beta| <= max_total_order are checked, in increasing |beta|,
    then lexicographic beta, then lexicographic alpha.
    """
    if not isinstance(net, MomentNet):
        net = MomentNet(net)
    if max_total_order > net.order:
        raise OrderExhaustedError(
            f"order {max_total_order} exceeds what a net of shape {net.shape} supports")
    v = net.values
    exact = net.exact
    fmax = 0.0 if exact else float(np.max(np.abs(v)))

    def blocks():
        # cache axis-0 differences so each beta costs a single pass
        rows = [v]
        for _ in range(max_total_order):
            rows.append(np.diff(rows[-1], axis=0))
        for k in range(max_total_order + 1):
            sign = 1 if k % 2 == 0 else -1
            for b1 in range(k + 1):
                b2 = k - b1
                d = _diff(rows[b1], b2, 1)
                yield k, (b1, b2), d if sign > 0 else -d
    return _scan(blocks(), tol, exact, fmax)


def minimality_estimate(seq: Sequence, max_order: int, tol: float = DEFAULT_TOL) -> float:
    """(-1)^K Delta^K seq(0) at K = max_order.

    For a moment sequence of mu this equals the integral of (1 - s)^K, which
    decreases in K to mu({0}).
    """
    verdict = is_cm_sequence(seq, max_order, tol)
    if verdict.decision is Decision.FAIL:
        raise PreconditionError(f"sequence is not completely monotone: {verdict.witness}")
    return _alternating_difference_at_zero(seq, max_order)


def _alternating_difference_at_zero(seq, K: int) -> float:
    arr = _as_array(seq)[: K + 1]
    d = _diff(arr, K, 0)[0]
    return float(d if K % 2 == 0 else -d)


def minimality_profile(seq: Sequence, orders: Iterable[int], tol: float = DEFAULT_TOL) -> list:
    """minimality_estimate at several orders."""
    return [minimality_estimate(seq, K, tol) for K in orders]


def atom_at_zero_extrapolation(seq: Sequence, orders: Sequence[int] = (8, 16, 32)) -> float:
    """Richardson-style extrapolation of the estimates to K = infinity.

    Assumes the estimate behaves like mu({0}) + C / K^g for large K.  Fits
    (mu0, C, g) from three orders; for exactly geometric decay of the excess
    this recovers mu0.  Diagnostic only.
    """
    e = [_alternating_difference_at_zero(seq, K) for K in orders]
    e1, e2, e3 = e
    denom = (e1 - e2) - (e2 - e3)
    if denom == 0:
        return e3
    return max(0.0, e3 - (e2 - e3) ** 2 / denom)


def _check_same_degree(a: FactoredPoly, b: FactoredPoly):
    if a.degree != b.degree:
        raise DegreeError(f"deg a = {a.degree} but deg b = {b.degree}")


def interlacing_S(a: FactoredPoly, b: FactoredPoly) -> bool:
    """b1 <= a1 <= b2 <= a2 <= ... <= bk <= ak on sorted roots."""
    _check_same_degree(a, b)
    chain = [v for pair in zip(b.roots, a.roots) for v in pair]
    return all(x <= y for x, y in zip(chain, chain[1:]))


def mean_inequalities_N(a: FactoredPoly, b: FactoredPoly):
    """(harmonic, geometric, arithmetic) root-mean inequalities."""
    _check_same_degree(a, b)
    if any(r == 0 for r in a.roots) or any(r == 0 for r in b.roots):
        raise DomainError("harmonic test needs nonzero roots")
    harmonic = sum(1 / r for r in a.roots) <= sum(1 / r for r in b.roots)
    geometric = math.prod(b.roots) <= math.prod(a.roots)
    arithmetic = sum(b.roots) <= sum(a.roots)
    return bool(harmonic), bool(geometric), bool(arithmetic)


def bilinear_criterion(p: BilinearPoly):
    """(M, M >= 0) with M = bc - ad."""
    M = p.M
    return M, bool(M >= 0)


def bidegree21_sufficient(a: FactoredPoly, b: FactoredPoly) -> bool:
    """Sufficient condition for degree-2 pencils."""
    if a.degree != 2 or b.degree != 2:
        raise DegreeError("both factors must have degree 2")
    (a1, a2), (b1, b2) = a.roots, b.roots
    return bool((b1 <= a1 <= b2 or b1 <= a2 <= b2) and b1 + b2 <= a1 + a2)


def bidegree21_mixed(a: FactoredPoly, b: FactoredPoly) -> MixedVerdict:
    """Partial decision for deg a = 1, deg b = 2."""
    if a.degree != 1 or b.degree != 2:
        raise DegreeError("need deg a = 1 and deg b = 2")
    (a1,), (b1, b2) = a.roots, b.roots
    if b1 <= a1 <= b2:
        return MixedVerdict.SUFFICIENT
    if a1 == 0 or (b1 > 0 and 1 / a1 > 1 / b1 + 1 / b2):
        return MixedVerdict.NECESSARY_FAIL
    return MixedVerdict.INCONCLUSIVE


def derivative_necessary(p: PencilPoly, grid: Sequence[float], tol: float = 1e-12) -> bool:
    """a'(x) b(x) <= a(x) b'(x) at every grid point (up to relative tol)."""
    x = np.asarray(list(grid), dtype=float)
    if x.size == 0:
        raise DomainError("grid must be nonempty")
    lhs = np.asarray(p.a.derivative(x) * p.b(x), dtype=float)
    rhs = np.asarray(p.a(x) * p.b.derivative(x), dtype=float)
    return bool(np.all(lhs <= rhs + tol * (np.abs(lhs) + np.abs(rhs))))


def _distinct(roots, what="a"):
    if len(set(roots)) != len(roots):
        raise CoincidentRootError(f"{what}-roots must be distinct, got {roots}")


def hausdorff_obstruction(a: FactoredPoly, b: FactoredPoly, j: int, t0: float):
    """Witness point (s0, t0) where the j-th slice weight turns negative.

    Returns None when (-1)^j b(-a_j) >= 0 (j is 1-based, roots ascending).
    """
    _distinct(a.roots)
    if not 1 <= j <= a.degree:
        raise IndexError(f"j must lie in 1..{a.degree}")
    if not 0 < t0 < 1:
        raise DomainError("t0 must lie in (0, 1)")
    aj = a.roots[j - 1]
    if (-1) ** j * b(-aj) >= 0:
        return None
    prod = a.lead
    for l, al in enumerate(a.roots):
        if l != j - 1:
            prod *= al - aj
    cj = b(-aj) / prod
    return math.exp(1.0 / (cj * math.log(t0))), t0


def exp_combination_nonpositive(c1: float, c2: float, b1: float, b2: float) -> bool:
    """Whether c1 s^b1 + c2 s^b2 <= 0 on (0, 1), for b1 < b2."""
    if not b1 < b2:
        raise DomainError("need b1 < b2")
    return bool(c1 <= 0 and c1 + c2 <= 0)


def coefficient_matrix_tests(p):
    """Determinant tests on the coefficient matrix.

    Bilinear input gives (ad - bc, None).  A degree-(2,2) pencil gives
    (None, detB) with detB the determinant of the constant and linear
    coefficient rows, b0 a0 (b1 b2 (a1 + a2) - a1 a2 (b1 + b2)).
    """
    if isinstance(p, BilinearPoly):
        return p.a * p.d - p.b * p.c, None
    if isinstance(p, PencilPoly) and p.bidegree == (2, 2):
        (b1, b2), (a1, a2) = p.b.roots, p.a.roots
        B = np.array([[p.b.lead * b1 * b2, p.a.lead * a1 * a2],
                      [p.b.lead * (b1 + b2), p.a.lead * (a1 + a2)]], dtype=float)
        return None, float(B[0, 0] * B[1, 1] - B[0, 1] * B[1, 0])
    raise DegreeError("expected a bilinear polynomial or a degree-(2,2) pencil")


@dataclass
class CriteriaReport:
    """Root criteria for a pencil; None marks a test that does not apply."""

    interlacing_S: Optional[bool] = None
    harmonic_N: Optional[bool] = None
    geometric_N: Optional[bool] = None
    arithmetic_N: Optional[bool] = None
    derivative_necessary: Optional[bool] = None
    detail: dict = field(default_factory=dict)

    def to_dict(self):
        return {"interlacing_S": self.interlacing_S, "harmonic_N": self.harmonic_N,
                "geometric_N": self.geometric_N, "arithmetic_N": self.arithmetic_N,
                "derivative_necessary": self.derivative_necessary,
                "detail": dict(self.detail)}


def criteria_report(p: PencilPoly, grid: Optional[Sequence[float]] = None) -> CriteriaReport:
    """Evaluate every root criterion that applies to the pencil."""
    rep = CriteriaReport()
    if grid is None:
        grid = np.linspace(0.0, 20.0, 201)
    rep.derivative_necessary = derivative_necessary(p, grid)
    a, b = p.a, p.b
    if a.degree == b.degree and a.degree > 0:
        rep.interlacing_S = interlacing_S(a, b)
        if all(r > 0 for r in a.roots + b.roots):
            rep.harmonic_N, rep.geometric_N, rep.arithmetic_N = mean_inequalities_N(a, b)
    if a.degree == b.degree == 2:
        rep.detail["bidegree2_sufficient"] = bidegree21_sufficient(a, b)
        rep.detail["detB"] = coefficient_matrix_tests(p)[1]
    if a.degree == 1 and b.degree == 2:
        rep.detail["mixed"] = bidegree21_mixed(a, b).value
    if len(set(a.roots)) == len(a.roots) and a.degree == b.degree and a.degree > 0:
        signs = []
        for j in range(1, a.degree + 1):
            signs.append(hausdorff_obstruction(a, b, j, 0.5) is not None)
        rep.detail["slice_weight_obstruction"] = signs
    return rep
