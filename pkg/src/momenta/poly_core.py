"""Polynomials in factored form, pencils, partial fractions and difference calculus.

A one-variable polynomial is stored as ``lead * prod(x + r)`` with nonnegative
``r``, so the roots of the polynomial are the nonpositive numbers ``-r``.
Pencils are two-variable polynomials ``b(x) + a(x) y``.  Nets are finite
arrays ``f(m, n)`` and differences are forward differences along each axis.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Sequence

import numpy as np

from .errors import (DegreeError, DomainError, NearCoincidentPoleError,
                     OrderExhaustedError)

MERGE_TOL = 1e-9
SEPARATION_TOL = 1e-6


def _num(v):
    """Keep exact rationals exact, turn everything else into float."""
    if isinstance(v, (Fraction, int)) and not isinstance(v, bool):
        return v
    if isinstance(v, Real):
        return float(v)
    raise TypeError(f"expected a real number, got {type(v).__name__}")


@dataclass(frozen=True)
class FactoredPoly:
    """``lead * prod_j (x + roots[j])`` with ``lead > 0`` and ``roots >= 0``."""

    lead: Real
    roots: tuple = ()

    def __post_init__(self):
        lead = _num(self.lead)
        roots = tuple(sorted(_num(r) for r in self.roots))
        if not lead > 0 or not np.isfinite(float(lead)):
            raise DomainError(f"leading coefficient must be finite and > 0, got {lead}")
        for r in roots:
            if not r >= 0 or not np.isfinite(float(r)):
                raise DomainError(f"root entries must be finite and >= 0, got {r}")
        object.__setattr__(self, "lead", lead)
        object.__setattr__(self, "roots", roots)

    @property
    def degree(self) -> int:
        return len(self.roots)

    def __call__(self, x):
        out = self.lead
        for r in self.roots:
            out = out * (x + r)
        return out

    def derivative(self, x):
        """p'(x) from the factored form (sum over dropped factors)."""
        total = 0 * x
        for j in range(self.degree):
            term = self.lead
            for i, r in enumerate(self.roots):
                if i != j:
                    term = term * (x + r)
            total = total + term
        return total

    def log_derivative(self, x):
        """p'(x)/p(x) = sum_j 1/(x + r_j); requires x + r_j > 0."""
        return sum(1.0 / (x + r) for r in self.roots) if self.roots else 0.0 * x

    def coeffs(self) -> np.ndarray:
        """Dense coefficients, lowest degree first.

        Factors are multiplied in descending-magnitude root order, which keeps
        the partial products well scaled.
        """
        c = np.array([float(self.lead)])
        for r in sorted(self.roots, key=lambda v: -abs(float(v))):
            c = np.concatenate([c * float(r), [0.0]]) + np.concatenate([[0.0], c])
        return c

    def to_dict(self):
        return {"lead": float(self.lead), "roots": [float(r) for r in self.roots]}


@dataclass(frozen=True)
class PencilPoly:
    """p(x, y) = b(x) + a(x) y."""

    b: FactoredPoly
    a: FactoredPoly

    def __call__(self, x, y):
        return self.b(x) + self.a(x) * y

    @property
    def bidegree(self):
        return (self.b.degree, self.a.degree)

    def to_dict(self):
        return {"b": self.b.to_dict(), "a": self.a.to_dict()}


@dataclass(frozen=True)
class BilinearPoly:
    """p(x, y) = a + b x + c y + d x y with a > 0 and b, c, d >= 0."""

    a: Real
    b: Real = 0.0
    c: Real = 0.0
    d: Real = 0.0

    def __post_init__(self):
        vals = [_num(v) for v in (self.a, self.b, self.c, self.d)]
        for name, v in zip("abcd", vals):
            if not np.isfinite(float(v)):
                raise DomainError(f"coefficient {name} must be finite")
        if not vals[0] > 0:
            raise DomainError(f"constant term a must be > 0, got {vals[0]}")
        for name, v in zip("bcd", vals[1:]):
            if v < 0:
                raise DomainError(f"coefficient {name} must be >= 0, got {v}")
        for name, v in zip("abcd", vals):
            object.__setattr__(self, name, v)

    def __call__(self, x, y):
        return self.a + self.b * x + self.c * y + self.d * x * y

    @property
    def M(self):
        return self.b * self.c - self.a * self.d

    def as_pencil(self) -> PencilPoly:
        """Write p as b(x) + a(x) y; needs c + d x not identically zero."""
        if self.c == 0 and self.d == 0:
            raise DegreeError("a(x) = c + d x vanishes identically")
        return PencilPoly(b=_affine(self.a, self.b), a=_affine(self.c, self.d))

    def to_dict(self):
        return {"a": float(self.a), "b": float(self.b), "c": float(self.c), "d": float(self.d)}


def _affine(const, slope):
    if slope == 0:
        return FactoredPoly(const, ())
    return FactoredPoly(slope, (const / slope,))


@dataclass
class MomentNet:
    """Finite net f(m, n), 0 <= m <= rows-1, 0 <= n <= cols-1.

    Float nets use a float64 array.  Exact nets hold ``Fraction`` objects in an
    object array; every difference routine accepts both.
    """

    values: np.ndarray

    def __post_init__(self):
        v = self.values
        if not isinstance(v, np.ndarray):
            v = np.asarray(v)
            if v.dtype.kind not in "fO":
                v = v.astype(float)
        if v.ndim != 2:
            raise DomainError("a net is a 2-D array")
        if v.dtype != object and not np.all(np.isfinite(v)):
            raise DomainError("net entries must be finite")
        self.values = v

    @property
    def order(self) -> int:
        return min(self.values.shape) - 1

    @property
    def shape(self):
        return self.values.shape

    @property
    def exact(self) -> bool:
        return self.values.dtype == object

    def __getitem__(self, idx):
        return self.values[idx]


def eval_pencil(p, x, y):
    """b(x) + a(x) y for x, y >= 0."""
    if np.any(np.asarray(x) < 0) or np.any(np.asarray(y) < 0):
        raise DomainError("eval_pencil is defined on x, y >= 0")
    return p(x, y)


def _diff(v: np.ndarray, k: int, axis: int) -> np.ndarray:
    for _ in range(k):
        v = np.diff(v, axis=axis)
    return v


def forward_difference(net: MomentNet, beta: Sequence[int]) -> MomentNet:
    """Delta^beta f on the rectangle where every shifted index exists."""
    b1, b2 = (int(b) for b in beta)
    if b1 < 0 or b2 < 0:
        raise DomainError("difference orders are nonnegative")
    rows, cols = net.shape
    if b1 > rows - 1 or b2 > cols - 1:
        raise OrderExhaustedError(
            f"beta={b1, b2} needs a net of at least {(b1 + 1, b2 + 1)} entries, have {(rows, cols)}")
    return MomentNet(_diff(_diff(net.values, b1, 0), b2, 1))


def falling_factorial(alpha: Sequence[int], beta: Sequence[int]) -> int:
    """(alpha)_beta = prod_j alpha_j (alpha_j - 1) ... (alpha_j - beta_j + 1)."""
    out = 1
    for a, b in zip(alpha, beta):
        for i in range(int(b)):
            out *= int(a) - i
    return out


@dataclass(frozen=True)
class PartialFraction:
    """quotient(x) + sum coeff / (x + pole)**order.

    ``quotient`` lists dense coefficients lowest degree first.
    """

    quotient: tuple
    terms: tuple = field(default_factory=tuple)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.polynomial.polynomial.polyval(x, np.asarray(self.quotient, dtype=float))
        for pole, order, coeff in self.terms:
            out = out + coeff / (x + pole) ** order
        return out

    @property
    def c0(self) -> float:
        return float(self.quotient[0]) if len(self.quotient) == 1 else float("nan")

    def residual(self, num: FactoredPoly, den: FactoredPoly, points=None) -> float:
        """Largest relative reconstruction error over sample points in [0, 10]."""
        if points is None:
            points = np.linspace(0.0, 10.0, 21)
        x = np.asarray(points, dtype=float)
        ref = np.asarray(num(x), dtype=float) / np.asarray(den(x), dtype=float)
        got = self(x)
        return float(np.max(np.abs(got - ref) / np.maximum(np.abs(ref), 1e-300)))

    def to_dict(self):
        return {"quotient": [float(q) for q in self.quotient],
                "terms": [{"pole": float(p), "order": int(o), "coeff": float(c)}
                          for p, o, c in self.terms]}


def _cluster(roots, tol):
    """Group sorted roots whose neighbours are within tol; returns (value, mult)."""
    groups = []
    for r in sorted(float(v) for v in roots):
        if groups and r - groups[-1][-1] <= tol:
            groups[-1].append(r)
        else:
            groups.append([r])
    return [(float(np.mean(g)), len(g)) for g in groups]


def partial_fractions(num: FactoredPoly, den: FactoredPoly,
                      merge_tol: float = MERGE_TOL,
                      separation_tol: float = SEPARATION_TOL) -> PartialFraction:
    """Decompose num/den into a polynomial part plus simple and repeated pole terms.

    Denominator roots within ``merge_tol`` are merged into a repeated root.
    Distinct poles closer than ``separation_tol`` raise
    :class:`NearCoincidentPoleError`.  Factors shared by numerator and
    denominator cancel before decomposition.
    """
    if den.degree < 1:
        raise DegreeError("denominator must have degree >= 1")
    poles = _cluster(den.roots, merge_tol)
    for (p1, _), (p2, _) in zip(poles, poles[1:]):
        if p2 - p1 < separation_tol:
            raise NearCoincidentPoleError(
                f"poles {p1!r} and {p2!r} are closer than {separation_tol} but not equal; merge them first",
                pair=(p1, p2))

    # cancel common factors
    mult = {p: m for p, m in poles}
    num_left = []
    for r in num.roots:
        r = float(r)
        hit = next((p for p in mult if mult[p] > 0 and abs(p - r) <= merge_tol), None)
        if hit is None:
            num_left.append(r)
        else:
            mult[hit] -= 1
    poles = [(p, mult[p]) for p, _ in poles if mult[p] > 0]
    num_c = FactoredPoly(float(num.lead), tuple(num_left))
    den_roots = tuple(p for p, m in poles for _ in range(m))
    den_c = FactoredPoly(float(den.lead), den_roots)

    if den_c.degree == 0:
        q = num_c.coeffs() / float(den_c.lead)
        return PartialFraction(tuple(float(v) for v in q), ())

    if num_c.degree == den_c.degree:
        quotient = np.array([float(num_c.lead) / float(den_c.lead)])
    elif num_c.degree < den_c.degree:
        quotient = np.array([0.0])
    else:
        quotient, _ = np.polynomial.polynomial.polydiv(num_c.coeffs(), den_c.coeffs())

    if all(m == 1 for _, m in poles):
        terms = []
        for j, (aj, _) in enumerate(poles):
            prod = float(den_c.lead)
            for l, (al, _) in enumerate(poles):
                if l != j:
                    prod *= al - aj
            terms.append((aj, 1, float(num_c(-aj)) / prod))
        return PartialFraction(tuple(float(v) for v in quotient), tuple(terms))

    # repeated poles: least squares on Chebyshev-distributed sample points
    basis = [(p, o) for p, m in poles for o in range(1, m + 1)]
    n = 2 * len(basis) + 2
    hi = 2.0 * max(p for p, _ in poles) + 2.0
    k = np.arange(n)
    x = 0.5 * hi * (1.0 - np.cos(np.pi * (k + 0.5) / n))
    target = np.asarray(num_c(x), dtype=float) / np.asarray(den_c(x), dtype=float)
    target = target - np.polynomial.polynomial.polyval(x, quotient)
    A = np.column_stack([(x + p) ** (-float(o)) for p, o in basis])
    scale = np.max(np.abs(A), axis=0)
    sol, *_ = np.linalg.lstsq(A / scale, target, rcond=None)
    sol = sol / scale
    terms = tuple((p, o, float(c)) for (p, o), c in zip(basis, sol))
    return PartialFraction(tuple(float(v) for v in quotient), terms)


def _exact_poly(p):
    if isinstance(p, BilinearPoly):
        a, b, c, d = (Fraction(v) for v in (p.a, p.b, p.c, p.d))
        return lambda x, y: a + b * x + c * y + d * x * y
    bl, br = Fraction(p.b.lead), [Fraction(r) for r in p.b.roots]
    al, ar = Fraction(p.a.lead), [Fraction(r) for r in p.a.roots]

    def f(x, y):
        bv, av = bl, al
        for r in br:
            bv *= x + r
        for r in ar:
            av *= x + r
        return bv + av * y
    return f


def net_from_pencil(p, l: int = 1, N: int = 24, exact: bool = False) -> MomentNet:
    """The net 1/p(m, n)**l for 0 <= m, n <= N.

    With ``exact=True`` every entry is a ``Fraction`` computed from the exact
    binary values of the coefficients.
    """
    if l < 1 or N < 0:
        raise DomainError("need l >= 1 and N >= 0")
    if exact:
        f = _exact_poly(p)
        vals = np.empty((N + 1, N + 1), dtype=object)
        for m in range(N + 1):
            for n in range(N + 1):
                vals[m, n] = 1 / f(Fraction(m), Fraction(n)) ** l
        return MomentNet(vals)
    m, n = np.meshgrid(np.arange(N + 1.0), np.arange(N + 1.0), indexing="ij")
    return MomentNet(1.0 / np.asarray(p(m, n), dtype=float) ** l)
