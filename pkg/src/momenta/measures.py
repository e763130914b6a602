"""Representing measures, multiplicative convolution and moment verification.

Measures on [0, 1] are handled in the variable u = -log s.  A density
``rho(s) ds`` becomes ``g(u) du`` with ``g(u) = rho(e^{-u}) e^{-u}``, the moment
``integral s^n`` becomes the Laplace transform of ``g`` at ``n`` and
multiplicative convolution becomes ordinary convolution.  Densities are
sampled on uniform u-grids and integrated with Gregory-corrected trapezoid
sums; algebraic and logarithmic endpoint behaviour at s = 0 turns into smooth
exponential decay.

Every 1-D measure carries a ``log_scale``: stored masses and samples are
multiplied by ``exp(log_scale)``.  Slices of pencil measures have masses far
outside the double range, so values are kept normalised and the scale is
tracked separately.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import mpmath
import numpy as np

from .errors import (CoincidentRootError, DegreeError, DomainError,
                     EmptyMeasureError, PreconditionError, QuadratureError)
from .poly_core import BilinearPoly, FactoredPoly, PencilPoly, partial_fractions
from .quadrature import (corrected_convolution, gauss_legendre,
                         geometric_edges, gregory_weights, half_line_rule,
                         panel_rule)
from .special import g_function, iv_scaled, log_g

RULE = "gregory-7 on u = -log s"
TRIM_REL = 1e-22


# ------------------------------------------------------------------ 1-D


@dataclass
class DensityPiece:
    """Density in u sampled at ``shift + i * h``."""

    shift: float
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)


@dataclass
class Measure1D:
    """Atoms ``(s, mass)`` plus density pieces, all scaled by exp(log_scale)."""

    atoms: list = field(default_factory=list)
    pieces: list = field(default_factory=list)
    h: float = 0.0
    log_scale: float = 0.0

    # constructors
    @classmethod
    def atom(cls, s: float = 1.0, mass: float = 1.0) -> "Measure1D":
        if not 0.0 <= s <= 1.0:
            raise DomainError("atom locations lie in [0, 1]")
        return cls(atoms=[(float(s), float(mass))])

    @classmethod
    def from_u_density(cls, func, h: float, U: float, atoms=()) -> "Measure1D":
        """Sample ``func(u)`` (a density in u) on [0, U]."""
        n = int(math.ceil(U / h)) + 1
        u = np.arange(n) * h
        return cls(atoms=[(float(s), float(m)) for s, m in atoms],
                   pieces=[DensityPiece(0.0, func(u))], h=float(h))

    @classmethod
    def power_density(cls, a: float, h: float, weight: float = 1.0, tail: float = 45.0) -> "Measure1D":
        """weight * s^(a-1) ds, whose moments are weight / (n + a)."""
        return cls.from_u_density(lambda u: weight * np.exp(-a * u), h, tail / a)

    @classmethod
    def lebesgue(cls, h: float = 0.01, tail: float = 45.0) -> "Measure1D":
        return cls.power_density(1.0, h, tail=tail)

    # queries
    @property
    def is_empty(self) -> bool:
        return not self.atoms and not any(p.values.size for p in self.pieces)

    def _piece_moments(self, piece: DensityPiece, ns: np.ndarray) -> np.ndarray:
        L = piece.values.size
        if L == 0:
            return np.zeros(ns.shape)
        if L == 1:
            return np.zeros(ns.shape)
        w = gregory_weights(L) * self.h
        u = piece.shift + np.arange(L) * self.h
        return np.exp(-np.outer(ns, u)) @ (w * piece.values)

    def normalized_moments(self, ns) -> np.ndarray:
        """Moments without the exp(log_scale) factor."""
        ns = np.atleast_1d(np.asarray(ns, dtype=float))
        out = np.zeros(ns.shape)
        for s, m in self.atoms:
            out += m * np.where(ns == 0, 1.0, s ** ns)
        for p in self.pieces:
            out += self._piece_moments(p, ns)
        return out

    def moments(self, ns) -> np.ndarray:
        return math.exp(self.log_scale) * self.normalized_moments(ns)

    def moment(self, n: float) -> float:
        return float(self.moments([n])[0])

    def total_mass(self) -> float:
        return self.moment(0)

    def atom_at_zero(self) -> float:
        return math.exp(self.log_scale) * sum(m for s, m in self.atoms if s == 0.0)

    def min_density(self) -> float:
        """Smallest stored (normalised) density sample; +inf without density."""
        vals = [p.values.min() for p in self.pieces if p.values.size]
        return float(min(vals)) if vals else math.inf

    @property
    def quadrature_rule(self) -> str:
        return RULE

    def s_view(self):
        """(s_nodes, density in s) per piece, unscaled; s = e^{-u}."""
        out = []
        for p in self.pieces:
            u = p.shift + np.arange(p.values.size) * self.h
            out.append((np.exp(-u), p.values * np.exp(u)))
        return out

    def to_dict(self):
        return {"atoms": [{"s": s, "mass": m} for s, m in self.atoms],
                "pieces": [{"shift": p.shift, "values": p.values.tolist()} for p in self.pieces],
                "h": self.h, "log_scale": self.log_scale, "rule": RULE}

    @classmethod
    def from_dict(cls, d):
        return cls(atoms=[(a["s"], a["mass"]) for a in d["atoms"]],
                   pieces=[DensityPiece(p["shift"], np.array(p["values"], dtype=float))
                           for p in d["pieces"]],
                   h=d["h"], log_scale=d["log_scale"])


def _trim(piece: DensityPiece, h: float) -> Optional[DensityPiece]:
    v = piece.values
    if v.size == 0:
        return None
    big = np.abs(v) > TRIM_REL * np.max(np.abs(v))
    if not big.any():
        return None
    idx = np.nonzero(big)[0]
    lo, hi = idx[0], idx[-1] + 1
    # keep the left end when it carries the grid origin of a smooth density
    if lo < 8:
        lo = 0
    return DensityPiece(piece.shift + lo * h, v[lo:hi].copy())


def _merge_pieces(pieces, h):
    merged: list = []
    for p in pieces:
        for q in merged:
            if abs(q.shift - p.shift) <= 1e-12 * max(1.0, abs(p.shift)):
                n = max(q.values.size, p.values.size)
                v = np.zeros(n)
                v[:q.values.size] += q.values
                v[:p.values.size] += p.values
                q.values = v
                break
        else:
            merged.append(DensityPiece(p.shift, p.values.copy()))
    out = [_trim(p, h) for p in merged]
    return [p for p in out if p is not None]


def _merge_atoms(atoms):
    acc: dict = {}
    for s, m in atoms:
        acc[s] = acc.get(s, 0.0) + m
    return sorted(acc.items())


def _piece_mass(piece: DensityPiece, h: float) -> float:
    if piece.values.size < 2:
        return 0.0
    return float(h * gregory_weights(piece.values.size) @ piece.values)


def mult_convolve(mu: Measure1D, nu: Measure1D) -> Measure1D:
    """Multiplicative convolution: the pushforward of mu x nu under (x, y) -> xy.

    Atoms multiply locations and masses, an atom at x > 0 shifts a density by
    -log x in u, an atom at 0 absorbs the whole mass of the other factor, and
    two densities convolve additively in u.
    """
    if mu.is_empty or nu.is_empty:
        raise EmptyMeasureError("cannot convolve an empty measure")
    hs = {m.h for m in (mu, nu) if m.pieces}
    if len(hs) > 1:
        raise DomainError(f"density grids differ: h = {sorted(hs)}")
    h = hs.pop() if hs else 0.0
    atoms = [(x * y, m * n) for x, m in mu.atoms for y, n in nu.atoms]
    pieces = []
    for A, B in ((mu, nu), (nu, mu)):
        for x, m in A.atoms:
            for p in B.pieces:
                if x == 0.0:
                    atoms.append((0.0, m * _piece_mass(p, h)))
                else:
                    pieces.append(DensityPiece(p.shift - math.log(x), m * p.values))
    for p in mu.pieces:
        for q in nu.pieces:
            pieces.append(DensityPiece(p.shift + q.shift, corrected_convolution(p.values, q.values, h)))
    return Measure1D(atoms=_merge_atoms(atoms), pieces=_merge_pieces(pieces, h), h=h,
                     log_scale=mu.log_scale + nu.log_scale)


# ------------------------------------------------------------------ weights


def _check_open_unit(*arrays):
    for a in arrays:
        a = np.asarray(a)
        if np.any((a <= 0) | (a >= 1)):
            raise DomainError("s and t must lie strictly inside (0, 1)")


def weight_wj(s, t, aj: float, cj: float, ratio: float, k: int):
    """Slice weight w_j(s, t) of the pencil construction.

    Closed form with I_1 for cj < 0; for cj >= 0 the series
    sum_l (cj log t)^l (-log s)^(l-1) / ((l-1)! l!) (summed through its J_1
    form at large arguments).
    """
    _check_open_unit(s, t)
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    u, v = -np.log(s), -np.log(t)
    log_pre = -v * (ratio - 1.0) / k - u * (aj - 1.0)
    X = -cj * v  # cj log t
    if cj == 0:
        return np.zeros(np.broadcast(s, t).shape)
    if cj < 0:
        y = X * u  # -cj log s log t
        z = 2.0 * np.sqrt(y)
        out = np.exp(log_pre + np.log(X) - 0.5 * np.log(y) + np.log(iv_scaled(1.0, z)) + z)
        return out[()] if out.ndim == 0 else out
    out = np.exp(log_pre) * X * g_function(1.0, X * u)
    return out[()] if out.ndim == 0 else out


def weight_wj_series(s: float, t: float, aj: float, cj: float, ratio: float, k: int,
                     max_terms: int = 2000) -> float:
    """The raw power series of w_j at one point, in extended precision."""
    _check_open_unit(s, t)
    with mpmath.workdps(50):
        ls, lt = mpmath.log(s), mpmath.log(t)
        X = cj * lt
        total = mpmath.mpf(0)
        term = X  # l = 1: (cj log t)^1 (-log s)^0 / (0! 1!)
        for l in range(1, max_terms):
            total += term
            nxt = term * X * (-ls) / (l * (l + 1))
            if abs(nxt) < mpmath.mpf(10) ** -45 * max(abs(total), mpmath.mpf(10) ** -300):
                break
            term = nxt
        pre = t ** ((ratio - 1.0) / k) * mpmath.mpf(s) ** (aj - 1.0)
        return float(pre * total)


# ------------------------------------------------------------------ 2-D


KINDS = ("ClosedFormDensity", "AtomicLine", "SliceFamily")


@dataclass
class SliceData:
    """Slices nu_t at t = e^{-v}; the dt-integral uses weights ``v_weights e^{-v}``."""

    v_nodes: np.ndarray
    v_weights: np.ndarray
    slices: list

    def summary(self):
        return [{"v": float(v), "t": math.exp(-v), "log_scale": sl.log_scale,
                 "atom_at_one": float(sum(m for s, m in sl.atoms if s == 1.0)),
                 "min_density": sl.min_density(), "h": sl.h,
                 "samples": int(sum(p.values.size for p in sl.pieces))}
                for v, sl in zip(self.v_nodes, self.slices)]


@dataclass
class Measure2D:
    """A representing measure on [0, 1]^2.

    ``params`` holds what is needed to rebuild the measure; ``grid`` is a
    sampled density for output (``values[i][j]`` at ``(s_nodes[i],
    t_nodes[j])``, density w.r.t. ds dt); ``line`` describes a measure carried
    by the curve ``(e^{-s_rate r}, e^{-t_rate r})``, r >= 0, with density in r.
    """

    kind: str
    params: dict
    atoms: list = field(default_factory=list)
    grid: Optional[dict] = None
    line: Optional[dict] = None
    slices: Optional[SliceData] = None
    signed: bool = False
    notes: list = field(default_factory=list)

    def density(self, s, t):
        """Closed-form density w.r.t. ds dt."""
        if self.kind != "ClosedFormDensity":
            raise DomainError("only closed-form measures have a pointwise density")
        P = self.params
        _check_open_unit(s, t)
        u, v = -np.log(np.asarray(s, dtype=float)), -np.log(np.asarray(t, dtype=float))
        return _bilinear_uv_density(P["a"], P["b"], P["c"], P["d"], P["l"], u, v) * np.exp(u + v)

    def min_slice_density(self) -> float:
        if self.slices is None:
            raise DomainError("not a slice family")
        return min(sl.min_density() for sl in self.slices.slices)

    def to_dict(self):
        d = {"kind": self.kind, "params": self.params,
             "atoms": [{"s": s, "t": t, "mass": m} for s, t, m in self.atoms],
             "grid": self.grid, "line": self.line, "signed": self.signed,
             "notes": list(self.notes)}
        if self.slices is not None:
            d["slices"] = {"v_nodes": self.slices.v_nodes.tolist(),
                           "v_weights": self.slices.v_weights.tolist(),
                           "summary": self.slices.summary()}
        return d

    @classmethod
    def from_dict(cls, d):
        m = cls(kind=d["kind"], params=d["params"],
                atoms=[(a["s"], a["t"], a["mass"]) for a in d["atoms"]],
                grid=d.get("grid"), line=d.get("line"), signed=d.get("signed", False),
                notes=list(d.get("notes", [])))
        # slice families are rebuilt from their parameters when moments are needed
        return m


def _bilinear_uv_density(a, b, c, d, l, u, v):
    """omega(e^{-u}, e^{-v}) e^{-u-v}: the density in (u, v) coordinates.

    omega = s^{c/d-1} t^{b/d-1} (log s log t)^{l-1} G_{l-1}(M log s log t / d^2)
    / (d^l (l-1)!), which is the I_{l-1} closed form for M > 0, the polynomial
    form for M = 0 and the J_{l-1} form for M < 0.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    M = b * c - a * d
    uv = u * v
    base = -(c / d) * u - (b / d) * v - l * math.log(d) - math.lgamma(l)
    if l > 1:
        with np.errstate(divide="ignore"):
            base = base + (l - 1) * np.log(uv)
    y = M * uv / (d * d)
    if M >= 0:
        return np.exp(base + log_g(l - 1, y))
    return np.exp(base) * g_function(l - 1, y)


def omega_closed_form(p: BilinearPoly, l: int, s, t):
    """Literal I_{l-1} closed form of the density for M > 0, d > 0."""
    a, b, c, d = float(p.a), float(p.b), float(p.c), float(p.d)
    M = b * c - a * d
    if not (M > 0 and d > 0):
        raise PreconditionError("closed form with I_{l-1} needs M > 0 and d > 0")
    _check_open_unit(s, t)
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    LL = np.log(s) * np.log(t)
    z = (2.0 / d) * np.sqrt(M * LL)
    log_val = ((c / d - 1) * np.log(s) + (b / d - 1) * np.log(t) - math.log(d) - math.lgamma(l)
               + 0.5 * (l - 1) * np.log(LL / M) + np.log(iv_scaled(l - 1, z)) + z)
    return np.exp(log_val)


def _gl01(n):
    x, w = gauss_legendre(n)
    return 0.5 * (x + 1.0), 0.5 * w


def measure_bilinear(p: BilinearPoly, l: int = 1, allow_signed: bool = False,
                     grid_nodes: int = 64) -> Measure2D:
    """Representing measure of 1/p(m, n)^l for a bilinear p.

    d > 0 gives a density (signed when M < 0 and ``allow_signed``), d = 0
    gives a measure on a curve, and b = c = d = 0 an atom at (1, 1).
    """
    if l < 1:
        raise DomainError("l >= 1")
    a, b, c, d = float(p.a), float(p.b), float(p.c), float(p.d)
    M = b * c - a * d
    params = {"family": "bilinear", "a": a, "b": b, "c": c, "d": d, "l": int(l)}
    if M < 0 and not allow_signed:
        raise PreconditionError(f"bilinear criterion fails: M = bc - ad = {M} < 0, "
                                "no positive representing measure exists")
    sn, _ = _gl01(grid_nodes)
    if d > 0:
        m = Measure2D("ClosedFormDensity", params, signed=M < 0)
        S, T = np.meshgrid(sn, sn, indexing="ij")
        m.grid = {"s_nodes": sn.tolist(), "t_nodes": sn.tolist(), "values": m.density(S, T).tolist()}
        if M < 0:
            m.notes.append("signed density: M < 0")
        return m
    if b == 0 and c == 0:
        return Measure2D("AtomicLine", params, atoms=[(1.0, 1.0, 1.0 / a ** l)])
    if b > 0:
        coef, rate, s_rate, t_rate = b, a / b, 1.0, c / b
    else:
        coef, rate, s_rate, t_rate = c, a / c, 0.0, 1.0
    r = -np.log(sn)
    dens = r ** (l - 1) * np.exp(-rate * r) / (coef ** l * math.factorial(l - 1))
    # density along the curve w.r.t. its coordinate x = e^{-r} (s, or t when s = 1)
    line = {"s_rate": s_rate, "t_rate": t_rate, "rate": rate, "coef": coef,
            "exponent": (t_rate / s_rate) if s_rate else None,
            "parameter": "s" if s_rate else "t",
            "s_nodes": sn.tolist(), "values": (dens / sn).tolist()}
    return Measure2D("AtomicLine", params, line=line)


# ------------------------------------------------------------------ pencils


@dataclass
class _Factor:
    """Normalised factor: atom at s=1 plus density e^{-a u} * shape(u)."""

    a: float
    X: float = 0.0          # c_j log t for slice factors, 0 for base factors
    atom: float = 0.0
    coef: float = 1.0
    kind: str = "exp"       # "exp": coef e^{-au};  "w": coef X e^{-au} G_1(X u)
    log_scale: float = 0.0

    def support(self, tail: float = 45.0) -> float:
        if self.kind == "w" and self.X > 0:
            return (math.sqrt(self.X) / self.a + math.sqrt(tail / self.a)) ** 2
        return tail / self.a

    def rate(self) -> float:
        if self.kind != "w" or self.X == 0:
            return self.a
        ax = abs(self.X)
        if self.X > 0 and ax / self.a >= 35.0:
            uL = (math.sqrt(ax) / self.a - math.sqrt(35.0 / self.a)) ** 2
            return self.a + min(ax / 5.0, math.sqrt(ax / uL))
        return self.a + ax / 5.0

    def sample(self, h: float, n: int) -> np.ndarray:
        u = np.arange(n) * h
        if self.kind == "exp":
            return self.coef * np.exp(-self.a * u)
        if self.X > 0:
            return self.coef * self.X * np.exp(-self.a * u + log_g(1.0, self.X * u))
        return self.coef * self.X * np.exp(-self.a * u) * g_function(1.0, self.X * u)

    def measure(self, h: float, U: float) -> Measure1D:
        n = int(math.ceil(min(U, self.support()) / h)) + 1
        atoms = [(1.0, self.atom)] if self.atom else []
        return Measure1D(atoms=atoms, pieces=[DensityPiece(0.0, self.sample(h, n))],
                         h=h, log_scale=self.log_scale)


def _base_factors(a: FactoredPoly, numerator: Optional[FactoredPoly]):
    """Factors whose convolution represents numerator(m)/a(m)."""
    num_roots = list(numerator.roots) if numerator is not None else []
    lead = (float(numerator.lead) if numerator is not None else 1.0) / float(a.lead)
    if len(num_roots) > a.degree:
        raise DegreeError("numerator degree exceeds deg a")
    factors = []
    a_roots = [float(r) for r in a.roots]
    for ci, ai in zip(sorted(num_roots), a_roots):
        ci = float(ci)
        if ci == 0:
            raise DomainError("numerator roots must be > 0")
        # (m + ci)/(m + ai) = 1 + (ci - ai)/(m + ai); mass ci/ai
        mass = ci / ai
        factors.append(_Factor(ai, atom=1.0 / mass, coef=(ci - ai) / mass, log_scale=math.log(mass)))
    for ai in a_roots[len(num_roots):]:
        factors.append(_Factor(ai, coef=ai, log_scale=-math.log(ai)))
    factors[0].log_scale += math.log(lead)
    return factors


def _slice_factors(poles, c0: float, v: float):
    k = len(poles)
    out = []
    for aj, cj in poles:
        X = -cj * v
        share = -v * (c0 - 1.0) / k  # log of t^{(c0-1)/k}
        if cj <= 0:
            # mass of delta_1 + w: e^{X/a}
            norm = X / aj
            out.append(_Factor(aj, X=X, atom=math.exp(-norm), coef=math.exp(-norm), kind="w",
                               log_scale=share + norm))
        else:
            # signed weight: normalise by the total-variation bound 1 + |X|/a
            norm = math.log1p(abs(X) / aj)
            out.append(_Factor(aj, X=X, atom=math.exp(-norm), coef=math.exp(-norm), kind="w",
                               log_scale=share + norm))
    return out


@dataclass(frozen=True)
class PencilPlan:
    """Partial-fraction data driving the slice construction."""

    c0: float
    poles: tuple            # ((a_j, c_j), ...)
    gamma_min: float
    gamma_max: float
    signed: bool


def plan_pencil(p: PencilPoly, n_max: int = 8) -> PencilPlan:
    if any(float(r) <= 0 for r in p.a.roots):
        raise DomainError("the slice construction needs a-roots > 0")
    if p.b.degree > p.a.degree:
        raise DegreeError("the slice construction needs deg b <= deg a")
    pf = partial_fractions(p.b, p.a)
    if any(o > 1 for _, o, _ in pf.terms):
        raise CoincidentRootError("a-roots must be distinct after cancelling common factors")
    c0 = float(pf.quotient[0])
    poles = tuple((float(aj), float(cj)) for aj, _, cj in pf.terms)
    gam = [float(p.b(m) / p.a(m)) for m in range(n_max + 1)]
    return PencilPlan(c0, poles, min(gam), max(gam), any(cj > 0 for _, cj in poles))


def build_slice(plan: PencilPlan, base: list, v: float, h_scale: float = 0.2,
                n_max: int = 8, max_samples: int = 1 << 21) -> Measure1D:
    """nu_t at t = e^{-v}: the base measure convolved with every slice factor.

    The step resolves both the fastest factor and the moment weight e^{-n u}
    for n <= n_max.
    """
    factors = list(base)
    if plan.poles:
        factors += _slice_factors(plan.poles, plan.c0, v)
    else:
        factors[0] = _Factor(**{**factors[0].__dict__, "log_scale": factors[0].log_scale - v * (plan.c0 - 1.0)})
    h = h_scale / (max(f.rate() for f in factors) + n_max)
    U = sum(f.support() for f in factors)
    if U / h > max_samples:
        raise QuadratureError(f"slice at v={v} needs {U / h:.3g} samples (cap {max_samples})")
    out = factors[0].measure(h, U)
    for f in factors[1:]:
        out = mult_convolve(out, f.measure(h, U))
    return out


def measure_pencil(p: PencilPoly, numerator: Optional[FactoredPoly] = None,
                   t_grid=None, s_grid_size: Optional[int] = None, *,
                   n_max: int = 8, nodes_per_panel: int = 10, h_scale: float = 0.2,
                   tail: float = 21.0) -> Measure2D:
    """Slice-family representing measure nu_t(ds) dt of numerator(m)/p(m, n).

    ``t_grid`` may be None (automatic rule in v = -log t), an int (total number
    of slices, spread over the same panels), or a pair (t_nodes, t_weights)
    of a quadrature rule for dt on (0, 1).  ``s_grid_size`` is a minimum number
    of u-samples per slice.
    """
    plan = plan_pencil(p, n_max)
    base = _base_factors(p.a, numerator)
    if t_grid is None or isinstance(t_grid, (int, np.integer)):
        lam_max = n_max + plan.gamma_max
        first = min(0.5 / lam_max, tail / plan.gamma_min)
        edges = geometric_edges(first, tail / plan.gamma_min)
        npp = nodes_per_panel
        if t_grid is not None:
            npp = max(4, int(t_grid) // (len(edges) - 1))
        v_nodes, v_w = panel_rule(edges, npp)
    else:
        t_nodes, t_w = (np.asarray(x, dtype=float) for x in t_grid)
        _check_open_unit(t_nodes, 0.5)
        v_nodes = -np.log(t_nodes)
        v_w = t_w / t_nodes  # dt = t dv
    slices = []
    for v in v_nodes:
        hs = h_scale
        if s_grid_size:
            hs = h_scale  # refined below if too coarse
        sl = build_slice(plan, base, float(v), hs, n_max)
        if s_grid_size and sum(q.values.size for q in sl.pieces) < s_grid_size:
            factor = s_grid_size / max(1, sum(q.values.size for q in sl.pieces))
            sl = build_slice(plan, base, float(v), hs / factor, n_max)
        slices.append(sl)
    params = {"family": "pencil", "p": p.to_dict(),
              "numerator": numerator.to_dict() if numerator is not None else None,
              "n_max": n_max, "nodes_per_panel": nodes_per_panel, "h_scale": h_scale,
              "tail": tail, "c0": plan.c0,
              "poles": [{"a": aj, "c": cj} for aj, cj in plan.poles]}
    m = Measure2D("SliceFamily", params, slices=SliceData(np.asarray(v_nodes), np.asarray(v_w), slices),
                  signed=plan.signed)
    if plan.signed:
        msg = "some c_j > 0: slice weights may be negative (signed construction)"
        m.notes.append(msg)
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
    sn, _ = _gl01(32)
    m.grid = _slice_grid(m.slices, sn)
    return m


def _slice_grid(data: SliceData, s_nodes: np.ndarray) -> dict:
    """Sample every slice density (w.r.t. ds dt) at the given s nodes."""
    u_t = -np.log(s_nodes)
    values = np.zeros((s_nodes.size, len(data.slices)))
    for j, sl in enumerate(data.slices):
        col = np.zeros(s_nodes.size)
        for piece in sl.pieces:
            grid_u = piece.shift + np.arange(piece.values.size) * sl.h
            col += np.interp(u_t, grid_u, piece.values, left=0.0, right=0.0)
        with np.errstate(over="ignore"):
            values[:, j] = col * np.exp(u_t + sl.log_scale)
    return {"s_nodes": s_nodes.tolist(), "t_nodes": np.exp(-data.v_nodes).tolist(),
            "values": values.tolist()}


# ------------------------------------------------------------------ verification


def _tensor_moments(fun, u_rule, v_rule, M, N):
    (u, wu), (v, wv) = u_rule, v_rule
    F = fun(u[:, None], v[None, :])
    A = np.exp(-np.outer(np.arange(M + 1), u)) * wu
    B = np.exp(-np.outer(np.arange(N + 1), v)) * wv
    return A @ F @ B.T


def _closed_form_moments(P, M, N, npp):
    a, b, c, d, l = P["a"], P["b"], P["c"], P["d"], P["l"]
    Mq = b * c - a * d
    x = np.linspace(0.0, 1.0, 2001)
    kappa = np.min(c * x + b * (1 - x) - 2.0 * math.sqrt(max(Mq, 0.0)) * np.sqrt(x * (1 - x))) / d
    if kappa <= 0:
        raise QuadratureError("density does not decay along every ray")
    R = 50.0 / kappa
    for _ in range(20):
        R = (50.0 + 2.0 * (l - 1) * math.log(max(R, 1.0))) / kappa
    fast = max(c / d + M, b / d + N)
    rule = panel_rule(geometric_edges(min(0.25 / fast, R), R), npp)
    fun = lambda u, v: _bilinear_uv_density(a, b, c, d, l, u, v)  # noqa: E731
    return _tensor_moments(fun, rule, rule, M, N)


def _line_moments(line, l, M, N, npp):
    m = np.arange(M + 1)[:, None]
    n = np.arange(N + 1)[None, :]
    lam = m * line["s_rate"] + n * line["t_rate"]
    lo, hi = line["rate"] + float(lam.min()), line["rate"] + float(lam.max())
    R = (50.0 + 2 * (l - 1) * math.log(50.0 / lo + 1)) / lo
    r, w = panel_rule(geometric_edges(min(0.25 / hi, R), R), npp)
    dens = r ** (l - 1) * np.exp(-line["rate"] * r) / (line["coef"] ** l * math.factorial(l - 1))
    E = np.exp(-np.multiply.outer(lam, r))
    return E @ (w * dens)


def _slice_moments(data: SliceData, M, N):
    ms = np.arange(M + 1)
    out = np.zeros((M + 1, N + 1))
    logs = []
    for v, wv, sl in zip(data.v_nodes, data.v_weights, data.slices):
        nm = sl.normalized_moments(ms)
        logs.append((v, wv, sl.log_scale, nm))
    for n in range(N + 1):
        for v, wv, ls, nm in logs:
            out[:, n] += nm * math.exp(math.log(wv) + ls - v * (n + 1))
    return out


def _moment_array(measure: Measure2D, M, N, refine_level=0):
    P = measure.params
    if measure.kind == "ClosedFormDensity":
        return _closed_form_moments(P, M, N, 10 + 6 * refine_level)
    if measure.kind == "AtomicLine":
        out = np.zeros((M + 1, N + 1))
        ms, ns = np.arange(M + 1)[:, None], np.arange(N + 1)[None, :]
        for s, t, mass in measure.atoms:
            out += mass * np.where(ms == 0, 1.0, s ** ms) * np.where(ns == 0, 1.0, t ** ns)
        if measure.line is not None:
            out += _line_moments(measure.line, P["l"], M, N, 10 + 6 * refine_level)
        return out
    if measure.kind == "SliceFamily":
        data = measure.slices
        if data is None or refine_level:
            fam = measure_pencil(_pencil_from_dict(P["p"]),
                                 _factored_from_dict(P["numerator"]),
                                 n_max=max(P["n_max"], M, N),
                                 nodes_per_panel=P["nodes_per_panel"] + 4 * refine_level,
                                 h_scale=P["h_scale"] / (1 + refine_level),
                                 tail=P["tail"])
            data = fam.slices
        return _slice_moments(data, M, N)
    raise DomainError(f"unknown measure kind {measure.kind}")


def _factored_from_dict(d):
    return None if d is None else FactoredPoly(d["lead"], tuple(d["roots"]))


def _pencil_from_dict(d):
    return PencilPoly(b=_factored_from_dict(d["b"]), a=_factored_from_dict(d["a"]))


def _targets(p, l, numerator, M, N):
    m, n = np.meshgrid(np.arange(M + 1.0), np.arange(N + 1.0), indexing="ij")
    pv = np.asarray(p(m, n), dtype=float) ** l
    cv = np.ones_like(pv) if numerator is None else np.asarray(numerator(m), dtype=float)
    return pv, cv


def verify_moments(measure: Measure2D, p, l: int = 1, M: int = 8, N: int = 8,
                   numerator: Optional[FactoredPoly] = None, refine: Optional[bool] = None) -> float:
    """max over m <= M, n <= N of |moment * p(m, n)^l - c(m)| / |c(m)|.

    With ``refine`` (default on for closed forms, off for slice families,
    whose refinement rebuilds every slice) the computation is repeated on a
    finer rule; QuadratureError is raised when refinement fails to halve an
    error above 1e-11.
    """
    if refine is None:
        refine = measure.kind != "SliceFamily"
    pv, cv = _targets(p, l, numerator, M, N)
    err = np.max(np.abs(_moment_array(measure, M, N) * pv - cv) / np.abs(cv))
    if refine:
        err2 = np.max(np.abs(_moment_array(measure, M, N, refine_level=1) * pv - cv) / np.abs(cv))
        if err2 > 1e-11 and err2 > 0.5 * err:
            raise QuadratureError(f"refinement did not halve the error ({err:.3g} -> {err2:.3g})")
        err = min(err, err2) if err2 <= err else err2
    return float(err)


def asymptote_family(b: float, c: float, d: float, Ms: Sequence[float] = (1e-1, 1e-2, 1e-3)):
    """Bilinear polynomials with fixed b, c, d and M = bc - ad = each of Ms."""
    return [BilinearPoly((b * c - M) / d, b, c, d) for M in Ms]


def asymptote_grid(n: int = 16) -> np.ndarray:
    """Interior uniform nodes i/(n+1), i = 1..n."""
    return np.arange(1, n + 1) / (n + 1.0)


def asymptote_check(p: BilinearPoly, l: int = 1, grid: Optional[Sequence[float]] = None) -> float:
    """sup over grid x grid of |omega_{M,l} - omega_{0,l}|.

    omega_{0,l} is the density of the polynomial with the same b, c, d and
    a = bc/d (so M = 0).
    """
    a, b, c, d = float(p.a), float(p.b), float(p.c), float(p.d)
    if d == 0:
        raise DomainError("the asymptote needs d != 0")
    if b * c - a * d < 0:
        raise PreconditionError("the asymptote family has M >= 0")
    g = asymptote_grid() if grid is None else np.asarray(grid, dtype=float)
    S, T = np.meshgrid(g, g, indexing="ij")
    u, v = -np.log(S), -np.log(T)
    wM = _bilinear_uv_density(a, b, c, d, l, u, v) / (S * T)
    w0 = _bilinear_uv_density(b * c / d, b, c, d, l, u, v) / (S * T)
    return float(np.max(np.abs(wM - w0)))
