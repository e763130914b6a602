"""Quadrature rules: Gregory-corrected trapezoid sums and Gauss-Legendre panels."""
from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.signal import fftconvolve
from scipy.special import bernoulli

GREGORY_ORDER = 7
# direct convolution below this many multiply-adds, FFT above
DIRECT_CONV_LIMIT = 4_000_000


@lru_cache(maxsize=None)
def gregory_end_weights(r: int) -> tuple:
    """End weights w_0..w_{r-1} of the Gregory rule with r corrected points.

    Interior weights are 1.  The corrections satisfy
    sum_j (w_j - 1) j^p = -1/2 for p = 0 and (-1)^(p+1) B_{p+1}/(p+1) for
    1 <= p < r, which makes the composite rule exact for polynomials of degree
    below r plus the Euler-Maclaurin endpoint terms.
    """
    if r < 1:
        raise ValueError("r >= 1")
    B = bernoulli(r + 1)
    rhs = [-0.5] + [(-1) ** (p + 1) * B[p + 1] / (p + 1) for p in range(1, r)]
    V = np.array([[float(j) ** p if (j or p) else 1.0 for j in range(r)] for p in range(r)])
    return tuple(1.0 + np.linalg.solve(V, rhs))


@lru_cache(maxsize=None)
def newton_cotes_weights(n: int) -> tuple:
    """Closed Newton-Cotes weights on n equispaced points, unit spacing."""
    if n == 1:
        return (0.0,)
    x = np.arange(n, dtype=float)
    V = np.vander(x, n, increasing=True).T
    L = n - 1
    moments = np.array([L ** (p + 1) / (p + 1) for p in range(n)], dtype=float)
    return tuple(np.linalg.solve(V, moments))


def _short_rule(n: int) -> np.ndarray:
    """Positive-weight rule on n points (n < 2 * GREGORY_ORDER)."""
    if n <= 8:
        return np.array(newton_cotes_weights(n))
    r = n // 2
    w = np.ones(n)
    e = np.array(gregory_end_weights(r))
    w[:r] = e
    w[n - r:] = e[::-1]
    return w


def gregory_weights(n: int, r: int = GREGORY_ORDER) -> np.ndarray:
    """Weights (unit spacing) for n equispaced samples over their full span."""
    if n < 2 * r:
        return _short_rule(n)
    w = np.ones(n)
    e = np.array(gregory_end_weights(r))
    w[:r] = e
    w[n - r:] = e[::-1]
    return w


def corrected_convolution(f: np.ndarray, g: np.ndarray, h: float,
                          r: int = GREGORY_ORDER) -> np.ndarray:
    """c_i ~ integral_0^{ih} f(v) g(ih - v) dv on the sample grid.

    Both inputs are samples from 0 with spacing h, taken as zero past their
    ends.  Point i uses the Gregory rule over [0, ih], whose weights are all
    positive; the first few points integrate local interpolants instead.
    """
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    nf, ng = f.size, g.size
    n = nf + ng - 1
    if nf * ng <= DIRECT_CONV_LIMIT:
        c = np.convolve(f, g)
    else:
        c = fftconvolve(f, g)
    e = np.array(gregory_end_weights(r)) - 1.0
    fp = np.concatenate([f, np.zeros(max(0, n - nf))])
    gp = np.concatenate([g, np.zeros(max(0, n - ng))])
    i = np.arange(n)
    start = 2 * r - 1
    for p in range(r):
        if e[p] == 0:
            continue
        idx = i[start:] - p
        c[start:] += e[p] * (fp[p] * gp[idx] + gp[p] * fp[idx])
    for k in range(1, min(start, n)):
        K = _start_kernel(k)
        q = K.shape[0]
        fq = np.concatenate([f[:q], np.zeros(max(0, q - nf))])
        gq = np.concatenate([g[:q], np.zeros(max(0, q - ng))])
        c[k] = fq @ K @ gq
    c[0] = 0.0
    return h * c


START_DEGREE = 8


@lru_cache(maxsize=None)
def _start_kernel(i: int) -> np.ndarray:
    """K[a, b] = integral_0^i L_a(x) L_b(i - x) dx for Lagrange bases on 0..q.

    Near the origin the convolution interval holds too few samples for a
    Gregory rule, so both factors are replaced by their interpolants through
    the first q + 1 samples and the product is integrated exactly.
    """
    q = max(i, START_DEGREE)
    nodes = np.arange(q + 1, dtype=float)
    x, w = gauss_legendre(q + 2)
    x = 0.5 * i * (x + 1.0)
    w = 0.5 * i * w
    V = np.vander(nodes, q + 1, increasing=True)

    def basis(pts):
        P = np.vander(pts, q + 1, increasing=True)
        return np.linalg.solve(V.T, P.T)  # row a = L_a(pts)
    La = basis(x)
    Lb = basis(i - x)
    return (La * w) @ Lb.T


def gauss_legendre(n: int):
    """Nodes and weights on [-1, 1]."""
    return np.polynomial.legendre.leggauss(n)


def panel_rule(edges, nodes_per_panel: int):
    """Composite Gauss-Legendre rule on consecutive panels [edges[i], edges[i+1]]."""
    x, w = gauss_legendre(nodes_per_panel)
    edges = np.asarray(edges, dtype=float)
    lo, hi = edges[:-1, None], edges[1:, None]
    nodes = 0.5 * (hi - lo) * x[None, :] + 0.5 * (hi + lo)
    weights = 0.5 * (hi - lo) * w[None, :]
    return nodes.ravel(), weights.ravel()


def geometric_edges(first: float, last: float, ratio: float = 2.0):
    """0, first, first*ratio, ... ending exactly at last."""
    edges = [0.0, min(first, last)]
    while edges[-1] < last:
        nxt = edges[-1] * ratio
        # fold a short remainder into the final panel
        edges.append(last if nxt * (1 + 0.5 * (ratio - 1)) >= last else nxt)
    return np.array(edges)


def half_line_rule(rate_max: float, rate_min: float, tail: float = 45.0,
                   nodes_per_panel: int = 10, ratio: float = 2.0):
    """Rule for integrals over [0, inf) of e^{-rate u} times slowly varying factors.

    The first panel resolves the fastest rate; panels grow geometrically up to
    ``tail / rate_min``.
    """
    first = min(0.5 / rate_max, tail / rate_min)
    return panel_rule(geometric_edges(first, tail / rate_min, ratio), nodes_per_panel)
