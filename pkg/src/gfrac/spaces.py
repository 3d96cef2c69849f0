"""Gaussian L^p norms, Triebel-Lizorkin functionals, and Hardy inequalities.

The smoothness functional implemented here measures the decay of time
derivatives of the Poisson-Hermite extension u(x, t) = P_t f(x):

    seminorm(f)  =  || ( int_0^inf ( t^(k-a) |d^k u / dt^k| )^q dt )^(1/q) ||_{p, gamma_d}
    norm(f)      =  || f ||_{p, gamma_d} + seminorm(f)

with smoothness a >= 0, integrability exponents p, q in [1, inf), and
any derivative order k > a.  On finite expansions u^(k) is an explicit
exponential sum per chaos level, so the inner t-integral is evaluated
per x-node on a log-spaced ``TimeGrid`` (the integrand decays like a
power of t at zero and exponentially at infinity) and the outer norm by
Gauss-Hermite quadrature.  For p = q = 2 the quadrature is exact for
polynomial inputs.

The weighted Hardy inequalities drive every boundedness estimate in the
verification suite and are checked here as computable two-sided
functionals (truncated to [1e-8, 50] by default, both sides sharing the
same grid so the p = 1 cases keep their exact-equality structure):

    int_0^inf ( int_0^x g )^p x^(-r-1) dx  <=  (p/r) int_0^inf (y g(y))^p y^(-r-1) dy
    int_0^inf ( int_x^inf g )^p x^(r-1) dx <=  (p/r) int_0^inf (y g(y))^p y^(r-1) dy

together with the k-fold Minkowski variant bounding the iterated cube
integral by a unit-cube average of scaled one-dimensional integrals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .hermite import (
    GaussHermiteGrid,
    HermiteExpansion,
    _sample,
    chaos_projection,
    evaluate_on_grid,
    gauss_hermite_grid,
)
from .semigroups import TimeGrid, default_time_grid

__all__ = [
    "TLNormParams",
    "TLNormEvaluator",
    "default_tl_order",
    "lp_gamma_norm",
    "tl_seminorm",
    "tl_norm",
    "hardy_check_1",
    "hardy_check_2",
    "hardy_check_k",
    "HARDY_LOWER",
    "HARDY_UPPER",
    "HARDY_COUNT",
]


def default_tl_order(alpha: float) -> int:
    """Smallest integer strictly greater than alpha."""
    return int(math.floor(alpha)) + 1


@dataclass(frozen=True)
class TLNormParams:
    """Parameters (alpha, p, q, k) of the smoothness norm, with k > alpha."""

    alpha: float
    p: float
    q: float
    k: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "q", float(self.q))
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")
        if self.p < 1 or self.q < 1:
            raise ValueError("p and q must be >= 1")
        if self.k is None:
            object.__setattr__(self, "k", default_tl_order(self.alpha))
        else:
            object.__setattr__(self, "k", int(self.k))
        if not self.k > self.alpha:
            raise ValueError(f"derivative order k={self.k} must exceed alpha={self.alpha}")


def _default_x_grid(f: HermiteExpansion) -> GaussHermiteGrid:
    # degree + 2 nodes per axis: exact for degree-by-degree products
    return gauss_hermite_grid(f.dimension, max(f.degree + 2, 2))


def _pow(values: np.ndarray, exponent: float):
    """Elementwise power with fast paths for the small integer exponents
    that dominate the norm computations."""
    if exponent == 1.0:
        return values
    if exponent == 2.0:
        return values * values
    if exponent == 3.0:
        return values * values * values
    return values ** exponent


def lp_gamma_norm(f, p: float, grid: GaussHermiteGrid | None = None) -> float:
    """L^p norm against gamma_d of an expansion or a vectorized sampler."""
    if p < 1:
        raise ValueError("p must be >= 1")
    if grid is None:
        if not isinstance(f, HermiteExpansion):
            raise ValueError("a grid is required for sampler inputs")
        grid = _default_x_grid(f)
    if isinstance(f, HermiteExpansion):
        values = evaluate_on_grid(f, grid)
    else:
        values = _sample(f, grid.points())
    return float(np.dot(grid.point_weights(), _pow(np.abs(values), p)) ** (1.0 / p))


def _chaos_matrix(f: HermiteExpansion, grid: GaussHermiteGrid):
    """Per-order slice values on the grid: orders n >= 1 and a (levels, N) array."""
    orders = [n for n in f.orders if n >= 1]
    if not orders:
        return orders, np.zeros((0, grid.nodes_per_axis ** grid.dimension))
    rows = [evaluate_on_grid(chaos_projection(f, n), grid) for n in orders]
    return orders, np.stack(rows)


class TLNormEvaluator:
    """Norm machinery for one expansion on one x-grid.

    Precomputes the expansion's values and chaos slices on the grid and
    caches the per-order derivative magnitudes |u^(k)(x, t)| and inner
    t-integrals, so that evaluating several (alpha, p, q, k) parameter
    sets (as the verification suites do) touches the large (x, t)
    arrays only once per distinct (k, time-grid, q).
    """

    def __init__(self, f: HermiteExpansion, xg: GaussHermiteGrid | None = None):
        self.expansion = f
        self.grid = xg if xg is not None else _default_x_grid(f)
        self.point_weights = self.grid.point_weights()
        self.values = evaluate_on_grid(f, self.grid)
        self.orders, self.chaos = _chaos_matrix(f, self.grid)
        self._roots = np.sqrt(np.asarray(self.orders, dtype=float))
        self._abs_uk: dict = {}
        self._inner: dict = {}

    def lp_norm(self, p: float) -> float:
        if p < 1:
            raise ValueError("p must be >= 1")
        return float(np.dot(self.point_weights, _pow(np.abs(self.values), p)) ** (1.0 / p))

    def _derivative_magnitudes(self, k: int, tg: TimeGrid):
        key = (k, id(tg))
        if key not in self._abs_uk:
            decay = (-self._roots[:, None]) ** k * np.exp(-self._roots[:, None] * tg.nodes[None, :])
            u_k = self.chaos.T @ decay  # (x nodes, t nodes)
            u_k0 = self.chaos.T @ ((-self._roots) ** k)
            self._abs_uk[key] = (np.abs(u_k), np.abs(u_k0), tg)
        return self._abs_uk[key]

    def _inner_integral(self, params: TLNormParams, tg: TimeGrid) -> np.ndarray:
        key = (params.k, params.alpha, params.q, id(tg))
        if key not in self._inner:
            abs_uk, abs_uk0, _ = self._derivative_magnitudes(params.k, tg)
            exponent = (params.k - params.alpha) * params.q
            inner = tg.integrate(tg.nodes[None, :] ** exponent * _pow(abs_uk, params.q))
            # power tail below t_min, where the integrand is |u^(k)(x,0)|^q t^exponent
            inner = inner + _pow(abs_uk0, params.q) * tg.t_min ** (exponent + 1.0) / (exponent + 1.0)
            self._inner[key] = inner
        return self._inner[key]

    def seminorm(self, params: TLNormParams, tg: TimeGrid | None = None) -> float:
        if tg is None:
            tg = default_time_grid()
        if not self.orders:
            return 0.0
        inner = self._inner_integral(params, tg)
        outer = np.dot(self.point_weights, _pow(inner, params.p / params.q))
        return float(outer ** (1.0 / params.p))

    def norm(self, params: TLNormParams, tg: TimeGrid | None = None) -> float:
        return self.lp_norm(params.p) + self.seminorm(params, tg)


def tl_seminorm(f: HermiteExpansion, params: TLNormParams,
                tg: TimeGrid | None = None, xg: GaussHermiteGrid | None = None) -> float:
    """Smoothness seminorm of a finite expansion.

    u^(k)(x, t) = sum_n A_n(x) (-sqrt(n))^k e^(-t sqrt(n)) over the chaos
    slices A_n of f, evaluated on the full (x-node, t-node) product.  The
    inner integral of t^((k-a)q) |u^(k)|^q adds the closed-form power
    tail below t_min, where the integrand is |u^(k)(x, 0)|^q t^((k-a)q).
    """
    return TLNormEvaluator(f, xg).seminorm(params, tg)


def tl_norm(f: HermiteExpansion, params: TLNormParams,
            tg: TimeGrid | None = None, xg: GaussHermiteGrid | None = None) -> float:
    """Full norm: the L^p(gamma_d) norm plus the smoothness seminorm."""
    return TLNormEvaluator(f, xg).norm(params, tg)


# --- Hardy inequalities ----------------------------------------------------

HARDY_LOWER = 1e-8
HARDY_UPPER = 50.0
HARDY_COUNT = 2000


def _hardy_grid(count: int, lower: float, upper: float) -> TimeGrid:
    return TimeGrid.log_spaced(count, lower, upper)


def _cum_simpson(values: np.ndarray, x: np.ndarray, axis: int = -1) -> np.ndarray:
    """Cumulative integral along an axis, zero at the first node.

    Each per-interval increment integrates the quadratic through the
    interval's endpoints and one neighbor (fourth-order overall), which
    keeps the near-equality Hardy cases well inside their contract
    slack; plain trapezoid increments would bias them at O(step^2).
    """
    v = np.moveaxis(np.asarray(values, dtype=float), axis, -1)
    h = np.diff(x)
    out = np.zeros_like(v)
    # interior intervals [x_i, x_{i+1}], parabola through x_{i-1}, x_i, x_{i+1}
    h0, h1 = h[:-1], h[1:]
    w_prev = -h1 ** 3 / (6.0 * h0 * (h0 + h1))
    w_mid = h1 * (h1 + 3.0 * h0) / (6.0 * h0)
    w_next = h1 * (2.0 * h1 + 3.0 * h0) / (6.0 * (h0 + h1))
    increments = np.empty_like(v[..., 1:])
    increments[..., 1:] = w_prev * v[..., :-2] + w_mid * v[..., 1:-1] + w_next * v[..., 2:]
    # first interval [x_0, x_1], parabola through x_0, x_1, x_2
    g0, g1 = h[0], h[1]
    a0 = g0 * (2.0 * g0 + 3.0 * g1) / (6.0 * (g0 + g1))
    a1 = g0 * (g0 + 3.0 * g1) / (6.0 * g1)
    a2 = -g0 ** 3 / (6.0 * g1 * (g0 + g1))
    increments[..., 0] = a0 * v[..., 0] + a1 * v[..., 1] + a2 * v[..., 2]
    out[..., 1:] = np.cumsum(increments, axis=-1)
    return np.moveaxis(out, -1, axis)


def _sample_nonnegative(g, x: np.ndarray) -> np.ndarray:
    vals = np.asarray(g(x), dtype=float)
    if np.any(vals < 0.0):
        raise ValueError("Hardy checks require a nonnegative integrand")
    return vals


def hardy_check_1(g, p: float, r: float, *, count: int = HARDY_COUNT,
                  lower: float = HARDY_LOWER, upper: float = HARDY_UPPER) -> tuple[float, float]:
    """Both sides of the inner-integral Hardy inequality, as quadrature values.

    Returns (lhs, rhs) with

        lhs = int ( int_0^x g )^p x^(-r-1) dx,
        rhs = (p/r) int (y g(y))^p y^(-r-1) dy,

    both truncated to [lower, upper].  The inner integral runs over the
    same truncated grid, which preserves the exchange-of-order structure
    that makes p = 1 an equality: the truncated lhs then sits below the
    truncated rhs by exactly the upper-cutoff term.
    """
    if p < 1 or r <= 0:
        raise ValueError("need p >= 1 and r > 0")
    grid = _hardy_grid(count, lower, upper)
    y = grid.nodes
    gv = _sample_nonnegative(g, y)
    inner = _cum_simpson(gv, y)
    lhs = float(grid.integrate(inner ** p * y ** (-r - 1.0)))
    rhs = float(p / r * grid.integrate((y * gv) ** p * y ** (-r - 1.0)))
    return lhs, rhs


def hardy_check_2(g, p: float, r: float, *, count: int = HARDY_COUNT,
                  lower: float = HARDY_LOWER, upper: float = HARDY_UPPER) -> tuple[float, float]:
    """Both sides of the outer-integral Hardy variant, as quadrature values.

    Returns (lhs, rhs) with

        lhs = int ( int_x^inf g )^p x^(r-1) dx,
        rhs = (p/r) int (y g(y))^p y^(r-1) dy.
    """
    if p < 1 or r <= 0:
        raise ValueError("need p >= 1 and r > 0")
    grid = _hardy_grid(count, lower, upper)
    y = grid.nodes
    gv = _sample_nonnegative(g, y)
    cumulative = _cum_simpson(gv, y)
    inner = cumulative[-1] - cumulative
    lhs = float(grid.integrate(inner ** p * y ** (r - 1.0)))
    rhs = float(p / r * grid.integrate((y * gv) ** p * y ** (r - 1.0)))
    return lhs, rhs


def hardy_check_k(g, p: float, r: float, k: int, *, count: int | None = None,
                  lower: float = HARDY_LOWER, upper: float = HARDY_UPPER,
                  v_nodes: int = 24) -> tuple[float, float]:
    """Both sides of the k-fold Minkowski-based Hardy inequality.

    Returns (lhs, rhs) with

        lhs = ( int ( int_{[0,x]^k} g )^p x^(-r-1) dx )^(1/p),
        rhs = int_{(0,1)^k} ( int (x^k g(x v))^p x^(-r-1) dx )^(1/p) dv,

    the k-fold cube integral on the left taken by an iterated cumulative
    trapezoid over a tensor grid, and the unit-cube average on the right
    by tensor Gauss-Legendre nodes.
    """
    if p < 1 or r <= 0:
        raise ValueError("need p >= 1 and r > 0")
    if k < 1:
        raise ValueError("k must be >= 1")
    if count is None:
        count = {1: HARDY_COUNT, 2: 512}.get(k, 128)
    grid = _hardy_grid(count, lower, upper)
    x = grid.nodes

    mesh = np.stack([m.reshape(-1) for m in np.meshgrid(*([x] * k), indexing="ij")], axis=-1)
    values = _sample_nonnegative(g, mesh).reshape((count,) * k)
    cumulative = values
    for axis in range(k):
        cumulative = _cum_simpson(cumulative, x, axis=axis)
    diag = cumulative[tuple(np.arange(count) for _ in range(k))]
    lhs = float(grid.integrate(diag ** p * x ** (-r - 1.0)) ** (1.0 / p))

    gl_x, gl_w = np.polynomial.legendre.leggauss(v_nodes)
    v_axis = 0.5 * (gl_x + 1.0)
    w_axis = 0.5 * gl_w
    rhs = 0.0
    for combo in product(range(v_nodes), repeat=k):
        v = v_axis[list(combo)]
        weight = float(np.prod(w_axis[list(combo)]))
        samples = _sample_nonnegative(g, x[:, None] * v[None, :])
        integral = float(grid.integrate((x ** k * samples) ** p * x ** (-r - 1.0)))
        rhs += weight * integral ** (1.0 / p)
    return lhs, rhs
