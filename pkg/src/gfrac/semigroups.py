"""Ornstein-Uhlenbeck and Poisson-Hermite semigroups on Hermite expansions.

Both semigroups act diagonally on the Hermite basis:

    T_t h_nu = exp(-t |nu|)       h_nu      (OU semigroup, generator L)
    P_t h_nu = exp(-t sqrt(|nu|)) h_nu      (Poisson-Hermite semigroup)

so the spectral paths below are exact on finite expansions.  Each also
has a quadrature path used for cross-validation:

* ``ou_apply_pointwise`` evaluates the change-of-variable form
  T_t f(x) = integral of f(sqrt(1-e^{-2t}) u + e^{-t} x) dgamma_d(u).
* ``poisson_apply_subordinated`` realizes Bochner subordination
  P_t = integral of T_s against the one-sided 1/2-stable measure
  mu_t(ds) = t/(2 sqrt(pi)) e^{-t^2/4s} s^{-3/2} ds.
* ``poisson_kernel`` integrates the same subordinator against the
  explicit OU (Mehler) kernel to produce the Poisson kernel p(t, x, y).

Time integrals over (0, infinity) use ``TimeGrid``: log-spaced nodes
with trapezoidal weights in log coordinates.  Integrands here are
smooth in log t and decay at both ends once their endpoint behavior is
split off analytically, so the grid part converges fast; gradient end
corrections remove the leading boundary error of the trapezoid rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hermite import GaussHermiteGrid, HermiteExpansion, apply_order_multiplier, _sample

__all__ = [
    "TimeGrid",
    "default_time_grid",
    "SubordinatorGrid",
    "subordinator_grid",
    "SMALL_TIME_SPECTRAL_CUTOFF",
    "ou_apply_spectral",
    "ou_apply_pointwise",
    "poisson_apply_spectral",
    "poisson_apply_subordinated",
    "poisson_kernel",
    "poisson_time_derivative",
    "p_infinity",
]

DEFAULT_TIME_NODES = 400
DEFAULT_T_MIN = 1e-6
DEFAULT_T_MAX = 40.0

# Below this time the subordinator density is too concentrated for the
# default s-grid, and the subordinated path delegates to the spectral one.
SMALL_TIME_SPECTRAL_CUTOFF = 0.05


@dataclass(frozen=True, eq=False)
class TimeGrid:
    """Log-spaced quadrature nodes and weights for integrals over (0, inf).

    ``weights`` are trapezoidal in log coordinates (dt = t dlog t), so
    ``weights @ g(nodes)`` approximates the integral of g over
    [t_min, t_max].  :meth:`integrate` additionally applies second-order
    gradient corrections at both ends, which matters whenever the
    integrand does not vanish at the cutoffs; explicit tail terms beyond
    the cutoffs are the caller's business since they depend on the
    integrand's analytic form.
    """

    nodes: np.ndarray
    weights: np.ndarray
    t_min: float
    t_max: float
    count: int
    log_step: float

    def __post_init__(self):
        self.nodes.flags.writeable = False
        self.weights.flags.writeable = False

    @classmethod
    def log_spaced(cls, count: int = DEFAULT_TIME_NODES, t_min: float = DEFAULT_T_MIN,
                   t_max: float = DEFAULT_T_MAX) -> "TimeGrid":
        if count < 8:
            raise ValueError("count must be >= 8")
        if not 0.0 < t_min < t_max:
            raise ValueError("need 0 < t_min < t_max")
        nodes = np.geomspace(t_min, t_max, count)
        step = (math.log(t_max) - math.log(t_min)) / (count - 1)
        weights = step * nodes
        weights[0] *= 0.5
        weights[-1] *= 0.5
        return cls(nodes, weights, float(t_min), float(t_max), count, step)

    def integrate(self, values: np.ndarray, end_correction: bool = True):
        """Integral over [t_min, t_max] of an integrand sampled at the nodes.

        ``values`` may carry leading batch axes; the node axis is last.
        """
        g = np.asarray(values, dtype=float)
        big = g * self.nodes
        total = (big.sum(axis=-1) - 0.5 * (big[..., 0] + big[..., -1])) * self.log_step
        if end_correction:
            da = (-3.0 * big[..., 0] + 4.0 * big[..., 1] - big[..., 2]) / (2.0 * self.log_step)
            db = (3.0 * big[..., -1] - 4.0 * big[..., -2] + big[..., -3]) / (2.0 * self.log_step)
            total = total + self.log_step ** 2 / 12.0 * (da - db)
        return total

    def key(self) -> tuple:
        """Hashable identity of the rule, used for caching derived constants."""
        return (self.count, self.t_min, self.t_max)


_DEFAULT_GRID: TimeGrid | None = None


def default_time_grid() -> TimeGrid:
    global _DEFAULT_GRID
    if _DEFAULT_GRID is None:
        _DEFAULT_GRID = TimeGrid.log_spaced()
    return _DEFAULT_GRID


def ou_apply_spectral(f: HermiteExpansion, t: float) -> HermiteExpansion:
    """T_t on an expansion: multiply each c_nu by exp(-t |nu|)."""
    if t < 0:
        raise ValueError("time must be >= 0")
    return apply_order_multiplier(f, lambda n: math.exp(-t * n))


def poisson_apply_spectral(f: HermiteExpansion, t: float) -> HermiteExpansion:
    """P_t on an expansion: multiply each c_nu by exp(-t sqrt(|nu|))."""
    if t < 0:
        raise ValueError("time must be >= 0")
    return apply_order_multiplier(f, lambda n: math.exp(-t * math.sqrt(n)))


def poisson_time_derivative(f: HermiteExpansion, k: int, t: float) -> HermiteExpansion:
    """k-th time derivative of u(x, t) = P_t f(x), as an expansion in x.

    Each coefficient picks up (-sqrt(|nu|))^k exp(-t sqrt(|nu|)); the
    multiplier is entire in t for finite expansions, so t = 0 is fine.
    """
    if k < 0:
        raise ValueError("derivative order must be >= 0")
    if t < 0:
        raise ValueError("time must be >= 0")

    def mult(n: int) -> float:
        root = math.sqrt(n)
        return (-root) ** k * math.exp(-t * root)

    return apply_order_multiplier(f, mult)


def p_infinity(f: HermiteExpansion) -> float:
    """Limit P_inf f = integral of f against gamma_d: the nu = 0 coefficient."""
    return f.terms.get((0,) * f.dimension, 0.0)


def ou_apply_pointwise(f, t: float, x, grid: GaussHermiteGrid) -> float:
    """T_t f(x) through the change-of-variable integral against gamma_d.

    ``f`` is a vectorized sampler over point stacks (N, d) or an
    expansion.  Exact (up to rounding) for polynomial f whose degree the
    grid resolves; use the spectral path for t = 0, where the integral
    form degenerates.
    """
    if t <= 0:
        raise ValueError("pointwise path needs t > 0; use the spectral path at t = 0")
    point = np.asarray(x, dtype=float).reshape(-1)
    if len(point) != grid.dimension:
        raise ValueError("point dimension does not match grid dimension")
    shrink = math.exp(-t)
    spread = math.sqrt(1.0 - math.exp(-2.0 * t))
    shifted = spread * grid.points() + shrink * point
    return float(np.dot(grid.point_weights(), _sample(f, shifted)))


def _stable_density(t: float, s: np.ndarray) -> np.ndarray:
    # One-sided 1/2-stable density: t/(2 sqrt(pi)) exp(-t^2/4s) s^{-3/2}.
    return t / (2.0 * math.sqrt(math.pi)) * np.exp(-t * t / (4.0 * s)) * s ** -1.5


@dataclass(frozen=True, eq=False)
class SubordinatorGrid:
    """Discretized one-sided 1/2-stable measure mu_t on a log s-grid.

    The density concentrates near s = t^2/4 with explicit tails: the
    mass above s_max is erf(t / (2 sqrt(s_max))) and the mass below
    s_min is erfc(t / (2 sqrt(s_min))), both of which the Laplace
    transform below accounts for analytically.
    """

    t: float
    s_grid: TimeGrid
    density: np.ndarray

    def __post_init__(self):
        self.density.flags.writeable = False

    @property
    def upper_tail_mass(self) -> float:
        return math.erf(self.t / (2.0 * math.sqrt(self.s_grid.t_max)))

    @property
    def lower_tail_mass(self) -> float:
        return math.erfc(self.t / (2.0 * math.sqrt(self.s_grid.t_min)))

    @property
    def grid_mass(self) -> float:
        return float(self.s_grid.integrate(self.density))

    @property
    def mass_deficit(self) -> float:
        """1 minus the mass carried by the grid itself (explained by the tails)."""
        return 1.0 - self.grid_mass

    def total_mass(self) -> float:
        """Grid mass plus the explicit tails; equals 1 up to quadrature error."""
        return self.grid_mass + self.upper_tail_mass + self.lower_tail_mass

    def laplace_multiplier(self, n: float) -> float:
        """integral of exp(-n s) dmu_t(s), which equals exp(-t sqrt(n)).

        For n = 0 the integrand does not decay at large s, so the upper
        tail mass is added back analytically; for n >= 1 both tails are
        below double precision.
        """
        if n == 0:
            return self.grid_mass + self.upper_tail_mass + self.lower_tail_mass
        vals = self.density * np.exp(-float(n) * self.s_grid.nodes)
        return float(self.s_grid.integrate(vals))


def subordinator_grid(t: float, count: int = 400, s_min: float = 1e-8,
                      s_max: float = 1e4) -> SubordinatorGrid:
    if t <= 0:
        raise ValueError("subordination needs t > 0")
    grid = TimeGrid.log_spaced(count, s_min, s_max)
    return SubordinatorGrid(float(t), grid, _stable_density(t, grid.nodes))


def poisson_apply_subordinated(f: HermiteExpansion, t: float,
                               sub: SubordinatorGrid | None = None) -> HermiteExpansion:
    """P_t f via subordination: integrate T_s f against mu_t over s.

    T_s acts diagonally, so the s-integral reduces to one Laplace
    transform of mu_t per distinct order.  Very small t concentrates the
    density below the resolution of the default s-grid, so t below
    ``SMALL_TIME_SPECTRAL_CUTOFF`` routes to the spectral path.
    """
    if t <= 0:
        raise ValueError("subordinated path needs t > 0; use the spectral path at t = 0")
    if sub is not None and sub.t != t:
        raise ValueError(f"subordinator grid was built for t = {sub.t}, got t = {t}")
    if t < SMALL_TIME_SPECTRAL_CUTOFF:
        return poisson_apply_spectral(f, t)
    if sub is None:
        sub = subordinator_grid(t)
    return apply_order_multiplier(f, sub.laplace_multiplier)


def _mehler_density(s: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """OU transition density (against Lebesgue dy) at times s, shape of s.

    T_s f(x) = integral of mehler(s, x, y) f(y) dy; as s grows the
    density relaxes to the gamma_d density itself.
    """
    d = len(x)
    r = np.exp(-s)
    one_minus = -np.expm1(-2.0 * s)  # 1 - e^{-2s}, accurate for small s
    diff = y[None, :] - r[:, None] * x[None, :]
    dist2 = np.einsum("ij,ij->i", diff, diff)
    return np.exp(-dist2 / one_minus) / (math.pi ** (d / 2.0) * one_minus ** (d / 2.0))


def poisson_kernel(t: float, x, y, sigma_grid: TimeGrid | None = None) -> float:
    """Poisson-Hermite kernel p(t, x, y) with P_t f(x) = integral p f dy.

    The defining integral over r in (0, 1) is taken in the variable
    sigma = -log r, which turns the (-log r)^{-3/2} endpoint into the
    one-sided stable density in sigma: p(t,x,y) is the subordinator
    integral of the OU kernel.  The flat large-sigma tail (where the OU
    kernel has relaxed to the gamma_d density) is added analytically.
    """
    if t <= 0:
        raise ValueError("kernel needs t > 0")
    xp = np.asarray(x, dtype=float).reshape(-1)
    yp = np.asarray(y, dtype=float).reshape(-1)
    if len(xp) != len(yp):
        raise ValueError("x and y must have the same dimension")
    if sigma_grid is None:
        sigma_grid = TimeGrid.log_spaced(400, 1e-8, 1e4)
    s = sigma_grid.nodes
    values = _stable_density(t, s) * _mehler_density(s, xp, yp)
    tail = math.erf(t / (2.0 * math.sqrt(sigma_grid.t_max)))
    gamma_density = math.exp(-float(np.dot(yp, yp))) / math.pi ** (len(yp) / 2.0)
    return float(sigma_grid.integrate(values)) + tail * gamma_density
