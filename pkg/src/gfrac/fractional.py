"""Riesz and Bessel potentials and fractional derivatives on expansions.

The four operators are negative/positive fractional powers built from
the Ornstein-Uhlenbeck generator L, acting diagonally on Hermite
expansions with the multipliers (n = |nu|):

    Riesz potential      I_b  = (-L)^{-b/2} Pi_0 :  n^{-b/2}, constant term dropped
    Bessel potential     J_b  = (I + sqrt(-L))^{-b}:  (1 + sqrt(n))^{-b}
    Riesz derivative     D^b  = (-L)^{b/2}        :  n^{b/2}, with 0^{b/2} := 0
    Bessel derivative    Dd^b = (I + sqrt(-L))^{b} :  (1 + sqrt(n))^{b}

Each has an equivalent representation as a time integral of the
Poisson-Hermite semigroup:

    I_b f  = (1/Gamma(b)) int_0^inf t^{b-1} (P_t f - P_inf f) dt
    J_b f  = (1/Gamma(b)) int_0^inf t^{b-1} e^{-t} P_t f dt
    D^b f  = (1/c_b^k)    int_0^inf t^{-b-1} (P_t - I)^k f dt
    Dd^b f = (1/c_b^k)    int_0^inf t^{-b-1} (e^{-t} P_t - I)^k f dt

where k is the smallest integer greater than b and

    c_b^k = int_0^inf u^{-b-1} (e^{-u} - 1)^k du        (negative for k = 1).

P_t is diagonal, so each operator integral reduces to one scalar
integral per distinct order, and the integral paths below evaluate
those scalars on a shared log-spaced ``TimeGrid``.  The power-law
endpoint behavior is split off analytically: a convergent power series
covers (0, t_min], and for the derivative integrands, whose tails decay
like t^{-b-1} rather than exponentially, the exact tail beyond t_max is
added in closed form.  The verification suite checks every integral
path against its spectral multiplier.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .hermite import HermiteExpansion, apply_order_multiplier
from .semigroups import TimeGrid, default_time_grid

__all__ = [
    "OperatorKind",
    "FracOperatorSpec",
    "OperatorPath",
    "default_difference_order",
    "spectral_multiplier",
    "apply_spectral",
    "apply_operator",
    "riesz_potential_integral",
    "bessel_potential_integral",
    "riesz_derivative_integral",
    "bessel_derivative_integral",
    "forward_difference",
    "c_beta_k",
    "big_C_beta_k",
    "inversion_check",
]


class OperatorKind(str, enum.Enum):
    RIESZ_POTENTIAL = "riesz-potential"
    BESSEL_POTENTIAL = "bessel-potential"
    RIESZ_DERIVATIVE = "riesz-derivative"
    BESSEL_DERIVATIVE = "bessel-derivative"

    @property
    def is_derivative(self) -> bool:
        return self in (OperatorKind.RIESZ_DERIVATIVE, OperatorKind.BESSEL_DERIVATIVE)


class OperatorPath(str, enum.Enum):
    SPECTRAL = "spectral"
    INTEGRAL = "integral"


def default_difference_order(beta: float) -> int:
    """Smallest integer strictly greater than beta (so k-1 <= beta < k)."""
    return int(math.floor(beta)) + 1


@dataclass(frozen=True)
class FracOperatorSpec:
    """Which operator to apply, at which order, along which path."""

    kind: OperatorKind
    beta: float
    k: int | None = None
    path: OperatorPath = OperatorPath.SPECTRAL

    def __post_init__(self):
        object.__setattr__(self, "kind", OperatorKind(self.kind))
        object.__setattr__(self, "path", OperatorPath(self.path))
        object.__setattr__(self, "beta", float(self.beta))
        if self.beta <= 0:
            raise ValueError("beta must be > 0")
        if self.k is None:
            object.__setattr__(self, "k", default_difference_order(self.beta))
        else:
            object.__setattr__(self, "k", int(self.k))
            if self.k < 1:
                raise ValueError("difference order k must be >= 1")

    @property
    def difference_order(self) -> int:
        return self.k


def spectral_multiplier(kind: OperatorKind, beta: float, n: int) -> float:
    """Diagonal action of the operator on the order-n chaos."""
    kind = OperatorKind(kind)
    if kind is OperatorKind.RIESZ_POTENTIAL:
        return 0.0 if n == 0 else float(n) ** (-beta / 2.0)
    if kind is OperatorKind.BESSEL_POTENTIAL:
        return (1.0 + math.sqrt(n)) ** (-beta)
    if kind is OperatorKind.RIESZ_DERIVATIVE:
        return 0.0 if n == 0 else float(n) ** (beta / 2.0)
    return (1.0 + math.sqrt(n)) ** beta


def apply_spectral(spec: FracOperatorSpec, f: HermiteExpansion) -> HermiteExpansion:
    """Apply the operator through its exact spectral multiplier."""
    if spec.beta <= 0:
        raise ValueError("beta must be > 0")
    return apply_order_multiplier(f, lambda n: spectral_multiplier(spec.kind, spec.beta, n))


# --- scalar time integrals ------------------------------------------------
#
# Lower tails: on (0, t_min] the integrands are a pure power times an
# entire function of c*t, so with c*t_min << 1 a short power series is
# exact to machine precision.

def _exp_series_tail(eps: float, a: float, c: float) -> float:
    """int_0^eps t^(a-1) e^(-c t) dt by the exponential series."""
    total = 0.0
    term_c = 1.0
    for m in range(0, 60):
        term = term_c * eps ** (a + m) / (a + m)
        total += term
        if abs(term) <= 1e-18 * abs(total):
            break
        term_c *= -c / (m + 1)
    return total


def _one_minus_exp_over_u_coeffs(k: int, degree: int = 8) -> np.ndarray:
    """Taylor coefficients of ((1 - e^{-u})/u)^k up to the given degree."""
    base = np.array([(-1.0) ** i / math.factorial(i + 1) for i in range(degree + 1)])
    out = np.zeros(degree + 1)
    out[0] = 1.0
    for _ in range(k):
        out = np.convolve(out, base)[: degree + 1]
    return out


def _difference_series_tail(eps: float, beta: float, k: int, c: float) -> float:
    """int_0^eps t^(-beta-1) (e^(-c t) - 1)^k dt via the series of the integrand.

    (e^{-ct} - 1)^k = (-1)^k (ct)^k ((1 - e^{-ct})/(ct))^k, so the
    integrand is (-c)^k t^(k-beta-1) times an entire function of c*t.
    """
    coeffs = _one_minus_exp_over_u_coeffs(k)
    total = 0.0
    for m, b_m in enumerate(coeffs):
        total += b_m * c ** m * eps ** (k - beta + m) / (k - beta + m)
    return (-c) ** k * total


def _potential_integral(c: float, beta: float, tg: TimeGrid) -> float:
    """int_0^inf t^(beta-1) e^(-c t) dt  (equals Gamma(beta) c^-beta).

    Grid quadrature on [t_min, t_max] plus the series tail below t_min.
    The upper tail decays like e^{-c t_max} and needs c * t_max large;
    the default grid reaches t_max = 40 and every caller has c >= 1.
    """
    t = tg.nodes
    grid_part = float(tg.integrate(t ** (beta - 1.0) * np.exp(-c * t)))
    return grid_part + _exp_series_tail(tg.t_min, beta, c)


def _difference_integral(c: float, beta: float, k: int, tg: TimeGrid) -> float:
    """int_0^inf t^(-beta-1) (e^(-c t) - 1)^k dt for k-1 <= beta < k.

    The integrand tends to (-1)^k t^(-beta-1) at infinity, so beyond
    t_max the exact power tail (-1)^k t_max^(-beta)/beta is added (the
    neglected e^{-c t} corrections are below double precision for
    c >= 1 at the default t_max).
    """
    if c == 0.0:
        return 0.0
    t = tg.nodes
    values = t ** (-beta - 1.0) * np.expm1(-c * t) ** k
    grid_part = float(tg.integrate(values))
    lower = _difference_series_tail(tg.t_min, beta, k, c)
    upper = (-1.0) ** k * tg.t_max ** (-beta) / beta
    return grid_part + lower + upper


_C_BETA_K_CACHE: dict[tuple, float] = {}


def c_beta_k(beta: float, k: int, tg: TimeGrid | None = None) -> float:
    """Normalizing constant c_b^k = int_0^inf u^(-b-1) (e^(-u) - 1)^k du.

    Defined for k - 1 <= beta < k (k the smallest integer above beta).
    For k = 1 it has the closed form -Gamma(1 - beta)/beta, which the
    tests pin against the quadrature value.  Cached per (beta, k, grid)
    since it divides every derivative evaluation.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not k - 1 <= beta < k:
        raise ValueError(f"beta={beta} outside the integrable range [k-1, k) for k={k}")
    if tg is None:
        tg = default_time_grid()
    key = (float(beta), int(k)) + tg.key()
    if key not in _C_BETA_K_CACHE:
        _C_BETA_K_CACHE[key] = _difference_integral(1.0, beta, k, tg)
    return _C_BETA_K_CACHE[key]


def riesz_potential_integral(f: HermiteExpansion, beta: float,
                             tg: TimeGrid | None = None) -> HermiteExpansion:
    """I_b f through its time-integral representation.

    Coefficient-wise, P_t f - P_inf f contributes t^(b-1) e^(-t sqrt(n))
    per order n > 0; the n = 0 term cancels identically.
    """
    if beta <= 0:
        raise ValueError("beta must be > 0")
    if tg is None:
        tg = default_time_grid()
    gamma_b = math.gamma(beta)

    def mult(n: int) -> float:
        if n == 0:
            return 0.0
        return _potential_integral(math.sqrt(n), beta, tg) / gamma_b

    return apply_order_multiplier(f, mult)


def bessel_potential_integral(f: HermiteExpansion, beta: float,
                              tg: TimeGrid | None = None) -> HermiteExpansion:
    """J_b f through its time-integral representation.

    Coefficient-wise the integrand is t^(b-1) e^(-t(1 + sqrt(n))).
    """
    if beta <= 0:
        raise ValueError("beta must be > 0")
    if tg is None:
        tg = default_time_grid()
    gamma_b = math.gamma(beta)
    return apply_order_multiplier(
        f, lambda n: _potential_integral(1.0 + math.sqrt(n), beta, tg) / gamma_b)


def riesz_derivative_integral(f: HermiteExpansion, beta: float, k: int | None = None,
                              tg: TimeGrid | None = None) -> HermiteExpansion:
    """D^b f through the k-th order semigroup-difference integral.

    (P_t - I)^k acts on the order-n chaos as (e^(-t sqrt(n)) - 1)^k by
    the binomial theorem and the semigroup property, so each coefficient
    is a scalar integral divided by c_b^k.
    """
    if beta <= 0:
        raise ValueError("beta must be > 0")
    if k is None:
        k = default_difference_order(beta)
    if not k - 1 <= beta < k:
        raise ValueError(f"difference order k={k} inconsistent with beta={beta}")
    if tg is None:
        tg = default_time_grid()
    norm = c_beta_k(beta, k, tg)
    return apply_order_multiplier(
        f, lambda n: _difference_integral(math.sqrt(n), beta, k, tg) / norm)


def bessel_derivative_integral(f: HermiteExpansion, beta: float, k: int | None = None,
                               tg: TimeGrid | None = None) -> HermiteExpansion:
    """Dd^b f through the k-th order damped-semigroup-difference integral.

    (e^(-t) P_t - I)^k contributes (e^(-t(1 + sqrt(n))) - 1)^k per order.
    """
    if beta <= 0:
        raise ValueError("beta must be > 0")
    if k is None:
        k = default_difference_order(beta)
    if not k - 1 <= beta < k:
        raise ValueError(f"difference order k={k} inconsistent with beta={beta}")
    if tg is None:
        tg = default_time_grid()
    norm = c_beta_k(beta, k, tg)
    return apply_order_multiplier(
        f, lambda n: _difference_integral(1.0 + math.sqrt(n), beta, k, tg) / norm)


def apply_operator(spec: FracOperatorSpec, f: HermiteExpansion,
                   tg: TimeGrid | None = None) -> HermiteExpansion:
    """Dispatch an operator spec to its spectral or integral path."""
    if spec.path is OperatorPath.SPECTRAL:
        return apply_spectral(spec, f)
    if spec.kind is OperatorKind.RIESZ_POTENTIAL:
        return riesz_potential_integral(f, spec.beta, tg)
    if spec.kind is OperatorKind.BESSEL_POTENTIAL:
        return bessel_potential_integral(f, spec.beta, tg)
    if spec.kind is OperatorKind.RIESZ_DERIVATIVE:
        return riesz_derivative_integral(f, spec.beta, spec.k, tg)
    return bessel_derivative_integral(f, spec.beta, spec.k, tg)


def forward_difference(g, k: int, s: float, t: float) -> float:
    """k-th forward difference with increment s starting at t:

    Delta_s^k(g, t) = sum_j C(k, j) (-1)^j g(t + (k - j) s).
    """
    if k < 1:
        raise ValueError("difference order k must be >= 1")
    if s <= 0:
        raise ValueError("increment s must be > 0")
    return float(sum(math.comb(k, j) * (-1) ** j * g(t + (k - j) * s) for j in range(k + 1)))


def _unit_sum_density(k: int, s: np.ndarray) -> np.ndarray:
    """Density of v_1 + ... + v_k for independent uniforms on (0, 1).

    Piecewise polynomial of degree k-1 on [0, k] (Irwin-Hall):
    f_k(s) = (1/(k-1)!) sum_{i <= floor(s)} (-1)^i C(k, i) (s - i)^(k-1).
    """
    out = np.zeros_like(s)
    for i in range(k + 1):
        out += (-1.0) ** i * math.comb(k, i) * np.where(s > i, (s - i) ** (k - 1), 0.0)
    return out / math.factorial(k - 1)


def big_C_beta_k(beta: float, k: int) -> float:
    """C_{b,k} = integral of (v_1 + ... + v_k)^(b-k) over the unit cube.

    Reduced to a one-dimensional integral against the density of the
    coordinate sum.  On [0, 1] that density is exactly s^(k-1)/(k-1)!,
    so the corner singularity integrates in closed form to
    1/(beta (k-1)!); the remaining pieces on [j, j+1] are smooth and
    Gauss-Legendre handles them essentially exactly.
    """
    if beta <= 0:
        raise ValueError("beta must be > 0")
    if k < 1:
        raise ValueError("k must be >= 1")
    total = 1.0 / (beta * math.factorial(k - 1))
    if k == 1:
        return total
    gl_x, gl_w = np.polynomial.legendre.leggauss(32)
    for j in range(1, k):
        s = 0.5 * (gl_x + 1.0) + j
        w = 0.5 * gl_w
        total += float(np.dot(w, s ** (beta - k) * _unit_sum_density(k, s)))
    return total


def inversion_check(f: HermiteExpansion, beta: float) -> tuple[HermiteExpansion, HermiteExpansion]:
    """Both compositions I_b D^b f and D^b I_b f (spectral path).

    The multipliers cancel on every order n > 0 and both kill the
    constant term, so each composition equals Pi_0 f up to rounding;
    callers compare against :func:`gfrac.hermite.pi0`.
    """
    if beta <= 0:
        raise ValueError("beta must be > 0")
    pot = FracOperatorSpec(OperatorKind.RIESZ_POTENTIAL, beta)
    der = FracOperatorSpec(OperatorKind.RIESZ_DERIVATIVE, beta)
    first = apply_spectral(pot, apply_spectral(der, f))
    second = apply_spectral(der, apply_spectral(pot, f))
    return first, second
