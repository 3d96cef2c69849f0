"""Empirical verification suites for the semigroup and operator toolkit.

Each suite re-derives a family of identities or estimates numerically
and reports one record per check.  Two kinds of cases exist:

* equality cases, which pass when the relative error against an
  expected value (or the absolute error, when the expected value is
  zero) stays below the case tolerance;
* bound cases, which pass when the observed value stays below the
  stated bound times (1 + tolerance).

Boundedness of the fractional operators between smoothness spaces is an
existence statement about constants, which desk-scale numerics cannot
prove; those suites therefore record the empirical norm ratios over a
seeded random family and require them to be finite and stable under
doubling of both quadrature grids.  All randomness is driven by the
seed in :class:`GridConfig`, so two runs of a suite produce identical
reports (timing aside).
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field, replace
from decimal import Decimal, localcontext
from itertools import product

import numpy as np

from .fractional import (
    FracOperatorSpec,
    OperatorKind,
    OperatorPath,
    apply_operator,
    apply_spectral,
    big_C_beta_k,
    forward_difference,
    inversion_check,
    spectral_multiplier,
    _difference_integral,
    _potential_integral,
)
from .hermite import (
    HermiteExpansion,
    all_multi_indices,
    apply_ou_generator,
    format_float,
    gauss_hermite_grid,
    hermite_1d,
    max_abs_coeff_diff,
    max_rel_coeff_error,
    pi0,
)
from .semigroups import (
    TimeGrid,
    ou_apply_pointwise,
    ou_apply_spectral,
    poisson_apply_spectral,
    poisson_apply_subordinated,
    poisson_kernel,
    poisson_time_derivative,
    subordinator_grid,
)
from .spaces import TLNormEvaluator, TLNormParams, default_tl_order, hardy_check_k, tl_norm

__all__ = [
    "GridConfig",
    "CaseResult",
    "VerificationReport",
    "SUITE_NAMES",
    "THEOREMS",
    "suite_eigen",
    "suite_dual_path",
    "suite_inversion",
    "suite_boundedness",
    "suite_inclusion",
    "suite_lemmas",
    "suite_decay",
    "run_suite",
    "run_all",
]


@dataclass(frozen=True)
class GridConfig:
    """Quadrature resolution, tolerance, and seed shared by the suites."""

    quad_order: int = 16
    time_nodes: int = 400
    t_min: float = 1e-6
    t_max: float = 40.0
    tolerance: float = 1e-6
    seed: int = 42

    def __post_init__(self):
        if self.quad_order < 1:
            raise ValueError("quad_order must be >= 1")
        if self.time_nodes < 16:
            raise ValueError("time_nodes must be >= 16")
        if not 0 < self.t_min < self.t_max:
            raise ValueError("need 0 < t_min < t_max")

    def time_grid(self) -> TimeGrid:
        return TimeGrid.log_spaced(self.time_nodes, self.t_min, self.t_max)

    def doubled(self) -> "GridConfig":
        return replace(self, quad_order=2 * self.quad_order, time_nodes=2 * self.time_nodes)


@dataclass
class CaseResult:
    name: str
    parameters: dict
    observed: float
    bound_or_expected: float
    abs_err: float
    rel_err: float
    tolerance: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "parameters": self.parameters,
            "observed": self.observed,
            "bound_or_expected": self.bound_or_expected,
            "abs_err": self.abs_err,
            "rel_err": self.rel_err,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def _equality_case(name: str, parameters: dict, observed: float, expected: float,
                   tolerance: float) -> CaseResult:
    observed = float(observed)
    expected = float(expected)
    finite = math.isfinite(observed)
    abs_err = abs(observed - expected) if finite else math.inf
    rel_err = abs_err / abs(expected) if expected != 0.0 else abs_err
    passed = finite and rel_err <= tolerance
    parameters = {"kind": "equality", **parameters}
    return CaseResult(name, parameters, observed, expected, abs_err, rel_err, tolerance, passed)


def _bound_case(name: str, parameters: dict, observed: float, bound: float,
                tolerance: float) -> CaseResult:
    observed = float(observed)
    bound = float(bound)
    finite = math.isfinite(observed)
    slack = observed - bound if finite else math.inf
    abs_err = max(0.0, slack)
    rel_err = abs_err / abs(bound) if bound != 0.0 else abs_err
    passed = finite and observed <= bound * (1.0 + tolerance) + (0.0 if bound != 0.0 else tolerance)
    parameters = {"kind": "bound", **parameters}
    return CaseResult(name, parameters, observed, bound, abs_err, rel_err, tolerance, passed)


@dataclass
class VerificationReport:
    suite: str
    cases: list = field(default_factory=list)
    wall_time_seconds: float = 0.0

    @property
    def all_passed(self) -> bool:
        return all(case.passed for case in self.cases)

    def summary(self) -> dict:
        return {
            "total": len(self.cases),
            "passed": sum(1 for c in self.cases if c.passed),
            "max_rel_err": max((c.rel_err for c in self.cases if math.isfinite(c.rel_err)),
                               default=0.0),
            "wall_time_seconds": self.wall_time_seconds,
        }

    def to_dict(self, include_timing: bool = True) -> dict:
        summary = self.summary()
        if not include_timing:
            summary["wall_time_seconds"] = 0.0
        return {
            "suite": self.suite,
            "cases": [c.to_dict() for c in sorted(self.cases, key=lambda c: c.name)],
            "summary": summary,
        }

    def to_json(self, include_timing: bool = True) -> str:
        """Deterministic JSON with 17-significant-digit floats.

        With ``include_timing=False`` the wall time is zeroed, making
        reports from identical runs byte-identical.
        """
        return _render_json(self.to_dict(include_timing)) + "\n"


def _render_json(value, level: int = 0) -> str:
    pad = "  " * level
    inner = "  " * (level + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        rows = [f'{inner}{json.dumps(str(k))}: {_render_json(v, level + 1)}' for k, v in value.items()]
        return "{\n" + ",\n".join(rows) + f"\n{pad}}}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        rows = [f"{inner}{_render_json(v, level + 1)}" for v in value]
        return "[\n" + ",\n".join(rows) + f"\n{pad}]"
    if isinstance(value, bool) or isinstance(value, np.bool_):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return format_float(v) if math.isfinite(v) else json.dumps(str(v))
    return json.dumps(value)


def _random_family(rng: np.random.Generator, count: int, dimension: int,
                   max_degree: int = 8, drop_constant: bool = False) -> list[HermiteExpansion]:
    """Seeded family with degrees stratified over 1..max_degree."""
    family = []
    for i in range(count):
        degree = 1 + i % max_degree
        terms = {nu: rng.uniform(-1.0, 1.0) for nu in all_multi_indices(dimension, degree)}
        if drop_constant:
            terms.pop((0,) * dimension, None)
        family.append(HermiteExpansion(dimension, terms))
    return family


def _fd_multiplier_highprec(n: int, k: int, t: float, step: str = "0.0001") -> float:
    """Iterated order-2 central difference of exp(-t sqrt(n)), in 50-digit
    arithmetic: the k = 3 stencil at this step cancels below float64."""
    with localcontext() as ctx:
        ctx.prec = 50
        h = Decimal(step)
        t0 = Decimal(repr(t))
        root = Decimal(n).sqrt()
        offsets: dict[int, Decimal] = {0: Decimal(1)}
        for _ in range(k):
            nxt: dict[int, Decimal] = {}
            for off, w in offsets.items():
                nxt[off + 1] = nxt.get(off + 1, Decimal(0)) + w / (2 * h)
                nxt[off - 1] = nxt.get(off - 1, Decimal(0)) - w / (2 * h)
            offsets = nxt
        total = sum(w * (-(t0 + off * h) * root).exp() for off, w in offsets.items())
        return float(total)


# --- suites -----------------------------------------------------------------


def suite_eigen(config: GridConfig | None = None) -> VerificationReport:
    """Eigenrelations of L, T_t and P_t, generator-mode agreement,
    pointwise/subordinated/kernel cross-checks, derivative consistency."""
    config = config or GridConfig()
    start = time.perf_counter()
    rng = np.random.default_rng(config.seed)
    cases = []

    for nu in [(1,), (2, 1), (0, 0, 3), (4, 2, 2)]:
        f = HermiteExpansion.basis(nu)
        lf = apply_ou_generator(f, "differential")
        want = -float(sum(nu))
        got = lf.terms.get(nu, 0.0)
        spurious = max_abs_coeff_diff(lf, HermiteExpansion(len(nu), {nu: want}))
        cases.append(_equality_case(
            f"generator eigenvalue nu={nu}", {"nu": list(nu)}, got, want, 1e-12))
        cases.append(_equality_case(
            f"generator off-diagonal nu={nu}", {"nu": list(nu)}, spurious, 0.0, 1e-12))

    for d in (1, 2, 3):
        worst = 0.0
        for f in _random_family(rng, 8, d, max_degree=8 if d < 3 else 6):
            worst = max(worst, max_abs_coeff_diff(apply_ou_generator(f, "spectral"),
                                                  apply_ou_generator(f, "differential")))
        cases.append(_equality_case(
            f"generator spectral vs differential d={d}", {"dimension": d}, worst, 0.0, 1e-10))

    f = _random_family(rng, 1, 2, max_degree=6)[0]
    cases.append(_equality_case(
        "OU semigroup identity at t=0", {}, max_abs_coeff_diff(ou_apply_spectral(f, 0.0), f),
        0.0, 0.0))

    grid = gauss_hermite_grid(1, max(config.quad_order, 8))
    for n, t in [(1, math.log(2.0)), (3, 0.5)]:
        h = HermiteExpansion.basis((n,))
        x = [0.8]
        got = ou_apply_pointwise(h, t, x, grid)
        want = math.exp(-t * n) * hermite_1d(n, 0.8)
        cases.append(_equality_case(
            f"OU pointwise eigenrelation n={n}", {"n": n, "t": t}, got, want, 1e-8))

    for n, t in [(1, 1.0), (4, 1.0), (2, 2.0)]:
        h = HermiteExpansion.basis((n,))
        got = poisson_apply_subordinated(h, t, subordinator_grid(t))
        want = poisson_apply_spectral(h, t)
        cases.append(_equality_case(
            f"Poisson subordinated vs spectral n={n} t={t}", {"n": n, "t": t},
            max_rel_coeff_error(got, want), 0.0, config.tolerance))

    y = np.linspace(-9.0, 9.0, 3001)
    kernel_vals = np.array([poisson_kernel(1.0, [0.3], [yy]) for yy in y])
    mass = float(np.trapezoid(kernel_vals, x=y))
    cases.append(_equality_case("Poisson kernel unit mass d=1 t=1", {"t": 1.0, "x": 0.3},
                                mass, 1.0, 1e-6))

    for k in (1, 2, 3):
        worst = 0.0
        for n in (1, 2, 4, 6):
            got = poisson_time_derivative(HermiteExpansion.basis((n,)), k, 0.9).terms[(n,)]
            ref = _fd_multiplier_highprec(n, k, 0.9)
            worst = max(worst, abs(got - ref) / abs(ref))
        cases.append(_equality_case(
            f"Poisson time derivative vs central differences k={k}", {"k": k, "step": 1e-4},
            worst, 0.0, config.tolerance))

    report = VerificationReport("eigen", cases)
    report.wall_time_seconds = time.perf_counter() - start
    return report


def suite_dual_path(config: GridConfig | None = None) -> VerificationReport:
    """Integral representations against spectral multipliers for all four
    operators over a beta sweep and degree <= 6 expansions."""
    config = config or GridConfig()
    start = time.perf_counter()
    rng = np.random.default_rng(config.seed)
    tg = config.time_grid()
    cases = []
    inputs = [("h(1)", HermiteExpansion.basis((1,))),
              ("h(4)", HermiteExpansion.basis((4,))),
              ("random-deg6-d2", _random_family(rng, 1, 2, max_degree=6)[0])]
    for kind in OperatorKind:
        for beta in (0.5, 1.0, 1.5, 2.5):
            spec = FracOperatorSpec(kind, beta, path=OperatorPath.INTEGRAL)
            ref_spec = FracOperatorSpec(kind, beta)
            for label, f in inputs:
                got = apply_operator(spec, f, tg)
                want = apply_spectral(ref_spec, f)
                cases.append(_equality_case(
                    f"{kind.value} beta={beta} {label}",
                    {"operator": kind.value, "beta": beta, "input": label},
                    max_rel_coeff_error(got, want), 0.0, config.tolerance))
    report = VerificationReport("dual-path", cases)
    report.wall_time_seconds = time.perf_counter() - start
    return report


def suite_inversion(config: GridConfig | None = None) -> VerificationReport:
    """Potential/derivative inversion: both compositions recover the
    mean-free part on 50 seeded expansions."""
    config = config or GridConfig()
    start = time.perf_counter()
    rng = np.random.default_rng(config.seed)
    cases = []
    worst = 0.0
    for i in range(50):
        d = int(rng.integers(1, 3))
        degree = 1 + i % 8
        terms = {nu: rng.uniform(-1, 1) for nu in all_multi_indices(d, degree)}
        f = HermiteExpansion(d, terms)
        beta = float(rng.uniform(0.05, 3.0))
        first, second = inversion_check(f, beta)
        target = pi0(f)
        worst = max(worst, max_abs_coeff_diff(first, target), max_abs_coeff_diff(second, target))
    cases.append(_equality_case("compositions recover mean-free part (50 expansions)",
                                {"count": 50}, worst, 0.0, 1e-12))
    f = HermiteExpansion(1, {(0,): 1.0, (3,): 1.0})
    a, b = inversion_check(f, 1.0)
    cases.append(_equality_case("constant plus single mode", {},
                                max(max_abs_coeff_diff(a, pi0(f)), max_abs_coeff_diff(b, pi0(f))),
                                0.0, 1e-13))
    a, b = inversion_check(HermiteExpansion(1, {(0,): 2.0}), 0.5)
    cases.append(_equality_case("pure constant maps to zero", {}, float(len(a) + len(b)), 0.0, 0.0))
    report = VerificationReport("inversion", cases)
    report.wall_time_seconds = time.perf_counter() - start
    return report


THEOREMS = {
    "T2.1": {"kind": OperatorKind.RIESZ_POTENTIAL, "shift": +1, "alpha": 0.5, "beta": 1.0},
    "T2.2": {"kind": OperatorKind.BESSEL_POTENTIAL, "shift": +1, "alpha": 0.5, "beta": 1.0},
    "T2.3": {"kind": OperatorKind.RIESZ_DERIVATIVE, "shift": -1, "alpha": 0.7, "beta": 0.3},
    "T2.4": {"kind": OperatorKind.BESSEL_DERIVATIVE, "shift": -1, "alpha": 0.7, "beta": 0.3},
    "T2.5": {"kind": OperatorKind.RIESZ_DERIVATIVE, "shift": -1, "alpha": 2.5, "beta": 1.5},
    "T2.6": {"kind": OperatorKind.BESSEL_DERIVATIVE, "shift": -1, "alpha": 2.5, "beta": 1.5},
}

_NORM_PARAMETER_CHOICES = ((2.0, 2.0), (2.0, 1.0), (3.0, 2.0))


def _validate_theorem_ranges(theorem: str, alpha: float, beta: float) -> None:
    if beta <= 0:
        raise ValueError("beta must be > 0")
    if theorem in ("T2.1", "T2.2"):
        if alpha < 0:
            raise ValueError("alpha must be >= 0 for the potential theorems")
    elif theorem in ("T2.3", "T2.4"):
        if not 0 < beta < alpha < 1:
            raise ValueError("need 0 < beta < alpha < 1")
    else:
        if not 0 < beta < alpha:
            raise ValueError("need 0 < beta < alpha")


def _norm_ratio(f: HermiteExpansion, op_spec: FracOperatorSpec, source: TLNormParams,
                target: TLNormParams, tg: TimeGrid, xg) -> float:
    denom = tl_norm(f, source, tg, xg)
    if denom == 0.0:
        return 0.0
    return tl_norm(apply_spectral(op_spec, f), target, tg, xg) / denom


def _single_mode_ratio_closed_form(kind: OperatorKind, beta: float, alpha_src: float,
                                   alpha_tgt: float, n: int) -> float:
    """Norm ratio for a single order-n mode at p = q = 2, via the exact
    scalar integrals int t^((k-a)q) (n^(k/2) e^(-t sqrt(n)))^q dt."""

    def seminorm_sq(alpha: float) -> float:
        k = default_tl_order(alpha)
        exponent = (k - alpha) * 2.0 + 1.0
        return n ** k * math.gamma(exponent) / (2.0 * math.sqrt(n)) ** exponent

    mult = spectral_multiplier(kind, beta, n)
    src = 1.0 + math.sqrt(seminorm_sq(alpha_src))
    tgt = 1.0 + math.sqrt(seminorm_sq(alpha_tgt))
    return mult * tgt / src


def suite_boundedness(theorem: str, config: GridConfig | None = None,
                      alpha: float | None = None, beta: float | None = None) -> VerificationReport:
    """Empirical norm-ratio finiteness and grid-refinement stability for
    one mapping theorem of the four fractional operators."""
    if theorem not in THEOREMS:
        raise ValueError(f"unknown theorem {theorem!r}; expected one of {sorted(THEOREMS)}")
    config = config or GridConfig()
    start = time.perf_counter()
    info = THEOREMS[theorem]
    alpha = info["alpha"] if alpha is None else float(alpha)
    beta = info["beta"] if beta is None else float(beta)
    _validate_theorem_ranges(theorem, alpha, beta)
    kind: OperatorKind = info["kind"]
    alpha_target = alpha + info["shift"] * beta
    op_spec = FracOperatorSpec(kind, beta)
    rng = np.random.default_rng(config.seed)
    family = _random_family(rng, 30, 2, max_degree=8)
    cases = []

    # scale the family to unit source norm once, on the base grids
    base_tg = config.time_grid()
    base_xg = gauss_hermite_grid(2, max(config.quad_order, 10))
    reference = TLNormParams(alpha, 2.0, 2.0)
    family = [(1.0 / tl_norm(f, reference, base_tg, base_xg)) * f for f in family]

    resolutions = {}
    for label, cfg in (("base", config), ("doubled", config.doubled())):
        tg = cfg.time_grid()
        xg = gauss_hermite_grid(2, max(cfg.quad_order, 10))
        pairs = [(TLNormEvaluator(f, xg), TLNormEvaluator(apply_spectral(op_spec, f), xg))
                 for f in family]
        resolutions[label] = (tg, pairs)

    for p, q in _NORM_PARAMETER_CHOICES:
        source = TLNormParams(alpha, p, q)
        target = TLNormParams(alpha_target, p, q)
        ratios = {}
        for label, (tg, pairs) in resolutions.items():
            vals = []
            for ev_src, ev_tgt in pairs:
                denom = ev_src.norm(source, tg)
                vals.append(ev_tgt.norm(target, tg) / denom if denom > 0 else 0.0)
            ratios[label] = vals
        max_base = max(ratios["base"])
        max_doubled = max(ratios["doubled"])
        params = {"theorem": theorem, "operator": kind.value, "alpha": alpha, "beta": beta,
                  "p": p, "q": q, "max_ratio_base": max_base, "max_ratio_doubled": max_doubled}
        finite = all(math.isfinite(v) for v in ratios["base"] + ratios["doubled"])
        cases.append(_bound_case(
            f"{theorem} ratios finite p={p} q={q}", params,
            max_base if finite else math.inf, max_base if finite else 0.0, config.tolerance))
        cases.append(_equality_case(
            f"{theorem} ratio stability under grid doubling p={p} q={q}", params,
            max_doubled, max_base, 0.01))

    constant = HermiteExpansion.basis((0, 0))
    tg = config.time_grid()
    xg = gauss_hermite_grid(2, max(config.quad_order, 10))
    got = _norm_ratio(constant, op_spec, TLNormParams(alpha, 2, 2),
                      TLNormParams(alpha_target, 2, 2), tg, xg)
    expected = 0.0 if kind in (OperatorKind.RIESZ_POTENTIAL, OperatorKind.RIESZ_DERIVATIVE) else 1.0
    cases.append(_equality_case(f"{theorem} constant-mode ratio", {"theorem": theorem},
                                got, expected, 1e-10))

    single = HermiteExpansion.basis((1, 0))
    got = _norm_ratio(single, op_spec, TLNormParams(alpha, 2, 2),
                      TLNormParams(alpha_target, 2, 2), tg, xg)
    want = _single_mode_ratio_closed_form(kind, beta, alpha, alpha_target, 1)
    cases.append(_equality_case(f"{theorem} single-mode ratio closed form",
                                {"theorem": theorem, "n": 1}, got, want, 1e-6))

    report = VerificationReport(f"boundedness-{theorem}", cases)
    report.wall_time_seconds = time.perf_counter() - start
    return report


def suite_inclusion(config: GridConfig | None = None) -> VerificationReport:
    """Embedding of smoothness spaces and independence of the derivative
    order: empirical constants recorded, required finite and grid-stable."""
    config = config or GridConfig()
    start = time.perf_counter()
    rng = np.random.default_rng(config.seed)
    family = _random_family(rng, 20, 2, max_degree=8)
    cases = []

    resolutions = {}
    for label, cfg in (("base", config), ("doubled", config.doubled())):
        tg = cfg.time_grid()
        xg = gauss_hermite_grid(2, max(cfg.quad_order, 10))
        resolutions[label] = (tg, [TLNormEvaluator(f, xg) for f in family])

    higher = TLNormParams(1.0, 2.0, 2.0)
    lower = TLNormParams(0.5, 2.0, 1.0)
    embed = {}
    for label, (tg, evaluators) in resolutions.items():
        embed[label] = max(ev.norm(lower, tg) / ev.norm(higher, tg) for ev in evaluators)
    params = {"alpha_high": 1.0, "q_high": 2.0, "alpha_low": 0.5, "q_low": 1.0, "p": 2.0,
              "embedding_constant_base": embed["base"], "embedding_constant_doubled": embed["doubled"]}
    cases.append(_bound_case("embedding constant finite", params,
                             embed["base"] if math.isfinite(embed["base"]) else math.inf,
                             embed["base"] if math.isfinite(embed["base"]) else 0.0,
                             config.tolerance))
    cases.append(_equality_case("embedding constant stable under grid doubling", params,
                                embed["doubled"], embed["base"], 0.01))

    k_lo = TLNormParams(0.5, 2.0, 2.0, 1)
    k_hi = TLNormParams(0.5, 2.0, 2.0, 2)
    equiv = {}
    for label, (tg, evaluators) in resolutions.items():
        ratios = [ev.seminorm(k_hi, tg) / ev.seminorm(k_lo, tg) for ev in evaluators]
        equiv[label] = max(max(ratios), 1.0 / min(ratios))
    params = {"alpha": 0.5, "p": 2.0, "q": 2.0, "k_pair": [1, 2],
              "equivalence_constant_base": equiv["base"],
              "equivalence_constant_doubled": equiv["doubled"]}
    cases.append(_bound_case("order-independence constant finite", params,
                             equiv["base"] if math.isfinite(equiv["base"]) else math.inf,
                             equiv["base"] if math.isfinite(equiv["base"]) else 0.0,
                             config.tolerance))
    cases.append(_equality_case("order-independence constant stable under grid doubling", params,
                                equiv["doubled"], equiv["base"], 0.01))

    report = VerificationReport("inclusion", cases)
    report.wall_time_seconds = time.perf_counter() - start
    return report


def _nested_gl_difference(g_deriv, k: int, s: float, t: float, nodes: int = 8) -> float:
    """Iterated integral of g^(k)(t + v_1 + ... + v_k) over [0, s]^k."""
    gl_x, gl_w = np.polynomial.legendre.leggauss(nodes)
    v = 0.5 * s * (gl_x + 1.0)
    w = 0.5 * s * gl_w
    total = 0.0
    for combo in product(range(nodes), repeat=k):
        shift = sum(v[i] for i in combo)
        weight = math.prod(w[i] for i in combo)
        total += weight * g_deriv(t + shift)
    return total


def suite_lemmas(config: GridConfig | None = None) -> VerificationReport:
    """Forward-difference identities, the iterated-integral form, the
    k-fold Hardy inequality, the difference-integral estimate, and the
    binomial semigroup-difference expansion."""
    config = config or GridConfig()
    start = time.perf_counter()
    rng = np.random.default_rng(config.seed)
    tg = config.time_grid()
    cases = []

    g = lambda x: math.sin(x) + x * x
    s0, t0 = 0.21, 0.4
    for k in (2, 3, 4):
        whole = forward_difference(g, k, s0, t0)
        nested = forward_difference(lambda u: forward_difference(g, k - 1, s0, u), 1, s0, t0)
        cases.append(_equality_case(f"nesting identity k={k}", {"k": k}, nested, whole, 1e-12))

    a = 1.3
    exp_g = lambda x: math.exp(-a * x)
    exp_gp = lambda x: -a * math.exp(-a * x)
    h = 1e-5
    for k in (1, 2, 3):
        fd = (forward_difference(exp_g, k, s0 + h, t0) - forward_difference(exp_g, k, s0 - h, t0)) / (2 * h)
        want = exp_gp(t0 + s0) if k == 1 else k * forward_difference(exp_gp, k - 1, s0, t0 + s0)
        cases.append(_equality_case(
            f"increment-derivative identity k={k}", {"k": k}, fd, want, 1e-6))
    fd_t = (forward_difference(exp_g, 2, s0, t0 + h) - forward_difference(exp_g, 2, s0, t0 - h)) / (2 * h)
    cases.append(_equality_case("start-derivative identity k=2", {"k": 2}, fd_t,
                                forward_difference(exp_gp, 2, s0, t0), 1e-6))

    poly = lambda x: x ** 5 - 2.0 * x ** 3 + x - 3.0
    poly_d2 = lambda x: 20.0 * x ** 3 - 12.0 * x
    poly_d3 = lambda x: 60.0 * x * x - 12.0
    for k, deriv in ((2, poly_d2), (3, poly_d3)):
        got = _nested_gl_difference(deriv, k, 0.7, 0.3)
        want = forward_difference(poly, k, 0.7, 0.3)
        cases.append(_equality_case(
            f"iterated-integral identity k={k} (polynomial)", {"k": k}, got, want, 1e-10))

    lhs, rhs = hardy_check_k(lambda v: np.exp(-v.sum(axis=-1)), 1, 1, 2)
    cases.append(_bound_case("k-fold Hardy inequality k=2 exponential",
                             {"p": 1, "r": 1, "k": 2, "lhs": lhs, "rhs": rhs}, lhs, rhs, 1e-8))

    for beta, k in ((0.6, 1), (1.5, 2)):
        cbk = big_C_beta_k(beta, k)
        for a_rate in (0.5, 1.0, 2.0):
            t1 = 0.3
            # |Delta_s^k(e^{-a .}, t)| = e^{-a t} (1 - e^{-a s})^k, so the
            # left side reduces to the same singular integral the
            # derivative representations use
            lhs = math.exp(-a_rate * t1) * abs(_difference_integral(a_rate, beta, k, tg))
            rhs = cbk * a_rate ** k * math.exp(-a_rate * t1) * _potential_integral(a_rate, k - beta, tg)
            cases.append(_bound_case(
                f"difference-integral estimate beta={beta} k={k} a={a_rate}",
                {"beta": beta, "k": k, "rate": a_rate, "lhs": lhs, "rhs": rhs}, lhs, rhs, 1e-8))
            probe = abs(forward_difference(lambda x: math.exp(-a_rate * x), k, 0.8, t1))
            closed = math.exp(-a_rate * t1) * (-math.expm1(-a_rate * 0.8)) ** k
            cases.append(_equality_case(
                f"difference closed form beta={beta} k={k} a={a_rate}",
                {"k": k, "rate": a_rate}, probe, closed, 1e-12))

    f = _random_family(rng, 1, 2, max_degree=5)[0]
    xs = np.array([[0.37, -0.81], [0.9, 0.1]])
    for k in (1, 2, 3):
        s1, t1 = 0.4, 0.7
        w = f
        for _ in range(k):
            w = poisson_apply_spectral(w, s1) - w
        lhs_exp = poisson_apply_spectral(w, t1)
        worst = 0.0
        for x in xs:
            direct = forward_difference(
                lambda tau: poisson_apply_spectral(f, tau).evaluate(x), k, s1, t1)
            worst = max(worst, abs(lhs_exp.evaluate(x) - direct))
        cases.append(_equality_case(
            f"binomial semigroup-difference expansion k={k}", {"k": k, "s": s1, "t": t1},
            worst, 0.0, 1e-12))

    report = VerificationReport("lemmas", cases)
    report.wall_time_seconds = time.perf_counter() - start
    return report


def suite_decay(config: GridConfig | None = None) -> VerificationReport:
    """Weighted decay of Poisson time derivatives: t^n |u^(n)| stays
    bounded on [1, 100] and decreases on [10, 100] for mean-free inputs."""
    config = config or GridConfig()
    start = time.perf_counter()
    rng = np.random.default_rng(config.seed)
    xs = np.array([[0.37, -0.81], [1.2, 0.4], [0.0, 0.9]])
    ts = np.geomspace(1.0, 100.0, 50)
    cases = []
    family = _random_family(rng, 3, 2, max_degree=6, drop_constant=True)
    for n in (1, 2, 3):
        for i, f in enumerate(family):
            vals = np.array([t ** n * np.max(np.abs(poisson_time_derivative(f, n, t).evaluate(xs)))
                             for t in ts])
            finite = bool(np.all(np.isfinite(vals)))
            late = vals[ts >= 10.0]
            max_growth = float(np.max(late[1:] / late[:-1])) if finite else math.inf
            cases.append(_bound_case(
                f"decay of t^{n} u^({n}) input #{i}",
                {"n": n, "input": i, "sup_on_[1,100]": float(np.max(vals))},
                max_growth, 1.0, 1e-10))
    report = VerificationReport("decay", cases)
    report.wall_time_seconds = time.perf_counter() - start
    return report


SUITE_NAMES = ("eigen", "dual-path", "inversion",
               "boundedness-T2.1", "boundedness-T2.2", "boundedness-T2.3",
               "boundedness-T2.4", "boundedness-T2.5", "boundedness-T2.6",
               "inclusion", "lemmas", "decay")


def run_suite(name: str, config: GridConfig | None = None) -> VerificationReport:
    """Run one suite by name (see SUITE_NAMES), or 'all' for everything."""
    if name == "all":
        return run_all(config)
    if name == "eigen":
        return suite_eigen(config)
    if name == "dual-path":
        return suite_dual_path(config)
    if name == "inversion":
        return suite_inversion(config)
    if name.startswith("boundedness-"):
        return suite_boundedness(name.removeprefix("boundedness-"), config)
    if name == "inclusion":
        return suite_inclusion(config)
    if name == "lemmas":
        return suite_lemmas(config)
    if name == "decay":
        return suite_decay(config)
    raise ValueError(f"unknown suite {name!r}")


def run_all(config: GridConfig | None = None) -> VerificationReport:
    """Every suite, aggregated into one report with suite-prefixed names."""
    config = config or GridConfig()
    start = time.perf_counter()
    cases = []
    for name in SUITE_NAMES:
        sub = run_suite(name, config)
        for case in sub.cases:
            case.name = f"{sub.suite}/{case.name}"
            cases.append(case)
    report = VerificationReport("all", cases)
    report.wall_time_seconds = time.perf_counter() - start
    return report
