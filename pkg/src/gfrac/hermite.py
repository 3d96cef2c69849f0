"""Hermite expansions orthonormal with respect to the Gaussian measure.

Everything in this package integrates against the probability measure

    gamma_d(dx) = exp(-|x|^2) / pi^(d/2) dx     on R^d,

whose orthonormal polynomial family is the normalized (physicists')
Hermite family h_n = H_n / sqrt(2^n n!), tensorized over axes by
multi-indices.  Finite expansions in this basis are the exact carrier
for the semigroups and fractional operators in the sibling modules: all
of them act diagonally on the h_nu basis, with the operator determined
by a scalar multiplier of the order |nu|.

Conventions
-----------
* A multi-index is a plain tuple of nonnegative ints; its order is the
  component sum.
* Expansions are canonical: exact-zero coefficients are dropped and keys
  sort lexicographically, so serialization is reproducible.
* Gauss-Hermite grids integrate against gamma_d itself; the per-axis
  weights sum to one.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

MultiIndex = tuple[int, ...]

__all__ = [
    "MultiIndex",
    "order",
    "hermite_1d",
    "hermite_table",
    "hermite_eval",
    "HermiteExpansion",
    "expansion_eval",
    "chaos_projection",
    "pi0",
    "differentiate",
    "multiply_by_coordinate",
    "apply_ou_generator",
    "apply_order_multiplier",
    "GaussHermiteGrid",
    "gauss_hermite_grid",
    "project_coefficient",
    "evaluate_on_grid",
    "as_sampler",
    "all_multi_indices",
    "expansion_to_json",
    "expansion_from_json",
    "read_expansion",
    "write_expansion",
    "format_float",
    "max_abs_coeff_diff",
    "max_rel_coeff_error",
    "ExpansionFormatError",
]


class ExpansionFormatError(ValueError):
    """Raised when an expansion file or JSON document is malformed."""


def order(nu: Sequence[int]) -> int:
    """Order |nu| of a multi-index: the sum of its components."""
    return int(sum(nu))


def _check_multi_index(nu: Sequence[int], dimension: int | None = None) -> MultiIndex:
    key = tuple(int(n) for n in nu)
    if any(n < 0 for n in key):
        raise ValueError(f"multi-index components must be >= 0, got {key}")
    if dimension is not None and len(key) != dimension:
        raise ValueError(f"multi-index {key} has length {len(key)}, expected {dimension}")
    return key


def hermite_1d(n: int, x):
    """Normalized Hermite polynomial h_n(x), scalar or elementwise on arrays.

    h_n = H_n / sqrt(2^n n!) with H_n the physicists' polynomials, so the
    family is orthonormal in L^2(e^{-x^2}/sqrt(pi) dx).  Evaluated by the
    upward three-term recurrence on the normalized family,

        h_{m+1}(x) = sqrt(2/(m+1)) x h_m(x) - sqrt(m/(m+1)) h_{m-1}(x),

    which is stable on the real line at the degrees used here.
    """
    if n < 0:
        raise ValueError("degree must be >= 0")
    arr = np.asarray(x, dtype=float)
    h_prev = np.ones_like(arr)
    if n == 0:
        return float(h_prev) if arr.ndim == 0 else h_prev
    h = math.sqrt(2.0) * arr
    for m in range(1, n):
        h, h_prev = math.sqrt(2.0 / (m + 1)) * arr * h - math.sqrt(m / (m + 1.0)) * h_prev, h
    return float(h) if arr.ndim == 0 else h


def hermite_table(max_degree: int, x) -> np.ndarray:
    """All of h_0(x)..h_{max_degree}(x) at once; shape (max_degree+1,) + x.shape."""
    arr = np.asarray(x, dtype=float)
    out = np.empty((max_degree + 1,) + arr.shape)
    out[0] = 1.0
    if max_degree >= 1:
        out[1] = math.sqrt(2.0) * arr
    for m in range(1, max_degree):
        out[m + 1] = math.sqrt(2.0 / (m + 1)) * arr * out[m] - math.sqrt(m / (m + 1.0)) * out[m - 1]
    return out


def hermite_eval(nu: Sequence[int], x) -> float:
    """Tensor Hermite polynomial h_nu(x) = prod_i h_{nu_i}(x_i) at one point."""
    key = _check_multi_index(nu)
    pt = np.asarray(x, dtype=float).reshape(-1)
    if len(pt) != len(key):
        raise ValueError(f"point has dimension {len(pt)}, multi-index has {len(key)}")
    val = 1.0
    for n_i, x_i in zip(key, pt):
        val *= hermite_1d(n_i, x_i)
    return float(val)


def _canonical_terms(dimension: int, terms) -> dict[MultiIndex, float]:
    items: Iterable
    if isinstance(terms, Mapping):
        items = terms.items()
    else:
        items = terms
    merged: dict[MultiIndex, float] = {}
    for nu, c in items:
        key = _check_multi_index(nu, dimension)
        merged[key] = merged.get(key, 0.0) + float(c)
    return {key: merged[key] for key in sorted(merged) if merged[key] != 0.0}


@dataclass(frozen=True)
class HermiteExpansion:
    """Finite linear combination sum_nu c_nu h_nu in d variables.

    The stored form is canonical: no zero coefficients, keys sorted.
    Instances are immutable; all operations build new expansions.
    """

    dimension: int
    terms: dict

    def __post_init__(self):
        d = int(self.dimension)
        if d < 1:
            raise ValueError("dimension must be >= 1")
        object.__setattr__(self, "dimension", d)
        object.__setattr__(self, "terms", _canonical_terms(d, self.terms))

    @property
    def degree(self) -> int:
        """Largest order over stored terms (0 for the empty expansion)."""
        return max((order(nu) for nu in self.terms), default=0)

    @property
    def orders(self) -> list[int]:
        """Sorted distinct orders present in the expansion."""
        return sorted({order(nu) for nu in self.terms})

    def coefficient(self, nu: Sequence[int]) -> float:
        return self.terms.get(_check_multi_index(nu, self.dimension), 0.0)

    def evaluate(self, x):
        """Value at a point (d,) or at a stack of points (N, d)."""
        return expansion_eval(self, x)

    def chaos(self, n: int) -> "HermiteExpansion":
        return chaos_projection(self, n)

    def __add__(self, other: "HermiteExpansion") -> "HermiteExpansion":
        if not isinstance(other, HermiteExpansion):
            return NotImplemented
        if other.dimension != self.dimension:
            raise ValueError("dimension mismatch")
        merged = dict(self.terms)
        for nu, c in other.terms.items():
            merged[nu] = merged.get(nu, 0.0) + c
        return HermiteExpansion(self.dimension, merged)

    def __sub__(self, other: "HermiteExpansion") -> "HermiteExpansion":
        return self + (-1.0) * other

    def __mul__(self, scalar) -> "HermiteExpansion":
        c = float(scalar)
        return HermiteExpansion(self.dimension, {nu: c * v for nu, v in self.terms.items()})

    __rmul__ = __mul__

    def __len__(self) -> int:
        return len(self.terms)

    @classmethod
    def basis(cls, nu: Sequence[int]) -> "HermiteExpansion":
        """The single basis polynomial h_nu."""
        key = _check_multi_index(nu)
        return cls(len(key), {key: 1.0})

    @classmethod
    def zero(cls, dimension: int) -> "HermiteExpansion":
        return cls(dimension, {})


def expansion_eval(f: HermiteExpansion, x):
    """Evaluate an expansion at a point (d,) or at points (N, d)."""
    pts = np.asarray(x, dtype=float)
    single = pts.ndim <= 1
    pts = np.atleast_2d(pts)
    if pts.shape[1] != f.dimension:
        raise ValueError(f"points have dimension {pts.shape[1]}, expansion has {f.dimension}")
    if not f.terms:
        vals = np.zeros(pts.shape[0])
        return float(vals[0]) if single else vals
    per_axis_max = [max(nu[i] for nu in f.terms) for i in range(f.dimension)]
    tables = [hermite_table(per_axis_max[i], pts[:, i]) for i in range(f.dimension)]
    vals = np.zeros(pts.shape[0])
    for nu, c in f.terms.items():
        term = np.full(pts.shape[0], c)
        for i, n_i in enumerate(nu):
            term = term * tables[i][n_i]
        vals += term
    return float(vals[0]) if single else vals


def chaos_projection(f: HermiteExpansion, n: int) -> HermiteExpansion:
    """Orthogonal projection onto the order-n Wiener chaos: keep |nu| = n."""
    if n < 0:
        raise ValueError("chaos order must be >= 0")
    return HermiteExpansion(f.dimension, {nu: c for nu, c in f.terms.items() if order(nu) == n})


def pi0(f: HermiteExpansion) -> HermiteExpansion:
    """Remove the mean: Pi_0 f = f - integral of f dgamma_d = f - J_0 f."""
    return HermiteExpansion(f.dimension, {nu: c for nu, c in f.terms.items() if order(nu) > 0})


def differentiate(f: HermiteExpansion, axis: int) -> HermiteExpansion:
    """Partial derivative along one axis, using h_n' = sqrt(2n) h_{n-1}."""
    if not 0 <= axis < f.dimension:
        raise ValueError(f"axis {axis} out of range for dimension {f.dimension}")
    out: dict[MultiIndex, float] = {}
    for nu, c in f.terms.items():
        n = nu[axis]
        if n == 0:
            continue
        key = nu[:axis] + (n - 1,) + nu[axis + 1:]
        out[key] = out.get(key, 0.0) + c * math.sqrt(2.0 * n)
    return HermiteExpansion(f.dimension, out)


def multiply_by_coordinate(f: HermiteExpansion, axis: int) -> HermiteExpansion:
    """Multiply by x_axis, using x h_n = sqrt((n+1)/2) h_{n+1} + sqrt(n/2) h_{n-1}."""
    if not 0 <= axis < f.dimension:
        raise ValueError(f"axis {axis} out of range for dimension {f.dimension}")
    out: dict[MultiIndex, float] = {}
    for nu, c in f.terms.items():
        n = nu[axis]
        up = nu[:axis] + (n + 1,) + nu[axis + 1:]
        out[up] = out.get(up, 0.0) + c * math.sqrt((n + 1) / 2.0)
        if n > 0:
            down = nu[:axis] + (n - 1,) + nu[axis + 1:]
            out[down] = out.get(down, 0.0) + c * math.sqrt(n / 2.0)
    return HermiteExpansion(f.dimension, out)


def apply_order_multiplier(f: HermiteExpansion, multiplier: Callable[[int], float]) -> HermiteExpansion:
    """Apply a diagonal operator c_nu -> multiplier(|nu|) * c_nu.

    Every semigroup and fractional operator in this package reduces to
    this on finite expansions; the multiplier is computed once per
    distinct order.
    """
    values = {n: float(multiplier(n)) for n in f.orders}
    return HermiteExpansion(f.dimension, {nu: c * values[order(nu)] for nu, c in f.terms.items()})


def apply_ou_generator(f: HermiteExpansion, mode: str = "spectral") -> HermiteExpansion:
    """Ornstein-Uhlenbeck generator L = (1/2) Laplacian - <x, grad>.

    ``spectral`` multiplies c_nu by -|nu| (h_nu are eigenfunctions with
    eigenvalue -|nu|); ``differential`` assembles the same operator from
    the coefficient recurrences for d/dx_i and x_i.  The two agree up to
    rounding, which the verification suite checks.
    """
    if mode == "spectral":
        return apply_order_multiplier(f, lambda n: -float(n))
    if mode == "differential":
        out = HermiteExpansion.zero(f.dimension)
        for i in range(f.dimension):
            df = differentiate(f, i)
            out = out + 0.5 * differentiate(df, i) - multiply_by_coordinate(df, i)
        return out
    raise ValueError(f"unknown mode {mode!r}, expected 'spectral' or 'differential'")


@dataclass(frozen=True, eq=False)
class GaussHermiteGrid:
    """Tensorized Gauss-Hermite rule for integrals against gamma_d.

    ``nodes``/``weights`` are the shared per-axis rule; tensorization
    over the d axes is implicit.  Weights sum to one per axis, so the
    rule integrates the constant 1 exactly.
    """

    dimension: int
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        self.nodes.flags.writeable = False
        self.weights.flags.writeable = False

    @property
    def nodes_per_axis(self) -> int:
        return len(self.nodes)

    def points(self) -> np.ndarray:
        """All tensor-product nodes, shape (nodes_per_axis**d, d)."""
        grids = np.meshgrid(*([self.nodes] * self.dimension), indexing="ij")
        return np.stack([g.reshape(-1) for g in grids], axis=-1)

    def point_weights(self) -> np.ndarray:
        """Weights matching :meth:`points`, shape (nodes_per_axis**d,)."""
        w = self.weights
        out = w
        for _ in range(self.dimension - 1):
            out = np.multiply.outer(out, w)
        return out.reshape(-1)

    def integrate(self, values_or_sampler) -> float:
        """Integral against gamma_d of sampled values or of a sampler."""
        if callable(values_or_sampler):
            values = np.asarray(values_or_sampler(self.points()), dtype=float)
        else:
            values = np.asarray(values_or_sampler, dtype=float)
        return float(np.dot(self.point_weights(), values))


def gauss_hermite_grid(dimension: int, nodes_per_axis: int) -> GaussHermiteGrid:
    """Build a grid exact for polynomials of per-axis degree <= 2m - 1.

    Nodes and weights come from the Hermite Gauss rule for the weight
    e^{-x^2}; dividing the weights by sqrt(pi) renormalizes to gamma_1.
    """
    if dimension < 1:
        raise ValueError("dimension must be >= 1")
    if nodes_per_axis < 1:
        raise ValueError("nodes_per_axis must be >= 1")
    x, w = np.polynomial.hermite.hermgauss(nodes_per_axis)
    return GaussHermiteGrid(dimension, x, w / math.sqrt(math.pi))


def as_sampler(f: HermiteExpansion) -> Callable[[np.ndarray], np.ndarray]:
    """Wrap an expansion as a vectorized sampler over point stacks (N, d)."""

    def sampler(points: np.ndarray) -> np.ndarray:
        return np.atleast_1d(expansion_eval(f, points))

    return sampler


def _sample(f, points: np.ndarray) -> np.ndarray:
    if isinstance(f, HermiteExpansion):
        return np.atleast_1d(expansion_eval(f, points))
    return np.asarray(f(points), dtype=float)


def project_coefficient(sampler, nu: Sequence[int], grid: GaussHermiteGrid) -> float:
    """Fourier-Hermite coefficient <f, h_nu> against gamma_d by quadrature.

    The caller owns accuracy: the grid must be exact for the product of
    the sampler's degree with |nu|.
    """
    key = _check_multi_index(nu, grid.dimension)
    pts = grid.points()
    values = _sample(sampler, pts)
    h_vals = np.ones(pts.shape[0])
    for i, n_i in enumerate(key):
        h_vals = h_vals * hermite_table(n_i, pts[:, i])[n_i]
    return float(np.dot(grid.point_weights(), values * h_vals))


def evaluate_on_grid(f: HermiteExpansion, grid: GaussHermiteGrid) -> np.ndarray:
    """Expansion values on all tensor nodes; shape (nodes_per_axis**d,).

    Built from per-axis tables and outer products, so the cost is
    O(#terms * m^d) rather than a fresh recurrence per point.
    """
    if grid.dimension != f.dimension:
        raise ValueError("grid and expansion dimensions differ")
    if not f.terms:
        return np.zeros(grid.nodes_per_axis ** grid.dimension)
    table = hermite_table(f.degree, grid.nodes)
    shape = (grid.nodes_per_axis,) * grid.dimension
    vals = np.zeros(shape)
    for nu, c in f.terms.items():
        term = np.full((), c)
        for n_i in nu:
            term = np.multiply.outer(term, table[n_i])
        vals += term
    return vals.reshape(-1)


def all_multi_indices(dimension: int, max_order: int) -> list[MultiIndex]:
    """Every multi-index of length ``dimension`` with order <= ``max_order``."""
    if dimension == 1:
        return [(n,) for n in range(max_order + 1)]
    out = []
    for head in range(max_order + 1):
        for tail in all_multi_indices(dimension - 1, max_order - head):
            out.append((head,) + tail)
    return sorted(out)


def max_abs_coeff_diff(f: HermiteExpansion, g: HermiteExpansion) -> float:
    """Largest |c_f(nu) - c_g(nu)| over the union of supports."""
    keys = set(f.terms) | set(g.terms)
    return max((abs(f.terms.get(k, 0.0) - g.terms.get(k, 0.0)) for k in keys), default=0.0)


def max_rel_coeff_error(candidate: HermiteExpansion, reference: HermiteExpansion,
                        zero_tol: float = 1e-12) -> float:
    """Largest per-coefficient relative error of ``candidate`` vs ``reference``.

    Where the reference coefficient vanishes the absolute error is used,
    scaled by ``zero_tol`` against the reference magnitude.
    """
    keys = set(candidate.terms) | set(reference.terms)
    scale = max((abs(v) for v in reference.terms.values()), default=1.0)
    worst = 0.0
    for k in keys:
        a = candidate.terms.get(k, 0.0)
        b = reference.terms.get(k, 0.0)
        if b != 0.0:
            worst = max(worst, abs(a - b) / abs(b))
        elif abs(a) > zero_tol * scale:
            worst = max(worst, abs(a) / (zero_tol * scale))
    return worst


def format_float(x: float) -> str:
    """Fixed 17-significant-digit decimal form; round-trips float64 exactly."""
    return f"{float(x):.17g}"


def expansion_to_json(f: HermiteExpansion) -> str:
    """Serialize in the canonical file format.

    The document is ``{"dimension": d, "terms": [{"nu": [...], "c": ...}]}``
    with terms sorted lexicographically by nu and coefficients written
    with 17 significant digits, so equal expansions produce identical
    bytes.
    """
    rows = []
    for nu, c in f.terms.items():  # canonical storage is already sorted
        nu_txt = ", ".join(str(n) for n in nu)
        rows.append(f'    {{"nu": [{nu_txt}], "c": {format_float(c)}}}')
    body = ",\n".join(rows)
    if body:
        return f'{{\n  "dimension": {f.dimension},\n  "terms": [\n{body}\n  ]\n}}\n'
    return f'{{\n  "dimension": {f.dimension},\n  "terms": []\n}}\n'


def expansion_from_json(text: str) -> HermiteExpansion:
    """Parse the canonical file format; raises ExpansionFormatError on bad input."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ExpansionFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "dimension" not in doc or "terms" not in doc:
        raise ExpansionFormatError("expected an object with 'dimension' and 'terms'")
    if not isinstance(doc["terms"], list):
        raise ExpansionFormatError("'terms' must be a list")
    try:
        dimension = int(doc["dimension"])
        terms = []
        for row in doc["terms"]:
            terms.append((tuple(int(n) for n in row["nu"]), float(row["c"])))
        return HermiteExpansion(dimension, terms)
    except (TypeError, KeyError, ValueError) as exc:
        raise ExpansionFormatError(f"malformed expansion document: {exc}") from exc


def read_expansion(path) -> HermiteExpansion:
    with open(path, "r", encoding="utf-8") as fh:
        return expansion_from_json(fh.read())


def write_expansion(f: HermiteExpansion, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(expansion_to_json(f))
