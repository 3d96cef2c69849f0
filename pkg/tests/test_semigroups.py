import math

import numpy as np
import pytest

from gfrac.hermite import (
    HermiteExpansion,
    all_multi_indices,
    as_sampler,
    gauss_hermite_grid,
    hermite_1d,
    max_abs_coeff_diff,
    max_rel_coeff_error,
)
from gfrac.semigroups import (
    SMALL_TIME_SPECTRAL_CUTOFF,
    SubordinatorGrid,
    TimeGrid,
    default_time_grid,
    ou_apply_pointwise,
    ou_apply_spectral,
    p_infinity,
    poisson_apply_spectral,
    poisson_apply_subordinated,
    poisson_kernel,
    poisson_time_derivative,
    subordinator_grid,
)

RNG = np.random.default_rng(7)


def random_expansion(rng, dimension, degree, drop_constant=False):
    terms = {nu: rng.uniform(-1, 1) for nu in all_multi_indices(dimension, degree)}
    if drop_constant:
        terms.pop((0,) * dimension, None)
    return HermiteExpansion(dimension, terms)


class TestTimeGrid:
    def test_log_uniform_spacing(self):
        tg = TimeGrid.log_spaced(100, 1e-5, 20.0)
        gaps = np.diff(np.log(tg.nodes))
        assert np.max(np.abs(gaps - gaps[0])) < 1e-12

    def test_nodes_within_bounds_and_increasing(self):
        tg = default_time_grid()
        assert tg.nodes[0] == pytest.approx(tg.t_min)
        assert tg.nodes[-1] == pytest.approx(tg.t_max)
        assert np.all(np.diff(tg.nodes) > 0)

    def test_integrates_smooth_decaying_integrand(self):
        tg = default_time_grid()
        t = tg.nodes
        # integrand vanishing at both cutoffs: t e^{-2t}, integral 1/4
        assert tg.integrate(t * np.exp(-2 * t)) == pytest.approx(0.25, abs=1e-11)

    def test_weights_match_log_trapezoid(self):
        tg = TimeGrid.log_spaced(50, 1e-3, 10.0)
        t = tg.nodes
        vals = t * np.exp(-3 * t)
        plain = float(np.dot(tg.weights, vals))
        assert plain == pytest.approx(tg.integrate(vals, end_correction=False), abs=1e-15)

    def test_batch_axis(self):
        tg = TimeGrid.log_spaced(64, 1e-4, 30.0)
        rates = np.array([1.0, 2.0, 3.0])
        vals = tg.nodes[None, :] * np.exp(-rates[:, None] * tg.nodes[None, :])
        out = tg.integrate(vals)
        assert np.allclose(out, 1.0 / rates**2, rtol=1e-8)

    def test_bad_parameters(self):
        with pytest.raises(ValueError):
            TimeGrid.log_spaced(4)
        with pytest.raises(ValueError):
            TimeGrid.log_spaced(100, 0.0, 1.0)
        with pytest.raises(ValueError):
            TimeGrid.log_spaced(100, 2.0, 1.0)


class TestOUSpectral:
    def test_constant_is_fixed(self):
        f = HermiteExpansion(1, {(0,): 1.0})
        assert ou_apply_spectral(f, 3.7) == f

    def test_halving_time(self):
        f = HermiteExpansion.basis((1,))
        g = ou_apply_spectral(f, math.log(2.0))
        assert g.terms[(1,)] == pytest.approx(0.5, abs=1e-15)

    def test_identity_at_zero(self):
        f = random_expansion(RNG, 2, 5)
        assert ou_apply_spectral(f, 0.0) == f

    def test_negative_time_rejected(self):
        with pytest.raises(ValueError):
            ou_apply_spectral(HermiteExpansion.zero(1), -0.1)

    @pytest.mark.parametrize("t", [0.1, 1.0, 5.0])
    @pytest.mark.parametrize("s", [0.1, 1.0, 5.0])
    def test_semigroup_law(self, t, s):
        f = random_expansion(RNG, 2, 6)
        a = ou_apply_spectral(ou_apply_spectral(f, s), t)
        b = ou_apply_spectral(f, t + s)
        assert max_abs_coeff_diff(a, b) < 1e-12


class TestPoissonSpectral:
    def test_sqrt_order_multiplier(self):
        f = HermiteExpansion.basis((4,))
        g = poisson_apply_spectral(f, math.log(3.0) / 2.0)
        assert g.terms[(4,)] == pytest.approx(1.0 / 3.0, abs=1e-15)

    def test_constant_fixed_and_identity_at_zero(self):
        f = HermiteExpansion(2, {(0, 0): 2.0})
        assert poisson_apply_spectral(f, 9.0) == f
        g = random_expansion(RNG, 1, 4)
        assert poisson_apply_spectral(g, 0.0) == g

    @pytest.mark.parametrize("t", [0.1, 1.0, 5.0])
    @pytest.mark.parametrize("s", [0.1, 1.0, 5.0])
    def test_semigroup_law(self, t, s):
        f = random_expansion(RNG, 2, 6)
        a = poisson_apply_spectral(poisson_apply_spectral(f, s), t)
        b = poisson_apply_spectral(f, t + s)
        assert max_abs_coeff_diff(a, b) < 1e-12

    @pytest.mark.parametrize("t", [0.0, 0.3, 2.0])
    def test_multiplier_contraction(self, t):
        for n in range(0, 12):
            m = math.exp(-t * math.sqrt(n))
            assert m <= 1.0
            assert (m == 1.0) == (n == 0 or t == 0.0)


class TestOUPointwise:
    def test_conserves_constants(self):
        grid = gauss_hermite_grid(1, 6)
        val = ou_apply_pointwise(lambda p: np.ones(len(p)), 0.8, [0.3], grid)
        assert val == pytest.approx(1.0, abs=1e-14)

    def test_matches_spectral_on_h1(self):
        f = HermiteExpansion.basis((1,))
        grid = gauss_hermite_grid(1, 6)
        got = ou_apply_pointwise(f, math.log(2.0), [1.0], grid)
        assert got == pytest.approx(0.5 * hermite_1d(1, 1.0), abs=1e-13)

    def test_long_time_limit_is_mean(self):
        grid = gauss_hermite_grid(1, 8)
        got = ou_apply_pointwise(lambda p: p[:, 0] ** 2, 40.0, [0.0], grid)
        assert got == pytest.approx(0.5, abs=1e-12)

    def test_matches_spectral_on_random_expansion(self):
        f = random_expansion(RNG, 2, 5)
        grid = gauss_hermite_grid(2, 8)
        x = np.array([0.4, -1.1])
        want = ou_apply_spectral(f, 0.7).evaluate(x)
        got = ou_apply_pointwise(f, 0.7, x, grid)
        assert got == pytest.approx(want, rel=1e-12)

    def test_zero_time_rejected(self):
        grid = gauss_hermite_grid(1, 4)
        with pytest.raises(ValueError):
            ou_apply_pointwise(lambda p: np.ones(len(p)), 0.0, [0.0], grid)


class TestSubordination:
    def test_mass_is_one(self):
        for t in (0.25, 1.0, 4.0):
            sub = subordinator_grid(t)
            assert sub.total_mass() == pytest.approx(1.0, abs=1e-8)
            assert np.all(sub.density >= 0.0)

    def test_constant_preserved(self):
        f = HermiteExpansion(1, {(0,): 1.0})
        g = poisson_apply_subordinated(f, 1.0)
        assert abs(g.terms[(0,)] - 1.0) < 1e-8

    @pytest.mark.parametrize("t,n", [(1.0, 1), (2.0, 4), (0.25, 6), (4.0, 2)])
    def test_matches_spectral_on_single_mode(self, t, n):
        f = HermiteExpansion.basis((n,))
        got = poisson_apply_subordinated(f, t)
        want = poisson_apply_spectral(f, t)
        assert max_rel_coeff_error(got, want) < 1e-6

    @pytest.mark.parametrize("t", [0.25, 0.7, 1.5, 4.0])
    def test_matches_spectral_on_expansions(self, t):
        f = random_expansion(RNG, 2, 6)
        got = poisson_apply_subordinated(f, t)
        want = poisson_apply_spectral(f, t)
        assert max_rel_coeff_error(got, want) < 1e-6

    def test_small_time_routes_to_spectral(self):
        f = random_expansion(RNG, 1, 4)
        t = SMALL_TIME_SPECTRAL_CUTOFF / 2
        assert poisson_apply_subordinated(f, t) == poisson_apply_spectral(f, t)

    def test_nonpositive_time_rejected(self):
        with pytest.raises(ValueError):
            poisson_apply_subordinated(HermiteExpansion.zero(1), 0.0)
        with pytest.raises(ValueError):
            subordinator_grid(-1.0)

    def test_mismatched_grid_rejected(self):
        sub = subordinator_grid(1.0)
        with pytest.raises(ValueError):
            poisson_apply_subordinated(HermiteExpansion.zero(1), 2.0, sub)


class TestPoissonKernel:
    Y = np.linspace(-9.0, 9.0, 3001)

    def kernel_integral(self, t, x, integrand):
        p = np.array([poisson_kernel(t, [x], [y]) for y in self.Y])
        return float(np.trapezoid(p * integrand(self.Y), x=self.Y))

    def test_unit_mass(self):
        val = self.kernel_integral(1.0, 0.3, lambda y: np.ones_like(y))
        assert val == pytest.approx(1.0, abs=1e-7)

    def test_odd_mode_at_origin(self):
        val = self.kernel_integral(1.0, 0.0, lambda y: hermite_1d(1, y))
        assert abs(val) < 1e-10

    def test_matches_spectral_on_h1(self):
        val = self.kernel_integral(1.0, 1.0, lambda y: hermite_1d(1, y))
        want = math.exp(-1.0) * hermite_1d(1, 1.0)
        assert val == pytest.approx(want, rel=1e-7)

    def test_nonpositive_time_rejected(self):
        with pytest.raises(ValueError):
            poisson_kernel(0.0, [0.0], [0.0])


class TestTimeDerivative:
    def test_constant_has_zero_derivative(self):
        f = HermiteExpansion(1, {(0,): 1.0})
        assert poisson_time_derivative(f, 1, 0.5).terms == {}

    def test_first_derivative_at_zero(self):
        f = HermiteExpansion.basis((4,))
        g = poisson_time_derivative(f, 1, 0.0)
        assert g.terms[(4,)] == pytest.approx(-2.0, abs=1e-15)

    def test_second_derivative(self):
        f = HermiteExpansion.basis((1,))
        g = poisson_time_derivative(f, 2, 1.0)
        assert g.terms[(1,)] == pytest.approx(math.exp(-1.0), abs=1e-15)

    def test_order_zero_is_semigroup(self):
        f = random_expansion(RNG, 1, 5)
        assert poisson_time_derivative(f, 0, 0.8) == poisson_apply_spectral(f, 0.8)

    def test_matches_central_differences_first_order(self):
        f = random_expansion(RNG, 2, 5)
        t0, h = 0.9, 1e-4
        got = poisson_time_derivative(f, 1, t0)
        fd = (1.0 / (2 * h)) * (poisson_apply_spectral(f, t0 + h) - poisson_apply_spectral(f, t0 - h))
        for nu, c in got.terms.items():
            assert fd.terms[nu] == pytest.approx(c, rel=1e-6)

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_matches_central_differences_high_precision(self, k):
        # The iterated order-2 central stencil at step 1e-4 cancels below
        # float64 for k = 3, so the stencil is evaluated in 50-digit
        # arithmetic on the per-order multiplier t -> exp(-t sqrt(n)).
        import mpmath

        t0, h = 0.9, 1e-4
        with mpmath.workdps(50):
            hh = mpmath.mpf("1e-4")
            for n in (1, 2, 4, 6, 9):
                offsets = {0: mpmath.mpf(1)}
                for _ in range(k):
                    nxt = {}
                    for off, w in offsets.items():
                        nxt[off + 1] = nxt.get(off + 1, 0) + w / (2 * hh)
                        nxt[off - 1] = nxt.get(off - 1, 0) - w / (2 * hh)
                    offsets = nxt
                root = mpmath.sqrt(n)
                fd = sum(w * mpmath.exp(-(t0 + off * hh) * root) for off, w in offsets.items())
                got = poisson_time_derivative(HermiteExpansion.basis((n,)), k, t0).terms[(n,)]
                assert got == pytest.approx(float(fd), rel=1e-6)

    def test_negative_arguments_rejected(self):
        with pytest.raises(ValueError):
            poisson_time_derivative(HermiteExpansion.zero(1), -1, 0.0)
        with pytest.raises(ValueError):
            poisson_time_derivative(HermiteExpansion.zero(1), 1, -0.5)


class TestPInfinity:
    def test_reads_constant_coefficient(self):
        assert p_infinity(HermiteExpansion(1, {(0,): 3.0, (2,): 1.0})) == 3.0
        assert p_infinity(HermiteExpansion.basis((3,))) == 0.0
        assert p_infinity(HermiteExpansion.zero(2)) == 0.0

    def test_long_time_spectral_limit(self):
        f = random_expansion(RNG, 2, 4)
        g = poisson_apply_spectral(f, 80.0)
        assert abs(g.terms.get((0, 0), 0.0) - p_infinity(f)) < 1e-15
        assert all(abs(c) < 1e-30 for nu, c in g.terms.items() if nu != (0, 0))


class TestDecay:
    def test_weighted_derivative_bounded_and_eventually_decreasing(self):
        for n in (1, 2, 3):
            f = random_expansion(RNG, 2, 6, drop_constant=True)
            xs = np.array([[0.37, -0.81], [1.2, 0.4], [0.0, 0.9]])
            ts = np.geomspace(1.0, 100.0, 60)
            vals = []
            for t in ts:
                u = poisson_time_derivative(f, n, t)
                vals.append(t**n * np.max(np.abs(u.evaluate(xs))))
            vals = np.array(vals)
            assert np.all(np.isfinite(vals))
            late = vals[ts >= 10.0]
            assert np.all(np.diff(late) <= 1e-10 * late[:-1])
