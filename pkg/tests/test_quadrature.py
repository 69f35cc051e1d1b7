import pytest

from macfrac.errors import ConvergenceError, TruncationError
from macfrac.kernel import KernelSlice, kernel_eval
from macfrac.mpnum import precision
from macfrac.quadrature import integrate_segment, integrate_semi_infinite
from macfrac.spectra import builtin_spectrum


class TestSegment:
    def test_constant(self, ctx):
        value, err = integrate_segment(lambda r: ctx.mp.one, 0, 1, ctx)
        assert abs(value - 1) <= ctx.quad_tol

    def test_exponential(self, ctx):
        mp = ctx.mp
        value, err = integrate_segment(lambda r: mp.exp(-r), 0, 1, ctx)
        assert abs(value - (1 - mp.exp(-1))) <= ctx.quad_tol
        assert mp.nstr(value, 17) == "0.63212055882855768"

    def test_sine(self, ctx):
        mp = ctx.mp
        value, err = integrate_segment(mp.sin, 0, mp.pi, ctx)
        assert abs(value - 2) <= ctx.quad_tol

    def test_estimate_bounds_error(self, ctx40):
        mp = ctx40.mp
        f = lambda r: mp.cos(7 * r) * mp.exp(r)
        exact = (mp.exp(3) * (mp.cos(21) + 7 * mp.sin(21)) - 1) / 50
        value, err = integrate_segment(f, 0, 3, ctx40)
        assert abs(value - exact) <= max(err, 10 * ctx40.eps)

    def test_non_convergence(self, ctx40):
        # |r - 1/3|^(1/3) has a kink inside the panel
        f = lambda r: ctx40.mp.cbrt(abs(r - ctx40.mpf(1) / 3))
        with pytest.raises(ConvergenceError):
            integrate_segment(f, 0, 1, ctx40, max_levels=5)

    def test_bad_interval(self, ctx):
        with pytest.raises(ValueError):
            integrate_segment(lambda r: r, 1, 1, ctx)


class TestSemiInfinite:
    def test_exponential(self, ctx):
        res = integrate_semi_infinite(lambda r: ctx.mp.exp(-r), ctx)
        assert abs(res.value - 1) <= ctx.quad_tol
        assert res.truncation_radius >= 1
        assert res.error_estimate <= ctx.quad_tol * max(1, abs(res.value))

    def test_geom_kernel(self, ctx):
        mp = ctx.mp
        x = mp.exp(-1)
        res = integrate_semi_infinite(lambda r: mp.power(x, r), ctx)
        assert abs(res.value - 1) <= ctx.quad_tol

    def test_panel_layout(self, ctx40):
        seen = []

        def f(r):
            seen.append(r)
            return ctx40.mp.exp(-r)

        res = integrate_semi_infinite(f, ctx40)
        # panels [0,1],[1,2],[2,4],...: radius is a power of two
        radius = int(res.truncation_radius)
        assert radius & (radius - 1) == 0
        assert res.segments_used == radius.bit_length()
        assert max(seen) <= radius

    def test_recip_gamma_against_mpmath_quad(self, ctx):
        # independent oracle: mpmath.quad (tanh-sinh over [0, inf]) at doubled precision
        twice = precision(2 * ctx.digits)
        oracle = twice.mp.quad(lambda r: twice.mp.rgamma(r + 1), [0, 1, 4, 16, twice.mp.inf])
        res = integrate_semi_infinite(lambda r: ctx.mp.rgamma(r + 1), ctx)
        assert abs(res.value - ctx.mpf(oracle)) <= ctx.quad_tol
        assert ctx.mp.nstr(res.value, 11) == "2.2665345077"

    @pytest.mark.parametrize(
        "name, x", [("exp", "1"), ("geom", "0.9"), ("sin", "4"), ("gauss", "2.5"), ("besselj0", "5")]
    )
    def test_precision_scaling(self, name, x):
        lo, hi = precision(40), precision(80)
        s = builtin_spectrum(name)
        a = integrate_semi_infinite(lambda r: kernel_eval(KernelSlice(s, x), r, lo), lo).value
        b = integrate_semi_infinite(lambda r: kernel_eval(KernelSlice(s, x), r, hi), hi).value
        assert abs(hi.mpf(a) - b) < lo.mpf(10) ** (5 - lo.digits)

    @pytest.mark.parametrize("name, x", [("exp", "2"), ("sin", "3"), ("besselj0", "4")])
    def test_panel_refinement(self, ctx40, name, x):
        ks = KernelSlice(builtin_spectrum(name), x)
        f = lambda r: kernel_eval(ks, r, ctx40)
        coarse = integrate_semi_infinite(f, ctx40)
        fine = integrate_semi_infinite(f, ctx40, initial_width="0.5")
        bound = max(coarse.error_estimate, fine.error_estimate, 10 * ctx40.eps)
        assert abs(coarse.value - fine.value) <= bound + ctx40.quad_tol

    def test_linearity(self, ctx40):
        mp = ctx40.mp
        e, s = KernelSlice(builtin_spectrum("exp"), "1.7"), KernelSlice(builtin_spectrum("sin"), "1.7")
        alpha, beta = ctx40.mpf("0.75"), ctx40.mpf("-2.5")
        fe = lambda r: kernel_eval(e, r, ctx40)
        fs = lambda r: kernel_eval(s, r, ctx40)
        re_, rs = integrate_semi_infinite(fe, ctx40), integrate_semi_infinite(fs, ctx40)
        combo = integrate_semi_infinite(lambda r: alpha * fe(r) + beta * fs(r), ctx40)
        budget = abs(alpha) * re_.error_estimate + abs(beta) * rs.error_estimate + combo.error_estimate
        assert abs(combo.value - (alpha * re_.value + beta * rs.value)) <= budget + ctx40.quad_tol

    def test_truncation_failure(self, ctx40):
        with pytest.raises(TruncationError):
            integrate_semi_infinite(lambda r: 1 / (1 + r * r), ctx40, max_radius=64)
