import numpy as np
import pytest
import sympy as sp

from conftest import band_limited
from longwave.errors import PreconditionError
from longwave.fields import (
    Constants,
    FieldHistory,
    ScalarField,
    VectorField,
    curl,
    divergence,
    gradient,
    imag_ratio,
    laplacian,
    make_grid,
    mode_power,
    residual_norms,
    spectral_derivative,
    time_derivative,
    wave_residual,
)


class TestGrid:
    def test_spacing_1d(self):
        g = make_grid(1, [2 * np.pi], [8])
        assert g.spacing == pytest.approx((np.pi / 4,))
        assert g.size == 8

    def test_size_3d(self):
        g = make_grid(3, [2 * np.pi] * 3, [16] * 3)
        assert g.size == 4096
        assert g.shape == (16, 16, 16)

    @pytest.mark.parametrize("points,lengths,match", [
        ([7], [2 * np.pi], "even"),
        ([2], [1.0], "at least 4"),
        ([8], [0.0], "positive"),
        ([8], [-1.0], "positive"),
    ])
    def test_rejects_bad_axes(self, points, lengths, match):
        with pytest.raises(PreconditionError, match=match):
            make_grid(1, lengths, points)

    def test_rejects_bad_rank(self):
        with pytest.raises(PreconditionError):
            make_grid(2, [1.0, 1.0], [4, 4])

    def test_wavenumbers_standard_fourier_set(self):
        g = make_grid(1, [4.0], [8])
        k = g.wavenumbers[0]
        n = np.array([0, 1, 2, 3, -4, -3, -2, -1])
        np.testing.assert_allclose(k, 2 * np.pi * n / 4.0)
        assert g.odd_wavenumbers[0][4] == 0.0


class TestConstants:
    def test_natural_units(self):
        c = Constants()
        assert c.eps0 * c.mu0 * c.c**2 == pytest.approx(1.0, rel=1e-12)

    def test_si_consistent(self):
        c = Constants.si()
        assert abs(c.eps0 * c.mu0 * c.c**2 - 1) < 1e-12

    def test_rejects_inconsistent_eps0(self):
        with pytest.raises(PreconditionError):
            Constants(c=1.0, mu0=1.0, eps0=2.0)

    def test_rejects_nonpositive(self):
        with pytest.raises(PreconditionError):
            Constants(c=0.0)


class TestSpectralDerivative:
    def test_gradient_of_sin_matches_symbolic(self):
        g = make_grid(1, [2 * np.pi], [32])
        xs = sp.symbols("x")
        expr = sp.sin(xs) + sp.Rational(1, 3) * sp.cos(3 * xs)
        deriv = sp.lambdify(xs, sp.diff(expr, xs), "numpy")
        fn = sp.lambdify(xs, expr, "numpy")
        x = g.axes[0]
        grad = gradient(ScalarField(g, fn(x)))
        np.testing.assert_allclose(grad[0].values.real, deriv(x), atol=1e-13)
        assert np.max(np.abs(grad.components[1:])) == 0.0

    def test_laplacian_exact_on_modes(self, grid3):
        x, y, z = (np.broadcast_to(c, grid3.shape) for c in grid3.coords)
        f = ScalarField(grid3, np.sin(2 * x) * np.cos(3 * y) + np.cos(z))
        expected = -13 * np.sin(2 * x) * np.cos(3 * y) - np.cos(z)
        np.testing.assert_allclose(laplacian(f).values, expected, atol=1e-12)

    def test_constant_field_derivative_zero(self, grid3):
        f = ScalarField(grid3, np.full(grid3.shape, 3.7))
        assert gradient(f).scale() < 1e-13 * 3.7
        assert np.max(np.abs(laplacian(f).values)) < 1e-13 * 3.7

    def test_divergence_of_constant_vector(self, grid3):
        a = VectorField.from_components(grid3, 1.0, -2.0, 0.5)
        assert np.max(np.abs(divergence(a).values)) < 1e-13

    def test_identities_on_random_fields(self, grid3, rng):
        f = band_limited(grid3, rng)
        a = band_limited(grid3, rng, vector=True)
        cg = curl(gradient(f))
        dc = divergence(curl(a))
        assert cg.scale() < 1e-12 * gradient(f).scale()
        assert np.max(np.abs(dc.values)) < 1e-12 * curl(a).scale()

    def test_arity_errors(self, grid1, grid3):
        s1 = ScalarField.zeros(grid1)
        v1 = VectorField.zeros(grid1)
        with pytest.raises(PreconditionError):
            spectral_derivative(s1, "curl")
        with pytest.raises(PreconditionError):
            spectral_derivative(v1, "gradient")
        with pytest.raises(PreconditionError, match="rank-3"):
            spectral_derivative(v1, "curl")
        with pytest.raises(PreconditionError):
            spectral_derivative(s1, "hessian")

    def test_odd_derivative_drops_nyquist(self):
        g = make_grid(1, [2 * np.pi], [8])
        nyq = ScalarField(g, np.cos(4 * g.axes[0]))
        assert gradient(nyq).scale() < 1e-14
        # the Laplacian keeps it
        np.testing.assert_allclose(laplacian(nyq).values, -16 * nyq.values, atol=1e-12)

    def test_parseval(self, grid3, rng):
        f = band_limited(grid3, rng)
        lhs = np.mean(f.abs2())
        assert np.sum(mode_power(f)) == pytest.approx(lhs, rel=1e-12)


class TestTimeDerivative:
    def _hist(self, fn, dt, n=5, grid=None):
        grid = grid or make_grid(1, [1.0], [4])
        return FieldHistory.sample(lambda t: ScalarField(grid, np.full(grid.shape, fn(t))), dt, n)

    def test_linear_first_order_exact(self):
        h = self._hist(lambda t: t, 0.1)
        np.testing.assert_allclose(time_derivative(h, 1, 2).values, 1.0, rtol=1e-14)

    def test_quadratic_second_order_exact(self):
        h = self._hist(lambda t: t * t, 0.1)
        np.testing.assert_allclose(time_derivative(h, 2, 2).values, 2.0, rtol=1e-12)

    @pytest.mark.parametrize("at", [0, 4])
    def test_boundary_rejected(self, at):
        h = self._hist(lambda t: t, 0.1)
        with pytest.raises(PreconditionError, match="interior"):
            time_derivative(h, 1, at)

    def test_second_order_convergence(self):
        errs = []
        for dt in (0.02, 0.01):
            h = self._hist(np.sin, dt, n=3, grid=None)
            # derivative at t = dt compared with cos(dt)
            errs.append(abs(time_derivative(h, 1, 1).values[0] - np.cos(dt)))
        assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.2)

    def test_history_validation(self, grid1, grid3):
        with pytest.raises(PreconditionError, match="at least 3"):
            FieldHistory(0.1, [ScalarField.zeros(grid1)] * 2)
        with pytest.raises(PreconditionError, match="share one grid"):
            FieldHistory(0.1, [ScalarField.zeros(grid1)] * 2 + [ScalarField.zeros(make_grid(1, [1.0], [8]))])


class TestWaveResidual:
    def test_travelling_wave_converges_second_order(self, grid1):
        x = grid1.axes[0]
        l2 = []
        for dt in (0.02, 0.01):
            h = FieldHistory.sample(lambda t: ScalarField(grid1, np.sin(x - t)), dt, 5)
            l2.append(wave_residual(h).l2)
        assert l2[0] / l2[1] == pytest.approx(4.0, rel=0.2)

    def test_constant_is_exact(self, grid1):
        h = FieldHistory.constant(ScalarField(grid1, np.full(grid1.shape, 2.5)), 0.1, 4)
        assert wave_residual(h).l2 < 1e-13

    def test_uniform_quadratic_in_time(self, grid1):
        c = Constants(c=2.0)
        h = FieldHistory.sample(lambda t: ScalarField(grid1, np.full(grid1.shape, t * t)), 0.1, 4)
        rep = wave_residual(h, c)
        assert rep.l2 == pytest.approx(2 / c.c**2, rel=1e-10)
        assert rep.linf == pytest.approx(2 / c.c**2, rel=1e-10)

    def test_vector_history_rejected(self, grid1):
        h = FieldHistory.constant(VectorField.zeros(grid1))
        with pytest.raises(PreconditionError):
            wave_residual(h)


class TestResidualNorms:
    def test_zero(self, grid1):
        rep = residual_norms(ScalarField.zeros(grid1), "z")
        assert (rep.l2, rep.linf) == (0.0, 0.0)

    def test_single_sample(self, grid1):
        vals = np.zeros(grid1.shape, dtype=complex)
        vals[5] = 3 - 4j
        rep = residual_norms(ScalarField(grid1, vals), "one")
        assert rep.l2 == pytest.approx(5 / np.sqrt(grid1.size), rel=1e-15)
        assert rep.linf == pytest.approx(5.0)

    def test_ones(self, grid3):
        rep = residual_norms(ScalarField(grid3, np.ones(grid3.shape)), "ones")
        assert rep.l2 == pytest.approx(1.0) and rep.linf == pytest.approx(1.0)
        assert rep.l2 <= rep.linf

    def test_meta(self, grid1):
        rep = residual_norms(ScalarField.zeros(grid1), "m", dt=0.5)
        assert rep.grid_meta == {"points": [32], "lengths": [2 * np.pi], "dt": 0.5}
        assert rep.to_dict()["equation_id"] == "m"


def test_fields_are_immutable(grid1):
    f = ScalarField(grid1, np.zeros(grid1.shape))
    with pytest.raises(ValueError):
        f.values[0] = 1.0


def test_imag_ratio(grid1):
    f = ScalarField(grid1, np.ones(grid1.shape) + 1e-14j)
    assert imag_ratio(f) < 1e-12
    assert imag_ratio(ScalarField.zeros(grid1)) == 0.0
