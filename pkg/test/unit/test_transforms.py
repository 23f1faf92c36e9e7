import jax
import jax.numpy as jnp
import pytest

from singularPW.measure.atomic import AtomicMeasure
from singularPW.transforms.cauchy import (
    cauchy_eval,
    cauchy_series,
    herglotz_eval,
    inner_eval,
    inner_function_series,
)
from singularPW.transforms.power_series import (
    PowerSeries,
    convolve,
    reciprocal_residual,
    reciprocal_series,
    series_eval,
)
from singularPW.utils.random import random_atomic_measure


def polar_grid(max_radius: float, n: int = 64) -> jnp.ndarray:
    radii = jnp.linspace(0.0, max_radius, n)
    angles = jnp.linspace(0.0, 2 * jnp.pi, n, endpoint=False)
    return (radii[:, None] * jnp.exp(1j * angles[None, :])).ravel()


class TestPowerSeries:
    def test_series_eval(self):
        p = PowerSeries([1.0, -1.0])
        assert jnp.isclose(series_eval(p, 0.5), 0.5)
        q = PowerSeries(jax.random.normal(jax.random.PRNGKey(0), (20,)) + 0j)
        z = 0.3 - 0.4j
        naive = sum(complex(c) * z**n for n, c in enumerate(q.coefficients))
        assert jnp.isclose(series_eval(q, z), naive, atol=1e-12)
        assert jnp.isclose(series_eval(q, 0.0), q.coefficients[0])

    def test_convolve_identity_and_geometric(self):
        p = PowerSeries(jax.random.normal(jax.random.PRNGKey(1), (8,)) + 0j)
        assert jnp.allclose(convolve(p, PowerSeries.unit(), 7).coefficients, p.coefficients)
        product = convolve(PowerSeries([1.0, -1.0]), PowerSeries(jnp.ones(6)), 5)
        assert jnp.allclose(product.coefficients, PowerSeries.unit(5).coefficients)

    def test_resize(self):
        p = PowerSeries([1.0, 2.0, 3.0])
        assert p.resize(1).order == 1
        assert jnp.allclose(p.resize(4).coefficients, jnp.array([1, 2, 3, 0, 0]))

    def test_reciprocal_recursion(self):
        p = PowerSeries([2.0, 1.0, -0.5, 0.25])
        alpha = reciprocal_series(p).coefficients
        assert jnp.isclose(alpha[0], 0.5)
        assert jnp.isclose(alpha[1], -0.5 * 1.0 * alpha[0])
        assert jnp.isclose(alpha[2], -0.5 * (1.0 * alpha[1] - 0.5 * alpha[0]))

    def test_reciprocal_involution(self):
        c = jax.random.normal(jax.random.PRNGKey(2), (65,)) * 0.1 ** jnp.arange(65)
        p = PowerSeries(c.at[0].set(1.0))
        twice = reciprocal_series(reciprocal_series(p))
        assert jnp.max(jnp.abs(twice.coefficients - p.coefficients)) <= 1e-9

    def test_vanishing_constant_term(self):
        with pytest.raises(ValueError):
            reciprocal_series(PowerSeries([0.0, 1.0]))


class TestCauchySeries:
    def test_dirac(self):
        assert jnp.allclose(cauchy_series(AtomicMeasure.dirac(), 10).coefficients, 1.0)

    def test_roots_of_unity(self):
        series = cauchy_series(AtomicMeasure.roots_of_unity(4), 12).coefficients
        expected = jnp.array([1, 0, 0, 0, -1, 0, 0, 0, 1, 0, 0, 0, -1])
        assert jnp.allclose(series, expected, atol=1e-14)

    def test_two_atoms(self):
        m = AtomicMeasure.from_atoms([[0.0, 0.5], [0.25, 0.5]])
        assert jnp.isclose(cauchy_series(m, 3).coefficients[1], 0.5 * (1 - 1j))

    def test_cauchy_eval_closed_forms(self):
        assert jnp.isclose(cauchy_eval(AtomicMeasure.dirac(), 0.5), 2.0)
        assert jnp.isclose(cauchy_eval(AtomicMeasure.roots_of_unity(3), 0.5), 8 / 7)
        assert jnp.isclose(cauchy_eval(AtomicMeasure.roots_of_unity(4), 0.5), 16 / 17)

    def test_cauchy_eval_outside_disk(self):
        with pytest.raises(ValueError):
            cauchy_eval(AtomicMeasure.dirac(), 1.0)

    def test_series_against_direct_sum(self):
        m = random_atomic_measure(jax.random.PRNGKey(3), 6)
        z = polar_grid(0.9, 16)
        direct = cauchy_eval(m, z)
        series = series_eval(cauchy_series(m, 200), z)
        assert jnp.max(jnp.abs(direct - series)) <= 0.9**201 / 0.1 + 1e-12

    def test_nonvanishing_on_disk(self):
        m = random_atomic_measure(jax.random.PRNGKey(4), 8)
        values = cauchy_eval(m, polar_grid(0.99))
        assert jnp.all(values.real > 0.5 - 1e-12)
        assert jnp.all(herglotz_eval(m, polar_grid(0.99)).real > -1e-12)


class TestReciprocal:
    def test_dirac(self):
        alpha = reciprocal_series(cauchy_series(AtomicMeasure.dirac(), 16)).coefficients
        expected = jnp.zeros(17).at[0].set(1.0).at[1].set(-1.0)
        assert jnp.allclose(alpha, expected, atol=1e-14)

    @pytest.mark.parametrize("n_atoms, tol", [(2, 1e-14), (3, 1e-12), (4, 1e-14), (8, 1e-14)])
    def test_roots_of_unity(self, n_atoms, tol):
        # 1/3 is not a binary fraction, so the N = 3 grid carries position rounding
        alpha = reciprocal_series(cauchy_series(AtomicMeasure.roots_of_unity(n_atoms), 256))
        expected = jnp.zeros(257).at[0].set(1.0).at[n_atoms].set((-1.0) ** n_atoms)
        assert jnp.max(jnp.abs(alpha.coefficients - expected)) <= tol

    def test_two_atoms(self):
        m = AtomicMeasure.from_atoms([[0.0, 0.5], [0.25, 0.5]])
        alpha = reciprocal_series(cauchy_series(m, 4)).coefficients
        assert jnp.isclose(alpha[1], -(1 - 1j) / 2)

    def test_residual_on_random_measures(self):
        keys = jax.random.split(jax.random.PRNGKey(5), 5)
        for i, key in enumerate(keys):
            m = random_atomic_measure(key, 2 + i)
            mu_plus = cauchy_series(m, 256)
            alpha = reciprocal_series(mu_plus)
            assert reciprocal_residual(mu_plus, alpha) <= 1e-9


class TestInnerFunction:
    def test_dirac_shift(self):
        alpha = reciprocal_series(cauchy_series(AtomicMeasure.dirac(), 8))
        b = inner_function_series(alpha).coefficients
        assert jnp.allclose(b, jnp.zeros(9).at[1].set(1.0), atol=1e-14)

    def test_roots_of_unity(self):
        alpha = reciprocal_series(cauchy_series(AtomicMeasure.roots_of_unity(4), 16))
        b = inner_function_series(alpha).coefficients
        assert jnp.allclose(b, jnp.zeros(17).at[4].set(-1.0), atol=1e-14)
        alpha = reciprocal_series(cauchy_series(AtomicMeasure.roots_of_unity(3), 16))
        b = inner_function_series(alpha).coefficients
        assert jnp.allclose(b, jnp.zeros(17).at[3].set(1.0), atol=1e-14)

    def test_bounded_by_one(self):
        m = random_atomic_measure(jax.random.PRNGKey(6), 6)
        alpha = reciprocal_series(cauchy_series(m, 256))
        b = inner_function_series(alpha)
        assert jnp.isclose(b.coefficients[0], 0.0, atol=1e-15)
        z = polar_grid(0.95)
        assert jnp.all(jnp.abs(series_eval(b, z)) <= 1 + 1e-6)
        assert jnp.all(jnp.abs(inner_eval(m, z)) <= 1 + 1e-12)

    def test_series_against_closed_form(self):
        m = random_atomic_measure(jax.random.PRNGKey(7), 5)
        b = inner_function_series(reciprocal_series(cauchy_series(m, 256)))
        z = polar_grid(0.5, 16)
        assert jnp.allclose(series_eval(b, z), inner_eval(m, z), atol=1e-10)
