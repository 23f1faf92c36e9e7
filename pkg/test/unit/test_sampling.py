import jax
import jax.numpy as jnp
import pytest

from singularPW.kaczmarz.dual import analyze
from singularPW.measure.atomic import AtomicMeasure, fourier_transform
from singularPW.sampling.reconstruction import (
    SampleSet,
    beta_coefficients,
    reconstruct,
    sample_transform,
    summability_report,
    verify_representation,
)
from singularPW.transforms.cauchy import cauchy_series
from singularPW.transforms.power_series import reciprocal_series
from singularPW.utils.errors import OrderError
from singularPW.utils.random import random_atomic_measure, random_function


def alpha_of(m, order):
    return reciprocal_series(cauchy_series(m, order))


class TestSamples:
    def test_sample_transform(self):
        m = random_atomic_measure(jax.random.PRNGKey(0), 5)
        f = random_function(jax.random.PRNGKey(1), m)
        samples = sample_transform(m, f, 6)
        assert len(samples) == 6
        assert samples.last_index == 5
        assert jnp.allclose(samples.values, fourier_transform(m, f, jnp.arange(6.0)))

    def test_negative_samples(self):
        m = random_atomic_measure(jax.random.PRNGKey(2), 5)
        f = random_function(jax.random.PRNGKey(3), m)
        samples = sample_transform(m, f, 4, negative=True)
        expected = jnp.conj(fourier_transform(m, f, -jnp.arange(4.0)))
        assert jnp.allclose(samples.values, expected)

    def test_beta_equals_fourier_coefficients(self):
        m = random_atomic_measure(jax.random.PRNGKey(4), 7)
        f = random_function(jax.random.PRNGKey(5), m)
        alpha = alpha_of(m, 40)
        beta = beta_coefficients(sample_transform(m, f, 41), alpha, 40)
        assert jnp.allclose(beta.coefficients, analyze(m, f, alpha, 40).coefficients, atol=1e-13)

    def test_beta_order_checks(self):
        alpha = alpha_of(AtomicMeasure.dirac(), 4)
        with pytest.raises(OrderError):
            beta_coefficients(SampleSet(jnp.ones(3)), alpha, 3)
        with pytest.raises(OrderError):
            beta_coefficients(SampleSet(jnp.ones(10)), alpha, 6)


class TestReconstruct:
    def test_roots_of_unity_exact(self):
        m = AtomicMeasure.roots_of_unity(4)
        f = random_function(jax.random.PRNGKey(6), m)
        z = jnp.array([0.0, 0.5, -1.3, 2.0, 1.0 + 1.0j, -0.7 - 1.5j, 2.0j])
        report = reconstruct(sample_transform(m, f, 17), m, alpha_of(m, 16), z, reference=fourier_transform(m, f, z))
        assert report.truncation_order == 16
        assert report.max_error <= 1e-11

    def test_random_measure_real_grid(self):
        m = random_atomic_measure(jax.random.PRNGKey(7), 8)
        f = random_function(jax.random.PRNGKey(8), m, real=True)
        z = jnp.linspace(-3.0, 3.0, 25)
        report = reconstruct(
            sample_transform(m, f, 257), m, alpha_of(m, 256), z, reference=fourier_transform(m, f, z)
        )
        assert report.max_error <= 1e-6
        assert jnp.all(report.tail_bound >= 0)

    def test_interpolates_the_samples(self):
        m = random_atomic_measure(jax.random.PRNGKey(9), 6)
        f = random_function(jax.random.PRNGKey(10), m)
        samples = sample_transform(m, f, 129)
        report = reconstruct(samples, m, alpha_of(m, 128), jnp.arange(5.0))
        assert jnp.allclose(report.reconstructed, samples.values[:5], atol=1e-8)
        assert report.errors is None

    def test_explicit_order(self):
        m = AtomicMeasure.roots_of_unity(3)
        f = random_function(jax.random.PRNGKey(11), m)
        report = reconstruct(sample_transform(m, f, 10), m, alpha_of(m, 20), 0.25, order=5)
        assert report.truncation_order == 5
        with pytest.raises(OrderError):
            reconstruct(sample_transform(m, f, 10), m, alpha_of(m, 20), 0.25, order=12)


class TestSummability:
    def test_fourier_transform_is_summable(self):
        m = AtomicMeasure.roots_of_unity(4)
        f = random_function(jax.random.PRNGKey(12), m)
        beta = beta_coefficients(sample_transform(m, f, 65), alpha_of(m, 64), 64)
        report = summability_report(beta, 1e-10)
        assert report.verdict
        assert report.tail_energy <= 1e-10
        assert jnp.all(jnp.diff(report.partial_sums) >= 0)

    def test_constant_is_not_summable(self):
        m = AtomicMeasure.roots_of_unity(4)
        beta = beta_coefficients(SampleSet(jnp.ones(65)), alpha_of(m, 64), 64)
        assert jnp.allclose(beta.coefficients[:4], 1.0, atol=1e-12)
        assert jnp.allclose(beta.coefficients[4:], 2.0, atol=1e-12)
        report = summability_report(beta, 1e-6)
        assert not report.verdict
        assert report.tail_energy > 1.0


class TestVerifyRepresentation:
    def test_accepts_transform(self):
        m = AtomicMeasure.roots_of_unity(4)
        f = random_function(jax.random.PRNGKey(13), m)
        z = jnp.array([0.3, -1.1, 0.5j])
        verdict, report = verify_representation(
            sample_transform(m, f, 33), m, alpha_of(m, 32), z, fourier_transform(m, f, z), 1e-9
        )
        assert verdict
        assert report.verdict
        assert report.summability.verdict

    def test_rejects_wrong_reference(self):
        m = AtomicMeasure.roots_of_unity(4)
        f = random_function(jax.random.PRNGKey(14), m)
        z = jnp.array([0.3, -1.1])
        verdict, report = verify_representation(
            sample_transform(m, f, 33), m, alpha_of(m, 32), z, fourier_transform(m, f, z) + 1.0, 1e-9
        )
        assert not verdict
        assert report.summability.verdict
        assert report.reconstruction.max_error >= 0.99


class TestNonTransforms:
    def test_exponential_off_the_atoms(self):
        m = AtomicMeasure.roots_of_unity(4)
        x0 = 0.1
        j = jnp.arange(65.0)
        z = jnp.array([0.2, -0.9, 1.7])
        verdict, report = verify_representation(
            SampleSet(jnp.exp(-2j * jnp.pi * j * x0)), m, alpha_of(m, 64), z, jnp.exp(-2j * jnp.pi * z * x0), 1e-6
        )
        assert not verdict
        assert not report.summability.verdict

    def test_zero(self):
        m = random_atomic_measure(jax.random.PRNGKey(15), 4)
        z = jnp.array([0.5, 1.5j])
        verdict, _ = verify_representation(SampleSet(jnp.zeros(33)), m, alpha_of(m, 32), z, jnp.zeros(2), 1e-12)
        assert verdict

    def test_linearity(self):
        m = random_atomic_measure(jax.random.PRNGKey(16), 5)
        alpha = alpha_of(m, 32)
        key_1, key_2 = jax.random.split(jax.random.PRNGKey(17))
        s1 = jax.random.normal(key_1, (33,)) + 0j
        s2 = jax.random.normal(key_2, (33,)) + 0j
        z = jnp.array([0.3, -1.2 + 0.4j])
        combined = reconstruct(SampleSet(2.0 * s1 - 1j * s2), m, alpha, z).reconstructed
        separate = 2.0 * reconstruct(SampleSet(s1), m, alpha, z).reconstructed - 1j * reconstruct(
            SampleSet(s2), m, alpha, z
        ).reconstructed
        assert jnp.allclose(combined, separate, atol=1e-10)
