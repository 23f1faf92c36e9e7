import jax
import jax.numpy as jnp

from singularPW.kaczmarz.dual import adaptive_order, analyze, synthesize_dual
from singularPW.measure.atomic import fourier_transform
from singularPW.sampling.reconstruction import reconstruct, sample_transform
from singularPW.transforms.cauchy import cauchy_series
from singularPW.transforms.power_series import reciprocal_series
from singularPW.utils.random import random_atomic_measure, random_function

rng_key = jax.random.PRNGKey(42)
rng_key, subkey = jax.random.split(rng_key)
measure = random_atomic_measure(subkey, 6)
rng_key, subkey = jax.random.split(rng_key)
f = random_function(subkey, measure)

order = 256
alpha = reciprocal_series(cauchy_series(measure, order))

stop, defect, reached = adaptive_order(measure, f, alpha, 1e-8)
data = analyze(measure, f, alpha, stop)
f_dual, residuals = synthesize_dual(measure, data, alpha, f)

z = jnp.linspace(-2.0, 2.0, 9)
report = reconstruct(sample_transform(measure, f, order + 1), measure, alpha, z, reference=fourier_transform(measure, f, z))

assert reached
assert report.max_error <= 1e-6
assert residuals[-1] <= 1e-3
