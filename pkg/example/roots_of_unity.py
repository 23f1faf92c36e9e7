import jax
import jax.numpy as jnp

from singularPW.kaczmarz.dual import analyze, parseval_curve, synthesize_dual
from singularPW.measure.atomic import AtomicMeasure, fourier_transform
from singularPW.sampling.reconstruction import reconstruct, sample_transform
from singularPW.transforms.cauchy import cauchy_series, inner_function_series
from singularPW.transforms.power_series import reciprocal_series
from singularPW.utils.random import random_function

n_atoms = 4
order = 16

measure = AtomicMeasure.roots_of_unity(n_atoms)

rng_key = jax.random.PRNGKey(42)
rng_key, subkey = jax.random.split(rng_key)
f = random_function(subkey, measure)

alpha = reciprocal_series(cauchy_series(measure, order))
b = inner_function_series(alpha)
print("alpha: ", jnp.round(alpha.coefficients[: n_atoms + 2].real, 12))
print("b:     ", jnp.round(b.coefficients[: n_atoms + 2].real, 12))

# the dual sequence vanishes in L^2(mu) past the last atom
data = analyze(measure, f, alpha, order)
print("Fourier coefficients: ", jnp.abs(data.coefficients))
print("Parseval defect by order: ", parseval_curve(measure, f, alpha, order))

g, residuals = synthesize_dual(measure, data, alpha, f)
print("Dual synthesis error: ", residuals[-1])

rng_key, subkey = jax.random.split(rng_key)
z = 2.0 * jax.random.uniform(subkey, (8,), minval=-1.0, maxval=1.0) + 0.5j
report = reconstruct(
    sample_transform(measure, f, order + 1), measure, alpha, z, reference=fourier_transform(measure, f, z)
)
print("Sampling series error off the real axis: ", report.max_error)
