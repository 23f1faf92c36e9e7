import jax
import jax.numpy as jnp

from singularPW.interpolation.boundary import boundary_recover
from singularPW.interpolation.model_space import solve_moment_problem
from singularPW.measure.atomic import AtomicMeasure, integer_transform
from singularPW.transforms.cauchy import cauchy_series, inner_function_series
from singularPW.transforms.power_series import reciprocal_series
from singularPW.utils.random import random_atomic_measure, random_function

order = 128

rng_key = jax.random.PRNGKey(42)
rng_key, subkey = jax.random.split(rng_key)
measure = random_atomic_measure(subkey, 6)
rng_key, subkey = jax.random.split(rng_key)
f = random_function(subkey, measure)

alpha = reciprocal_series(cauchy_series(measure, order))
b = inner_function_series(alpha)

a = integer_transform(measure, f, order)
solution = solve_moment_problem(a, measure, alpha, b, tol=1e-6)
print("Feasible: ", solution.feasible, "membership defect: ", solution.membership.defect)
print("Recovery error: ", jnp.max(jnp.abs(solution.function.values - f.values)))

boundary = boundary_recover(solution.candidate, measure, reference=f)
for r, err in zip(boundary.r_schedule, boundary.errors):
    print(f"radius {r}: boundary error {err:.3e}")

# moments of the uniform measure on four points repeat with period four up to sign
grid = AtomicMeasure.roots_of_unity(4)
alpha = reciprocal_series(cauchy_series(grid, 16))
bad = jnp.zeros(17).at[0].set(1.0)
print("Non-periodic moments feasible: ", solve_moment_problem(bad, grid, alpha, inner_function_series(alpha), 1e-6).feasible)
