import jax
import jax.numpy as jnp
from tqdm import tqdm

from singularPW.kaczmarz.dual import adaptive_order, parseval_curve
from singularPW.measure.atomic import moment
from singularPW.measure.ifs import IFSMeasure, ifs_moment, ifs_refine
from singularPW.transforms.cauchy import cauchy_series
from singularPW.transforms.power_series import reciprocal_series
from singularPW.utils.random import random_function

cantor = IFSMeasure.middle_thirds()
n = jnp.arange(-32, 33)
value, depth = ifs_moment(cantor, n, 1e-10)
print("Recursion depth: ", depth)

for refine_depth in tqdm(range(4, 13, 2), desc="Refining"):
    refined = ifs_refine(cantor, refine_depth)
    gap = jnp.max(jnp.abs(value - moment(refined, n)))
    print(f"depth {refine_depth}: {refined.n_atoms} atoms, max moment gap {gap:.3e}")

measure = ifs_refine(cantor, 8)
f = random_function(jax.random.PRNGKey(42), measure)
alpha = reciprocal_series(cauchy_series(measure, 512))
curve = parseval_curve(measure, f, alpha, 512)
print("Parseval defect at orders 0, 64, ..., 512: ", curve[::64])
stop, defect, reached = adaptive_order(measure, f, alpha, 1e-3)
print("Order reaching defect 1e-3: ", stop if reached else "not reached", defect)
