import jax
import jax.numpy as jnp
from jaxtyping import PRNGKeyArray

from singularPW.measure.atomic import AtomicMeasure, MuFunction


def random_atomic_measure(
    rng_key: PRNGKeyArray,
    n_atoms: int,
    jitter: float = 0.3,
    weight_spread: float = 0.3,
    half_width: float = 0.5,
) -> AtomicMeasure:
    """
    Stratified random atomic measure: one atom per cell of a uniform grid on
    [-half_width, half_width), moved by up to jitter/2 of a cell around the cell centre,
    with weights drawn from [1 - weight_spread, 1 + weight_spread] and normalized.

    Near-uniform grids keep the zeros of the Cauchy-transform denominator far from the
    disk, so the alpha-sequence decays fast.

    Args:
        rng_key (PRNGKeyArray): Jax PRNGKey.
        n_atoms (int): Number of atoms.
        jitter (float): Fraction of a cell an atom may move, in [0, 1).
        weight_spread (float): Relative weight spread, in [0, 1).
        half_width (float): Atoms stay inside [-half_width, half_width), half_width <= 1/2.
    """
    if not 0 <= jitter < 1 or not 0 <= weight_spread < 1:
        raise ValueError("jitter and weight_spread must lie in [0, 1)")
    if not 0 < half_width <= 0.5:
        raise ValueError(f"half_width must lie in (0, 1/2], got {half_width}")
    key_x, key_w = jax.random.split(rng_key)
    cell = 2 * half_width / n_atoms
    shift = jitter * jax.random.uniform(key_x, (n_atoms,), minval=-0.5, maxval=0.5)
    positions = -half_width + (jnp.arange(n_atoms) + 0.5 + shift) * cell
    weights = jax.random.uniform(
        key_w, (n_atoms,), minval=1 - weight_spread, maxval=1 + weight_spread
    )
    return AtomicMeasure(positions, weights / jnp.sum(weights))


def random_function(rng_key: PRNGKeyArray, m: AtomicMeasure, real: bool = False) -> MuFunction:
    """Standard complex (or real) Gaussian values on the atoms of m."""
    key_re, key_im = jax.random.split(rng_key)
    values = jax.random.normal(key_re, (m.n_atoms,))
    if not real:
        values = values + 1j * jax.random.normal(key_im, (m.n_atoms,))
    return MuFunction(values)
