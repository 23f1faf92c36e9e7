r"""
Cauchy transform machinery.

Sign convention: $\mu_+(z) = \int 1/(1 - z e^{-2\pi i x}) d\mu(x)$, so the n-th Taylor
coefficient of $\mu_+$ is exactly $\hat{\mu}(n)$. With this kernel the coefficient
formulas for the dual sequence, the normalized Cauchy transform and the moment
problem all agree. For symmetric measures both kernel signs give the same series.
"""

import jax.numpy as jnp
from jaxtyping import Array, ArrayLike, Complex

from singularPW.measure.base import Measure
from singularPW.transforms.power_series import PowerSeries


def _check_disk(z: ArrayLike) -> Complex[Array, "..."]:
    z = jnp.asarray(z, dtype=jnp.complex128)
    if z.size and float(jnp.max(jnp.abs(z))) >= 1:
        raise ValueError("evaluation point outside the open unit disk")
    return z


def cauchy_series(m: Measure, order: int) -> PowerSeries:
    """Taylor coefficients of mu_plus: the moments mu_hat(0..order)."""
    if order < 0:
        raise ValueError(f"order must be >= 0, got {order}")
    return PowerSeries(m.moments(order))


def cauchy_eval(m: Measure, z: ArrayLike) -> Complex[Array, "..."]:
    """
    mu_plus(z) by direct integration (finite sum for atomic measures).

    Raises:
        ValueError: if |z| >= 1.
    """
    return m.cauchy(_check_disk(z))


def herglotz_eval(m: Measure, z: ArrayLike) -> Complex[Array, "..."]:
    """Herglotz transform H = int (1 + z e^{-2 pi i x}) / (1 - z e^{-2 pi i x}) dmu = 2 mu_plus - 1."""
    return 2 * cauchy_eval(m, z) - 1


def inner_eval(m: Measure, z: ArrayLike) -> Complex[Array, "..."]:
    """Inner function b = (H - 1) / (H + 1) = 1 - 1 / mu_plus, evaluated on the disk."""
    h = herglotz_eval(m, z)
    return (h - 1) / (h + 1)


def inner_function_series(alpha: PowerSeries) -> PowerSeries:
    """
    Taylor coefficients of b = 1 - 1/mu_plus from those of 1/mu_plus:
    b_0 = 1 - alpha_0 and b_n = -alpha_n for n >= 1.
    """
    return PowerSeries((-alpha.coefficients).at[0].add(1.0))
