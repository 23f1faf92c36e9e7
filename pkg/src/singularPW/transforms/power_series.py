import equinox as eqx
import jax
import jax.numpy as jnp
from jaxtyping import Array, ArrayLike, Complex, Float


class PowerSeries(eqx.Module):
    """
    Truncated power series sum_{n <= order} c_n z^n with complex coefficients.

    Args:
        coefficients (ArrayLike): c_0, ..., c_order.
    """

    coefficients: Complex[Array, " n_coeff"]

    def __init__(self, coefficients: ArrayLike):
        coefficients = jnp.asarray(jnp.atleast_1d(coefficients), dtype=jnp.complex128)
        if coefficients.ndim != 1 or coefficients.shape[0] == 0:
            raise ValueError("a power series needs a non-empty 1D coefficient array")
        self.coefficients = coefficients

    @property
    def order(self) -> int:
        return self.coefficients.shape[0] - 1

    @classmethod
    def unit(cls, order: int = 0) -> "PowerSeries":
        return cls(jnp.zeros(order + 1, dtype=jnp.complex128).at[0].set(1.0))

    def resize(self, order: int) -> "PowerSeries":
        """Truncate or zero-pad to the given order."""
        if order <= self.order:
            return PowerSeries(self.coefficients[: order + 1])
        return PowerSeries(jnp.pad(self.coefficients, (0, order - self.order)))

    def energy(self) -> Float:
        return jnp.sum(jnp.abs(self.coefficients) ** 2)


def lower_toeplitz(c: Complex[Array, " n_c"], n_rows: int, n_cols: int) -> Complex[Array, "n_rows n_cols"]:
    """Matrix T[n, j] = c[n - j] for 0 <= n - j < len(c), zero elsewhere."""
    lag = jnp.arange(n_rows)[:, None] - jnp.arange(n_cols)[None, :]
    inside = (lag >= 0) & (lag < c.shape[0])
    return jnp.where(inside, c[jnp.clip(lag, 0, c.shape[0] - 1)], 0.0)


def cauchy_product(p: ArrayLike, q: ArrayLike, order: int) -> Complex[Array, " n_coeff"]:
    """Coefficients sum_{j <= n} p_j q_{n-j} for n = 0..order, by exact finite sums."""
    p = jnp.asarray(p, dtype=jnp.complex128)
    q = jnp.asarray(q, dtype=jnp.complex128)
    return lower_toeplitz(q, order + 1, p.shape[0]) @ p


def convolve(p: PowerSeries, q: PowerSeries, order: int) -> PowerSeries:
    """Cauchy product of two series, truncated at order."""
    if order < 0:
        raise ValueError(f"order must be >= 0, got {order}")
    return PowerSeries(cauchy_product(p.coefficients, q.coefficients, order))


def series_eval(p: PowerSeries, z: ArrayLike) -> Complex[Array, "..."]:
    """Horner evaluation of p at z; vectorized over z."""
    return jnp.polyval(p.coefficients[::-1], jnp.asarray(z, dtype=jnp.complex128))


@jax.jit
def _reciprocal_kernel(p: Complex[Array, " n_coeff"]) -> Complex[Array, " n_coeff"]:
    n_coeff = p.shape[0]
    k = jnp.arange(n_coeff)
    inv0 = 1.0 / p[0]

    def body(n, alpha):
        terms = jnp.where(
            (k >= 1) & (k <= n), p * alpha[jnp.clip(n - k, 0, n_coeff - 1)], 0.0
        )
        return alpha.at[n].set(-inv0 * jnp.sum(terms))

    alpha = jnp.zeros_like(p).at[0].set(inv0)
    return jax.lax.fori_loop(1, n_coeff, body, alpha)


def reciprocal_series(p: PowerSeries) -> PowerSeries:
    r"""
    Taylor coefficients of 1/p to the same order, by the triangular recursion
    $\alpha_0 = 1/p_0$, $\alpha_n = -\frac{1}{p_0}\sum_{k=1}^{n} p_k \alpha_{n-k}$.

    Raises:
        ValueError: if p_0 vanishes.
    """
    if complex(p.coefficients[0]) == 0:
        raise ValueError("cannot invert a power series with vanishing constant term")
    return PowerSeries(_reciprocal_kernel(p.coefficients))


def reciprocal_residual(p: PowerSeries, alpha: PowerSeries) -> Float:
    """Max-abs deviation of p * alpha from the unit sequence, over the common order."""
    order = min(p.order, alpha.order)
    product = convolve(p, alpha, order).coefficients
    return jnp.max(jnp.abs(product - PowerSeries.unit(order).coefficients))
