from abc import abstractmethod

import equinox as eqx
import jax.numpy as jnp
from jaxtyping import Array, ArrayLike, Complex


class Measure(eqx.Module):
    """
    Base class for singular Borel probability measures on the torus (-1/2, 1/2).

    This is an abstract template that should not be directly used.
    """

    @abstractmethod
    def fourier_stieltjes(self, z: ArrayLike) -> Complex[Array, "..."]:
        """
        Fourier-Stieltjes transform mu_hat(z) = int exp(-2 pi i z x) dmu(x).

        Args:
            z (ArrayLike): Complex evaluation points, any shape.

        Returns:
            Complex[Array, "..."]: Transform values, same shape as z.
        """
        return NotImplemented

    @abstractmethod
    def cauchy(self, z: ArrayLike) -> Complex[Array, "..."]:
        """
        Cauchy transform mu_plus(z) = int 1 / (1 - z exp(-2 pi i x)) dmu(x) on the open disk.
        """
        return NotImplemented

    @abstractmethod
    def support_interval(self) -> tuple[float, float]:
        """Smallest closed interval known to contain the support."""
        return NotImplemented

    def moments(self, order: int) -> Complex[Array, " n_moments"]:
        """Integer moments mu_hat(0), ..., mu_hat(order)."""
        return self.fourier_stieltjes(jnp.arange(order + 1, dtype=jnp.float64))
