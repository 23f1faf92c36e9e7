from typing import Sequence

import equinox as eqx
import jax.numpy as jnp
from jaxtyping import Array, ArrayLike, Complex, Float

from singularPW.measure.base import Measure
from singularPW.utils.errors import MeasureError

WEIGHT_TOL = 1e-12


def wrap_to_torus(x: ArrayLike) -> Float[Array, "..."]:
    """Representative of x modulo 1 in [-1/2, 1/2)."""
    x = jnp.asarray(x, dtype=jnp.float64)
    return x - jnp.floor(x + 0.5)


def plane_wave(z: ArrayLike, x: ArrayLike) -> Complex[Array, "..."]:
    """
    exp(-2 pi i z x) over the trailing axis x, with Re(z) x reduced modulo 1 before
    the exponential so the phase keeps full precision at large integer z.
    """
    z = jnp.asarray(z, dtype=jnp.complex128)[..., None]
    x = jnp.asarray(x, dtype=jnp.float64)
    return jnp.exp(-2j * jnp.pi * wrap_to_torus(z.real * x) + 2 * jnp.pi * z.imag * x)


class AtomicMeasure(Measure):
    r"""
    Finitely many point masses on the torus, the exactly checkable singular measure.

    For an atomic measure, $L^2(\mu)$ is the weighted sequence space over the atoms,
    so every statement about Fourier series in $L^2(\mu)$ reduces to linear algebra.

    Args:
        positions (ArrayLike): Atom positions. Normalized modulo 1 into [-1/2, 1/2).
        weights (ArrayLike): Positive masses summing to one.

    Raises:
        MeasureError: if the weights are not a probability vector, an atom sits at
            +-1/2, or two atoms coincide.
    """

    positions: Float[Array, " n_atoms"]
    weights: Float[Array, " n_atoms"]

    def __init__(self, positions: ArrayLike, weights: ArrayLike):
        positions = wrap_to_torus(jnp.atleast_1d(positions))
        weights = jnp.asarray(jnp.atleast_1d(weights), dtype=jnp.float64)
        if positions.ndim != 1 or positions.shape != weights.shape:
            raise MeasureError(
                f"positions {positions.shape} and weights {weights.shape} must be "
                "1D arrays of equal length"
            )
        if positions.shape[0] == 0:
            raise MeasureError("an atomic measure needs at least one atom")
        if not bool(jnp.all(weights > 0)):
            raise MeasureError("atom weights must be strictly positive")
        total = float(jnp.sum(weights))
        if abs(total - 1.0) > WEIGHT_TOL:
            raise MeasureError(f"weights sum to {total!r}, expected 1 within {WEIGHT_TOL}")
        # -1/2 is the only representative of the excluded point +-1/2.
        if bool(jnp.any(positions <= -0.5)):
            raise MeasureError("atoms at +-1/2 are not allowed; rotate the measure first")
        if positions.shape[0] > 1 and not bool(jnp.all(jnp.diff(jnp.sort(positions)) > 0)):
            raise MeasureError("atom positions must be pairwise distinct")
        self.positions = positions
        self.weights = weights

    @classmethod
    def from_atoms(cls, atoms: Sequence[Sequence[float]]) -> "AtomicMeasure":
        """Build from a list of (position, weight) pairs."""
        atoms = jnp.asarray(atoms, dtype=jnp.float64).reshape(-1, 2)
        return cls(atoms[:, 0], atoms[:, 1])

    @classmethod
    def dirac(cls, position: float = 0.0) -> "AtomicMeasure":
        return cls(jnp.array([position]), jnp.array([1.0]))

    @classmethod
    def roots_of_unity(cls, n_atoms: int) -> "AtomicMeasure":
        r"""
        Uniform measure on the centred grid $x_k = (k - (N-1)/2)/N$.

        Integer moments are $\epsilon^{n/N}$ when $N | n$ and 0 otherwise, with
        $\epsilon = (-1)^{N-1}$, so $\mu_+(z) = 1/(1 - \epsilon z^N)$. For odd N the
        grid is the N-th roots of unity; for even N it is shifted by half a step so
        that no atom lands on 1/2.
        """
        k = jnp.arange(n_atoms, dtype=jnp.float64)
        positions = (k - (n_atoms - 1) / 2) / n_atoms
        return cls(positions, jnp.full(n_atoms, 1.0 / n_atoms))

    @property
    def n_atoms(self) -> int:
        return self.positions.shape[0]

    def fourier_stieltjes(self, z: ArrayLike) -> Complex[Array, "..."]:
        z = jnp.asarray(z, dtype=jnp.complex128)
        return plane_wave(z, self.positions) @ self.weights

    def cauchy(self, z: ArrayLike) -> Complex[Array, "..."]:
        z = jnp.asarray(z, dtype=jnp.complex128)
        kernel = 1.0 / (1.0 - z[..., None] * jnp.exp(-2j * jnp.pi * self.positions))
        return kernel @ self.weights

    def support_interval(self) -> tuple[float, float]:
        return float(jnp.min(self.positions)), float(jnp.max(self.positions))

    def exponentials(self, order: int) -> Complex[Array, "n_exp n_atoms"]:
        """Values e_n(x_k) = exp(2 pi i n x_k) for n = 0..order."""
        n = jnp.arange(order + 1, dtype=jnp.float64)
        return plane_wave(-n, self.positions)


class MuFunction(eqx.Module):
    """
    Element of L^2(mu) for an atomic mu, stored as its values on the atoms.

    Args:
        values (ArrayLike): One complex value per atom.
    """

    values: Complex[Array, " n_atoms"]

    def __init__(self, values: ArrayLike):
        values = jnp.asarray(values, dtype=jnp.complex128)
        if values.ndim != 1:
            raise ValueError(f"MuFunction values must be 1D, got shape {values.shape}")
        self.values = values

    @property
    def n_atoms(self) -> int:
        return self.values.shape[0]

    @classmethod
    def constant(cls, m: AtomicMeasure, c: complex = 1.0) -> "MuFunction":
        return cls(jnp.full(m.n_atoms, c, dtype=jnp.complex128))

    def conj(self) -> "MuFunction":
        return MuFunction(jnp.conj(self.values))


def check_attached(m: AtomicMeasure, *functions: MuFunction) -> None:
    for f in functions:
        if f.n_atoms != m.n_atoms:
            raise ValueError(
                f"function has {f.n_atoms} values but the measure has {m.n_atoms} atoms"
            )


def moment(m: Measure, n: ArrayLike) -> Complex[Array, "..."]:
    """Integer moment mu_hat(n); vectorized over n."""
    return m.fourier_stieltjes(jnp.asarray(n, dtype=jnp.float64))


def fourier_stieltjes(m: Measure, z: ArrayLike) -> Complex[Array, "..."]:
    return m.fourier_stieltjes(z)


def inner_product(m: AtomicMeasure, f: MuFunction, g: MuFunction) -> Complex:
    """L^2(mu) pairing sum_k w_k f(x_k) conj(g(x_k))."""
    check_attached(m, f, g)
    return jnp.sum(m.weights * f.values * jnp.conj(g.values))


def norm(m: AtomicMeasure, f: MuFunction) -> Float:
    check_attached(m, f)
    return jnp.sqrt(jnp.sum(m.weights * jnp.abs(f.values) ** 2))


def fourier_transform(m: AtomicMeasure, f: MuFunction, z: ArrayLike) -> Complex[Array, "..."]:
    r"""
    $\hat{f}(z) = \int f(x) e^{-2\pi i x z} d\mu(x)$, vectorized over z.
    """
    check_attached(m, f)
    z = jnp.asarray(z, dtype=jnp.complex128)
    return plane_wave(z, m.positions) @ (m.weights * f.values)


def integer_transform(m: AtomicMeasure, f: MuFunction, order: int) -> Complex[Array, " n_moments"]:
    """f_hat(0), ..., f_hat(order) by exact finite sums on the atoms."""
    return fourier_transform(m, f, jnp.arange(order + 1, dtype=jnp.float64))
