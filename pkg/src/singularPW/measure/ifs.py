import math

import jax
import jax.numpy as jnp
from jaxtyping import Array, ArrayLike, Complex, Float

from singularPW.measure.atomic import AtomicMeasure
from singularPW.measure.base import Measure
from singularPW.utils.errors import MeasureError, RefinementCapError

DEFAULT_ATOM_CAP = 2**20
DEFAULT_TRANSFORM_TOL = 1e-13
MERGE_TOL = 1e-12
MAX_RECURSION_DEPTH = 4096


class IFSMeasure(Measure):
    r"""
    Self-similar measure of the iterated function system x -> ratio * x + offset_j,
    map j chosen with probability p_j.

    The invariant measure satisfies
    $\hat{\mu}(t) = \left(\sum_j p_j e^{-2\pi i t b_j}\right) \hat{\mu}(r t)$,
    which is what every transform below iterates.

    Args:
        ratio (float): Common contraction ratio in (0, 1).
        offsets (ArrayLike): Translations b_j.
        probabilities (ArrayLike): Map probabilities, positive and summing to one.
        support_bound (float): s such that every map sends [-s, s] into itself, s <= 1/2.

    Raises:
        MeasureError: if any of the above fails.
    """

    ratio: Float
    offsets: Float[Array, " n_maps"]
    probabilities: Float[Array, " n_maps"]
    support_bound: Float

    def __init__(
        self,
        ratio: float,
        offsets: ArrayLike,
        probabilities: ArrayLike,
        support_bound: float,
    ):
        offsets = jnp.asarray(jnp.atleast_1d(offsets), dtype=jnp.float64)
        probabilities = jnp.asarray(jnp.atleast_1d(probabilities), dtype=jnp.float64)
        if not 0.0 < ratio < 1.0:
            raise MeasureError(f"ratio must lie in (0, 1), got {ratio}")
        if offsets.ndim != 1 or offsets.shape != probabilities.shape or offsets.shape[0] == 0:
            raise MeasureError("offsets and probabilities must be non-empty and of equal length")
        if not bool(jnp.all(probabilities > 0)):
            raise MeasureError("map probabilities must be strictly positive")
        total = float(jnp.sum(probabilities))
        if abs(total - 1.0) > 1e-12:
            raise MeasureError(f"probabilities sum to {total!r}, expected 1")
        if not 0.0 < support_bound <= 0.5:
            raise MeasureError(f"support_bound must lie in (0, 1/2], got {support_bound}")
        reach = ratio * support_bound + jnp.abs(offsets)
        if not bool(jnp.all(reach <= support_bound * (1 + 1e-12))):
            raise MeasureError(
                f"maps do not send [-{support_bound}, {support_bound}] into itself"
            )
        self.ratio = jnp.asarray(ratio, dtype=jnp.float64)
        self.offsets = offsets
        self.probabilities = probabilities
        self.support_bound = jnp.asarray(support_bound, dtype=jnp.float64)

    @classmethod
    def middle_thirds(cls) -> "IFSMeasure":
        """Cantor measure on [-1/2, 1/2] with ratio 1/3 and offsets +-1/3."""
        return cls(1.0 / 3.0, jnp.array([-1.0, 1.0]) / 3.0, jnp.array([0.5, 0.5]), 0.5)

    @property
    def n_maps(self) -> int:
        return self.offsets.shape[0]

    def symbol(self, t: ArrayLike) -> Complex[Array, "..."]:
        """The one-step factor sum_j p_j exp(-2 pi i t b_j)."""
        t = jnp.asarray(t, dtype=jnp.complex128)
        return jnp.exp(-2j * jnp.pi * t[..., None] * self.offsets) @ self.probabilities

    def truncation_bound(self, scaled: ArrayLike) -> Float[Array, "..."]:
        r"""
        Bound on $|\hat{\mu}(s) - 1|$ at the tail argument s.

        First order in |s|; the exponential factor only matters off the real axis.
        """
        s = jnp.asarray(scaled, dtype=jnp.complex128)
        return (
            2 * jnp.pi * jnp.abs(s) * self.support_bound
            * jnp.exp(2 * jnp.pi * jnp.abs(s.imag) * self.support_bound)
        )

    def fourier_stieltjes(
        self, z: ArrayLike, tol: float = DEFAULT_TRANSFORM_TOL
    ) -> Complex[Array, "..."]:
        value, _ = self_similar_product(self, z, tol)
        return value

    def cauchy(self, z: ArrayLike, tol: float = DEFAULT_TRANSFORM_TOL) -> Complex[Array, "..."]:
        z = jnp.asarray(z, dtype=jnp.complex128)
        radius = float(jnp.max(jnp.abs(z))) if z.size else 0.0
        if radius >= 1:
            raise ValueError(f"the Cauchy transform needs |z| < 1, got {radius}")
        order = geometric_order(radius, tol)
        coefficients = self.moments(order)
        return jnp.polyval(coefficients[::-1], z)

    def support_interval(self) -> tuple[float, float]:
        lo = float(jnp.min(self.offsets) / (1 - self.ratio))
        hi = float(jnp.max(self.offsets) / (1 - self.ratio))
        return lo, hi


def geometric_order(radius: float, tol: float) -> int:
    """Smallest N with radius^(N+1) / (1 - radius) <= tol."""
    if radius == 0:
        return 0
    return max(0, math.ceil(math.log(tol * (1 - radius)) / math.log(radius)) - 1)


def self_similar_product(
    s: IFSMeasure, z: ArrayLike, tol: float
) -> tuple[Complex[Array, "..."], int]:
    """
    Truncated product prod_{d < D} symbol(z * ratio^d), with D the first depth at which
    the tail bound drops below tol for every entry of z.

    Returns:
        value (Complex[Array, "..."]): Truncated transform values.
        depth (int): Number of factors used.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    z = jnp.asarray(z, dtype=jnp.complex128)
    value = jnp.ones_like(z)
    scaled = z
    depth = 0
    while float(jnp.max(s.truncation_bound(scaled), initial=0.0)) >= tol:
        if depth >= MAX_RECURSION_DEPTH:
            raise RuntimeError("self-similar recursion did not reach its tolerance")
        value = value * s.symbol(scaled)
        scaled = scaled * s.ratio
        depth += 1
    return value, depth


def ifs_moment(s: IFSMeasure, t: ArrayLike, tol: float) -> tuple[Complex[Array, "..."], int]:
    """
    Fourier-Stieltjes transform of a self-similar measure at real t by the
    self-similarity recursion; |result - mu_hat(t)| <= tol.

    Returns:
        value (Complex[Array, "..."]): Transform values.
        depth (int): Recorded truncation depth.
    """
    return self_similar_product(s, jnp.asarray(t, dtype=jnp.float64), tol)


def ifs_fourier_stieltjes(s: IFSMeasure, z: ArrayLike, tol: float) -> tuple[Complex[Array, "..."], int]:
    """Same recursion at complex z; the tail bound grows like exp(2 pi |Im z| support_bound)."""
    return self_similar_product(s, jnp.asarray(z, dtype=jnp.complex128), tol)


def ifs_refine(s: IFSMeasure, depth: int, cap: int = DEFAULT_ATOM_CAP) -> AtomicMeasure:
    """
    Atomic approximation: all depth-fold compositions of the maps applied to the
    support midpoint 0, weighted by the product of the map probabilities.

    Coinciding atoms (possible for overlapping systems) are merged.

    Args:
        s (IFSMeasure): Self-similar measure.
        depth (int): Number of compositions, >= 0.
        cap (int): Maximal number of atoms.

    Raises:
        RefinementCapError: if n_maps ** depth exceeds cap.
    """
    if depth < 0:
        raise ValueError(f"depth must be >= 0, got {depth}")
    required = s.n_maps**depth
    if required > cap:
        raise RefinementCapError(required, cap)
    positions = jnp.zeros(1)
    weights = jnp.ones(1)
    for _ in range(depth):
        positions = (s.ratio * positions[:, None] + s.offsets[None, :]).ravel()
        weights = (weights[:, None] * s.probabilities[None, :]).ravel()
    order = jnp.argsort(positions)
    positions, weights = positions[order], weights[order]
    # neighbours closer than MERGE_TOL (relative) are the same atom reached by two words
    split = jnp.diff(positions) > MERGE_TOL * jnp.maximum(1.0, jnp.abs(positions[1:]))
    group = jnp.concatenate([jnp.zeros(1, dtype=jnp.int32), jnp.cumsum(split, dtype=jnp.int32)])
    n_groups = int(group[-1]) + 1
    merged = jax.ops.segment_sum(weights, group, num_segments=n_groups)
    centres = jax.ops.segment_sum(weights * positions, group, num_segments=n_groups) / merged
    return AtomicMeasure(centres, merged / jnp.sum(merged))
