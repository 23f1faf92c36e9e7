import math

import equinox as eqx
import jax.numpy as jnp
from jaxtyping import Array, ArrayLike, Float

TAIL_FRACTION = 1.0 / 3.0


class DefectReport(eqx.Module):
    """
    Truncation-aware diagnostic attached to an approximate check.

    A check passes at tolerance tol when defect + bound <= tol: the computed defect
    plus the estimated error made by truncating infinite sums.

    Args:
        defect (Float): Computed defect of the truncated problem.
        bound (Float): Truncation-error estimate.
        order (int): Truncation order used.
        window (int | None): Number of tested coefficients, when relevant.
        partial_sums (Float[Array, " n"] | None): Curve behind the defect, when kept.
    """

    defect: Float
    bound: Float
    order: int = eqx.field(static=True)
    window: int | None = eqx.field(static=True, default=None)
    partial_sums: Float[Array, " n"] | None = None

    def passes(self, tol: float) -> bool:
        return float(self.defect) + float(self.bound) <= tol

    def to_dict(self, tol: float | None = None) -> dict:
        out = {
            "defect": float(self.defect),
            "bound": float(self.bound),
            "order": self.order,
        }
        if self.window is not None:
            out["window"] = self.window
        if tol is not None:
            out["verdict"] = self.passes(tol)
        return out


def tail_start(length: int, fraction: float = TAIL_FRACTION) -> int:
    """Index where the final `fraction` of a length-`length` sequence starts."""
    return length - max(1, math.ceil(length * fraction))


def tail_energy(coefficients: ArrayLike, fraction: float = TAIL_FRACTION) -> Float:
    """Energy sum |c_n|^2 over the final `fraction` of the coefficients."""
    c = jnp.asarray(coefficients)
    return jnp.sum(jnp.abs(c[tail_start(c.shape[0], fraction):]) ** 2)


def tail_slope(coefficients: ArrayLike, fraction: float = TAIL_FRACTION) -> Float:
    """
    Least-squares slope of log10 |c_n|^2 over the final `fraction`; strongly negative
    slopes indicate geometric decay, slopes near zero a stalled tail.
    """
    c = jnp.asarray(coefficients)
    start = tail_start(c.shape[0], fraction)
    if c.shape[0] - start < 2:
        return jnp.asarray(0.0)
    n = jnp.arange(start, c.shape[0], dtype=jnp.float64)
    logs = jnp.log10(jnp.abs(c[start:]) ** 2 + 1e-300)
    return jnp.polyfit(n, logs, 1)[0]
