import equinox as eqx
import jax.numpy as jnp
from jaxtyping import Array, ArrayLike, Float

from singularPW.interpolation.model_space import ModelCandidate, toeplitz_defect
from singularPW.measure.atomic import AtomicMeasure, MuFunction, check_attached, norm
from singularPW.measure.base import Measure
from singularPW.sampling.reconstruction import SampleSet, beta_coefficients
from singularPW.transforms.power_series import PowerSeries
from singularPW.utils.diagnostics import DefectReport

MONOTONE_SLACK = 1e-12
INDICATOR_SLACK = 1e-9


def _check_y_values(y_values: ArrayLike) -> Float[Array, " n_y"]:
    y = jnp.atleast_1d(jnp.asarray(y_values, dtype=jnp.float64))
    if y.ndim != 1 or y.shape[0] == 0:
        raise ValueError("y_values must be a non-empty 1D sequence")
    if not bool(jnp.all(y > 0)) or not bool(jnp.all(jnp.diff(y) > 0)):
        raise ValueError("y_values must be positive and strictly increasing")
    return y


def _eventually_nonincreasing(ratios: Float[Array, " n_y"]) -> bool:
    tail = ratios[ratios.shape[0] // 2 :]
    return bool(jnp.all(tail[1:] <= tail[:-1] * (1 + MONOTONE_SLACK)))


class GrowthReport(eqx.Module):
    r"""
    Growth of $\hat{f}$ along the imaginary axis against the critical type $\pi$.

    Attributes:
        y_values: Probed heights.
        ratio_pos: $|\hat{f}(iy)| e^{-\pi y}$.
        ratio_neg: $|\hat{f}(-iy)| e^{-\pi y}$.
        envelope: $\|f\|_\mu e^{(2\pi a - \pi) y}$ with a the largest |atom|.
        decreasing: Both ratio sequences nonincreasing over the final half.
        verdict: decreasing and both final ratios <= tol.
    """

    y_values: Float[Array, " n_y"]
    ratio_pos: Float[Array, " n_y"]
    ratio_neg: Float[Array, " n_y"]
    envelope: Float[Array, " n_y"]
    tol: float = eqx.field(static=True)
    decreasing: bool = eqx.field(static=True)
    verdict: bool = eqx.field(static=True)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "defect": float(jnp.maximum(self.ratio_pos[-1], self.ratio_neg[-1])),
            "bound": float(self.envelope[-1]),
            "order": 0,
            "decreasing": self.decreasing,
            "y_max": float(self.y_values[-1]),
        }


def growth_envelope_check(
    m: AtomicMeasure, f: MuFunction, y_values: ArrayLike, tol: float = 1e-3
) -> GrowthReport:
    """
    Probe |f_hat(+-iy)| e^{-pi y}, which tends to zero for every f in L^2(mu) when the
    atoms stay inside (-1/2, 1/2).

    Raises:
        ValueError: if y_values are not positive and strictly increasing.
    """
    y = _check_y_values(y_values)
    check_attached(m, f)
    # f_hat(+-iy) e^{-pi y} with the damping folded into the exponent
    weighted = m.weights * f.values
    ratio_pos = jnp.abs(jnp.exp((2 * jnp.pi * m.positions[None, :] - jnp.pi) * y[:, None]) @ weighted)
    ratio_neg = jnp.abs(jnp.exp((-2 * jnp.pi * m.positions[None, :] - jnp.pi) * y[:, None]) @ weighted)
    lo, hi = m.support_interval()
    a = max(abs(lo), abs(hi))
    envelope = norm(m, f) * jnp.exp((2 * jnp.pi * a - jnp.pi) * y)
    decreasing = _eventually_nonincreasing(ratio_pos) and _eventually_nonincreasing(ratio_neg)
    verdict = decreasing and float(ratio_pos[-1]) <= tol and float(ratio_neg[-1]) <= tol
    return GrowthReport(
        y_values=y,
        ratio_pos=ratio_pos,
        ratio_neg=ratio_neg,
        envelope=envelope,
        tol=tol,
        decreasing=decreasing,
        verdict=verdict,
    )


class TypeEpsReport(eqx.Module):
    """
    Finite-data part of the type-epsilon characterization.

    Attributes:
        support: (lo, hi) of the measure's support interval.
        membership: Toeplitz defect of G_F built from the integer samples.
        indicator_pos: log|F(iy)| / y at the probed heights.
        indicator_neg: log|F(-iy)| / y at the probed heights.
        slack: Norm allowance log(max(1, ||F||)) / y at the largest height.
    """

    support: tuple[float, float] = eqx.field(static=True)
    membership: DefectReport
    indicator_pos: Float[Array, " n_y"]
    indicator_neg: Float[Array, " n_y"]
    slack: Float
    support_ok: bool = eqx.field(static=True)
    indicator_ok: bool = eqx.field(static=True)
    verdict: bool = eqx.field(static=True)


def type_eps_check(
    samples: SampleSet,
    m: Measure,
    alpha: PowerSeries,
    b: PowerSeries,
    axis_values: ArrayLike,
    y_values: ArrayLike,
    tol: float,
    window: int | None = None,
) -> TypeEpsReport:
    r"""
    Decide what finite data can decide about F being f_hat for some f in L^2(mu) with
    support in [lo, hi], hi - lo < 1: the support width, membership of G_F in H(b), and
    an imaginary-axis probe of the indicator,
    $\log|F(iy)|/y \le 2\pi\,hi + s$ and $\log|F(-iy)|/y \le -2\pi\,lo + s$ at the largest y.

    The indicator itself is never computed; only the two imaginary-axis directions are probed.

    Args:
        samples (SampleSet): F(0..M).
        m (Measure): Measure.
        alpha (PowerSeries): Taylor coefficients of 1/mu_plus.
        b (PowerSeries): Inner function coefficients.
        axis_values (ArrayLike): Shape (2, n_y); rows F(iy) and F(-iy).
        y_values (ArrayLike): Positive increasing heights.
        tol (float): Membership tolerance.
        window (int | None): Toeplitz window; defaults to min(32, order // 2).
    """
    y = _check_y_values(y_values)
    axis = jnp.asarray(axis_values, dtype=jnp.complex128)
    if axis.shape != (2, y.shape[0]):
        raise ValueError(f"axis_values must have shape (2, {y.shape[0]}), got {axis.shape}")
    lo, hi = m.support_interval()
    support_ok = hi - lo < 1

    order = min(samples.last_index, alpha.order, b.order)
    beta = beta_coefficients(samples, alpha, order)
    window = min(32, order // 2) if window is None else window
    membership = toeplitz_defect(ModelCandidate(beta.as_series(), "from-moments"), b, window)

    indicator_pos = jnp.log(jnp.abs(axis[0])) / y
    indicator_neg = jnp.log(jnp.abs(axis[1])) / y
    energy = beta.cumulative_energy()[-1]
    slack = (0.5 * jnp.log(jnp.maximum(1.0, energy)) + INDICATOR_SLACK) / y[-1]
    indicator_ok = bool(
        (indicator_pos[-1] <= 2 * jnp.pi * hi + slack)
        & (indicator_neg[-1] <= -2 * jnp.pi * lo + slack)
    )
    verdict = support_ok and membership.passes(tol) and indicator_ok
    return TypeEpsReport(
        support=(lo, hi),
        membership=membership,
        indicator_pos=indicator_pos,
        indicator_neg=indicator_neg,
        slack=slack,
        support_ok=support_ok,
        indicator_ok=indicator_ok,
        verdict=verdict,
    )
