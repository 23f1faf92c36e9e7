import equinox as eqx
import jax.numpy as jnp
from jaxtyping import Array, ArrayLike, Complex, Float

from singularPW.kaczmarz.dual import DualSequence, FourierData
from singularPW.measure.atomic import AtomicMeasure, MuFunction, fourier_transform
from singularPW.measure.base import Measure
from singularPW.transforms.power_series import PowerSeries, cauchy_product
from singularPW.utils.diagnostics import TAIL_FRACTION, tail_energy, tail_slope
from singularPW.utils.errors import OrderError


class SampleSet(eqx.Module):
    """
    Integer samples F(0), F(1), ..., F(M) of an entire function.

    Args:
        values (ArrayLike): Samples indexed contiguously from 0.
    """

    values: Complex[Array, " n_samples"]

    def __init__(self, values: ArrayLike):
        self.values = jnp.asarray(jnp.atleast_1d(values), dtype=jnp.complex128)

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def last_index(self) -> int:
        return self.values.shape[0] - 1


class SummabilityReport(eqx.Module):
    """
    Finite-data diagnostics for square-summability of a coefficient sequence.

    The verdict is "energy over the final window <= tol"; the raw partial-sum curve is
    kept alongside so no claim is made about the infinite tail beyond the data.
    """

    partial_sums: Float[Array, " n_coeff"]
    total: Float
    tail_energy: Float
    decade_ratio: Float
    tail_slope: Float
    tol: float = eqx.field(static=True)
    verdict: bool = eqx.field(static=True)


class ReconstructionReport(eqx.Module):
    """
    Truncated sampling-series values at a set of points.

    Attributes:
        points: Evaluation points z.
        reconstructed: Truncated series values.
        reference: Caller-supplied values of F at the points, when available.
        errors: |reconstructed - reference|, when a reference is available.
        truncation_order: Last series index used.
        tail_energy: Estimate of sum_{n > order} |beta_n|^2 (final-window energy).
        tail_bound: Per-point Cauchy-Schwarz bound on the neglected part of the series.
    """

    points: Complex[Array, " n_points"]
    reconstructed: Complex[Array, " n_points"]
    reference: Complex[Array, " n_points"] | None
    errors: Float[Array, " n_points"] | None
    tail_energy: Float
    tail_bound: Float[Array, " n_points"]
    truncation_order: int = eqx.field(static=True)

    @property
    def max_error(self) -> float:
        return float(jnp.max(self.errors)) if self.errors is not None else float("nan")


class RepresentationReport(eqx.Module):
    summability: SummabilityReport
    reconstruction: ReconstructionReport
    tol: float = eqx.field(static=True)
    verdict: bool = eqx.field(static=True)


def sample_transform(m: AtomicMeasure, f: MuFunction, n_samples: int, negative: bool = False) -> SampleSet:
    """
    Integer samples of f_hat: f_hat(j), or conj(f_hat(-j)) when negative is set,
    for j = 0..n_samples - 1.
    """
    j = jnp.arange(n_samples, dtype=jnp.float64)
    if negative:
        return SampleSet(jnp.conj(fourier_transform(m, f, -j)))
    return SampleSet(fourier_transform(m, f, j))


def _default_order(samples: SampleSet, alpha: PowerSeries, order: int | None) -> int:
    return min(samples.last_index, alpha.order) if order is None else order


def beta_coefficients(samples: SampleSet, alpha: PowerSeries, order: int) -> FourierData:
    r"""
    $\beta_n = \sum_{j \le n} \alpha_{n-j} F(j)$ for n = 0..order. When F = f_hat these are
    the Fourier coefficients <f, g_n>.

    Raises:
        OrderError: if there are fewer than order + 1 samples or alpha coefficients.
    """
    if order < 0 or order > samples.last_index:
        raise OrderError(f"order {order} needs {order + 1} samples, {len(samples)} given")
    if order > alpha.order:
        raise OrderError(f"order {order} exceeds the {alpha.order} available alpha coefficients")
    return FourierData(
        cauchy_product(alpha.coefficients[: order + 1], samples.values[: order + 1], order)
    )


def summability_report(
    beta: FourierData, tol: float = 1e-6, fraction: float = TAIL_FRACTION
) -> SummabilityReport:
    """
    Partial sums of |beta_n|^2, the energy of the final `fraction` of the data, the share
    of energy in the final tenth, and the tail slope. Verdict: tail energy <= tol.
    """
    partial = beta.cumulative_energy()
    total = partial[-1]
    tail = tail_energy(beta.coefficients, fraction)
    decade = tail_energy(beta.coefficients, 0.1)
    decade_ratio = jnp.where(total > 0, decade / jnp.where(total > 0, total, 1.0), 0.0)
    return SummabilityReport(
        partial_sums=partial,
        total=total,
        tail_energy=tail,
        decade_ratio=decade_ratio,
        tail_slope=tail_slope(beta.coefficients, fraction),
        tol=tol,
        verdict=bool(tail <= tol),
    )


def reconstruct(
    samples: SampleSet,
    m: Measure,
    alpha: PowerSeries,
    z: ArrayLike,
    order: int | None = None,
    reference: ArrayLike | None = None,
    fraction: float = TAIL_FRACTION,
) -> ReconstructionReport:
    r"""
    Truncated sampling series
    $F(z) \approx \sum_{n \le N} \beta_n \hat{g}_n(z)$,
    $\hat{g}_n(z) = \sum_{k \le n} \overline{\alpha_{n-k}} \hat{\mu}(z - k)$.

    The per-point tail bound uses $\sum_n |\hat{g}_n(z)|^2 = \hat{\mu}(2 i \operatorname{Im} z)$
    (Parseval for $x \mapsto e^{2\pi i \bar{z} x}$), so growth off the real axis is
    accounted for.

    Args:
        samples (SampleSet): F(0..M).
        m (Measure): Measure.
        alpha (PowerSeries): Taylor coefficients of 1/mu_plus.
        z (ArrayLike): Evaluation points.
        order (int | None): Truncation order N; defaults to the largest available.
        reference (ArrayLike | None): Known values F(z) for error reporting.
        fraction (float): Tail window used for the tail-energy estimate.

    Raises:
        OrderError: if the samples or alpha are too short for the order.
    """
    order = _default_order(samples, alpha, order)
    beta = beta_coefficients(samples, alpha, order)
    z = jnp.atleast_1d(jnp.asarray(z, dtype=jnp.complex128))
    kernels = DualSequence(alpha).transform(m, z, order)
    values = beta.coefficients @ kernels
    tail = tail_energy(beta.coefficients, fraction)
    full_kernel = jnp.real(m.fourier_stieltjes(2j * z.imag))
    kernel_tail = jnp.clip(full_kernel - jnp.sum(jnp.abs(kernels) ** 2, axis=0), 0.0)
    if reference is not None:
        reference = jnp.atleast_1d(jnp.asarray(reference, dtype=jnp.complex128))
        errors = jnp.abs(values - reference)
    else:
        errors = None
    return ReconstructionReport(
        points=z,
        reconstructed=values,
        reference=reference,
        errors=errors,
        tail_energy=tail,
        tail_bound=jnp.sqrt(tail * kernel_tail),
        truncation_order=order,
    )


def verify_representation(
    samples: SampleSet,
    m: Measure,
    alpha: PowerSeries,
    test_points: ArrayLike,
    reference: ArrayLike,
    tol: float,
    order: int | None = None,
    fraction: float = TAIL_FRACTION,
) -> tuple[bool, RepresentationReport]:
    """
    Combined check of the sampling characterization: beta square-summable (by the
    tail-energy verdict) and the sampling series reproducing the caller's reference
    values within tol at every test point.
    """
    order = _default_order(samples, alpha, order)
    beta = beta_coefficients(samples, alpha, order)
    summability = summability_report(beta, tol, fraction)
    reconstruction = reconstruct(samples, m, alpha, test_points, order, reference, fraction)
    verdict = summability.verdict and reconstruction.max_error <= tol
    return verdict, RepresentationReport(summability, reconstruction, tol, verdict)
