import equinox as eqx
import jax.numpy as jnp
from jaxtyping import Array, ArrayLike, Complex, Float

from singularPW.measure.atomic import AtomicMeasure, MuFunction, integer_transform, norm
from singularPW.measure.base import Measure
from singularPW.transforms.power_series import PowerSeries, cauchy_product, lower_toeplitz
from singularPW.utils.errors import OrderError


class DualSequence(eqx.Module):
    r"""
    The Kaczmarz dual sequence $g_n = \sum_{j \le n} \overline{\alpha_{n-j}} e_j$, where
    $\alpha$ are the Taylor coefficients of $1/\mu_+$.

    Row n of the coefficient matrix holds the weights of $e_0, \dots, e_n$ in $g_n$.

    Args:
        alpha (PowerSeries): Taylor coefficients of 1/mu_plus.
    """

    alpha: PowerSeries

    @property
    def order(self) -> int:
        return self.alpha.order

    def rows(self, order: int | None = None) -> Complex[Array, "n_dual n_exp"]:
        """Lower triangular matrix with entry (n, j) = conj(alpha_{n-j})."""
        order = self.order if order is None else order
        _check_order(order, self.alpha)
        size = order + 1
        return lower_toeplitz(jnp.conj(self.alpha.coefficients[:size]), size, size)

    def values(self, m: AtomicMeasure, order: int | None = None) -> Complex[Array, "n_dual n_atoms"]:
        """g_n(x_k) for n = 0..order on the atoms of m."""
        order = self.order if order is None else order
        return self.rows(order) @ m.exponentials(order)

    def transform(self, m: Measure, z: ArrayLike, order: int | None = None) -> Complex[Array, "n_dual n_z"]:
        r"""
        Fourier-Stieltjes transforms $\hat{g}_n(z) = \sum_{k \le n} \overline{\alpha_{n-k}} \hat{\mu}(z - k)$.
        """
        order = self.order if order is None else order
        z = jnp.atleast_1d(jnp.asarray(z, dtype=jnp.complex128))
        shifted = m.fourier_stieltjes(z[None, :] - jnp.arange(order + 1)[:, None])
        return self.rows(order) @ shifted


class FourierData(eqx.Module):
    r"""
    Fourier coefficients $\langle f, g_n \rangle$ for n = 0..order.

    Args:
        coefficients (ArrayLike): The coefficient sequence.
    """

    coefficients: Complex[Array, " n_coeff"]

    def __init__(self, coefficients: ArrayLike):
        self.coefficients = jnp.asarray(jnp.atleast_1d(coefficients), dtype=jnp.complex128)

    @property
    def order(self) -> int:
        return self.coefficients.shape[0] - 1

    def cumulative_energy(self) -> Float[Array, " n_coeff"]:
        return jnp.cumsum(jnp.abs(self.coefficients) ** 2)

    def as_series(self) -> PowerSeries:
        return PowerSeries(self.coefficients)


def _check_order(order: int, alpha: PowerSeries) -> None:
    if order < 0:
        raise OrderError(f"order must be >= 0, got {order}")
    if order > alpha.order:
        raise OrderError(f"order {order} exceeds the {alpha.order} available alpha coefficients")


def _residual_curve(
    m: AtomicMeasure, partial: Complex[Array, "n_coeff n_atoms"], target: Complex[Array, " n_atoms"]
) -> Float[Array, " n_coeff"]:
    return jnp.sqrt(jnp.sum(m.weights * jnp.abs(target[None, :] - partial) ** 2, axis=1))


def analyze(m: AtomicMeasure, f: MuFunction, alpha: PowerSeries, order: int) -> FourierData:
    r"""
    Fourier coefficients $\langle f, g_n \rangle = \sum_{j \le n} \alpha_{n-j} \hat{f}(j)$.

    The moments $\hat{f}(j)$ are exact finite sums over the atoms.

    Raises:
        OrderError: if order exceeds alpha.order.
    """
    _check_order(order, alpha)
    moments = integer_transform(m, f, order)
    return FourierData(cauchy_product(alpha.coefficients[: order + 1], moments, order))


def synthesize_exponential(
    m: AtomicMeasure, data: FourierData, reference: MuFunction | None = None
) -> tuple[MuFunction, Float[Array, " n_coeff"]]:
    r"""
    First expansion $\sum_n \langle f, g_n \rangle e_n$ evaluated on the atoms.

    Args:
        m (AtomicMeasure): Measure.
        data (FourierData): Coefficients.
        reference (MuFunction | None): Function the series should converge to. Defaults
            to the full sum, in which case the residuals measure self-convergence.

    Returns:
        function (MuFunction): The full partial sum.
        residuals (Float[Array, " n_coeff"]): ||reference - S_N||_mu for N = 0..order.
    """
    partial = jnp.cumsum(data.coefficients[:, None] * m.exponentials(data.order), axis=0)
    target = partial[-1] if reference is None else reference.values
    return MuFunction(partial[-1]), _residual_curve(m, partial, target)


def synthesize_dual(
    m: AtomicMeasure,
    data: FourierData,
    alpha: PowerSeries,
    reference: MuFunction | None = None,
) -> tuple[MuFunction, Float[Array, " n_coeff"]]:
    r"""
    Second expansion $\sum_n c_n g_n$ evaluated on the atoms. Converges for every
    square-summable c since the dual sequence is Bessel.

    Raises:
        OrderError: if data.order exceeds alpha.order.
    """
    _check_order(data.order, alpha)
    values = DualSequence(alpha).values(m, data.order)
    partial = jnp.cumsum(data.coefficients[:, None] * values, axis=0)
    target = partial[-1] if reference is None else reference.values
    return MuFunction(partial[-1]), _residual_curve(m, partial, target)


def parseval_curve(m: AtomicMeasure, f: MuFunction, alpha: PowerSeries, order: int) -> Float[Array, " n_coeff"]:
    """Parseval defect ||f||^2 - sum_{n <= N} |<f, g_n>|^2 for every N = 0..order."""
    data = analyze(m, f, alpha, order)
    return norm(m, f) ** 2 - data.cumulative_energy()


def parseval_defect(m: AtomicMeasure, f: MuFunction, alpha: PowerSeries, order: int) -> Float:
    return parseval_curve(m, f, alpha, order)[-1]


def adaptive_order(
    m: AtomicMeasure, f: MuFunction, alpha: PowerSeries, tol: float
) -> tuple[int, Float, bool]:
    """
    Smallest order whose Parseval defect is <= tol, searching up to alpha.order.

    Returns:
        order (int): Stopping order, or alpha.order when the cap is hit.
        defect (Float): Defect at that order.
        reached (bool): Whether the tolerance was met before the cap.
    """
    curve = parseval_curve(m, f, alpha, alpha.order)
    below = jnp.nonzero(curve <= tol, size=1, fill_value=-1)[0]
    hit = int(below[0])
    if hit < 0:
        return alpha.order, curve[-1], False
    return hit, curve[hit], True


def dual_values(m: AtomicMeasure, alpha: PowerSeries, order: int) -> Complex[Array, "n_dual n_atoms"]:
    """Matrix of g_n(x_k), n = 0..order."""
    return DualSequence(alpha).values(m, order)


def gram_matrix(m: AtomicMeasure, alpha: PowerSeries, order: int) -> Complex[Array, "n_dual n_dual"]:
    r"""Gram matrix $\langle g_j, g_k \rangle_\mu$ for j, k <= order."""
    values = dual_values(m, alpha, order)
    return (values * m.weights[None, :]) @ jnp.conj(values).T
