r"""
Normalized Cauchy transform and membership in the model space
$\mathcal{H}(b) = H^2 \ominus b H^2 = \ker T_{\bar{b}}$.
"""

from typing import Literal

import equinox as eqx
import jax.numpy as jnp
from jaxtyping import Array, ArrayLike, Complex, Float

from singularPW.kaczmarz.dual import FourierData, analyze, synthesize_dual
from singularPW.measure.atomic import AtomicMeasure, MuFunction, check_attached, integer_transform
from singularPW.transforms.power_series import PowerSeries, cauchy_product
from singularPW.utils.diagnostics import DefectReport, tail_energy
from singularPW.utils.errors import OrderError

Provenance = Literal["from-moments", "from-function", "external"]


class ModelCandidate(eqx.Module):
    """
    Taylor coefficients of a disk function G offered for membership in H(b).

    Args:
        series (PowerSeries): Coefficients of G, order >= 1.
        provenance (str): "from-moments", "from-function" or "external".
    """

    series: PowerSeries
    provenance: str = eqx.field(static=True)

    def __init__(self, series: PowerSeries, provenance: Provenance = "external"):
        if series.order < 1:
            raise ValueError("a model-space candidate needs at least two coefficients")
        if provenance not in ("from-moments", "from-function", "external"):
            raise ValueError(f"unknown provenance {provenance!r}")
        self.series = series
        self.provenance = provenance

    @property
    def order(self) -> int:
        return self.series.order


class MomentSolution(eqx.Module):
    """
    Outcome of the trigonometric moment problem.

    Attributes:
        function: The solution on the atoms, None when infeasible.
        candidate: G_a, the moment series divided by mu_plus.
        membership: Toeplitz defect of G_a.
        moment_residual: max_n |int f e^{-2 pi i n x} dmu - a_n| of the synthesized f.
        feasible: Verdict.
    """

    function: MuFunction | None
    candidate: ModelCandidate
    membership: DefectReport
    moment_residual: Float
    feasible: bool = eqx.field(static=True)


def nct_series(m: AtomicMeasure, f: MuFunction, alpha: PowerSeries, order: int) -> ModelCandidate:
    r"""Taylor coefficients of $V_\mu f(z) = \sum_n \langle f, g_n \rangle z^n$."""
    return ModelCandidate(analyze(m, f, alpha, order).as_series(), "from-function")


def nct_quotient(m: AtomicMeasure, f: MuFunction, z: ArrayLike) -> Complex[Array, "..."]:
    r"""
    $V_\mu f(z) = \int \frac{f(x)}{1 - z e^{-2\pi i x}} d\mu(x) \big/ \mu_+(z)$ by direct sums.

    Raises:
        ValueError: if |z| >= 1.
    """
    check_attached(m, f)
    z = jnp.asarray(z, dtype=jnp.complex128)
    if z.size and float(jnp.max(jnp.abs(z))) >= 1:
        raise ValueError("the normalized Cauchy transform is evaluated on the open disk only")
    kernel = 1.0 / (1.0 - z[..., None] * jnp.exp(-2j * jnp.pi * m.positions))
    return (kernel @ (m.weights * f.values)) / (kernel @ m.weights)


def toeplitz_defect(candidate: ModelCandidate, b: PowerSeries, window: int) -> DefectReport:
    r"""
    Norm of the first window + 1 coefficients of $T_{\bar{b}} G = P_+(\bar{b} G)$,
    coefficient m being $\sum_{k \ge 0,\, m + k \le N} \overline{b_k} G_{m+k}$.

    The bound combines the exact symbol tail $\sum_{k > K} |b_k|^2 = 1 - \sum_{k \le K} |b_k|^2$
    (b is inner) with the candidate's final-third energy as the estimate of its own tail.

    Raises:
        OrderError: if the common order is below 2 * window.
    """
    order = min(candidate.order, b.order)
    if window < 0 or order < 2 * window:
        raise OrderError(
            f"window {window} needs series of order >= {2 * window}, got {order}"
        )
    g = candidate.series.coefficients[: order + 1]
    bc = b.coefficients[: order + 1]
    lag = jnp.arange(order + 1)[None, :] - jnp.arange(window + 1)[:, None]
    projection = jnp.where(lag >= 0, jnp.conj(bc)[jnp.clip(lag, 0, order)], 0.0) @ g
    b_energy = jnp.cumsum(jnp.abs(bc) ** 2)
    symbol_tail = jnp.clip(1.0 - b_energy[order - jnp.arange(window + 1)], 0.0)
    bound = jnp.sqrt(tail_energy(g) * jnp.sum(symbol_tail))
    return DefectReport(
        defect=jnp.linalg.norm(projection),
        bound=bound,
        order=order,
        window=window,
        partial_sums=jnp.sqrt(jnp.cumsum(jnp.abs(projection) ** 2)),
    )


def moment_candidate(a: ArrayLike, alpha: PowerSeries) -> ModelCandidate:
    r"""$G_a = \sum_n (\sum_{j \le n} \alpha_{n-j} a_j) z^n$, the moment series over mu_plus."""
    a = jnp.asarray(a, dtype=jnp.complex128)
    order = a.shape[0] - 1
    if order > alpha.order:
        raise OrderError(f"{order + 1} moments given but only {alpha.order + 1} alpha coefficients")
    return ModelCandidate(
        PowerSeries(cauchy_product(alpha.coefficients[: order + 1], a, order)), "from-moments"
    )


def solve_moment_problem(
    a: ArrayLike,
    m: AtomicMeasure,
    alpha: PowerSeries,
    b: PowerSeries,
    tol: float,
    window: int | None = None,
) -> MomentSolution:
    r"""
    Decide whether a_0, ..., a_N are the moments $\int f e^{-2\pi i n x} d\mu$ of some
    f in L^2(mu), and return f when they are.

    The decision is membership of G_a in H(b); f is then the L^2(mu)-boundary of G_a,
    computed as $\sum_n (G_a)_n g_n$. Feasibility also requires the moments of that f to
    match a within tol.
    """
    candidate = moment_candidate(a, alpha)
    window = min(32, candidate.order // 2) if window is None else window
    membership = toeplitz_defect(candidate, b, window)
    f, _ = synthesize_dual(m, FourierData(candidate.series.coefficients), alpha)
    residual = jnp.max(jnp.abs(integer_transform(m, f, candidate.order) - jnp.asarray(a)))
    feasible = membership.passes(tol) and float(residual) <= tol
    return MomentSolution(
        function=f if feasible else None,
        candidate=candidate,
        membership=membership,
        moment_residual=residual,
        feasible=feasible,
    )
