import equinox as eqx
import jax.numpy as jnp
from jaxtyping import Array, ArrayLike, Complex, Float

from singularPW.interpolation.model_space import ModelCandidate, toeplitz_defect
from singularPW.kaczmarz.dual import FourierData, synthesize_dual
from singularPW.measure.atomic import AtomicMeasure, MuFunction, check_attached, norm
from singularPW.sampling.reconstruction import SampleSet, beta_coefficients
from singularPW.transforms.power_series import PowerSeries
from singularPW.utils.diagnostics import DefectReport, tail_energy
from singularPW.utils.errors import OrderError, TruncationError

DEFAULT_N_RADII = 4


def default_r_schedule(n_radii: int = DEFAULT_N_RADII) -> Float[Array, " n_radii"]:
    """Radii 1 - 10^{-k} for k = 1..n_radii."""
    return 1.0 - 10.0 ** (-jnp.arange(1, n_radii + 1, dtype=jnp.float64))


class BoundaryValues(eqx.Module):
    """
    Radial values of a disk function at the atoms, r e^{2 pi i x_k} for each r.

    Args:
        points (ArrayLike): Torus positions x_k.
        values (ArrayLike): Values at the largest radius, one per point.
        r_schedule (ArrayLike): Strictly increasing radii in (0, 1).
        radial_values (ArrayLike): Values for every radius, shape (n_radii, n_points).
        tail_bounds (ArrayLike): Truncation bound of the series at every radius.
        errors (ArrayLike | None): ||reference - values(r)||_mu per radius.
    """

    points: Float[Array, " n_points"]
    values: Complex[Array, " n_points"]
    r_schedule: Float[Array, " n_radii"]
    radial_values: Complex[Array, "n_radii n_points"]
    tail_bounds: Float[Array, " n_radii"]
    errors: Float[Array, " n_radii"] | None = None

    def __init__(
        self,
        points: ArrayLike,
        values: ArrayLike,
        r_schedule: ArrayLike,
        radial_values: ArrayLike,
        tail_bounds: ArrayLike,
        errors: ArrayLike | None = None,
    ):
        self.points = jnp.asarray(points, dtype=jnp.float64)
        self.values = jnp.asarray(values, dtype=jnp.complex128)
        self.r_schedule = _check_schedule(r_schedule)
        self.radial_values = jnp.asarray(radial_values, dtype=jnp.complex128)
        self.tail_bounds = jnp.asarray(tail_bounds, dtype=jnp.float64)
        self.errors = None if errors is None else jnp.asarray(errors, dtype=jnp.float64)
        if self.values.shape != self.points.shape:
            raise ValueError(
                f"{self.values.shape[0]} values given for {self.points.shape[0]} points"
            )

    def as_function(self) -> MuFunction:
        return MuFunction(self.values)


def _check_schedule(r_schedule: ArrayLike) -> Float[Array, " n_radii"]:
    r = jnp.atleast_1d(jnp.asarray(r_schedule, dtype=jnp.float64))
    if r.ndim != 1 or r.shape[0] == 0:
        raise ValueError("the radius schedule must be a non-empty 1D sequence")
    if not bool(jnp.all((r > 0) & (r < 1))):
        raise ValueError("radii must lie in the open interval (0, 1)")
    if not bool(jnp.all(jnp.diff(r) > 0)):
        raise ValueError("radii must be strictly increasing")
    return r


def boundary_recover(
    candidate: ModelCandidate,
    m: AtomicMeasure,
    r_schedule: ArrayLike | None = None,
    reference: MuFunction | None = None,
    tol: float = 1e-3,
    strict: bool = True,
) -> BoundaryValues:
    r"""
    Evaluate the candidate series at $r e^{2\pi i x_k}$ along the radius schedule.

    The neglected part of the series at radius r is bounded by
    $\sqrt{T} \, r^{N+1} / \sqrt{1 - r^2}$ with T the final-third energy of the coefficients.

    Args:
        candidate (ModelCandidate): Series of the disk function.
        m (AtomicMeasure): Measure whose atoms are the boundary points.
        r_schedule (ArrayLike | None): Radii; defaults to 1 - 10^{-k}, k = 1..4.
        reference (MuFunction | None): Expected boundary function, for the error curve.
        tol (float): Largest acceptable tail bound.
        strict (bool): Raise instead of recording when the tail bound exceeds tol.

    Raises:
        TruncationError: if strict and the series is too short for the largest radius.
    """
    r = _check_schedule(default_r_schedule() if r_schedule is None else r_schedule)
    c = candidate.series.coefficients
    n = jnp.arange(c.shape[0], dtype=jnp.float64)
    tail_bounds = (
        jnp.sqrt(tail_energy(c)) * r ** (candidate.order + 1) / jnp.sqrt(1.0 - r**2)
    )
    if strict and float(tail_bounds[-1]) > tol:
        raise TruncationError(
            f"series of order {candidate.order} has tail bound {float(tail_bounds[-1]):.3e} "
            f"at r = {float(r[-1])}, above tol = {tol}"
        )
    circle = m.exponentials(c.shape[0] - 1)
    radial = (c[None, :] * r[:, None] ** n[None, :]) @ circle
    errors = None
    if reference is not None:
        check_attached(m, reference)
        errors = jnp.sqrt(jnp.sum(m.weights * jnp.abs(reference.values - radial) ** 2, axis=1))
    return BoundaryValues(
        points=m.positions,
        values=radial[-1],
        r_schedule=r,
        radial_values=radial,
        tail_bounds=tail_bounds,
        errors=errors,
    )


class TwoSidedReport(eqx.Module):
    """
    Two-sided check of an entire function from its samples on both half-lines.

    Attributes:
        positive, negative: Toeplitz defects of G_plus and G_minus.
        boundary_pos, boundary_neg: Radial recoveries, the independent cross-check.
        f_pos, f_neg: L^2(mu)-boundaries of G_plus and G_minus from the dual synthesis.
        mismatch: ||conj(f_pos) - f_neg||_mu.
    """

    positive: DefectReport
    negative: DefectReport
    boundary_pos: BoundaryValues
    boundary_neg: BoundaryValues
    f_pos: MuFunction
    f_neg: MuFunction
    mismatch: Float
    tol: float = eqx.field(static=True)
    verdict: bool = eqx.field(static=True)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "defect": max(float(self.positive.defect), float(self.negative.defect)),
            "bound": max(float(self.positive.bound), float(self.negative.bound)),
            "order": self.positive.order,
            "window": self.positive.window,
            "mismatch": float(self.mismatch),
            "positive": self.positive.to_dict(self.tol),
            "negative": self.negative.to_dict(self.tol),
        }


def two_sided_check(
    samples_pos: SampleSet,
    samples_neg: SampleSet,
    m: AtomicMeasure,
    alpha: PowerSeries,
    b: PowerSeries,
    tol: float,
    window: int | None = None,
    r_schedule: ArrayLike | None = None,
) -> TwoSidedReport:
    """
    Build G_plus from F(n) and G_minus from conj(F(-n)), test both for membership in
    H(b) and compare their boundaries: the verdict holds iff both defects pass and
    conj(f_pos) matches f_neg within tol.

    Raises:
        OrderError: if the two sample sets have different lengths or are too short
            for the window.
    """
    if len(samples_pos) != len(samples_neg):
        raise OrderError(
            f"{len(samples_pos)} positive and {len(samples_neg)} negative samples; "
            "both sides need the same number"
        )
    order = min(samples_pos.last_index, alpha.order, b.order)
    window = min(32, order // 2) if window is None else window
    if window < 1:
        raise OrderError(f"at least 3 samples are needed, got {len(samples_pos)}")

    sides = []
    for samples in (samples_pos, samples_neg):
        beta = beta_coefficients(samples, alpha, order)
        candidate = ModelCandidate(beta.as_series(), "from-moments")
        defect = toeplitz_defect(candidate, b, window)
        f, _ = synthesize_dual(m, FourierData(beta.coefficients), alpha)
        radial = boundary_recover(candidate, m, r_schedule, reference=f, strict=False)
        sides.append((defect, f, radial))
    (pos_defect, f_pos, pos_radial), (neg_defect, f_neg, neg_radial) = sides

    mismatch = norm(m, MuFunction(jnp.conj(f_pos.values) - f_neg.values))
    verdict = pos_defect.passes(tol) and neg_defect.passes(tol) and float(mismatch) <= tol
    return TwoSidedReport(
        positive=pos_defect,
        negative=neg_defect,
        boundary_pos=pos_radial,
        boundary_neg=neg_radial,
        f_pos=f_pos,
        f_neg=f_neg,
        mismatch=mismatch,
        tol=tol,
        verdict=verdict,
    )
