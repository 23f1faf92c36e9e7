import math
import os
import time
from functools import cached_property
from pathlib import Path

import jax
import jax.numpy as jnp
import numpy as np
from jaxtyping import PRNGKeyArray
from tqdm import tqdm

from singularPW.interpolation.boundary import two_sided_check
from singularPW.interpolation.growth import growth_envelope_check
from singularPW.interpolation.model_space import (
    ModelCandidate,
    nct_quotient,
    nct_series,
    solve_moment_problem,
    toeplitz_defect,
)
from singularPW.kaczmarz.dual import (
    adaptive_order,
    analyze,
    parseval_curve,
    synthesize_dual,
    synthesize_exponential,
)
from singularPW.kaczmarz.iterate import kaczmarz_iterate
from singularPW.measure.atomic import AtomicMeasure, MuFunction, fourier_transform, integer_transform, norm
from singularPW.measure.base import Measure
from singularPW.measure.ifs import IFSMeasure, ifs_moment, ifs_refine
from singularPW.sampling.reconstruction import beta_coefficients, reconstruct, sample_transform, summability_report
from singularPW.transforms.cauchy import cauchy_series, inner_function_series
from singularPW.transforms.power_series import PowerSeries, convolve, reciprocal_residual, reciprocal_series, series_eval
from singularPW.utils.diagnostics import tail_energy
from singularPW.utils.io import (
    load_measure,
    measure_to_dict,
    read_function,
    read_points,
    read_samples,
    read_series,
    write_csv,
    write_fourier,
    write_function,
    write_json,
    write_series,
)
from singularPW.utils.postprocessing import emit_plotdata
from singularPW.utils.random import random_function

OUTDIR_ENV = "SINGULARPW_OUTDIR"
RESIDUAL_TOL = 1e-9
IFS_MOMENT_TOL = 1e-10

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FALSE = 2


class ExperimentConfig:
    """
    Configuration of a command-line experiment.

    Args:
        measure_spec (str | None): Path to the measure JSON document.

    Keyword Args:
        order_cap (int): Default truncation order.
        tol (float): Tolerance of every verdict.
        seed (int): Seed of the single random generator of the run.
        depth (int): Refinement depth used to turn an IFS measure into atoms.
        window (int): Toeplitz window of membership tests.
        n_points (int): Number of evaluation points per grid axis.
        verbose (bool): Whether to print progress.
        outdir (str): Output directory; defaults to $SINGULARPW_OUTDIR or ./outdir/.
    """

    measure_spec: str | None

    order_cap: int = 256
    tol: float = 1e-6
    seed: int = 42
    depth: int = 8
    window: int = 32
    n_points: int = 16
    verbose: bool = False
    outdir: str = "./outdir/"

    def __init__(self, measure_spec: str | None = None, **kwargs):
        self.measure_spec = measure_spec
        self.outdir = os.environ.get(OUTDIR_ENV, ExperimentConfig.outdir)

        # Set and override any given hyperparameters
        class_keys = list(self.__class__.__dict__.keys())
        for key, value in kwargs.items():
            if key in class_keys and not key.startswith("__") and value is not None:
                if not callable(getattr(self.__class__, key)):
                    setattr(self, key, value)

        if self.order_cap < 1:
            raise ValueError(f"order_cap must be >= 1, got {self.order_cap}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.depth < 0:
            raise ValueError(f"depth must be >= 0, got {self.depth}")

    def to_dict(self) -> dict:
        return {
            "measure_spec": self.measure_spec,
            "order_cap": self.order_cap,
            "tol": self.tol,
            "seed": self.seed,
            "depth": self.depth,
            "window": self.window,
            "n_points": self.n_points,
        }


class Experiment:
    """
    Runs one verb of the command-line tool against one measure and writes its CSV
    tables and JSON verdict into the output directory.

    Args:
        config (ExperimentConfig): Run configuration.
        measure (Measure | None): Measure to use instead of config.measure_spec.
    """

    VERBS = (
        "moments",
        "alpha",
        "parseval",
        "kaczmarz-compare",
        "reconstruct",
        "vmu",
        "membership",
        "moments-solve",
        "two-sided",
        "growth",
        "cantor-check",
        "plotdata",
    )

    def __init__(self, config: ExperimentConfig, measure: Measure | None = None):
        self.config = config
        self.rng_key = jax.random.PRNGKey(config.seed)
        self.outdir = Path(config.outdir)
        self._measure = measure
        self.summary: dict = {}

    @cached_property
    def measure(self) -> Measure:
        if self._measure is not None:
            return self._measure
        if self.config.measure_spec is None:
            raise ValueError("no measure given; pass --measure")
        return load_measure(self.config.measure_spec)

    @cached_property
    def atomic(self) -> AtomicMeasure:
        """The measure itself when atomic, its refinement at config.depth when self-similar."""
        if isinstance(self.measure, AtomicMeasure):
            return self.measure
        if self.config.verbose:
            print(f"Refining the self-similar measure to depth {self.config.depth}")
        return ifs_refine(self.measure, self.config.depth)

    def _next_key(self) -> PRNGKeyArray:
        self.rng_key, subkey = jax.random.split(self.rng_key)
        return subkey

    def _order(self, order: int | None) -> int:
        return self.config.order_cap if order is None else order

    def _function(self, function: str | None) -> MuFunction:
        if function is not None:
            return read_function(function, self.atomic)
        return random_function(self._next_key(), self.atomic)

    def _series(self, order: int) -> tuple[PowerSeries, PowerSeries, PowerSeries]:
        """mu_plus, alpha and b of the atomic measure to the given order."""
        mu_plus = cauchy_series(self.atomic, order)
        alpha = reciprocal_series(mu_plus)
        residual = float(reciprocal_residual(mu_plus, alpha))
        if residual > RESIDUAL_TOL and self.config.verbose:
            print(f"Warning: alpha residual {residual:.3e} exceeds {RESIDUAL_TOL:.0e}")
        return mu_plus, alpha, inner_function_series(alpha)

    def _window(self, order: int, window: int | None = None) -> int:
        return min(self.config.window if window is None else window, order // 2)

    def _sidecar(self, payload: dict) -> dict:
        out = {"seed": self.config.seed, "tol": self.config.tol}
        if isinstance(self.measure, IFSMeasure):
            out["depth"] = self.config.depth
        out.update(payload)
        return out

    def run(self, verb: str, **verb_args) -> int:
        """
        Execute a verb. Returns the exit status: 0 for a true verdict or a plain
        computation, 2 for a false verdict.
        """
        if verb not in self.VERBS:
            raise ValueError(f"unknown verb {verb!r}; choose from {', '.join(self.VERBS)}")
        if self.config.verbose:
            print(f"Running {verb} with {self.config.to_dict()}")
        method = getattr(self, verb.replace("-", "_"))
        verdict = method(**{k: v for k, v in verb_args.items() if v is not None})
        self.summary["verdict"] = verdict
        if self.config.verbose:
            print(f"{verb} finished, verdict: {verdict}, outputs in {self.outdir}")
        return EXIT_FALSE if verdict is False else EXIT_OK

    # ---------------------------------------------------------------- measure

    def moments(self, order: int | None = None) -> None:
        order = self._order(order)
        if isinstance(self.measure, IFSMeasure):
            values, depth = ifs_moment(self.measure, jnp.arange(order + 1), IFS_MOMENT_TOL)
            bound = IFS_MOMENT_TOL
        else:
            values, depth, bound = self.measure.moments(order), 0, 0.0
        write_series(self.outdir / "moments.csv", values)
        write_json(
            self.outdir / "moments.json",
            self._sidecar({"order": order, "bound": bound, "truncation_depth": depth}),
        )

    # ------------------------------------------------------------- transforms

    def alpha(self, order: int | None = None) -> bool:
        order = self._order(order)
        mu_plus = cauchy_series(self.measure, order)
        alpha = reciprocal_series(mu_plus)
        residual = float(reciprocal_residual(mu_plus, alpha))
        write_series(self.outdir / "mu_plus.csv", mu_plus)
        write_series(self.outdir / "alpha.csv", alpha)
        write_series(self.outdir / "b.csv", inner_function_series(alpha))
        verdict = residual <= RESIDUAL_TOL
        write_json(
            self.outdir / "alpha.json",
            self._sidecar({"verdict": verdict, "order": order, "residual": residual, "bound": residual}),
        )
        return verdict

    # --------------------------------------------------------------- kaczmarz

    def parseval(self, order: int | None = None, function: str | None = None) -> bool:
        order = self._order(order)
        f = self._function(function)
        _, alpha, _ = self._series(order)
        start = time.perf_counter()
        data = analyze(self.atomic, f, alpha, order)
        curve = parseval_curve(self.atomic, f, alpha, order)
        curve.block_until_ready()
        wall_time = time.perf_counter() - start
        stop, stop_defect, reached = adaptive_order(self.atomic, f, alpha, self.config.tol)
        defect = float(curve[-1])
        verdict = abs(defect) <= self.config.tol and float(jnp.min(curve)) >= -self.config.tol

        write_fourier(self.outdir / "fourier.csv", data)
        write_csv(self.outdir / "parseval.csv", ("order", "defect"), enumerate(np.asarray(curve)))
        write_json(
            self.outdir / "parseval.json",
            self._sidecar(
                {
                    "verdict": verdict,
                    "defect": defect,
                    "bound": float(tail_energy(data.coefficients)),
                    "order": order,
                    "norm_squared": float(norm(self.atomic, f) ** 2),
                    "adaptive_order": stop,
                    "adaptive_defect": float(stop_defect),
                    "adaptive_reached": reached,
                    "wall_time": wall_time,
                }
            ),
        )
        return verdict

    def kaczmarz_compare(self, order: int | None = None, function: str | None = None) -> bool:
        order = self._order(order)
        f = self._function(function)
        _, alpha, _ = self._series(order)
        data = analyze(self.atomic, f, alpha, order)
        iterates = kaczmarz_iterate(self.atomic, integer_transform(self.atomic, f, order), order)
        partial = jnp.cumsum(data.coefficients[:, None] * self.atomic.exponentials(order), axis=0)
        gaps = []
        for n, h in enumerate(tqdm(iterates, desc="Comparing iterates", disable=not self.config.verbose)):
            gaps.append(float(jnp.max(jnp.abs(h.values - partial[n]))))
        g_exp, residual_exp = synthesize_exponential(self.atomic, data, f)
        g_dual, residual_dual = synthesize_dual(self.atomic, data, alpha, f)
        expansion_gap = float(norm(self.atomic, MuFunction(g_exp.values - g_dual.values)))
        max_gap = max(gaps)
        verdict = max_gap <= self.config.tol

        write_csv(
            self.outdir / "kaczmarz.csv",
            ("n", "iterate_gap", "residual_exp", "residual_dual"),
            zip(range(order + 1), gaps, np.asarray(residual_exp), np.asarray(residual_dual)),
        )
        write_json(
            self.outdir / "kaczmarz.json",
            self._sidecar(
                {
                    "verdict": verdict,
                    "defect": max_gap,
                    "bound": float(tail_energy(data.coefficients)),
                    "order": order,
                    "expansion_gap": expansion_gap,
                }
            ),
        )
        return verdict

    # --------------------------------------------------------------- sampling

    def reconstruct(
        self,
        order: int | None = None,
        function: str | None = None,
        samples: str | None = None,
        points: str | None = None,
    ) -> bool:
        order = self._order(order)
        _, alpha, _ = self._series(order)
        z = (
            read_points(points)
            if points is not None
            else jnp.linspace(-2.0, 2.0, self.config.n_points).astype(jnp.complex128)
        )
        if samples is not None:
            sample_set = read_samples(samples)
            reference = None
        else:
            f = self._function(function)
            sample_set = sample_transform(self.atomic, f, order + 1)
            reference = fourier_transform(self.atomic, f, z)
        order = min(order, sample_set.last_index)
        beta = beta_coefficients(sample_set, alpha, order)
        summability = summability_report(beta, self.config.tol)
        report = reconstruct(sample_set, self.atomic, alpha, z, order, reference)
        if reference is None:
            errors = np.full(z.shape[0], np.nan)
            verdict = summability.verdict
        else:
            errors = np.asarray(report.errors)
            verdict = summability.verdict and report.max_error <= self.config.tol

        write_fourier(self.outdir / "beta.csv", beta)
        write_csv(
            self.outdir / "reconstruct.csv",
            ("re(z)", "im(z)", "re(F)", "im(F)", "err", "order"),
            (
                (p.real, p.imag, v.real, v.imag, e, order)
                for p, v, e in zip(np.asarray(z), np.asarray(report.reconstructed), errors)
            ),
        )
        write_json(
            self.outdir / "reconstruct.json",
            self._sidecar(
                {
                    "verdict": verdict,
                    "defect": report.max_error,
                    "bound": float(jnp.max(report.tail_bound)),
                    "order": order,
                    "summable": summability.verdict,
                    "tail_energy": float(summability.tail_energy),
                    "tail_slope": float(summability.tail_slope),
                    "decade_ratio": float(summability.decade_ratio),
                }
            ),
        )
        return verdict

    # ---------------------------------------------------------- interpolation

    def vmu(self, order: int | None = None, function: str | None = None, radius: float = 0.9) -> bool:
        order = self._order(order)
        f = self._function(function)
        _, alpha, _ = self._series(order)
        candidate = nct_series(self.atomic, f, alpha, order)
        radii = jnp.linspace(0.0, radius, self.config.n_points + 1)[1:]
        angles = jnp.linspace(0.0, 2 * jnp.pi, self.config.n_points, endpoint=False)
        z = (radii[:, None] * jnp.exp(1j * angles[None, :])).ravel()
        from_series = series_eval(candidate.series, z)
        from_quotient = nct_quotient(self.atomic, f, z)
        diff = jnp.abs(from_series - from_quotient)
        tail = jnp.sqrt(tail_energy(candidate.series.coefficients))
        bounds = tail * jnp.abs(z) ** (order + 1) / jnp.sqrt(1 - jnp.abs(z) ** 2)
        unitarity_gap = abs(
            float(jnp.sqrt(candidate.series.energy())) - float(norm(self.atomic, f))
        )
        defect = float(jnp.max(diff))
        verdict = bool(jnp.all(diff <= self.config.tol + bounds)) and unitarity_gap <= self.config.tol

        write_series(self.outdir / "nct_series.csv", candidate.series)
        write_csv(
            self.outdir / "vmu.csv",
            ("re(z)", "im(z)", "re(series)", "im(series)", "re(quotient)", "im(quotient)", "diff"),
            (
                (p.real, p.imag, s.real, s.imag, q.real, q.imag, d)
                for p, s, q, d in zip(
                    np.asarray(z), np.asarray(from_series), np.asarray(from_quotient), np.asarray(diff)
                )
            ),
        )
        write_json(
            self.outdir / "vmu.json",
            self._sidecar(
                {
                    "verdict": verdict,
                    "defect": defect,
                    "bound": float(jnp.max(bounds)),
                    "order": order,
                    "unitarity_gap": unitarity_gap,
                }
            ),
        )
        return verdict

    def membership(
        self,
        order: int | None = None,
        function: str | None = None,
        candidate: str | None = None,
        adversarial: bool = False,
        window: int | None = None,
    ) -> bool:
        order = self._order(order)
        _, alpha, b = self._series(order)
        if candidate is not None:
            tested = ModelCandidate(read_series(candidate), "external")
        elif adversarial:
            tested = ModelCandidate(convolve(b, PowerSeries([0.0, 1.0]), order), "external")
        else:
            tested = nct_series(self.atomic, self._function(function), alpha, order)
        report = toeplitz_defect(tested, b, self._window(min(order, tested.order), window))
        verdict = report.passes(self.config.tol)
        write_series(self.outdir / "candidate.csv", tested.series)
        write_json(
            self.outdir / "membership.json",
            self._sidecar(
                {**report.to_dict(self.config.tol), "provenance": tested.provenance, "adversarial": adversarial}
            ),
        )
        return verdict

    def moments_solve(
        self,
        order: int | None = None,
        function: str | None = None,
        moments: str | None = None,
        window: int | None = None,
    ) -> bool:
        f = None
        if moments is not None:
            a = read_series(moments).coefficients
        else:
            f = self._function(function)
            a = integer_transform(self.atomic, f, self._order(order))
        order = a.shape[0] - 1
        _, alpha, b = self._series(order)
        solution = solve_moment_problem(
            a, self.atomic, alpha, b, self.config.tol, self._window(order, window)
        )
        payload = {
            "verdict": solution.feasible,
            **solution.membership.to_dict(),
            "moment_residual": float(solution.moment_residual),
        }
        write_series(self.outdir / "moments_candidate.csv", solution.candidate.series)
        if solution.function is not None:
            write_function(self.outdir / "solution.csv", solution.function)
            if f is not None:
                payload["recovery_error"] = float(
                    jnp.max(jnp.abs(solution.function.values - f.values))
                )
        write_json(self.outdir / "moments_solve.json", self._sidecar(payload))
        return solution.feasible

    def two_sided(
        self,
        order: int | None = None,
        function: str | None = None,
        samples_pos: str | None = None,
        samples_neg: str | None = None,
        window: int | None = None,
    ) -> bool:
        order = self._order(order)
        if (samples_pos is None) != (samples_neg is None):
            raise ValueError("give both --samples-pos and --samples-neg, or neither")
        if samples_pos is not None:
            pos, neg = read_samples(samples_pos), read_samples(samples_neg)
            order = min(order, pos.last_index)
        else:
            f = self._function(function)
            pos = sample_transform(self.atomic, f, order + 1)
            neg = sample_transform(self.atomic, f, order + 1, negative=True)
        _, alpha, b = self._series(order)
        report = two_sided_check(
            pos, neg, self.atomic, alpha, b, self.config.tol, self._window(order, window)
        )
        radial = report.boundary_pos
        write_csv(
            self.outdir / "boundary.csv",
            ("r", "error", "tail_bound"),
            zip(np.asarray(radial.r_schedule), np.asarray(radial.errors), np.asarray(radial.tail_bounds)),
        )
        write_function(self.outdir / "boundary_pos.csv", report.f_pos)
        write_function(self.outdir / "boundary_neg.csv", report.f_neg)
        write_json(self.outdir / "two_sided.json", self._sidecar(report.to_dict()))
        return report.verdict

    def growth(self, function: str | None = None, y_max: float | None = None) -> bool:
        f = self._function(function)
        lo, hi = self.atomic.support_interval()
        a = max(abs(lo), abs(hi))
        if y_max is None:
            # height where the envelope ||f|| e^{(2 pi a - pi) y} reaches tol
            scale = max(float(norm(self.atomic, f)), 1.0)
            y_max = math.log(scale / self.config.tol) / (math.pi - 2 * math.pi * a) + 1.0
        y = jnp.linspace(y_max / self.config.n_points, y_max, self.config.n_points)
        report = growth_envelope_check(self.atomic, f, y, self.config.tol)
        write_csv(
            self.outdir / "growth.csv",
            ("y", "ratio_pos", "ratio_neg", "envelope"),
            zip(
                np.asarray(report.y_values),
                np.asarray(report.ratio_pos),
                np.asarray(report.ratio_neg),
                np.asarray(report.envelope),
            ),
        )
        write_json(self.outdir / "growth.json", self._sidecar({**report.to_dict(), "support_radius": a}))
        return report.verdict

    # -------------------------------------------------------------- self-similar

    def cantor_check(self, max_n: int = 32, check_depth: int = 12) -> bool:
        if not isinstance(self.measure, IFSMeasure):
            raise ValueError("cantor-check needs a self-similar (ifs) measure")
        refined = ifs_refine(self.measure, check_depth)
        rows = []
        worst = 0.0
        for n in tqdm(range(-max_n, max_n + 1), desc="Comparing moments", disable=not self.config.verbose):
            value, depth = ifs_moment(self.measure, float(n), IFS_MOMENT_TOL)
            atomic_value = complex(refined.fourier_stieltjes(float(n)))
            value = complex(value)
            diff = abs(value - atomic_value)
            worst = max(worst, diff)
            rows.append((n, value.real, value.imag, atomic_value.real, atomic_value.imag, diff, depth))
        ratio = float(self.measure.ratio)
        bound = float(
            2 * math.pi * max_n * ratio**check_depth * float(self.measure.support_bound)
        )
        verdict = worst <= self.config.tol
        write_csv(
            self.outdir / "cantor.csv",
            ("n", "re_ifs", "im_ifs", "re_refined", "im_refined", "diff", "depth"),
            rows,
        )
        write_json(
            self.outdir / "cantor.json",
            self._sidecar(
                {
                    "verdict": verdict,
                    "defect": worst,
                    "bound": bound,
                    "order": max_n,
                    "check_depth": check_depth,
                    "measure": measure_to_dict(self.measure),
                }
            ),
        )
        return verdict

    def plotdata(self) -> None:
        emit_plotdata(self.outdir)
