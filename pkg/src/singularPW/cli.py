import argparse
import sys

from singularPW.experiment.Experiment import EXIT_ERROR, EXIT_OK, Experiment, ExperimentConfig

VERB_HELP = {
    "moments": "integer moments of the measure",
    "alpha": "Cauchy-transform series, its reciprocal and the inner function",
    "parseval": "Fourier coefficients and the Parseval defect curve",
    "kaczmarz-compare": "Kaczmarz iterates against the closed-form partial sums",
    "reconstruct": "sampling-series reconstruction of f_hat",
    "vmu": "normalized Cauchy transform, series against quotient",
    "membership": "Toeplitz-defect membership test in the model space",
    "moments-solve": "trigonometric moment problem",
    "two-sided": "two-sided membership and boundary-matching check",
    "growth": "growth of f_hat along the imaginary axis",
    "cantor-check": "self-similar recursion against atomic refinement",
    "plotdata": "collect report curves into one long-format CSV",
}


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--measure", dest="measure_spec", help="Measure JSON document.")
    common.add_argument("--order", type=int, help=f"Truncation order (default: {ExperimentConfig.order_cap}).")
    common.add_argument("--tol", type=float, help=f"Verdict tolerance (default: {ExperimentConfig.tol:g}).")
    common.add_argument("--seed", type=int, help=f"Random seed (default: {ExperimentConfig.seed}).")
    common.add_argument("--out", dest="outdir", help="Output directory (default: $SINGULARPW_OUTDIR or ./outdir/).")
    common.add_argument("--depth", type=int, help=f"IFS refinement depth (default: {ExperimentConfig.depth}).")
    common.add_argument("--window", type=int, help=f"Toeplitz window (default: {ExperimentConfig.window}).")
    common.add_argument("--n-points", type=int, dest="n_points", help="Grid points per axis.")
    common.add_argument("--verbose", action="store_true", default=None, help="Print progress.")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="singularPW",
        description="Fourier series, sampling and model-space checks for singular measures on the torus.",
    )
    verbs = parser.add_subparsers(dest="verb", required=True, metavar="verb")
    common = _common_parser()
    sub = {name: verbs.add_parser(name, parents=[common], help=text) for name, text in VERB_HELP.items()}

    for name in ("parseval", "kaczmarz-compare", "reconstruct", "vmu", "membership",
                 "moments-solve", "two-sided", "growth"):
        sub[name].add_argument("--function", help="CSV 'k, re, im' of f on the atoms; random when absent.")
    sub["reconstruct"].add_argument("--samples", help="CSV 'j, re, im' of F(0..M).")
    sub["reconstruct"].add_argument("--points", help="CSV 're, im' of evaluation points.")
    sub["vmu"].add_argument("--radius", type=float, help="Largest radius of the polar grid (default: 0.9).")
    sub["membership"].add_argument("--candidate", help="CSV 'n, re, im' of the candidate series.")
    sub["membership"].add_argument("--adversarial", action="store_true", default=None,
                                   help="Test G = b z, which is never in the model space.")
    sub["moments-solve"].add_argument("--moments", help="CSV 'n, re, im' of a_0..a_N.")
    sub["two-sided"].add_argument("--samples-pos", dest="samples_pos", help="CSV 'j, re, im' of F(j).")
    sub["two-sided"].add_argument("--samples-neg", dest="samples_neg", help="CSV 'j, re, im' of conj(F(-j)).")
    sub["growth"].add_argument("--y-max", type=float, dest="y_max", help="Largest probed height.")
    sub["cantor-check"].add_argument("--max-n", type=int, dest="max_n", help="Largest |n| compared (default: 32).")
    sub["cantor-check"].add_argument("--check-depth", type=int, dest="check_depth",
                                     help="Refinement depth of the comparison (default: 12).")
    return parser


CONFIG_KEYS = ("tol", "seed", "outdir", "depth", "window", "n_points", "verbose")
VERB_KEYS = ("function", "samples", "points", "radius", "candidate", "adversarial", "moments",
             "samples_pos", "samples_neg", "y_max", "max_n", "check_depth")


def main(argv: list[str] | None = None) -> int:
    try:
        args = vars(build_parser().parse_args(argv))
    except SystemExit as exit_:
        # argparse exits with 2, which is reserved for false verdicts
        return EXIT_OK if exit_.code in (0, None) else EXIT_ERROR
    verb = args.pop("verb")
    order = args.pop("order")
    try:
        config = ExperimentConfig(
            args.pop("measure_spec"), **{k: args[k] for k in CONFIG_KEYS if k in args}
        )
        verb_args = {k: args[k] for k in VERB_KEYS if args.get(k) is not None}
        if order is not None and verb not in ("growth", "cantor-check", "plotdata"):
            verb_args["order"] = order
        return Experiment(config).run(verb, **verb_args)
    except (ValueError, OSError) as err:  # library errors all derive from ValueError
        print(f"singularPW {verb}: error: {err}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
