"""
Command line interface.

Subcommands: ``denoise`` applies one estimator to a vector file, ``sweep``
and ``amp`` run the Monte Carlo experiments and write CSV, ``verify`` runs
the verification suites and writes a JSON-lines report. Exit codes are 0
on success, 1 when a gating verification check fails, 2 for usage or parameter
errors, 3 for I/O errors and 4 for malformed input files.
"""

import argparse
import logging
import pathlib
import sys

from hybrid_shrinkage import __version__
from hybrid_shrinkage.common.config import apply_settings, load_config
from hybrid_shrinkage.common.file_handling import (
    format_vector,
    read_vector,
    write_vector,
)
from hybrid_shrinkage.denoisers import EbParams, ebayes, soft_threshold
from hybrid_shrinkage.exceptions import ShrinkageError
from hybrid_shrinkage.experiments import (
    SUITES,
    SuiteConfig,
    amp_experiment,
    run_suites,
    sweep_eta,
    sweep_n,
    write_amp,
    write_report,
    write_sweep,
)
from hybrid_shrinkage.presets import amp_preset, is_dimension_sweep, sweep_preset
from hybrid_shrinkage.risk import sure_ebayes, sure_soft_threshold
from hybrid_shrinkage.selection import (
    default_grids,
    hybrid,
    hybrid_tuned,
    tune_eb,
    tune_st,
)
from hybrid_shrinkage.utils import get_output_dir

LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1


def _setup_logging(verbose: int, quiet: bool) -> None:
    level = logging.WARNING
    if quiet:
        level = logging.ERROR
    elif verbose == 1:
        level = logging.INFO
    elif verbose > 1:
        level = logging.DEBUG
    logging.basicConfig(format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger("hybrid_shrinkage").setLevel(level)
    return


def _settings(args: argparse.Namespace, keys: list[str]) -> dict:
    """Collect the override flags that were given on the command line."""
    settings = {}
    for key in keys:
        value = getattr(args, key, None)
        if value is None or value is False:
            continue
        settings[key] = value if isinstance(value, str) else str(value).lower()
    return settings


def _configure(args, builder, keys: list[str]):
    """Build a config model: preset, then config file, then flags."""
    file_settings = load_config(args.config) if args.config else {}
    preset = args.preset or file_settings.pop("preset", None)
    file_settings.pop("preset", None)
    model = builder(preset)
    apply_settings(model, file_settings)
    apply_settings(model, _settings(args, keys))
    return preset, model, file_settings


def _output_path(args, default_name: str) -> pathlib.Path:
    if args.out:
        return pathlib.Path(args.out)
    return get_output_dir() / default_name


def cmd_denoise(args: argparse.Namespace) -> int:
    """Apply an estimator to a vector file and write the estimate."""
    missing = []
    if not args.tune:
        if args.estimator in ("st", "hybrid") and args.lam is None:
            missing.append("--lambda")
        if args.estimator in ("eb", "hybrid") and args.epsilon is None:
            missing.append("--epsilon")
    if missing:
        args.subparser.error(
            f"estimator '{args.estimator}' needs {' and '.join(missing)} or --tune"
        )

    y = read_vector(args.input)
    comments = {"estimator": args.estimator}
    if args.estimator == "st":
        lam = args.lam
        if args.tune:
            lam = tune_st(y, default_grids(max(y.size, 2))[0]).parameter
        estimate = soft_threshold(y, lam)
        comments["lambda"] = float(lam)
        if args.sure:
            comments["sure"] = sure_soft_threshold(y, lam)
    elif args.estimator == "eb":
        epsilon = args.epsilon
        if args.tune:
            weights = default_grids(max(y.size, 2))[1]
            epsilon = tune_eb(y, weights, zero_location=args.zero_location).parameter
        params = EbParams(epsilon=epsilon, zero_location=args.zero_location)
        estimate = ebayes(y, params)
        comments["epsilon"] = float(epsilon)
        if args.sure:
            comments["sure"] = sure_ebayes(y, params)
    else:
        if args.tune:
            thresholds, weights = default_grids(max(y.size, 2))
            choice = hybrid_tuned(y, thresholds, weights, args.zero_location)
        else:
            choice = hybrid(y, args.lam, args.epsilon, args.zero_location)
        estimate = choice.estimate
        comments.update(
            {
                "gamma": choice.gamma,
                "lambda": choice.lam,
                "epsilon": choice.epsilon,
                "sure_st": choice.sure_st,
                "sure_eb": choice.sure_eb,
            }
        )
        if args.sure:
            comments["sure"] = choice.sure

    if args.out in (None, "-"):
        sys.stdout.write(format_vector(estimate, comments))
    else:
        write_vector(args.out, estimate, comments)
    return EXIT_OK


SWEEP_KEYS = [
    "n",
    "etas",
    "family",
    "trials",
    "estimators",
    "tuning",
    "zero_location",
    "redraw_signal",
    "sizes",
    "seed",
    "threads",
]


def cmd_sweep(args: argparse.Namespace) -> int:
    """Run a sparsity sweep (or a dimension sweep) and write CSV."""
    preset, config, file_settings = _configure(args, sweep_preset, SWEEP_KEYS)
    by_n = (
        is_dimension_sweep(preset)
        or args.sizes is not None
        or "sizes" in file_settings
    )
    rows = sweep_n(config) if by_n else sweep_eta(config)
    path = _output_path(args, f"sweep_{preset or 'custom'}.csv")
    write_sweep(path, rows, with_n=by_n)
    print(f"wrote {len(rows)} rows to {path}")
    return EXIT_OK


AMP_KEYS = [
    "n",
    "delta",
    "eta",
    "sigma",
    "family",
    "iterations",
    "families",
    "freeze",
    "zero_location",
    "seed",
    "threads",
]


def cmd_amp(args: argparse.Namespace) -> int:
    """Run AMP on a compressed sensing scenario and write trajectories as CSV."""
    preset, config, _ = _configure(args, amp_preset, AMP_KEYS)
    rows = amp_experiment(config)
    path = _output_path(args, f"amp_{preset or 'custom'}.csv")
    write_amp(path, rows)
    print(f"wrote {len(rows)} rows to {path}")
    return EXIT_OK


VERIFY_KEYS = ["suite", "seed", "trials", "threads", "n", "eta", "sizes", "etas"]


def cmd_verify(args: argparse.Namespace) -> int:
    """Run the verification suites; exit 1 if any gating check fails."""
    file_settings = load_config(args.config) if args.config else {}
    if args.seed is None and "seed" not in file_settings:
        args.subparser.error("verify needs an explicit --seed")
    config = apply_settings(SuiteConfig(), file_settings)
    apply_settings(config, _settings(args, VERIFY_KEYS))

    reports = run_suites(config)
    path = _output_path(args, "verify_report.jsonl")
    write_report(path, reports)
    for report in reports:
        verdict = "PASS" if report.passed else "FAIL"
        print(f"{report.suite}: {verdict} ({len(report.checks)} checks)")
        for check in report.checks:
            if not check.passed:
                LOGGER.warning(
                    "%s %s: statistic %.6g vs threshold %.6g%s",
                    check.suite,
                    check.name,
                    check.statistic,
                    check.threshold,
                    "" if check.gating else " (not gating)",
                )
    print(f"report written to {path}")
    if all(report.passed for report in reports):
        return EXIT_OK
    return EXIT_CHECK_FAILED


def _add_experiment_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--preset", help="named scenario")
    parser.add_argument("--config", help="flat key = value configuration file")
    parser.add_argument("--out", help="output file (default: output directory)")
    parser.add_argument("--seed", help="base seed")
    parser.add_argument("--threads", help="worker threads")
    parser.add_argument("--n", help="dimension")
    parser.add_argument("--family", help="nonzero family, e.g. half:3")
    parser.add_argument(
        "--zero-location",
        dest="zero_location",
        action="store_true",
        help="use the zero-location eBayes estimator",
    )
    return


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with all subcommands."""
    parser = argparse.ArgumentParser(
        prog="hybrid-shrinkage",
        description="Sparse vector denoising with SURE based hybrid shrinkage.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("-q", "--quiet", action="store_true")
    commands = parser.add_subparsers(dest="command", required=True)

    denoise = commands.add_parser("denoise", help="denoise a vector file")
    denoise.add_argument("--input", required=True, help="vector file")
    denoise.add_argument("--estimator", required=True, choices=["st", "eb", "hybrid"])
    denoise.add_argument("--lambda", dest="lam", type=float, help="threshold")
    denoise.add_argument("--epsilon", type=float, help="eBayes mixture weight")
    denoise.add_argument("--zero-location", dest="zero_location", action="store_true")
    denoise.add_argument(
        "--tune", action="store_true", help="tune parameters by SURE on default grids"
    )
    denoise.add_argument("--sure", action="store_true", help="report the SURE")
    denoise.add_argument("--out", help="output vector file, '-' for stdout")
    denoise.set_defaults(handler=cmd_denoise, subparser=denoise)

    sweep = commands.add_parser("sweep", help="average loss against sparsity")
    _add_experiment_flags(sweep)
    sweep.add_argument("--etas", help="comma separated sparsity levels")
    sweep.add_argument("--trials", help="noise redraws per point")
    sweep.add_argument("--estimators", help="comma separated subset of st,eb,hybrid")
    sweep.add_argument("--tuning", help="known-eta or sure-grid")
    sweep.add_argument("--sizes", help="comma separated dimensions (n sweep)")
    sweep.add_argument(
        "--redraw-signal", dest="redraw_signal", action="store_true"
    )
    sweep.set_defaults(handler=cmd_sweep, subparser=sweep)

    amp = commands.add_parser("amp", help="AMP compressed sensing trajectories")
    _add_experiment_flags(amp)
    amp.add_argument("--delta", help="undersampling ratio m / n")
    amp.add_argument("--eta", help="sparsity level")
    amp.add_argument("--sigma", help="measurement noise level")
    amp.add_argument("--iterations", help="number of AMP iterations")
    amp.add_argument("--families", help="comma separated subset of st,eb,hybrid")
    amp.add_argument(
        "--freeze", action="store_true", help="reuse the first tuned parameters"
    )
    amp.set_defaults(handler=cmd_amp, subparser=amp)

    verify = commands.add_parser("verify", help="run the verification suites")
    verify.add_argument("--suite", choices=list(SUITES) + ["all"])
    verify.add_argument("--seed", help="base seed (required)")
    verify.add_argument("--config", help="flat key = value configuration file")
    verify.add_argument("--out", help="JSON-lines report file")
    verify.add_argument("--trials", help="trials per check")
    verify.add_argument("--threads", help="worker threads")
    verify.add_argument("--n", help="dimension")
    verify.add_argument("--eta", help="sparsity level")
    verify.add_argument("--sizes", help="comma separated dimensions")
    verify.add_argument("--etas", help="comma separated sparsity levels")
    verify.set_defaults(handler=cmd_verify, subparser=verify)
    return parser


def main(argv: list[str] = None) -> int:
    """
    Run the command line interface.

    Parameters
    ----------
    argv : list[str], optional
        Arguments without the program name; defaults to ``sys.argv[1:]``.

    Returns
    -------
    int
        The process exit code.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _setup_logging(args.verbose, args.quiet)
        return args.handler(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    except ShrinkageError as err:
        LOGGER.error("%s", err)
        return err.exit_code
