"""Batch command-line interface.

Subcommands map one-to-one onto library operations: ``transform-weights``,
``prior``, ``sample-size``, ``simulate``, ``sweep`` and ``report``.  Exit
codes: 0 ok, 1 scenario/flag validation error, 2 runtime (domain) error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from . import __version__
from .borrowing import (
    CollectivePrior,
    WeightKind,
    aggregate_legacy,
    aggregate_precision_weighted,
)
from .design import (
    NormalEndpoint,
    SampleSizeResult,
    sample_size_for_endpoint,
    sample_size_frequentist,
    sample_size_no_borrow,
    sweep_surface,
)
from .linearize import linearize_all
from .scenario import (
    ScenarioFile,
    ScenarioValidationError,
    canonical_json,
    parse_scenario,
    scenario_to_dict,
)
from .simulate import SimulationConfig, run_simulation

_RAW_HAZARD = (
    "refusing to compute a design from raw weights: raw weights over-discount "
    "(n = 332 instead of 176 on the bundled reference data). Pass --raw-ok to "
    "proceed anyway."
)


def _fmt(value: float, exact: bool) -> str:
    if exact:
        return repr(float(value))
    return f"{value:.6g}"


def _build_prior(
    scenario: ScenarioFile, use_raw: bool, method: str
) -> tuple[CollectivePrior, list[float] | None]:
    weights = scenario.weights
    transformed = None
    if not use_raw:
        weights = linearize_all(scenario.sources, scenario.weights, scenario.hyper)
        transformed = list(weights.values)
    if method == "legacy":
        return aggregate_legacy(scenario.sources, weights, scenario.hyper), transformed
    return aggregate_precision_weighted(scenario.sources, weights, scenario.hyper), transformed


def _result_dict(result: SampleSizeResult) -> dict:
    return {
        "n": result.n,
        "n_real": result.n_real,
        "per_arm": result.per_arm,
        "convention": result.convention,
        "prior_precision_used": result.prior_precision_used,
        "decisive_by_prior": result.decisive_by_prior,
        "rounding": result.rounding,
    }


def _print_result(result: SampleSizeResult, exact: bool) -> None:
    print(f"n = {result.n}  ({result.convention}; {result.rounding})")
    print(f"pre-rounding bound = {_fmt(result.n_real, exact)}")
    if result.per_arm is not None:
        print(f"per arm = {result.per_arm}")
    print(f"prior precision used = {_fmt(result.prior_precision_used, exact)}")
    if result.decisive_by_prior:
        print("prior alone is decisive: no new data required")


def _cmd_transform_weights(scenario: ScenarioFile, args) -> int:
    transformed = linearize_all(scenario.sources, scenario.weights, scenario.hyper)
    print(f"{'source':<12} {'w':>10} {'w_transformed':>16}")
    for source, w_raw, w_new in zip(scenario.sources, scenario.weights, transformed):
        print(f"{source.id:<12} {_fmt(w_raw, args.exact):>10} {_fmt(w_new, args.exact):>16}")
    return 0


def _cmd_prior(scenario: ScenarioFile, args) -> int:
    prior, _ = _build_prior(scenario, args.weights == "raw", args.method)
    print(f"method = {prior.method.value}")
    print(f"built from = {prior.built_from.value} weights")
    print(f"mean = {_fmt(prior.mean, args.exact)}")
    print(f"variance = {_fmt(prior.variance, args.exact)}")
    print(f"precision = {_fmt(prior.precision, args.exact)}")
    print(f"{'source':<12} {'synthesis weight':>18}")
    for source, p_q in zip(scenario.sources, prior.synthesis_weights):
        print(f"{source.id:<12} {_fmt(p_q, args.exact):>18}")
    if prior.near_degenerate:
        print(f"warning: near-degenerate sources (tau_sq < 1e-12): {', '.join(prior.near_degenerate)}")
    if prior.built_from is WeightKind.RAW:
        print("warning: built from raw weights; design formulas will over-discount")
    return 0


def _cmd_sample_size(scenario: ScenarioFile, args) -> int:
    if args.mode == "frequentist":
        _print_result(sample_size_frequentist(scenario.design), args.exact)
        return 0
    if args.mode == "no-borrow":
        _print_result(sample_size_no_borrow(scenario.design), args.exact)
        return 0
    if len(scenario.sources) == 0:
        print("error: scenario has no historical sources; use --mode no-borrow or frequentist",
              file=sys.stderr)
        return 1
    if args.weights == "raw" and not args.raw_ok:
        print(f"error: {_RAW_HAZARD}", file=sys.stderr)
        return 1
    prior, _ = _build_prior(scenario, args.weights == "raw", args.method)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # hazards already handled via --raw-ok
        result = sample_size_for_endpoint(scenario.endpoint, scenario.design, prior.precision)
    print(f"prior: mean = {_fmt(prior.mean, args.exact)}, variance = {_fmt(prior.variance, args.exact)}"
          f" ({prior.method.value}, {prior.built_from.value} weights)")
    _print_result(result, args.exact)
    return 0


def _cmd_simulate(scenario: ScenarioFile, args) -> int:
    fragment = scenario.simulation
    true_mu = args.true_mu_delta
    replicates = args.replicates
    seed = args.seed
    if fragment is not None:
        true_mu = fragment.true_mu_delta if true_mu is None else true_mu
        replicates = fragment.replicates if replicates is None else replicates
        seed = fragment.seed if seed is None else seed
    missing = [name for name, value in
               (("--true-mu-delta", true_mu), ("--replicates", replicates), ("--seed", seed))
               if value is None]
    if missing:
        print(f"error: scenario has no simulation block; pass {', '.join(missing)}", file=sys.stderr)
        return 1

    if not isinstance(scenario.endpoint, NormalEndpoint):
        print("error: simulation supports the normal endpoint only", file=sys.stderr)
        return 1
    prior, _ = _build_prior(scenario, args.weights == "raw", "precision")
    if args.n is not None:
        n = args.n
    else:
        n = sample_size_for_endpoint(scenario.endpoint, scenario.design, prior.precision).n
    config = SimulationConfig(
        design=scenario.design, prior=prior, n=n,
        true_mu_delta=true_mu, replicates=replicates, seed=seed,
    )
    result = run_simulation(config, workers=args.workers)
    header = f"{'n':>6} {'true effect':>12} {'% efficacious':>14} {'% futile':>10} {'% inconclusive':>15} {'total %':>8}"
    total = result.pct_efficacious + result.pct_futile + result.pct_inconclusive
    row = (f"{n:>6} {_fmt(true_mu, args.exact):>12} {result.pct_efficacious:>14.1f} "
           f"{result.pct_futile:>10.1f} {result.pct_inconclusive:>15.1f} {total:>8.1f}")
    print(header)
    print(row)
    print(f"replicates = {result.replicates}, seed = {result.seed}, "
          f"MC standard error of the efficacy proportion = {_fmt(result.mc_stderr, args.exact)}")
    if args.csv:
        lines = ["n,true_mu_delta,pct_efficacious,pct_futile,pct_inconclusive,replicates,seed,mc_stderr"]
        lines.append(
            f"{n},{true_mu!r},{result.pct_efficacious!r},{result.pct_futile!r},"
            f"{result.pct_inconclusive!r},{result.replicates},{result.seed},{result.mc_stderr!r}"
        )
        Path(args.csv).write_text("\n".join(lines) + "\n", encoding="utf-8")
        print(f"wrote {args.csv}")
    return 0


def _parse_axes(spec: str, n_sources: int) -> list[int]:
    axes = []
    for token in spec.split(","):
        token = token.strip().lower()
        if not token.startswith("w"):
            raise ValueError(f"axis {token!r} should look like w1, w2, ...")
        index = int(token[1:]) - 1
        if not (0 <= index < n_sources):
            raise ValueError(f"axis {token!r} is out of range for {n_sources} sources")
        axes.append(index)
    return axes


def _cmd_sweep(scenario: ScenarioFile, args) -> int:
    try:
        axes = _parse_axes(args.axes, len(scenario.sources))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    table = sweep_surface(
        scenario.sources, scenario.weights, scenario.hyper, scenario.design, axes, args.step
    )
    lines = [",".join(table.columns)]
    for row in table.rows:
        lines.append(",".join(repr(value) for value in row))
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {len(table.rows)} rows to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def build_report(scenario: ScenarioFile, with_simulation: bool = False, workers: int = 1) -> dict:
    """The full pipeline on one scenario: transform, prior, sizes, optional simulation."""
    transformed = linearize_all(scenario.sources, scenario.weights, scenario.hyper)
    prior = aggregate_precision_weighted(scenario.sources, transformed, scenario.hyper)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # the raw size below is reported as a hazard, not used
        raw_prior = aggregate_precision_weighted(scenario.sources, scenario.weights, scenario.hyper)
        size = sample_size_for_endpoint(scenario.endpoint, scenario.design, prior.precision)
        size_raw = sample_size_for_endpoint(scenario.endpoint, scenario.design, raw_prior.precision)
    report = {
        "scenario": scenario_to_dict(scenario),
        "results": {
            "transformed_weights": list(transformed.values),
            "prior": {
                "mean": prior.mean,
                "variance": prior.variance,
                "synthesis_weights": list(prior.synthesis_weights),
                "method": prior.method.value,
                "built_from": prior.built_from.value,
            },
            "sample_size": _result_dict(size),
            "sample_size_raw_weights": _result_dict(size_raw),
        },
    }
    if scenario.design.s0_sq is not None:
        report["results"]["sample_size_no_borrow"] = _result_dict(sample_size_no_borrow(scenario.design))
    if scenario.design.alpha is not None and scenario.design.beta is not None:
        if isinstance(scenario.endpoint, NormalEndpoint):
            report["results"]["sample_size_frequentist"] = _result_dict(
                sample_size_frequentist(scenario.design)
            )
    if with_simulation and scenario.simulation is not None:
        config = SimulationConfig(
            design=scenario.design, prior=prior, n=size.n,
            true_mu_delta=scenario.simulation.true_mu_delta,
            replicates=scenario.simulation.replicates,
            seed=scenario.simulation.seed,
        )
        sim = run_simulation(config, workers=workers)
        report["results"]["simulation"] = {
            "n": size.n,
            "true_mu_delta": scenario.simulation.true_mu_delta,
            "pct_efficacious": sim.pct_efficacious,
            "pct_futile": sim.pct_futile,
            "pct_inconclusive": sim.pct_inconclusive,
            "replicates": sim.replicates,
            "seed": sim.seed,
            "mc_stderr": sim.mc_stderr,
        }
    return report


def _cmd_report(scenario: ScenarioFile, args) -> int:
    report = build_report(scenario, with_simulation=args.with_simulation, workers=args.workers)
    text = canonical_json(report)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bayesborrow",
        description="Bayesian sample sizes with historical borrowing and uniform-shrinkage weights.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("scenario", help="path to a scenario JSON file")
        p.add_argument("--exact", action="store_true",
                       help="print full float precision instead of 6 significant digits")
        p.add_argument("--json-errors", action="store_true",
                       help="emit validation errors as JSON on stderr")

    p = sub.add_parser("transform-weights", help="print raw and transformed weights per source")
    add_common(p)

    p = sub.add_parser("prior", help="print the collective prior")
    add_common(p)
    p.add_argument("--weights", choices=("linearized", "raw"), default="linearized")
    p.add_argument("--method", choices=("precision", "legacy"), default="precision")

    p = sub.add_parser("sample-size", help="print the minimal sample size")
    add_common(p)
    p.add_argument("--mode", choices=("borrow", "no-borrow", "frequentist"), default="borrow")
    p.add_argument("--weights", choices=("linearized", "raw"), default="linearized")
    p.add_argument("--method", choices=("precision", "legacy"), default="precision")
    p.add_argument("--raw-ok", action="store_true",
                   help="allow raw weights in design formulas despite over-discounting")

    p = sub.add_parser("simulate", help="Monte Carlo evaluation of the design")
    add_common(p)
    p.add_argument("--n", type=int, default=None, help="override the formula sample size")
    p.add_argument("--replicates", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--true-mu-delta", type=float, default=None)
    p.add_argument("--weights", choices=("linearized", "raw"), default="linearized")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--csv", default=None, help="also write the summary row as CSV")

    p = sub.add_parser("sweep", help="write a precision / sample-size grid as CSV")
    add_common(p)
    p.add_argument("--axes", required=True, help="one or two source axes, e.g. w1 or w1,w2")
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--out", default=None, help="CSV output path (stdout if omitted)")

    p = sub.add_parser("report", help="run the full pipeline and write one JSON report")
    add_common(p)
    p.add_argument("--out", default=None, help="report path (stdout if omitted)")
    p.add_argument("--with-simulation", action="store_true",
                   help="include the scenario's simulation block in the report")
    p.add_argument("--workers", type=int, default=1)

    return parser


_COMMANDS = {
    "transform-weights": _cmd_transform_weights,
    "prior": _cmd_prior,
    "sample-size": _cmd_sample_size,
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "report": _cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    args = _make_parser().parse_args(argv)
    try:
        scenario = parse_scenario(args.scenario)
    except ScenarioValidationError as exc:
        if args.json_errors:
            payload = {"errors": [{"path": e.path, "message": e.message} for e in exc.errors]}
            print(json.dumps(payload), file=sys.stderr)
        else:
            for error in exc.errors:
                print(f"error: {error}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: cannot read {args.scenario}: {exc}", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](scenario, args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
