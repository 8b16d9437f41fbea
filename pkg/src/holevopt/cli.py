"""Command line front end.

Subcommands: eval, optimize-channel, optimize-input, convergence, dim-sweep,
kraus-sweep, grad-check. Every subcommand is fully determined by its flags
and seed; rerunning with the same seed reproduces output files byte for
byte. Exit codes: 0 success, 1 validation failure (including a failed
gradient check), 2 numerical failure, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .errors import NumericalError, ValidationError
from .experiments import (
    ALL_SCHEMES,
    DEFAULT_ALPHAS,
    DEFAULT_DIMS,
    DEFAULT_KRAUS_RANKS,
    ExperimentSpec,
    RunResult,
    run_convergence,
    run_dim_sweep,
    run_grad_check,
    run_kraus_sweep,
    run_single_eval,
    trial_instance,
    trial_seeds,
    write_result,
)
from .optimizer import OptimConfig, optimize_channel, optimize_input
from .serialize import (
    format_float,
    load_channel,
    load_ensemble,
    save_channel,
    save_ensemble,
)


def _add_common_flags(sub, n=3, m=4, k=5):
    sub.add_argument("--n", type=int, default=n, help="input dimension N")
    sub.add_argument("--m", type=int, default=m, help="output dimension M")
    sub.add_argument("--k", type=int, default=k, help="number of Kraus operators K")
    sub.add_argument("--p", type=int, default=None, help="ensemble size P (default: N)")
    sub.add_argument("--alpha", type=float, default=0.3, help="ascent step size")
    sub.add_argument("--iters", type=int, default=100, help="maximum iterations")
    sub.add_argument("--threshold", type=float, default=1e-6,
                     help="stop when the per-iteration gain in bits falls below this")
    sub.add_argument("--seed", type=int, default=0, help="64-bit root seed")
    sub.add_argument("--trials", type=int, default=20, help="number of seeded trials")
    sub.add_argument("--out", type=Path, default=None, help="output file path")
    sub.add_argument("--format", choices=("csv", "json"), default="csv",
                     help="output file format")
    sub.add_argument("--projection", choices=("per-sweep", "per-k"), default="per-sweep",
                     help="renormalize once per sweep or after each operator update")
    sub.add_argument("--eig-floor", type=float, default=1e-12,
                     help="eigenvalue clamp for matrix logs and the CPTP projection")


def _parse_int_list(text: str):
    return tuple(int(x) for x in text.split(",") if x)


def _parse_float_list(text: str):
    return tuple(float(x) for x in text.split(",") if x)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="holevopt",
        description="Holevo-bound evaluation and CPTP-constrained gradient ascent "
                    "over Kraus-operator channels.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("eval", help="Holevo bound of one instance")
    _add_common_flags(sub)
    sub.add_argument("--channel", type=Path, default=None, help="channel fixture to load")
    sub.add_argument("--ensemble", type=Path, default=None, help="ensemble fixture to load")
    sub.add_argument("--dump-channel", type=Path, default=None,
                     help="write the evaluated channel fixture here")
    sub.add_argument("--dump-ensemble", type=Path, default=None,
                     help="write the evaluated ensemble fixture here")

    sub = subs.add_parser("optimize-channel", help="ascend the bound over the channel")
    _add_common_flags(sub)
    sub.add_argument("--channel", type=Path, default=None)
    sub.add_argument("--ensemble", type=Path, default=None)
    sub.add_argument("--dump-channel", type=Path, default=None,
                     help="write the optimized channel fixture here")

    sub = subs.add_parser("optimize-input", help="ascend the bound over the ensemble")
    _add_common_flags(sub)
    sub.add_argument("--channel", type=Path, default=None)
    sub.add_argument("--ensemble", type=Path, default=None)
    sub.add_argument("--dump-ensemble", type=Path, default=None,
                     help="write the optimized ensemble fixture here")

    sub = subs.add_parser("convergence", help="per-iteration curves per trial and step size")
    _add_common_flags(sub)
    sub.add_argument("--alphas", type=_parse_float_list,
                     default=DEFAULT_ALPHAS, help="comma-separated step sizes")

    sub = subs.add_parser("dim-sweep", help="schemes compared over N = M dimensions")
    _add_common_flags(sub)
    sub.add_argument("--dims", type=_parse_int_list, default=DEFAULT_DIMS,
                     help="comma-separated dimensions")
    sub.add_argument("--schemes", type=lambda t: tuple(t.split(",")),
                     default=ALL_SCHEMES, help="comma-separated scheme names")

    sub = subs.add_parser("kraus-sweep", help="schemes compared over Kraus rank K")
    _add_common_flags(sub, n=4, m=4)
    sub.add_argument("--k-list", type=_parse_int_list, default=DEFAULT_KRAUS_RANKS,
                     help="comma-separated Kraus ranks")
    sub.add_argument("--schemes", type=lambda t: tuple(t.split(",")),
                     default=ALL_SCHEMES, help="comma-separated scheme names")

    sub = subs.add_parser("grad-check", help="analytic vs finite-difference gradients")
    _add_common_flags(sub)
    sub.add_argument("--fd-step", type=float, default=1e-5,
                     help="central-difference step size")

    return parser


def _optim_config(args) -> OptimConfig:
    return OptimConfig(
        step_size=args.alpha,
        max_iters=args.iters,
        improvement_threshold=args.threshold,
        eig_floor=args.eig_floor,
        projection=args.projection,
    )


def _spec(args, scenario: str, **extra) -> ExperimentSpec:
    # The CLI writes output files itself so --format is honored; runners only
    # write when driven as a library with out_path set.
    return ExperimentSpec(
        scenario=scenario,
        n=args.n, m=args.m, k=args.k, p=args.p,
        trials=args.trials, seed=args.seed,
        optim=_optim_config(args),
        **extra,
    )


def _write_if_requested(result: RunResult, args) -> None:
    if args.out is not None:
        write_result(result, args.out, args.format)


def _load_instance(args, spec: ExperimentSpec):
    if (args.channel is None) != (args.ensemble is None):
        raise ValidationError("provide both --channel and --ensemble, or neither")
    if args.channel is not None:
        return load_ensemble(args.ensemble), load_channel(args.channel)
    seed = trial_seeds(spec.seed, 1)[0]
    return trial_instance(spec.n, spec.m, spec.k, spec.p, seed)


def _cmd_eval(args) -> int:
    spec = _spec(args, "single-eval")
    e, ch = _load_instance(args, spec)
    result = run_single_eval(spec, e, ch)
    if args.dump_channel is not None:
        save_channel(ch, args.dump_channel)
    if args.dump_ensemble is not None:
        save_ensemble(e, args.dump_ensemble)
    s = result.summary
    print(f"holevo_bits={format_float(s['holevo_bits'])} "
          f"S(mean output)={format_float(s['average_output_entropy_bits'])} "
          f"cptp_residual={format_float(s['cptp_residual'])}")
    _write_if_requested(result, args)
    return 0


def _trace_result(trace, spec: ExperimentSpec) -> RunResult:
    header = ("iter", "holevo_bits", "grad_norm", "cptp_residual")
    rows = [
        (trace.iterations[i], trace.holevo_bits[i], trace.grad_norms[i],
         trace.cptp_residuals[i])
        for i in range(len(trace.iterations))
    ]
    summary = {
        "n": spec.n, "m": spec.m, "k": spec.k, "p": spec.p, "seed": spec.seed,
        "initial_bits": trace.initial_bits,
        "best_bits": trace.best_bits,
        "best_iteration": trace.best_iteration,
        "iterations": trace.num_iterations,
        "status": trace.status,
    }
    return RunResult(header, rows, summary)


def _cmd_optimize(args, optimize_ensemble: bool) -> int:
    spec = _spec(args, "single-eval")
    e, ch = _load_instance(args, spec)
    t0 = time.perf_counter()
    if optimize_ensemble:
        best, trace = optimize_input(ch, e, spec.optim)
        if args.dump_ensemble is not None:
            save_ensemble(best, args.dump_ensemble)
    else:
        best, trace = optimize_channel(ch, e, spec.optim)
        if args.dump_channel is not None:
            save_channel(best, args.dump_channel)
    elapsed = time.perf_counter() - t0
    print(f"initial={format_float(trace.initial_bits)} bits, "
          f"best={format_float(trace.best_bits)} bits "
          f"(iteration {trace.best_iteration}), status={trace.status}, "
          f"iterations={trace.num_iterations}, runtime={elapsed*1e3:.1f} ms")
    _write_if_requested(_trace_result(trace, spec), args)
    return 0


def _cmd_convergence(args) -> int:
    spec = _spec(args, "convergence", alphas=args.alphas)
    t0 = time.perf_counter()
    result = run_convergence(spec)
    elapsed = time.perf_counter() - t0
    for alpha in spec.alphas:
        stats = result.summary["per_alpha"][format(alpha, ".12g")]
        print(f"alpha={format_float(alpha)}: median final="
              f"{format_float(stats['median_final_bits'])} bits over {spec.trials} trials")
    print(f"max cptp residual={format_float(result.summary['max_cptp_residual'])}, "
          f"runtime={elapsed:.2f} s")
    _write_if_requested(result, args)
    return 0


def _cmd_sweep(args, runner, axis_flag: str) -> int:
    extra = {"schemes": args.schemes}
    if axis_flag == "dims":
        extra["dims"] = args.dims
    else:
        extra["kraus_ranks"] = args.k_list
    spec = _spec(args, "dim-sweep" if axis_flag == "dims" else "kraus-sweep", **extra)
    t0 = time.perf_counter()
    result = runner(spec)
    elapsed = time.perf_counter() - t0
    for row in result.rows:
        print(f"{result.header[0]}={row[0]} {row[1]}: mean final="
              f"{format_float(row[3])} bits (std {format_float(row[4])})")
    print(f"runtime={elapsed:.2f} s")
    _write_if_requested(result, args)
    return 0


def _cmd_grad_check(args) -> int:
    spec = _spec(args, "grad-check", fd_step=args.fd_step)
    result = run_grad_check(spec)
    for row in result.rows:
        print(f"point {row[0]}: cosine={format_float(row[2])} "
              f"max deviation={format_float(row[3])} min output eig={format_float(row[4])}")
    s = result.summary
    print(f"min cosine={format_float(s['min_cosine'])} "
          f"(tolerance 1 - {format_float(s['cosine_tol'])}), "
          f"{'PASS' if s['all_pass'] else 'FAIL'}")
    _write_if_requested(result, args)
    return 0 if s["all_pass"] else 1


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits with 2 on usage errors
        return 0 if exc.code in (0, None) else 1
    try:
        if args.command == "eval":
            return _cmd_eval(args)
        if args.command == "optimize-channel":
            return _cmd_optimize(args, optimize_ensemble=False)
        if args.command == "optimize-input":
            return _cmd_optimize(args, optimize_ensemble=True)
        if args.command == "convergence":
            return _cmd_convergence(args)
        if args.command == "dim-sweep":
            return _cmd_sweep(args, run_dim_sweep, "dims")
        if args.command == "kraus-sweep":
            return _cmd_sweep(args, run_kraus_sweep, "k_list")
        if args.command == "grad-check":
            return _cmd_grad_check(args)
        raise ValidationError(f"unknown command {args.command!r}")
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
