"""Seeded experiment runners.

Reproducibility scheme: a run owns a 64-bit root seed. Per-trial seeds are
drawn from numpy's SeedSequence(root); sweep runners fold the sweep-point
index into the sequence via spawn_key so every (point, trial) pair owns an
independent stream. Within a trial, child 0 draws the ensemble and child 1
the channel, and all schemes share that one instance (paired comparison).
Output files contain no wall-clock data, so reruns with the same seed are
byte-identical.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .channel import KrausChannel, apply_ensemble, random_channel
from .errors import ValidationError
from .holevo import finite_diff_gradient, holevo_bound, holevo_gradient
from .optimizer import OptimConfig, OptimTrace, optimize_channel, optimize_input, sweep_step_sizes
from .serialize import save_json, write_csv
from .states import Ensemble, pure_to_density

SCENARIOS = ("convergence", "dim-sweep", "kraus-sweep", "grad-check", "single-eval")
SCHEME_CHANNEL_OPT = "channel-opt"
SCHEME_INPUT_OPT = "input-opt"
SCHEME_NONE = "none"
ALL_SCHEMES = (SCHEME_CHANNEL_OPT, SCHEME_INPUT_OPT, SCHEME_NONE)

DEFAULT_ALPHAS = (0.2, 0.3, 0.4, 0.5)
DEFAULT_DIMS = (2, 3, 4, 5, 6)
DEFAULT_KRAUS_RANKS = (1, 2, 3, 4, 5, 6, 7, 8)

GRAD_CHECK_COSINE_TOL = 1e-6
GRAD_CHECK_MIN_EIG = 1e-6


def random_ensemble(n: int, p: int, seed) -> Ensemble:
    """Random pure-state ensemble: probabilities are uniform draws normalized
    to sum 1, states are normalized complex Gaussian vectors.

    Deterministic for a fixed seed; the probabilities are drawn first, then
    the P state vectors in order.
    """
    if n < 1 or p < 1:
        raise ValidationError(f"dimensions must be positive, got N={n}, P={p}")
    rng = np.random.default_rng(seed)
    u = rng.random(p)
    probs = u / u.sum()
    states = []
    for _ in range(p):
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        states.append(pure_to_density(x / np.linalg.norm(x)))
    return Ensemble(probs, tuple(states))


@dataclass(frozen=True)
class ExperimentSpec:
    """Everything a runner needs: scenario, instance sizes, trial count,
    root seed, optimizer knobs, sweep lists, and the output path."""

    scenario: str
    n: int = 3
    m: int = 4
    k: int = 5
    p: int | None = None
    trials: int = 20
    seed: int = 0
    optim: OptimConfig = field(default_factory=OptimConfig)
    alphas: tuple = DEFAULT_ALPHAS
    dims: tuple = DEFAULT_DIMS
    kraus_ranks: tuple = DEFAULT_KRAUS_RANKS
    schemes: tuple = ALL_SCHEMES
    fd_step: float = 1e-5
    out_path: Path | None = None

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValidationError(f"scenario must be one of {SCENARIOS}, got {self.scenario!r}")
        if self.p is None:
            object.__setattr__(self, "p", self.n)
        if min(self.n, self.m, self.k, self.p) < 1:
            raise ValidationError("N, M, K, P must all be positive")
        if self.trials < 1:
            raise ValidationError(f"trials must be positive, got {self.trials}")
        if not 0 <= self.seed < 2**64:
            raise ValidationError(f"seed must fit in 64 unsigned bits, got {self.seed}")
        for s in self.schemes:
            if s not in ALL_SCHEMES:
                raise ValidationError(f"unknown scheme {s!r}")
        if self.out_path is not None:
            object.__setattr__(self, "out_path", Path(self.out_path))


@dataclass(frozen=True)
class TrialRecord:
    """One (trial, scheme) outcome."""

    trial: int
    seed: int
    scheme: str
    initial_bits: float
    final_bits: float
    iterations: int
    runtime_ms: float
    trace: OptimTrace | None = None


@dataclass
class RunResult:
    """Rows ready for CSV plus a JSON-able summary."""

    header: tuple
    rows: list
    summary: dict


def trial_seeds(root_seed: int, trials: int, spawn_key: tuple = ()) -> list:
    """Per-trial 64-bit seeds from SeedSequence(root_seed, spawn_key)."""
    ss = np.random.SeedSequence(root_seed, spawn_key=spawn_key)
    return [int(s) for s in ss.generate_state(trials, dtype=np.uint64)]


def trial_instance(n: int, m: int, k: int, p: int, trial_seed: int):
    """Paired (ensemble, channel) draw: stream child 0 is the ensemble,
    child 1 the channel."""
    ens_ss, ch_ss = np.random.SeedSequence(trial_seed).spawn(2)
    return random_ensemble(n, p, ens_ss), random_channel(n, m, k, ch_ss)


def _summary_path(out_path: Path) -> Path:
    return out_path.with_suffix(".summary.json")


def write_result(result: RunResult, out_path, fmt: str = "csv") -> None:
    """Write a RunResult: csv -> rows CSV plus a .summary.json sidecar;
    json -> one file holding header, rows, and summary."""
    out_path = Path(out_path)
    if fmt == "csv":
        write_csv(out_path, result.header, result.rows)
        save_json(result.summary, _summary_path(out_path))
    elif fmt == "json":
        save_json(
            {"header": list(result.header), "rows": [list(r) for r in result.rows],
             "summary": result.summary},
            out_path,
        )
    else:
        raise ValidationError(f"format must be 'csv' or 'json', got {fmt!r}")


def _run_scheme(scheme: str, ch0: KrausChannel, e: Ensemble, cfg: OptimConfig,
                trial: int, seed: int) -> TrialRecord:
    t0 = time.perf_counter()
    initial = holevo_bound(ch0, e).bound_bits
    if scheme == SCHEME_NONE:
        trace = None
        final, iters = initial, 0
    elif scheme == SCHEME_CHANNEL_OPT:
        _, trace = optimize_channel(ch0, e, cfg)
        final, iters = trace.best_bits, trace.num_iterations
    elif scheme == SCHEME_INPUT_OPT:
        _, trace = optimize_input(ch0, e, cfg)
        final, iters = trace.best_bits, trace.num_iterations
    else:
        raise ValidationError(f"unknown scheme {scheme!r}")
    ms = (time.perf_counter() - t0) * 1e3
    return TrialRecord(trial, seed, scheme, initial, final, iters, ms, trace)


def run_convergence(spec: ExperimentSpec) -> RunResult:
    """Per-iteration curves for every trial and step size.

    CSV columns: trial, alpha, iter, holevo_bits, grad_norm, cptp_residual.
    The summary reports per-alpha statistics of the best-seen final values.
    """
    header = ("trial", "alpha", "iter", "holevo_bits", "grad_norm", "cptp_residual")
    rows = []
    finals = {a: [] for a in spec.alphas}
    initials = []
    max_residual = 0.0
    for trial, seed in enumerate(trial_seeds(spec.seed, spec.trials)):
        e, ch0 = trial_instance(spec.n, spec.m, spec.k, spec.p, seed)
        traces = sweep_step_sizes(ch0, e, spec.alphas, spec.optim)
        initials.append(traces[0].initial_bits)
        for alpha, trace in zip(spec.alphas, traces):
            for i, iteration in enumerate(trace.iterations):
                rows.append(
                    (trial, alpha, iteration, trace.holevo_bits[i],
                     trace.grad_norms[i], trace.cptp_residuals[i])
                )
            finals[alpha].append(trace.best_bits)
            if trace.cptp_residuals:
                max_residual = max(max_residual, max(trace.cptp_residuals))
    summary = {
        "scenario": spec.scenario,
        "n": spec.n, "m": spec.m, "k": spec.k, "p": spec.p,
        "trials": spec.trials, "seed": spec.seed,
        "alphas": list(spec.alphas),
        "max_cptp_residual": max_residual,
        "mean_initial_bits": float(np.mean(initials)),
        "per_alpha": {
            format(a, ".12g"): {
                "median_final_bits": float(np.median(finals[a])),
                "mean_final_bits": float(np.mean(finals[a])),
                "min_final_bits": float(np.min(finals[a])),
                "max_final_bits": float(np.max(finals[a])),
                "finals": [float(x) for x in finals[a]],
            }
            for a in spec.alphas
        },
    }
    result = RunResult(header, rows, summary)
    if spec.out_path is not None:
        write_result(result, spec.out_path)
    return result


def _aggregate_point(records: list) -> dict:
    finals = np.array([r.final_bits for r in records])
    initials = np.array([r.initial_bits for r in records])
    return {
        "trials": len(records),
        "mean_final_bits": float(finals.mean()),
        "std_final_bits": float(finals.std(ddof=1)) if len(records) > 1 else 0.0,
        "mean_initial_bits": float(initials.mean()),
    }


def _max_trace_residual(records: list) -> float:
    worst = 0.0
    for r in records:
        if r.trace is not None and r.trace.cptp_residuals:
            worst = max(worst, max(r.trace.cptp_residuals))
    return worst


def _sweep_runner(spec: ExperimentSpec, axis_name: str, axis_values, instance_dims) -> RunResult:
    header = (axis_name, "scheme", "trials", "mean_final_bits", "std_final_bits",
              "mean_initial_bits")
    rows = []
    points = []
    max_residual = 0.0
    for index, value in enumerate(axis_values):
        n, m, k, p = instance_dims(value)
        seeds = trial_seeds(spec.seed, spec.trials, spawn_key=(index,))
        per_scheme = {s: [] for s in spec.schemes}
        for trial, seed in enumerate(seeds):
            e, ch0 = trial_instance(n, m, k, p, seed)
            for scheme in spec.schemes:
                record = _run_scheme(scheme, ch0, e, spec.optim, trial, seed)
                per_scheme[scheme].append(record)
        for scheme in spec.schemes:
            agg = _aggregate_point(per_scheme[scheme])
            max_residual = max(max_residual, _max_trace_residual(per_scheme[scheme]))
            rows.append((value, scheme, agg["trials"], agg["mean_final_bits"],
                         agg["std_final_bits"], agg["mean_initial_bits"]))
            points.append({axis_name: value, "scheme": scheme, **agg})
    summary = {
        "scenario": spec.scenario,
        "k": spec.k, "trials": spec.trials, "seed": spec.seed,
        "schemes": list(spec.schemes),
        axis_name + "s": list(axis_values),
        "max_cptp_residual": max_residual,
        "points": points,
    }
    result = RunResult(header, rows, summary)
    if spec.out_path is not None:
        write_result(result, spec.out_path)
    return result


def run_dim_sweep(spec: ExperimentSpec) -> RunResult:
    """Mean/std of final Holevo bits per scheme with N = M = P swept over
    spec.dims and K fixed at spec.k."""
    return _sweep_runner(spec, "dimension", spec.dims,
                         lambda d: (d, d, spec.k, d))


def run_kraus_sweep(spec: ExperimentSpec) -> RunResult:
    """Mean/std of final Holevo bits per scheme with K swept over
    spec.kraus_ranks at N = M = P = spec.n."""
    return _sweep_runner(spec, "kraus_rank", spec.kraus_ranks,
                         lambda k: (spec.n, spec.n, k, spec.n))


def run_grad_check(spec: ExperimentSpec) -> RunResult:
    """Analytic-vs-finite-difference gradient comparison at random points.

    Points where any output eigenvalue dips below 1e-6 are redrawn, keeping
    the clamped matrix logs out of the comparison. The analytic gradient is
    converted to base 2 (divided by ln 2) before the per-entry deviation;
    the cosine is base-independent. CSV columns: point, seed, cosine,
    max_abs_deviation, min_output_eig.
    """
    header = ("point", "seed", "cosine", "max_abs_deviation", "min_output_eig")
    rows = []
    candidates = trial_seeds(spec.seed, 20 * spec.trials, spawn_key=(0xD1FF,))
    accepted = 0
    min_cosine = 1.0
    max_deviation = 0.0
    for seed in candidates:
        if accepted >= spec.trials:
            break
        e, ch = trial_instance(spec.n, spec.m, spec.k, spec.p, seed)
        mean_out, outs = apply_ensemble(ch, e)
        min_eig = float(min(np.linalg.eigvalsh(y).min() for y in [mean_out, *outs]))
        if min_eig <= GRAD_CHECK_MIN_EIG:
            continue
        analytic = holevo_gradient(ch, e, spec.optim.eig_floor)
        fd = finite_diff_gradient(ch, e, spec.fd_step)
        a = analytic.per_operator.ravel()
        b = fd.per_operator.ravel()
        av = np.concatenate([a.real, a.imag])
        bv = np.concatenate([b.real, b.imag])
        cosine = float(av @ bv / (np.linalg.norm(av) * np.linalg.norm(bv)))
        deviation = float(np.max(np.abs(a / math.log(2.0) - b)))
        rows.append((accepted, seed, cosine, deviation, min_eig))
        min_cosine = min(min_cosine, cosine)
        max_deviation = max(max_deviation, deviation)
        accepted += 1
    if accepted < spec.trials:
        raise ValidationError(
            f"only {accepted} of {spec.trials} requested interior points found"
        )
    summary = {
        "scenario": spec.scenario,
        "n": spec.n, "m": spec.m, "k": spec.k, "p": spec.p,
        "points": spec.trials, "seed": spec.seed, "fd_step": spec.fd_step,
        "min_cosine": min_cosine,
        "max_abs_deviation": max_deviation,
        "cosine_tol": GRAD_CHECK_COSINE_TOL,
        "all_pass": bool(min_cosine > 1.0 - GRAD_CHECK_COSINE_TOL),
    }
    result = RunResult(header, rows, summary)
    if spec.out_path is not None:
        write_result(result, spec.out_path)
    return result


def run_single_eval(spec: ExperimentSpec, e: Ensemble | None = None,
                    ch: KrausChannel | None = None) -> RunResult:
    """Holevo bound of one instance; drawn from the seed unless given."""
    if (e is None) != (ch is None):
        raise ValidationError("provide both ensemble and channel, or neither")
    seed = trial_seeds(spec.seed, 1)[0]
    if e is None:
        e, ch = trial_instance(spec.n, spec.m, spec.k, spec.p, seed)
    result = holevo_bound(ch, e)
    header = ("seed", "holevo_bits", "average_output_entropy_bits", "cptp_residual")
    rows = [(seed, result.bound_bits, result.average_output_entropy_bits,
             ch.completeness_residual())]
    summary = {
        "scenario": spec.scenario,
        "n": ch.input_dim, "m": ch.output_dim, "k": ch.kraus_rank,
        "p": e.num_states, "seed": spec.seed,
        "holevo_bits": result.bound_bits,
        "average_output_entropy_bits": result.average_output_entropy_bits,
        "per_state_entropies_bits": [float(x) for x in result.per_state_entropies_bits],
        "cptp_residual": ch.completeness_residual(),
    }
    out = RunResult(header, rows, summary)
    if spec.out_path is not None:
        write_result(out, spec.out_path)
    return out
