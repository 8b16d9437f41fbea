"""Projected gradient ascent over Kraus operators, and the fixed-channel
input-ensemble baseline.

The channel optimizer repeats: gradient at the current CPTP iterate,
additive update H_k <- H_k + alpha dC/dH_k, then renormalization of the
whole stack by G^(-1/2). The default "per-sweep" mode updates all K
operators from one gradient evaluation and projects once; the "per-k" mode
re-evaluates the gradient before each single-operator update and projects
after each one, so every visited iterate is CPTP in both modes.

Because the projection can perturb the objective non-monotonically, both
optimizers track and return the best iterate seen, which makes the reported
value non-decreasing relative to the start.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .channel import KrausChannel, _apply_ops, project_cptp
from .errors import NumericalError, OptimizationError, ValidationError
from .holevo import _holevo_bits, holevo_gradient
from .matfun import DEFAULT_EIG_FLOOR, eig_hermitian, hermitian_part, matrix_log
from .states import Ensemble, pure_to_density, spectrum_entropy

PROJECTION_MODES = ("per-sweep", "per-k")

STATUS_THRESHOLD = "threshold-reached"
STATUS_MAX_ITERS = "max-iters"
STATUS_ERROR = "error"


@dataclass(frozen=True)
class OptimConfig:
    """Knobs shared by both optimizers.

    step_size is the ascent step alpha; improvement_threshold is the raw
    per-iteration gain in bits below which a run stops; eig_floor feeds the
    clamped matrix logs and the CPTP projection.
    """

    step_size: float = 0.3
    max_iters: int = 100
    improvement_threshold: float = 1e-6
    eig_floor: float = DEFAULT_EIG_FLOOR
    record_trace: bool = True
    projection: str = "per-sweep"

    def __post_init__(self):
        if not 0.0 < self.step_size <= 10.0:
            raise ValidationError(f"step_size must lie in (0, 10], got {self.step_size}")
        if not 1 <= self.max_iters <= 10**6:
            raise ValidationError(f"max_iters must lie in [1, 1e6], got {self.max_iters}")
        if self.improvement_threshold < 0.0:
            raise ValidationError(
                f"improvement_threshold must be nonnegative, got {self.improvement_threshold}"
            )
        if self.eig_floor <= 0.0:
            raise ValidationError(f"eig_floor must be positive, got {self.eig_floor}")
        if self.projection not in PROJECTION_MODES:
            raise ValidationError(
                f"projection must be one of {PROJECTION_MODES}, got {self.projection!r}"
            )


@dataclass
class OptimTrace:
    """Per-iteration log of an optimization run.

    Parallel lists indexed by completed iteration (1-based indices stored in
    `iterations`); `initial_bits` is the objective at the starting point and
    `best_bits`/`best_iteration` track the best iterate seen (iteration 0
    meaning the start).
    """

    initial_bits: float
    status: str = STATUS_MAX_ITERS
    iterations: list = field(default_factory=list)
    holevo_bits: list = field(default_factory=list)
    grad_norms: list = field(default_factory=list)
    cptp_residuals: list = field(default_factory=list)
    wall_ms: list = field(default_factory=list)
    best_bits: float = math.nan
    best_iteration: int = 0

    def __post_init__(self):
        if math.isnan(self.best_bits):
            self.best_bits = self.initial_bits

    @property
    def final_bits(self) -> float:
        """Objective at the last iterate (the start if no iteration ran)."""
        return self.holevo_bits[-1] if self.holevo_bits else self.initial_bits

    @property
    def num_iterations(self) -> int:
        return self.iterations[-1] if self.iterations else 0

    def record(self, iteration, bits, grad_norm, cptp_residual, ms) -> None:
        self.iterations.append(iteration)
        self.holevo_bits.append(bits)
        self.grad_norms.append(grad_norm)
        self.cptp_residuals.append(cptp_residual)
        self.wall_ms.append(ms)


def _sweep(ch: KrausChannel, e: Ensemble, cfg: OptimConfig):
    """One optimizer iteration; returns the new channel and the gradient norm."""
    if cfg.projection == "per-sweep":
        grad = holevo_gradient(ch, e, cfg.eig_floor)
        updated = ch.operators + cfg.step_size * grad.per_operator
        return project_cptp(updated, cfg.eig_floor), grad.norm()
    # per-k: refresh the gradient before each single-operator update and
    # renormalize the whole stack immediately after it
    sq_norm = 0.0
    for k in range(ch.kraus_rank):
        grad = holevo_gradient(ch, e, cfg.eig_floor)
        ops = np.array(ch.operators)
        ops[k] += cfg.step_size * grad.per_operator[k]
        ch = project_cptp(ops, cfg.eig_floor)
        sq_norm += float(np.linalg.norm(grad.per_operator[k])) ** 2
    return ch, math.sqrt(sq_norm)


def ga_step(ch: KrausChannel, e: Ensemble, cfg: OptimConfig = OptimConfig()) -> KrausChannel:
    """Single ascent step: gradient, additive update, CPTP renormalization."""
    return _sweep(ch, e, cfg)[0]


def _objective_bits(ch_ops, e: Ensemble) -> float:
    return _holevo_bits(ch_ops, e.probabilities, e.states)


def optimize_channel(ch0: KrausChannel, e: Ensemble, cfg: OptimConfig = OptimConfig()):
    """Ascend the Holevo bound over the channel for a fixed input ensemble.

    Stops once the raw per-iteration improvement falls below
    cfg.improvement_threshold or after cfg.max_iters iterations. Returns the
    best-seen channel and the trace; the best value never falls below the
    starting one.
    """
    c_prev = _objective_bits(ch0.operators, e)
    trace = OptimTrace(initial_bits=c_prev)
    best_ch, ch = ch0, ch0
    iteration = 0
    try:
        for iteration in range(1, cfg.max_iters + 1):
            t0 = time.perf_counter()
            ch, grad_norm = _sweep(ch, e, cfg)
            bits = _objective_bits(ch.operators, e)
            elapsed_ms = (time.perf_counter() - t0) * 1e3
            if cfg.record_trace:
                trace.record(iteration, bits, grad_norm, ch.completeness_residual(), elapsed_ms)
            if bits > trace.best_bits:
                trace.best_bits = bits
                trace.best_iteration = iteration
                best_ch = ch
            if bits - c_prev < cfg.improvement_threshold:
                trace.status = STATUS_THRESHOLD
                break
            c_prev = bits
        else:
            trace.status = STATUS_MAX_ITERS
    except NumericalError as exc:
        trace.status = STATUS_ERROR
        raise OptimizationError(
            f"channel optimization failed at iteration {iteration}: {exc}", trace=trace
        ) from exc
    return best_ch, trace


def sweep_step_sizes(ch0: KrausChannel, e: Ensemble, alphas, cfg: OptimConfig = OptimConfig()):
    """Independent optimize_channel runs from one initial channel per step size."""
    alphas = list(alphas)
    if not alphas:
        raise ValidationError("alpha list must be nonempty")
    for a in alphas:
        if not 0.0 < a <= 10.0:
            raise ValidationError(f"every alpha must lie in (0, 10], got {a}")
    return [optimize_channel(ch0, e, replace(cfg, step_size=a))[1] for a in alphas]


def project_simplex(v) -> np.ndarray:
    """Euclidean projection onto the probability simplex {p >= 0, sum p = 1}."""
    v = np.asarray(v, dtype=float).ravel()
    if v.size == 0 or not np.all(np.isfinite(v)):
        raise ValidationError("input must be a nonempty finite vector")
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    idx = np.arange(1, v.size + 1)
    rho = int(np.nonzero(u + (1.0 - css) / idx > 0)[0][-1])
    shift = (1.0 - css[rho]) / (rho + 1.0)
    return np.maximum(v + shift, 0.0)


def _pure_vector(state: np.ndarray) -> np.ndarray:
    """Unit vector of a rank-1 density matrix (its top eigenvector)."""
    w, v = eig_hermitian(state)
    if abs(w[-1] - 1.0) > 1e-8:
        raise ValidationError(
            f"state is not pure: largest eigenvalue {w[-1]} deviates from 1"
        )
    return v[:, -1]


def optimize_input(ch: KrausChannel, e0: Ensemble, cfg: OptimConfig = OptimConfig()):
    """Ascend the Holevo bound over a pure-state ensemble for a fixed channel.

    Each iteration alternates a probability step (natural-log gradient
    dC/dp_i = -Tr(Y_i log Y) - S(Y_i), then Euclidean projection onto the
    simplex) with a state-vector step (chain rule through X_i = x_i x_i^H,
    then renormalization to unit norm). Stop rule and best-seen reporting
    match optimize_channel.
    """
    ops = ch.operators
    if e0.dim != ch.input_dim:
        raise ValidationError(
            f"ensemble dimension {e0.dim} does not match channel input {ch.input_dim}"
        )
    vectors = [_pure_vector(x) for x in e0.states]
    probs = np.array(e0.probabilities)
    residual = ch.completeness_residual()

    def objective(p, vecs):
        return _holevo_bits(ops, p, [np.outer(x, x.conj()) for x in vecs])

    c_prev = objective(probs, vectors)
    trace = OptimTrace(initial_bits=c_prev)
    best = (np.array(probs), [x.copy() for x in vectors])
    iteration = 0
    try:
        for iteration in range(1, cfg.max_iters + 1):
            t0 = time.perf_counter()
            states = [np.outer(x, x.conj()) for x in vectors]
            outputs = [_apply_ops(ops, x) for x in states]

            # probability step
            mean_out = hermitian_part(sum(p * y for p, y in zip(probs, outputs)))
            log_mean = matrix_log(mean_out, math.e, cfg.eig_floor)
            grad_p = np.array(
                [
                    -float(np.trace(y @ log_mean).real)
                    - spectrum_entropy(np.linalg.eigvalsh(y), base=math.e)
                    for y in outputs
                ]
            )
            probs = project_simplex(probs + cfg.step_size * grad_p)

            # state-vector step at the updated probabilities
            mean_out = hermitian_part(sum(p * y for p, y in zip(probs, outputs)))
            log_mean = matrix_log(mean_out, math.e, cfg.eig_floor)
            sq_norm = float(np.linalg.norm(grad_p)) ** 2
            for i, x in enumerate(vectors):
                diff = matrix_log(outputs[i], math.e, cfg.eig_floor) - log_mean
                back = hermitian_part(np.einsum("kmn,mq,kqr->nr", ops.conj(), diff, ops))
                grad_x = 2.0 * probs[i] * (back @ x)
                sq_norm += float(np.linalg.norm(grad_x)) ** 2
                updated = x + cfg.step_size * grad_x
                vectors[i] = updated / np.linalg.norm(updated)

            bits = objective(probs, vectors)
            elapsed_ms = (time.perf_counter() - t0) * 1e3
            if cfg.record_trace:
                trace.record(iteration, bits, math.sqrt(sq_norm), residual, elapsed_ms)
            if bits > trace.best_bits:
                trace.best_bits = bits
                trace.best_iteration = iteration
                best = (np.array(probs), [x.copy() for x in vectors])
            if bits - c_prev < cfg.improvement_threshold:
                trace.status = STATUS_THRESHOLD
                break
            c_prev = bits
        else:
            trace.status = STATUS_MAX_ITERS
    except NumericalError as exc:
        trace.status = STATUS_ERROR
        raise OptimizationError(
            f"input optimization failed at iteration {iteration}: {exc}", trace=trace
        ) from exc
    best_p, best_vecs = best
    best_ensemble = Ensemble(best_p, tuple(pure_to_density(x) for x in best_vecs))
    return best_ensemble, trace
