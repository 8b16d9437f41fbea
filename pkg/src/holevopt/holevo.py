"""Holevo bound of an ensemble through a channel, and its analytic gradient.

The objective is C = S(Y) - sum_i p_i S(Y_i) where Y_i is the channel output
for state i and Y their p-weighted mixture. C is reported in bits (base-2
entropies). The gradient with respect to each Kraus operator is

    dC/dH_k = -2 (log Y + I) H_k X + 2 sum_i p_i (log Y_i + I) H_k X_i

with X = mix(e). The logs are natural: in that base the entropy-gradient
identity dS/dY = -log Y - I is exact, and switching base only rescales the
whole gradient by a positive constant that the step size absorbs. The packed
complex convention is d/dRe + i d/dIm, so the natural-log gradient equals the
finite-difference gradient of the nat-valued objective exactly, and 1/ln(2)
times the finite-difference gradient of the bit-valued one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import KrausChannel, _apply_ops
from .errors import NumericalError, ValidationError
from .matfun import DEFAULT_EIG_FLOOR, hermitian_part, matrix_log
from .states import Ensemble, mix, spectrum_entropy


@dataclass(frozen=True)
class HolevoResult:
    """Holevo bound in bits together with its two entropy terms.

    bound_bits always equals average_output_entropy_bits minus the
    p-weighted sum of per_state_entropies_bits.
    """

    bound_bits: float
    average_output_entropy_bits: float
    per_state_entropies_bits: np.ndarray


@dataclass(frozen=True)
class KrausGradient:
    """Per-operator ascent directions dC/dH_k, packed as d/dRe + i d/dIm.

    log_base records the entropy base the gradient was computed in (e for
    the analytic gradient, 2 for finite differences of the bit objective).
    """

    per_operator: np.ndarray
    log_base: float

    def __post_init__(self):
        g = np.asarray(self.per_operator, dtype=complex)
        if g.ndim != 3:
            raise ValidationError(f"expected a (K, M, N) stack, got shape {g.shape}")
        if not np.all(np.isfinite(g)):
            raise NumericalError("gradient contains non-finite entries")
        g.setflags(write=False)
        object.__setattr__(self, "per_operator", g)

    def norm(self) -> float:
        """Frobenius norm over the whole operator stack."""
        return float(np.linalg.norm(self.per_operator))


def _entropy_bits(mat: np.ndarray) -> float:
    return spectrum_entropy(np.linalg.eigvalsh(hermitian_part(mat)), base=2.0)


def _holevo_bits(ops: np.ndarray, probabilities, states) -> float:
    """Objective value for a raw operator stack; no completeness assumed.

    Used for off-manifold finite-difference probes, where the perturbed
    stack is not CPTP but every output sum_k H_k X H_k^H is still PSD.
    """
    outputs = [_apply_ops(ops, x) for x in states]
    mean_output = np.zeros((ops.shape[1], ops.shape[1]), dtype=complex)
    acc = 0.0
    for p, y in zip(probabilities, outputs):
        mean_output += p * y
        acc += p * _entropy_bits(y)
    return _entropy_bits(hermitian_part(mean_output)) - acc


def _check_dims(ch: KrausChannel, e: Ensemble) -> None:
    if e.dim != ch.input_dim:
        raise ValidationError(
            f"ensemble dimension {e.dim} does not match channel input {ch.input_dim}"
        )


def holevo_bound(ch: KrausChannel, e: Ensemble) -> HolevoResult:
    """Holevo bound C = S(Y) - sum_i p_i S(Y_i) in bits."""
    _check_dims(ch, e)
    outputs = [_apply_ops(ch.operators, x) for x in e.states]
    mean_output = np.zeros((ch.output_dim, ch.output_dim), dtype=complex)
    for p, y in zip(e.probabilities, outputs):
        mean_output += p * y
    s_mean = _entropy_bits(hermitian_part(mean_output))
    per_state = np.array([_entropy_bits(y) for y in outputs])
    bound = s_mean - float(e.probabilities @ per_state)
    return HolevoResult(bound, s_mean, per_state)


def holevo_gradient(
    ch: KrausChannel, e: Ensemble, eig_floor: float = DEFAULT_EIG_FLOOR
) -> KrausGradient:
    """Analytic ascent direction dC/dH_k in natural-log units.

    Output spectra are clamped at eig_floor inside the matrix logs, which
    keeps the gradient finite (and approximate) at rank-deficient outputs.
    """
    _check_dims(ch, e)
    ops = ch.operators
    eye = np.eye(ch.output_dim)
    outputs = [_apply_ops(ops, x) for x in e.states]
    mean_output = np.zeros((ch.output_dim, ch.output_dim), dtype=complex)
    for p, y in zip(e.probabilities, outputs):
        mean_output += p * y
    mean_output = hermitian_part(mean_output)

    grad = -2.0 * (matrix_log(mean_output, math.e, eig_floor) + eye)[None] @ ops @ mix(e)
    for p, x, y in zip(e.probabilities, e.states, outputs):
        grad = grad + 2.0 * p * (matrix_log(y, math.e, eig_floor) + eye)[None] @ ops @ x
    return KrausGradient(grad, math.e)


def finite_diff_gradient(ch: KrausChannel, e: Ensemble, step: float = 1e-5) -> KrausGradient:
    """Central-difference gradient of the bit-valued objective.

    Perturbs every real and imaginary component of every operator without
    re-projecting onto the CPTP set, so it differentiates the same
    unconstrained objective the analytic formula does. Agrees with
    holevo_gradient in direction, and in magnitude up to the single factor
    ln(2) from the base difference.
    """
    if not 1e-8 <= step <= 1e-3:
        raise ValidationError(f"step must lie in [1e-8, 1e-3], got {step}")
    _check_dims(ch, e)
    ops = np.array(ch.operators)
    probs, states = e.probabilities, e.states
    grad = np.zeros(ops.shape, dtype=complex)
    for idx in np.ndindex(*ops.shape):
        for unit in (1.0, 1.0j):
            ops[idx] += unit * step
            c_plus = _holevo_bits(ops, probs, states)
            ops[idx] -= 2.0 * unit * step
            c_minus = _holevo_bits(ops, probs, states)
            ops[idx] += unit * step
            grad[idx] += unit * (c_plus - c_minus) / (2.0 * step)
    return KrausGradient(grad, 2.0)
