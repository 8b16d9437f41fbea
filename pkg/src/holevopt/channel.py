"""Kraus-operator quantum channels.

A channel is an ordered stack of K complex M x N operators H_k acting as
Y = sum_k H_k X H_k^H. Physical (CPTP) channels satisfy the completeness
relation sum_k H_k^H H_k = I_N; KrausChannel enforces it on construction,
and project_cptp restores it for an arbitrary operator stack by
right-multiplying every operator with G^(-1/2), G = sum_k H_k^H H_k.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateChannelError, ValidationError
from .matfun import DEFAULT_EIG_FLOOR, eig_hermitian, hermitian_part
from .states import Ensemble, require_density

CPTP_TOL = 1e-10


def _as_operator_stack(operators) -> np.ndarray:
    try:
        ops = np.asarray(operators, dtype=complex)
    except ValueError as exc:
        raise ValidationError(f"Kraus operators must share a common shape: {exc}") from exc
    if ops.ndim != 3 or ops.size == 0:
        raise ValidationError(
            f"expected a nonempty stack of matrices, got shape {ops.shape}"
        )
    if not np.all(np.isfinite(ops)):
        raise ValidationError("Kraus operators contain non-finite entries")
    return ops


def gram_matrix(operators) -> np.ndarray:
    """Accumulation matrix G = sum_k H_k^H H_k."""
    ops = _as_operator_stack(operators)
    return hermitian_part(np.einsum("kmn,kmq->nq", ops.conj(), ops))


def completeness_residual(operators) -> float:
    """Frobenius distance of sum_k H_k^H H_k from the identity."""
    g = gram_matrix(operators)
    return float(np.linalg.norm(g - np.eye(g.shape[0])))


@dataclass(frozen=True)
class KrausChannel:
    """CPTP channel given by a (K, M, N) stack of Kraus operators."""

    operators: np.ndarray
    cptp_tol: float = CPTP_TOL

    def __post_init__(self):
        ops = _as_operator_stack(self.operators)
        k, m, n = ops.shape
        if k * m < n:
            raise ValidationError(
                f"{k} operators of shape {m}x{n} cannot satisfy completeness (K*M < N)"
            )
        residual = completeness_residual(ops)
        if residual >= self.cptp_tol:
            raise ValidationError(
                f"completeness residual {residual:.3e} exceeds {self.cptp_tol:.1e}"
            )
        ops.setflags(write=False)
        object.__setattr__(self, "operators", ops)

    @property
    def kraus_rank(self) -> int:
        return self.operators.shape[0]

    @property
    def output_dim(self) -> int:
        return self.operators.shape[1]

    @property
    def input_dim(self) -> int:
        return self.operators.shape[2]

    def completeness_residual(self) -> float:
        return completeness_residual(self.operators)


def _apply_ops(ops: np.ndarray, x: np.ndarray) -> np.ndarray:
    # sum_k H_k X H_k^H without any validity checks
    return hermitian_part(np.einsum("kmn,nq,kpq->mp", ops, x, ops.conj()))


def apply(ch: KrausChannel, x, tol: float = 1e-8) -> np.ndarray:
    """Channel action sum_k H_k X H_k^H on a density matrix."""
    x = require_density(x, tol, what="input state")
    if x.shape[0] != ch.input_dim:
        raise ValidationError(
            f"state dimension {x.shape[0]} does not match channel input {ch.input_dim}"
        )
    return _apply_ops(ch.operators, x)


def apply_ensemble(ch: KrausChannel, e: Ensemble):
    """Per-state outputs Y_i and their mixture Y = sum_i p_i Y_i.

    Linearity guarantees Y equals the channel applied to mix(e).
    """
    if e.dim != ch.input_dim:
        raise ValidationError(
            f"ensemble dimension {e.dim} does not match channel input {ch.input_dim}"
        )
    outputs = [_apply_ops(ch.operators, x) for x in e.states]
    mean_output = np.zeros((ch.output_dim, ch.output_dim), dtype=complex)
    for p, y in zip(e.probabilities, outputs):
        mean_output += p * y
    return hermitian_part(mean_output), outputs


def project_cptp(operators, eig_floor: float = DEFAULT_EIG_FLOOR) -> KrausChannel:
    """Rescale an operator stack into a CPTP channel: H_k -> H_k G^(-1/2).

    Eigenvalues of G below eig_floor are clamped; if the stack has collapsed
    rank (clamped directions cannot be renormalized to unit weight), a
    DegenerateChannelError is raised instead of returning a non-physical set.
    Already-CPTP stacks pass through unchanged up to rounding.
    """
    ops = _as_operator_stack(operators)
    k, m, n = ops.shape
    if k * m < n:
        raise ValidationError(
            f"{k} operators of shape {m}x{n} cannot satisfy completeness (K*M < N)"
        )
    g = gram_matrix(ops)
    w, v = eig_hermitian(g)
    n_clamped = int(np.count_nonzero(w < eig_floor))
    if n_clamped > 1:
        raise DegenerateChannelError(
            f"{n_clamped} eigenvalues of G fell below {eig_floor:.1e}; "
            "the operator set has collapsed rank"
        )
    inv_sqrt = hermitian_part((v * np.maximum(w, eig_floor) ** -0.5) @ v.conj().T)
    try:
        return KrausChannel(ops @ inv_sqrt)
    except ValidationError as exc:
        raise DegenerateChannelError(
            f"normalization failed on a nearly singular G (min eigenvalue {w[0]:.3e}): {exc}"
        ) from exc


def random_channel(n: int, m: int, k: int, rng_seed) -> KrausChannel:
    """Random CPTP channel: i.i.d. standard complex Gaussian entries, then
    the stack is renormalized by G^(-1/2).

    Deterministic for a fixed seed (rng_seed feeds numpy's default PCG64
    generator and may be an int, a SeedSequence, or a Generator).
    """
    if n < 1 or m < 1 or k < 1:
        raise ValidationError(f"dimensions must be positive, got N={n}, M={m}, K={k}")
    if k * m < n:
        raise ValidationError(
            f"K*M = {k * m} < N = {n}: completeness is unsatisfiable"
        )
    rng = np.random.default_rng(rng_seed)
    raw = rng.standard_normal((k, m, n)) + 1j * rng.standard_normal((k, m, n))
    raw *= np.sqrt(0.5)
    return project_cptp(raw)


def depolarizing_to_max_mixed(n: int, m: int) -> KrausChannel:
    """Channel sending every input to the maximally mixed state I_M / M.

    Kraus set {e_a e_b^H / sqrt(M)} over all M*N index pairs; completeness
    holds exactly and the Holevo bound of any ensemble through it is zero.
    """
    if n < 1 or m < 1:
        raise ValidationError(f"dimensions must be positive, got N={n}, M={m}")
    ops = np.zeros((m * n, m, n), dtype=complex)
    scale = 1.0 / np.sqrt(m)
    for a in range(m):
        for b in range(n):
            ops[a * n + b, a, b] = scale
    return KrausChannel(ops)
