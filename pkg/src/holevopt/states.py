"""Quantum states, ensembles, and entropy functionals.

States are plain complex numpy arrays: a pure state is a unit-norm vector,
a density matrix is Hermitian, positive semidefinite, and has unit trace.
An Ensemble pairs a probability vector with density matrices of a common
dimension.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .matfun import hermitian_part

INPUT_TOL = 1e-8
INTERNAL_TOL = 1e-10


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the three density-matrix checks plus residual magnitudes."""

    hermitian: bool
    psd: bool
    unit_trace: bool
    hermiticity_residual: float
    min_eigenvalue: float
    trace_residual: float

    @property
    def ok(self) -> bool:
        return self.hermitian and self.psd and self.unit_trace


def validate_density(x, tol: float = INPUT_TOL) -> ValidationReport:
    """Check Hermiticity, positive semidefiniteness, and unit trace of x."""
    x = np.asarray(x, dtype=complex)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {x.shape}")
    herm_res = float(np.linalg.norm(x - x.conj().T))
    min_eig = float(np.linalg.eigvalsh(hermitian_part(x))[0])
    trace_res = float(abs(np.trace(x) - 1.0))
    return ValidationReport(
        hermitian=herm_res < tol,
        psd=min_eig >= -tol,
        unit_trace=trace_res < tol,
        hermiticity_residual=herm_res,
        min_eigenvalue=min_eig,
        trace_residual=trace_res,
    )


def require_density(x, tol: float = INPUT_TOL, what: str = "density matrix") -> np.ndarray:
    """Return x as a complex array, raising if it is not a valid density matrix."""
    x = np.asarray(x, dtype=complex)
    report = validate_density(x, tol)
    if not report.ok:
        raise ValidationError(
            f"{what} is invalid at tol {tol:.1e}: hermiticity residual "
            f"{report.hermiticity_residual:.3e}, min eigenvalue {report.min_eigenvalue:.3e}, "
            f"trace residual {report.trace_residual:.3e}"
        )
    return x


def pure_to_density(x) -> np.ndarray:
    """Rank-1 projector x x^H of a unit-norm state vector."""
    x = np.asarray(x, dtype=complex)
    if x.ndim != 1:
        raise ValidationError(f"expected a state vector, got shape {x.shape}")
    norm = float(np.linalg.norm(x))
    if abs(norm - 1.0) > 1e-8:
        raise ValidationError(f"state vector norm {norm} deviates from 1 beyond 1e-8")
    return np.outer(x, x.conj())


@dataclass(frozen=True)
class Ensemble:
    """Probability vector p and density matrices of a common dimension.

    Validated on construction: probabilities are nonnegative and sum to one,
    each state passes validate_density at the input tolerance.
    """

    probabilities: np.ndarray
    states: tuple

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float).ravel()
        states = tuple(np.asarray(s, dtype=complex) for s in self.states)
        if p.size == 0 or len(states) != p.size:
            raise ValidationError(
                f"{p.size} probabilities but {len(states)} states"
            )
        if np.any(p < -1e-10):
            raise ValidationError(f"negative probability: min is {p.min()}")
        if abs(p.sum() - 1.0) > 1e-10:
            raise ValidationError(f"probabilities sum to {p.sum()}, not 1")
        dim = states[0].shape[0] if states[0].ndim == 2 else -1
        for i, s in enumerate(states):
            if s.shape != (dim, dim):
                raise ValidationError(
                    f"state {i} has shape {s.shape}, expected ({dim}, {dim})"
                )
            require_density(s, INPUT_TOL, what=f"ensemble state {i}")
        p.setflags(write=False)
        for s in states:
            s.setflags(write=False)
        object.__setattr__(self, "probabilities", p)
        object.__setattr__(self, "states", states)

    @property
    def num_states(self) -> int:
        return len(self.states)

    @property
    def dim(self) -> int:
        return self.states[0].shape[0]


def mix(e: Ensemble) -> np.ndarray:
    """Average state sum_i p_i X_i of an ensemble."""
    acc = np.zeros((e.dim, e.dim), dtype=complex)
    for p, x in zip(e.probabilities, e.states):
        acc += p * x
    return hermitian_part(acc)


def spectrum_entropy(eigenvalues, base: float = 2.0) -> float:
    """Entropy -sum_i w_i log_base(w_i) of a spectrum, with 0 log 0 = 0."""
    w = np.asarray(eigenvalues, dtype=float)
    w = w[w > 0.0]
    if w.size == 0:
        return 0.0
    return float(-np.sum(w * np.log(w)) / np.log(base))


def von_neumann_entropy(y, base: float = 2.0, tol: float = INPUT_TOL) -> float:
    """Entropy -Tr(Y log Y) of a density matrix, computed from its spectrum."""
    if base <= 1.0:
        raise ValidationError(f"log base must exceed 1, got {base}")
    y = require_density(y, tol)
    w = np.linalg.eigvalsh(hermitian_part(y))
    return spectrum_entropy(w, base)


def shannon_entropy(p, base: float = 2.0) -> float:
    """Entropy -sum_i p_i log_base(p_i) of a probability vector."""
    if base <= 1.0:
        raise ValidationError(f"log base must exceed 1, got {base}")
    p = np.asarray(p, dtype=float).ravel()
    if np.any(p < -1e-10):
        raise ValidationError(f"negative probability: min is {p.min()}")
    if abs(p.sum() - 1.0) > 1e-8:
        raise ValidationError(f"probabilities sum to {p.sum()}, not 1")
    return spectrum_entropy(p, base)
