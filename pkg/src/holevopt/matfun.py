"""Eigendecomposition-backed kernels for Hermitian matrices.

Every matrix destined for an eigensolve is passed through hermitian_part
first; floating-point drift otherwise accumulates over long iterative runs.
Spectra of nearly singular matrices are clamped at a configurable floor so
that logarithms and inverse square roots stay finite (the "0 log 0 = 0"
convention for rank-deficient density matrices).
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import NumericalError, ValidationError

DEFAULT_EIG_FLOOR = 1e-12
HERMITICITY_RTOL = 1e-8


class HermitianEig(NamedTuple):
    """Spectral decomposition A = V diag(w) V^H with eigenvalues ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _as_square(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {a.shape}")
    return a


def hermitian_part(a) -> np.ndarray:
    """Return (A + A^H) / 2."""
    a = _as_square(a)
    return (a + a.conj().T) / 2


def hermiticity_residual(a) -> float:
    """Relative asymmetry ||A - A^H||_F / max(1, ||A||_F)."""
    a = _as_square(a)
    return float(np.linalg.norm(a - a.conj().T) / max(1.0, np.linalg.norm(a)))


def eig_hermitian(a, herm_tol: float = HERMITICITY_RTOL) -> HermitianEig:
    """Eigendecomposition of a Hermitian matrix.

    Rejects inputs whose relative asymmetry exceeds herm_tol; smaller drift is
    symmetrized away before the solve.
    """
    a = _as_square(a)
    residual = hermiticity_residual(a)
    if residual >= herm_tol:
        raise ValidationError(
            f"matrix is not Hermitian: relative asymmetry {residual:.3e} >= {herm_tol:.1e}"
        )
    try:
        w, v = np.linalg.eigh(hermitian_part(a))
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"Hermitian eigensolver failed: {exc}") from exc
    return HermitianEig(w, v)


def matrix_log(a, base: float = math.e, eig_floor: float = DEFAULT_EIG_FLOOR) -> np.ndarray:
    """Matrix logarithm of a Hermitian PSD matrix via its spectrum.

    Eigenvalues are clamped at eig_floor before taking scalar logs, keeping
    the result finite for rank-deficient inputs.
    """
    if base <= 1.0:
        raise ValidationError(f"log base must exceed 1, got {base}")
    if eig_floor <= 0.0:
        raise ValidationError(f"eig_floor must be positive, got {eig_floor}")
    w, v = eig_hermitian(a)
    lw = np.log(np.maximum(w, eig_floor)) / math.log(base)
    return hermitian_part((v * lw) @ v.conj().T)


def inv_sqrt_psd(a, eig_floor: float = DEFAULT_EIG_FLOOR) -> np.ndarray:
    """A^(-1/2) for a Hermitian positive-definite matrix.

    Eigenvalues are clamped at eig_floor; for well-conditioned A the result B
    satisfies B A B = I.
    """
    if eig_floor <= 0.0:
        raise ValidationError(f"eig_floor must be positive, got {eig_floor}")
    w, v = eig_hermitian(a)
    s = 1.0 / np.sqrt(np.maximum(w, eig_floor))
    return hermitian_part((v * s) @ v.conj().T)
