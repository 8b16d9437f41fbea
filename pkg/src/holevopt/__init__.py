"""Holevo-bound evaluation and CPTP-constrained gradient ascent over
Kraus-operator quantum channels."""

from .channel import (
    KrausChannel,
    apply,
    apply_ensemble,
    completeness_residual,
    depolarizing_to_max_mixed,
    gram_matrix,
    project_cptp,
    random_channel,
)
from .errors import (
    DegenerateChannelError,
    NumericalError,
    OptimizationError,
    ValidationError,
)
from .experiments import (
    ExperimentSpec,
    RunResult,
    TrialRecord,
    random_ensemble,
    run_convergence,
    run_dim_sweep,
    run_grad_check,
    run_kraus_sweep,
    run_single_eval,
    trial_instance,
    trial_seeds,
)
from .holevo import (
    HolevoResult,
    KrausGradient,
    finite_diff_gradient,
    holevo_bound,
    holevo_gradient,
)
from .matfun import (
    HermitianEig,
    eig_hermitian,
    hermitian_part,
    hermiticity_residual,
    inv_sqrt_psd,
    matrix_log,
)
from .optimizer import (
    OptimConfig,
    OptimTrace,
    ga_step,
    optimize_channel,
    optimize_input,
    project_simplex,
    sweep_step_sizes,
)
from .states import (
    Ensemble,
    ValidationReport,
    mix,
    pure_to_density,
    shannon_entropy,
    spectrum_entropy,
    validate_density,
    von_neumann_entropy,
)

__version__ = "0.1.0"

__all__ = [
    "DegenerateChannelError",
    "Ensemble",
    "ExperimentSpec",
    "HermitianEig",
    "HolevoResult",
    "KrausChannel",
    "KrausGradient",
    "NumericalError",
    "OptimConfig",
    "OptimTrace",
    "OptimizationError",
    "RunResult",
    "TrialRecord",
    "ValidationError",
    "ValidationReport",
    "apply",
    "apply_ensemble",
    "completeness_residual",
    "depolarizing_to_max_mixed",
    "eig_hermitian",
    "finite_diff_gradient",
    "ga_step",
    "gram_matrix",
    "hermitian_part",
    "hermiticity_residual",
    "holevo_bound",
    "holevo_gradient",
    "inv_sqrt_psd",
    "matrix_log",
    "mix",
    "optimize_channel",
    "optimize_input",
    "project_cptp",
    "project_simplex",
    "pure_to_density",
    "random_channel",
    "random_ensemble",
    "run_convergence",
    "run_dim_sweep",
    "run_grad_check",
    "run_kraus_sweep",
    "run_single_eval",
    "shannon_entropy",
    "spectrum_entropy",
    "sweep_step_sizes",
    "trial_instance",
    "trial_seeds",
    "validate_density",
    "von_neumann_entropy",
]
