"""Minimal Hermite-type eigenbasis of the centered discrete Fourier transform.

For every N >= 2 there is a unique (up to signs) orthonormal basis T_0, ...,
T_{N-1} of R^N consisting of DFT eigenvectors with eigenvalues (-i)^n whose
localization widths are as small as possible: width(T_n) = floor((N+n+2)/4).
These vectors are discrete analogues of the Hermite functions and converge to
them as N grows.  This package constructs the basis at arbitrary working
precision (by a three-term recurrence, cross-checked against a Gram-Schmidt
reference construction), verifies its defining properties, measures the
precision loss of the recurrence, and exports tables.

Quick start::

    from dft_hermite import PrecisionContext, build_basis, verify_basis

    ctx = PrecisionContext(digits=120)
    basis = build_basis(16, ctx)
    report = verify_basis(basis, ctx)
    assert report.passed()

The command-line entry point is ``dft-hermite`` (see ``--help``).
"""

from .core import (
    PrecisionContext,
    IndexSet,
    PeriodicVector,
    DftOperator,
    make_index_set,
    default_digits,
    width,
    is_zero_vector,
    dft,
    apply_L,
    dot,
    hdot,
    norm,
    InvalidDimensionError,
    DimensionMismatchError,
)
from .seeds import SeedFamily, FourierPairReport, check_fourier_pairs
from .basis import (
    EigenspaceDims,
    BasisSet,
    VerificationReport,
    eigenspace_dims,
    seed_vectors,
    recurrence_step,
    build_basis,
    gram_schmidt_reference,
    verify_basis,
    compare_bases,
    SeedFormulaError,
    DegenerateStepError,
)
from .hermite import (
    HermiteEvaluator,
    SampledHermite,
    psi,
    sample_psi,
    gaussian_vector,
    align_sign,
    convergence_report,
    ConvergenceReport,
)
from .tracking import IntervalLossReport, measure_precision_loss
from .export import write_table, parse_table, InsufficientPrecisionError

__version__ = "0.1.0"

__all__ = [
    "PrecisionContext", "IndexSet", "PeriodicVector", "DftOperator",
    "make_index_set", "default_digits", "width", "is_zero_vector", "dft", "apply_L",
    "dot", "hdot", "norm",
    "InvalidDimensionError", "DimensionMismatchError",
    "SeedFamily", "FourierPairReport", "check_fourier_pairs",
    "EigenspaceDims", "BasisSet", "VerificationReport",
    "eigenspace_dims", "seed_vectors", "recurrence_step", "build_basis",
    "gram_schmidt_reference", "verify_basis", "compare_bases",
    "SeedFormulaError", "DegenerateStepError",
    "HermiteEvaluator", "SampledHermite", "psi", "sample_psi",
    "gaussian_vector", "align_sign", "convergence_report", "ConvergenceReport",
    "IntervalLossReport", "measure_precision_loss",
    "write_table", "parse_table", "InsufficientPrecisionError",
    "__version__",
]
