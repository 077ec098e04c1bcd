"""Numerics for smooth sums over k-free integers with bounded prime factors.

The package computes, by independent routes that are cross-checked in the
test-suite:

* finite ensembles of k-free integers whose prime factors all lie below N,
  with a complex multiplicative weight alpha^{Omega(n)}/n (``ensemble``);
* the Dickman-type density family, its delay differential equation, and the
  limiting characteristic function exp(alpha * g(lambda)) (``dickman``);
* complex-capable special functions (exponential/cosine/sine integrals,
  incomplete gamma) with per-call error estimates (``specfun``);
* smooth cutoff sums by direct summation, by the exact spectral identity, and
  by the leading-order asymptotic, plus the error-regime classifier
  (``smoothsum``);
* a certified lower bound for the alpha = -1 spectral integral via midpoint
  quadrature with explicit remainder and tail bounds (``certify``);
* the closed-form antiderivative registry and remainder-envelope scans used by
  the convergence analysis (``remainders``).

Command line front end: ``kfree`` (see ``kfree.cli``).
"""

__version__ = "0.1.0"

from .dickman import (
    CharFnLimit,
    RhoGrid,
    charfn_limit,
    charfn_limit_grid,
    h_constant,
    solve_rho,
    w_density,
    w_integral,
)
from .ensemble import (
    CharfnEvaluator,
    EnsembleConfig,
    Factorization,
    FastCharfn,
    PartitionConstantReport,
    ensemble_charfn,
    enumerate_ensemble,
    error_kernel,
    forbidden_alphas,
    laurent_coeffs,
    measure,
    nu_marginal,
    partition_constant,
    partition_function,
)
from .errors import (
    DegenerateConfigError,
    DomainError,
    KfreeError,
    PoleError,
    SizeCapError,
    ToleranceError,
)
from .primes import PrimeTable, prime_count, sieve_primes
from .certify import ExampleReport, reproduce_example
from .remainders import (
    AntiderivativeCase,
    BoundaryTerms,
    EnvelopeReport,
    antiderivative_case,
    antiderivative_names,
    bound_scan,
    boundary_terms,
    limit_deviation_scan,
    main_term_J111,
    verify_antiderivative,
)
from .smoothsum import (
    ComparisonReport,
    CutoffDescriptor,
    SpectralSum,
    asymptotic_prediction,
    builtin_cutoffs,
    comparison_tolerance,
    corollary1_rate,
    error_region,
    get_cutoff,
    smooth_sum_direct,
    smooth_sum_spectral,
    theorem1_ratio_scan,
)
from .specfun import (
    EULER_GAMMA,
    EvalResult,
    cosine_integral,
    entire_cosine_integral,
    exp_integral_ei,
    sine_integral,
    upper_gamma,
)

__all__ = [
    "__version__",
    "KfreeError",
    "DomainError",
    "PoleError",
    "DegenerateConfigError",
    "ToleranceError",
    "SizeCapError",
    "PrimeTable",
    "sieve_primes",
    "prime_count",
    "RhoGrid",
    "CharFnLimit",
    "h_constant",
    "solve_rho",
    "w_density",
    "w_integral",
    "charfn_limit",
    "charfn_limit_grid",
    "EnsembleConfig",
    "Factorization",
    "enumerate_ensemble",
    "measure",
    "partition_function",
    "partition_constant",
    "PartitionConstantReport",
    "forbidden_alphas",
    "nu_marginal",
    "laurent_coeffs",
    "CharfnEvaluator",
    "FastCharfn",
    "ensemble_charfn",
    "error_kernel",
    "EULER_GAMMA",
    "EvalResult",
    "cosine_integral",
    "entire_cosine_integral",
    "sine_integral",
    "exp_integral_ei",
    "upper_gamma",
    "CutoffDescriptor",
    "builtin_cutoffs",
    "get_cutoff",
    "SpectralSum",
    "ComparisonReport",
    "smooth_sum_direct",
    "smooth_sum_spectral",
    "asymptotic_prediction",
    "comparison_tolerance",
    "error_region",
    "corollary1_rate",
    "theorem1_ratio_scan",
    "ExampleReport",
    "reproduce_example",
    "AntiderivativeCase",
    "BoundaryTerms",
    "EnvelopeReport",
    "antiderivative_names",
    "antiderivative_case",
    "verify_antiderivative",
    "main_term_J111",
    "boundary_terms",
    "bound_scan",
    "limit_deviation_scan",
]
