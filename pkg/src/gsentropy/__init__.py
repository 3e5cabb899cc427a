"""Collision-order generalized Shannon entropy.

Exact values for analytic discrete distributions, plug-in estimation with
delta-method confidence intervals, independent verification oracles, and a
Monte Carlo coverage harness.
"""

from .coverage import (
    CoveragePoint,
    SweepResult,
    convergence_gap,
    coverage_experiment,
    coverage_sweep,
    default_grid,
    stable_from,
    write_coverage_csv,
    write_coverage_svg,
)
from .distributions import (
    AnalyticDistribution,
    CustomFinite,
    DiscretePmf,
    Geometric,
    NonConvergenceError,
    SampleCounts,
    UniformFinite,
    Zeta,
    derive_seed,
    distribution_config,
    finite_pmf,
    parse_distribution,
    pmf_at,
    riemann_zeta,
    sample,
    truncation_index,
)
from .entropy import CdotcPmf, as_pmf, cdotc, gse, gse_analytic, gse_analytic_info, shannon_entropy
from .estimation import (
    ConfidenceInterval,
    GseEstimate,
    confidence_interval,
    empirical_pmf,
    gse_estimate,
    gse_plugin,
    normal_quantile,
    read_counts_csv,
    read_raw_labels,
    sigma_hat_sq,
    sigma_sq_literal,
    sigma_sq_true,
    write_counts_csv,
)
from .oracles import (
    DEFAULT_CORPUS_SEED,
    VerificationReport,
    analytic_gradient,
    delta_variance_oracle,
    fd_gradient,
    mc_variance_oracle,
    pmf_corpus,
    run_verification,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticDistribution",
    "CdotcPmf",
    "ConfidenceInterval",
    "CoveragePoint",
    "CustomFinite",
    "DEFAULT_CORPUS_SEED",
    "DiscretePmf",
    "Geometric",
    "GseEstimate",
    "NonConvergenceError",
    "SampleCounts",
    "SweepResult",
    "UniformFinite",
    "VerificationReport",
    "Zeta",
    "analytic_gradient",
    "as_pmf",
    "cdotc",
    "confidence_interval",
    "convergence_gap",
    "coverage_experiment",
    "coverage_sweep",
    "default_grid",
    "delta_variance_oracle",
    "derive_seed",
    "distribution_config",
    "empirical_pmf",
    "fd_gradient",
    "finite_pmf",
    "gse",
    "gse_analytic",
    "gse_analytic_info",
    "gse_estimate",
    "gse_plugin",
    "mc_variance_oracle",
    "normal_quantile",
    "parse_distribution",
    "pmf_at",
    "pmf_corpus",
    "read_counts_csv",
    "read_raw_labels",
    "riemann_zeta",
    "run_verification",
    "sample",
    "shannon_entropy",
    "sigma_hat_sq",
    "sigma_sq_literal",
    "sigma_sq_true",
    "stable_from",
    "truncation_index",
    "write_counts_csv",
    "write_coverage_csv",
    "write_coverage_svg",
]
