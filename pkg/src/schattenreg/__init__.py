"""Schatten-norm bias-constrained linear estimators and their error theory.

Three estimators arise from bounding the Schatten-p norm of the bias
operator LX - I: Nuclear (p=1, eigenvalue clipping), Frobenius (p=2, ridge
regression), and Spectral (p=inf, scalar shrinkage).  The package provides
the closed-form fits, a numeric convex-optimization oracle, exact
generalization-error curves under two random-matrix ensembles, loss-basin
geometry analysis, and a reproducible cross-validation benchmark harness.
"""

from .basin import (
    BasinGeometry,
    GeometryTable,
    default_alpha_grid,
    expected_cv_minimum,
    geometry_table,
    locate_min_and_curvature,
    monte_carlo_parabola_min,
)
from .cv import (
    AlphaGrid,
    BenchReport,
    CVConfig,
    RFFBenchConfig,
    aggregate_wins,
    kfold_select_alpha,
    rff_benchmark,
    run_benchmark,
)
from .ensembles import (
    Dataset,
    DiagonalEnsembleConfig,
    EquicorrelatedConfig,
    NoiseDensity,
    SparseSpec,
    SpectralDensity,
    SphericalGaussianConfig,
    child_seeds,
    empirical_mse,
    haar_stiefel,
    sample_diagonal,
    sample_equicorrelated,
    sample_spherical,
)
from .estimators import (
    BiasBound,
    FittedModel,
    alpha_to_bias_bound,
    bias_bound_to_alpha,
    estimator_operator,
    fit,
    fit_from_spectrum,
    operator_diagnostics,
    predict,
)
from .oracle import project_schatten_ball, solve_bias_constrained_numeric
from .rff import (
    NonlinearTarget,
    RFFMap,
    apply_rff,
    eval_target,
    make_rff_dataset,
    sample_nonlinear_target,
    sample_rff_map,
)
from .spectrum import GramSpectrum, SchattenIndex, filtered_gram_eigvals, gram_spectrum
from .theory import (
    MarchenkoPastur,
    TheoryCurve,
    appell_f1,
    diagonal_error_fn,
    err_diagonal_quadrature,
    err_nuclear_closed,
    err_spectral_closed,
    err_spherical_quadrature,
    mp_cdf,
    mp_partial_moment,
    mp_pdf,
    oracle_ridge_alpha,
    spherical_error_fn,
    theory_curve,
)

__version__ = "0.1.0"
