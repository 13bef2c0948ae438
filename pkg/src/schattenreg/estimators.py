"""Closed-form bias-constrained linear estimators and the alpha <-> C maps.

The estimator family is beta-hat = G-hat^{-1} X^T Y, where G-hat shares the
eigenvectors of G = X^T X and its eigenvalues are a filtered version of G's
(see :mod:`schattenreg.spectrum`).  alpha = 0 recovers OLS; alpha = inf is a
sentinel for the zero estimator, which is optimal once the bias budget C
reaches d**(1/p).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .exceptions import DimensionMismatch, NonFinite, SingularGram
from .spectrum import GramSpectrum, SchattenIndex, filtered_gram_eigvals, gram_spectrum

__all__ = [
    "BiasBound",
    "FittedModel",
    "alpha_to_bias_bound",
    "bias_bound_to_alpha",
    "estimator_operator",
    "fit",
    "fit_from_spectrum",
    "operator_diagnostics",
    "predict",
]


@dataclass(frozen=True)
class BiasBound:
    """Budget C on the Schatten-p norm of the bias operator LX - I."""

    value: float

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("bias bound must be nonnegative")


@dataclass(frozen=True)
class FittedModel:
    p: SchattenIndex
    alpha: float
    beta_hat: np.ndarray
    spectrum: GramSpectrum

    def __post_init__(self):
        if not np.all(np.isfinite(self.beta_hat)):
            raise NonFinite("beta_hat is not finite")


def _inverse_filter_weights(
    spectrum: GramSpectrum,
    p: SchattenIndex,
    alpha: float,
    strict: bool = False,
) -> np.ndarray:
    """Per-eigenvalue weights 1/f_alpha(sigma^2), with rank-deficient handling.

    Eigenvalues below the rank tolerance are treated as exactly zero.  For
    p in {1, 2} a zero eigenvalue maps to the filter value alpha (pseudo-
    inverse-like when alpha = 0); for p = inf it stays zero, so the model is
    min-norm OLS scaled by 1/(1 + alpha), unless strict mode raises instead.
    """
    s = spectrum.eigvals
    tol = spectrum.rank_tol
    null = s <= tol
    if p is SchattenIndex.SPECTRAL and np.any(null) and strict:
        raise SingularGram(
            "spectral estimator requires full-rank G in strict mode"
        )
    f = filtered_gram_eigvals(spectrum, p, alpha)
    w = np.zeros_like(f)
    pos = f > tol
    w[pos] = 1.0 / f[pos]
    return w


def fit(
    X: np.ndarray,
    Y: np.ndarray,
    p: SchattenIndex,
    alpha: float,
    strict: bool = False,
) -> FittedModel:
    """Fit the p-bias-constrained estimator at regularization strength alpha."""
    return fit_from_spectrum(gram_spectrum(X, Y), p, alpha, strict=strict)


def fit_from_spectrum(
    spectrum: GramSpectrum,
    p: SchattenIndex,
    alpha: float,
    strict: bool = False,
) -> FittedModel:
    """Fit from a precomputed spectrum (with cached X^T Y); cheap along an
    alpha path since the eigendecomposition is reused."""
    if spectrum.xty is None:
        raise ValueError("spectrum must carry X^T Y; build it via gram_spectrum(X, Y)")
    if np.isinf(alpha):
        beta = np.zeros(spectrum.n_feat)
    else:
        if alpha < 0:
            raise ValueError("alpha must be nonnegative")
        w = _inverse_filter_weights(spectrum, p, alpha, strict=strict)
        U = spectrum.eigvecs
        beta = U @ (w * (U.T @ spectrum.xty))
    return FittedModel(p=p, alpha=float(alpha), beta_hat=beta, spectrum=spectrum)


def predict(model: FittedModel, X_test: np.ndarray) -> np.ndarray:
    X_test = np.asarray(X_test, dtype=float)
    if X_test.ndim != 2 or X_test.shape[1] != model.beta_hat.shape[0]:
        raise DimensionMismatch(
            f"X_test has {X_test.shape[-1]} columns, model has "
            f"{model.beta_hat.shape[0]} features"
        )
    return X_test @ model.beta_hat


def estimator_operator(
    X: np.ndarray, p: SchattenIndex, alpha: float, strict: bool = False
) -> np.ndarray:
    """The (d, N) matrix L with beta-hat = L Y, i.e. L = G-hat^{-1} X^T."""
    X = np.asarray(X, dtype=float)
    spectrum = gram_spectrum(X)
    if np.isinf(alpha):
        return np.zeros((spectrum.n_feat, spectrum.n_obs))
    w = _inverse_filter_weights(spectrum, p, alpha, strict=strict)
    U = spectrum.eigvecs
    return (U * w) @ U.T @ X.T


def operator_diagnostics(
    L: np.ndarray, X: np.ndarray, p: SchattenIndex
) -> tuple[float, float]:
    """(Schatten-p norm of LX - I, Tr(L L^T) / 2) for a candidate operator."""
    L = np.asarray(L, dtype=float)
    X = np.asarray(X, dtype=float)
    if L.shape[1] != X.shape[0] or L.shape[0] != X.shape[1]:
        raise DimensionMismatch(f"L {L.shape} incompatible with X {X.shape}")
    d = X.shape[1]
    B = L @ X - np.eye(d)
    sv = np.linalg.svd(B, compute_uv=False)
    if p is SchattenIndex.NUCLEAR:
        bias_norm = float(np.sum(sv))
    elif p is SchattenIndex.FROBENIUS:
        bias_norm = float(np.sqrt(np.sum(sv**2)))
    else:
        bias_norm = float(sv[0]) if sv.size else 0.0
    variance_trace = float(np.sum(L * L) / 2.0)
    return bias_norm, variance_trace


def alpha_to_bias_bound(
    spectrum: GramSpectrum, p: SchattenIndex, alpha: float
) -> BiasBound:
    """Bias norm C attained by the estimator at strength alpha.

    Monotone nondecreasing in alpha, saturating at d**(1/p) as alpha -> inf.
    """
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    d = spectrum.n_feat
    if np.isinf(alpha):
        return BiasBound(p.identity_norm(d))
    s = spectrum.eigvals
    if p is SchattenIndex.NUCLEAR:
        if alpha == 0:
            return BiasBound(0.0)
        below = s < alpha
        return BiasBound(float(np.sum(1.0 - s[below] / alpha)))
    if p is SchattenIndex.FROBENIUS:
        return BiasBound(float(np.sqrt(np.sum((alpha / (s + alpha)) ** 2))))
    return BiasBound(alpha / (1.0 + alpha))


def bias_bound_to_alpha(
    spectrum: GramSpectrum, p: SchattenIndex, C: BiasBound | float
) -> float:
    """Invert the alpha -> C map; returns inf when C >= d**(1/p).

    The map is continuous and strictly increasing below its supremum, so a
    doubling bracket plus Brent root-finding pins alpha to ~1e-12 relative.
    """
    c = C.value if isinstance(C, BiasBound) else float(C)
    if c < 0:
        raise ValueError("C must be nonnegative")
    d = spectrum.n_feat
    if c >= p.identity_norm(d):
        return np.inf
    if c == 0:
        return 0.0
    if p is SchattenIndex.SPECTRAL:
        return c / (1.0 - c)

    def gap(a: float) -> float:
        return alpha_to_bias_bound(spectrum, p, a).value - c

    hi = max(float(spectrum.eigvals[0]), 1.0)
    while gap(hi) < 0:
        hi *= 2.0
    return float(brentq(gap, 0.0, hi, rtol=1e-12, xtol=1e-30, maxiter=300))
