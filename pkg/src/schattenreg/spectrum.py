"""Gram-matrix spectra and the per-eigenvalue filters of the three estimators.

All three bias-constrained estimators act on the eigendecomposition of the
Gram matrix G = X^T X.  They differ only in the scalar filter applied to the
eigenvalues: elementwise max with alpha (Nuclear, p=1), additive shift
(Ridge/Frobenius, p=2), or uniform scaling (Spectral, p=inf).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .exceptions import NonFinite

# Relative cutoff below which a Gram eigenvalue is treated as exactly zero.
EIGVAL_RTOL = 1e-12


class SchattenIndex(enum.Enum):
    """The three Schatten norms with closed-form estimators."""

    NUCLEAR = 1        # p = 1
    FROBENIUS = 2      # p = 2, recovers ridge regression
    SPECTRAL = "inf"   # p = infinity

    @property
    def p(self) -> float:
        return np.inf if self is SchattenIndex.SPECTRAL else float(self.value)

    def identity_norm(self, d: int) -> float:
        """Schatten-p norm of I_d, i.e. d**(1/p); the saturation point of C."""
        if self is SchattenIndex.SPECTRAL:
            return 1.0
        return float(d) ** (1.0 / self.p)


@dataclass(frozen=True)
class GramSpectrum:
    """Eigendecomposition of G = X^T X.

    eigvecs: orthogonal (d, d) matrix, columns are eigenvectors.
    eigvals: eigenvalues of G, sorted descending, >= 0.
    """

    eigvecs: np.ndarray
    eigvals: np.ndarray
    n_obs: int
    n_feat: int
    xty: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        U, s = self.eigvecs, self.eigvals
        if not (np.all(np.isfinite(U)) and np.all(np.isfinite(s))):
            raise NonFinite("non-finite spectrum")
        if np.any(s[:-1] < s[1:]):
            raise ValueError("eigvals must be sorted descending")
        if np.any(s < 0):
            raise ValueError("eigvals must be nonnegative")
        if not np.allclose(U.T @ U, np.eye(self.n_feat), atol=1e-10):
            raise ValueError("eigvecs must be orthogonal")

    @property
    def rank_tol(self) -> float:
        top = self.eigvals[0] if self.eigvals.size else 0.0
        return EIGVAL_RTOL * max(top, 1.0)

    @property
    def rank(self) -> int:
        return int(np.sum(self.eigvals > self.rank_tol))


def gram_spectrum(X: np.ndarray, Y: np.ndarray | None = None) -> GramSpectrum:
    """Eigendecompose X^T X, caching X^T Y when targets are supplied."""
    X = np.asarray(X, dtype=float)
    if not np.all(np.isfinite(X)):
        raise NonFinite("X contains NaN or Inf")
    N, d = X.shape
    w, U = np.linalg.eigh(X.T @ X)
    order = np.argsort(w)[::-1]
    w = np.clip(w[order], 0.0, None)
    U = U[:, order]
    xty = None
    if Y is not None:
        Y = np.asarray(Y, dtype=float)
        if not np.all(np.isfinite(Y)):
            raise NonFinite("Y contains NaN or Inf")
        xty = X.T @ Y
    return GramSpectrum(eigvecs=U, eigvals=w, n_obs=N, n_feat=d, xty=xty)


def filtered_gram_eigvals(
    spectrum: GramSpectrum, p: SchattenIndex, alpha: float
) -> np.ndarray:
    """Eigenvalues of the regularized Gram matrix G-hat.

    Nuclear clips from below at alpha, Frobenius shifts by alpha, Spectral
    scales by (1 + alpha).  The output dominates the input elementwise, so
    G-hat >= G in the PSD order for every alpha >= 0.
    """
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    s = spectrum.eigvals
    if p is SchattenIndex.NUCLEAR:
        return np.maximum(s, alpha)
    if p is SchattenIndex.FROBENIUS:
        return s + alpha
    return (1.0 + alpha) * s
