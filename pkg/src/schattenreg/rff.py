"""Random Fourier features and the synthetic nonlinear regression target.

The feature map phi(x) = sqrt(2/d_rbf) cos(W x + b) with Gaussian W and
uniform phases approximates the Gaussian kernel exp(-bandwidth ||x - y||^2).
The nonlinear target is a fixed random cosine series with 1/k^2 decay, so it
is bounded by pi^2/6 and lives just outside the span of any finite feature
set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ensembles import Dataset

__all__ = ["NonlinearTarget", "RFFMap", "apply_rff", "eval_target",
           "make_rff_dataset", "sample_nonlinear_target", "sample_rff_map"]


@dataclass(frozen=True)
class RFFMap:
    weights: np.ndarray  # (d_rbf, d)
    offsets: np.ndarray  # (d_rbf,) in [0, 2 pi)
    bandwidth: float
    seed: int


@dataclass(frozen=True)
class NonlinearTarget:
    """f(x) = sum_k cos(2 pi k <x, v_k>) / k^2 with unit directions v_k."""

    directions: np.ndarray  # (n_terms, d), unit rows

    def __post_init__(self):
        norms = np.linalg.norm(self.directions, axis=1)
        if not np.allclose(norms, 1.0, atol=1e-12):
            raise ValueError("target directions must be unit vectors")


def sample_rff_map(d: int, d_rbf: int, bandwidth: float = 1.0, seed: int = 0) -> RFFMap:
    if d < 1 or d_rbf < 1:
        raise ValueError("d and d_rbf must be >= 1")
    if bandwidth <= 0:
        raise ValueError("bandwidth must be positive")
    rng = np.random.default_rng(seed)
    # w ~ N(0, 2 * bandwidth * I) makes E cos(w . (x-y)) = exp(-bandwidth |x-y|^2).
    W = rng.standard_normal((d_rbf, d)) * np.sqrt(2.0 * bandwidth)
    b = rng.uniform(0.0, 2.0 * np.pi, size=d_rbf)
    return RFFMap(weights=W, offsets=b, bandwidth=bandwidth, seed=seed)


def apply_rff(rff: RFFMap, X: np.ndarray) -> np.ndarray:
    """Map raw rows to cosine features; entries bounded by sqrt(2/d_rbf)."""
    d_rbf = rff.weights.shape[0]
    return np.sqrt(2.0 / d_rbf) * np.cos(X @ rff.weights.T + rff.offsets)


def sample_nonlinear_target(d: int, n_terms: int, rng: np.random.Generator) -> NonlinearTarget:
    v = rng.standard_normal((n_terms, d))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return NonlinearTarget(directions=v)


def eval_target(target: NonlinearTarget, x: np.ndarray) -> np.ndarray | float:
    """Evaluate the cosine series at one point (1-d x) or row-wise (2-d x)."""
    x = np.asarray(x, dtype=float)
    k = np.arange(1, target.directions.shape[0] + 1)
    proj = np.atleast_2d(x) @ target.directions.T
    vals = np.sum(np.cos(2.0 * np.pi * k * proj) / k**2, axis=1)
    return vals if x.ndim == 2 else float(vals[0])


def make_rff_dataset(
    d: int,
    d_rbf: int,
    n_obs: int,
    n_test: int,
    sigma: float,
    bandwidth: float = 1.0,
    seed: int = 0,
) -> Dataset:
    """Dataset in RFF feature space: raw Gaussian inputs with entry variance
    1/d_rbf, targets from the nonlinear cosine series (noiseless on test),
    and the identical feature map applied to train and test."""
    rng = np.random.default_rng(seed)
    scale = 1.0 / np.sqrt(d_rbf)
    raw_tr = rng.standard_normal((n_obs, d)) * scale
    raw_te = rng.standard_normal((n_test, d)) * scale
    target = sample_nonlinear_target(d, d_rbf, rng)
    rff = sample_rff_map(d, d_rbf, bandwidth, seed=int(rng.integers(2**31)))
    Y_tr = eval_target(target, raw_tr) + sigma * rng.standard_normal(n_obs)
    Y_te = eval_target(target, raw_te)
    return Dataset(
        X_tr=apply_rff(rff, raw_tr),
        Y_tr=Y_tr,
        X_te=apply_rff(rff, raw_te),
        Y_te=Y_te,
        beta0=None,  # no linear ground truth exists in feature space
        seed=seed,
    )
