"""Cross-validation benchmark harness.

Protocol: for each replicate dataset and each estimator, select alpha on the
training set by k-fold cross-validation over a fixed logarithmic grid, refit
on the full training set, and score on the held-out test set.  Reports
aggregate average errors and per-dataset win probabilities.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ensembles import (
    Dataset,
    DiagonalEnsembleConfig,
    EquicorrelatedConfig,
    SphericalGaussianConfig,
    child_seeds,
    empirical_mse,
    sample_diagonal,
    sample_equicorrelated,
    sample_spherical,
)
from .estimators import fit_from_spectrum, predict
from .exceptions import InsufficientData, InvalidConfig
from .rff import make_rff_dataset
from .spectrum import SchattenIndex, gram_spectrum

__all__ = [
    "AlphaGrid",
    "BenchReport",
    "CVConfig",
    "MODEL_NAMES",
    "RFFBenchConfig",
    "aggregate_wins",
    "kfold_select_alpha",
    "rff_benchmark",
    "run_benchmark",
    "sample_ensemble",
]

MODEL_NAMES = {
    SchattenIndex.NUCLEAR: "nuclear",
    SchattenIndex.FROBENIUS: "ridge",
    SchattenIndex.SPECTRAL: "spectral",
}


@dataclass(frozen=True)
class AlphaGrid:
    """Logarithmically spaced candidate regularization strengths."""

    lo: float = 1e-4
    hi: float = 1e6
    count: int = 9

    def __post_init__(self):
        if not self.lo > 0:
            raise InvalidConfig("log-spaced grid needs lo > 0")
        if not self.lo < self.hi:
            raise InvalidConfig("grid lo must be below hi")
        if self.count < 1:
            raise InvalidConfig("grid needs at least one value")

    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.lo])
        return np.logspace(np.log10(self.lo), np.log10(self.hi), self.count)


@dataclass(frozen=True)
class CVConfig:
    folds: int = 3
    grid: AlphaGrid = field(default_factory=AlphaGrid)
    models: tuple[SchattenIndex, ...] = (
        SchattenIndex.NUCLEAR,
        SchattenIndex.FROBENIUS,
        SchattenIndex.SPECTRAL,
    )
    n_datasets: int = 100
    seed: int = 0
    n_test: int = 5000

    def __post_init__(self):
        if self.folds < 2:
            raise InvalidConfig("need at least 2 folds")
        if self.n_datasets < 1:
            raise InvalidConfig("need at least one dataset")


@dataclass(frozen=True)
class BenchReport:
    models: tuple[str, ...]
    errors: np.ndarray  # (n_models, n_datasets)
    selected_alphas: np.ndarray  # (n_models, n_datasets)
    avg_error: dict[str, float]
    win_count: dict[str, int]
    win_prob: dict[str, float]
    ridge_ratio: dict[str, float] | None = None

    def to_dict(self) -> dict:
        out = {
            "models": list(self.models),
            "errors": self.errors.tolist(),
            "selected_alphas": self.selected_alphas.tolist(),
            "avg_error": self.avg_error,
            "win_count": self.win_count,
            "win_prob": self.win_prob,
        }
        if self.ridge_ratio is not None:
            out["ridge_ratio"] = self.ridge_ratio
        return out


def _fold_blocks(n: int, folds: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Contiguous blocks of a seeded shuffle; sizes differ by at most one."""
    perm = rng.permutation(n)
    return [np.asarray(b) for b in np.array_split(perm, folds)]


def kfold_select_alpha(
    X: np.ndarray,
    Y: np.ndarray,
    p: SchattenIndex,
    cfg: CVConfig,
    seed: int | None = None,
) -> float:
    """Grid alpha minimizing mean validation MSE across folds; ties break to
    the smaller alpha."""
    n = X.shape[0]
    if n < cfg.folds:
        raise InsufficientData(f"{n} observations cannot fill {cfg.folds} folds")
    rng = np.random.default_rng(cfg.seed if seed is None else seed)
    alphas = cfg.grid.values()
    scores = np.zeros((cfg.folds, len(alphas)))
    for k, val_idx in enumerate(_fold_blocks(n, cfg.folds, rng)):
        mask = np.ones(n, dtype=bool)
        mask[val_idx] = False
        spectrum = gram_spectrum(X[mask], Y[mask])
        X_val, Y_val = X[val_idx], Y[val_idx]
        for j, a in enumerate(alphas):
            model = fit_from_spectrum(spectrum, p, a)
            scores[k, j] = np.mean((predict(model, X_val) - Y_val) ** 2)
    return float(alphas[int(np.argmin(scores.mean(axis=0)))])


def sample_ensemble(config, seed: int, n_test: int) -> Dataset:
    """Dispatch a dataset draw on the ensemble config type."""
    if isinstance(config, SphericalGaussianConfig):
        return sample_spherical(config, n_test=n_test, seed=seed)
    if isinstance(config, DiagonalEnsembleConfig):
        return sample_diagonal(config, seed=seed)
    if isinstance(config, EquicorrelatedConfig):
        return sample_equicorrelated(config, n_test=n_test, seed=seed)
    raise InvalidConfig(f"unknown ensemble config type {type(config).__name__}")


def _bench_over_datasets(datasets_and_seeds, cfg: CVConfig, with_ratio: bool) -> BenchReport:
    names = tuple(MODEL_NAMES[m] for m in cfg.models)
    n_models, n_data = len(cfg.models), len(datasets_and_seeds)
    errors = np.zeros((n_models, n_data))
    alphas = np.zeros((n_models, n_data))
    for j, (ds, cv_seed) in enumerate(datasets_and_seeds):
        spectrum = gram_spectrum(ds.X_tr, ds.Y_tr)
        for i, p in enumerate(cfg.models):
            a = kfold_select_alpha(ds.X_tr, ds.Y_tr, p, cfg, seed=cv_seed)
            model = fit_from_spectrum(spectrum, p, a)
            errors[i, j] = empirical_mse(model, ds)
            alphas[i, j] = a
    winners = np.argmin(errors, axis=0)  # first index wins ties
    win_count = {name: int(np.sum(winners == i)) for i, name in enumerate(names)}
    avg_error = {name: float(errors[i].mean()) for i, name in enumerate(names)}
    ratio = None
    if with_ratio and "ridge" in names:
        ridge_avg = avg_error["ridge"]
        ratio = {name: avg_error[name] / ridge_avg for name in names}
    return BenchReport(
        models=names,
        errors=errors,
        selected_alphas=alphas,
        avg_error=avg_error,
        win_count=win_count,
        win_prob={name: win_count[name] / n_data for name in names},
        ridge_ratio=ratio,
    )


def run_benchmark(ensemble_config, cfg: CVConfig) -> BenchReport:
    """The full replicate protocol on a synthetic ensemble."""
    seeds = child_seeds(cfg.seed, 2 * cfg.n_datasets)
    pairs = []
    for j in range(cfg.n_datasets):
        ds = sample_ensemble(ensemble_config, seeds[2 * j], cfg.n_test)
        pairs.append((ds, seeds[2 * j + 1]))
    return _bench_over_datasets(pairs, cfg, with_ratio=False)


@dataclass(frozen=True)
class RFFBenchConfig:
    d: int = 10
    d_rbf: int = 100
    n_obs: int = 100
    n_test: int = 1000
    sigma: float = 1.0
    bandwidth: float = 1.0

    def __post_init__(self):
        if self.d_rbf < 1:
            raise InvalidConfig("d_rbf must be >= 1")


def rff_benchmark(rff_cfg: RFFBenchConfig, cfg: CVConfig) -> BenchReport:
    """Benchmark on RFF feature-space data; Nuclear and Ridge only by default
    (the Spectral estimator has no natural overparametrized extension), with
    the ratio-to-Ridge statistic included."""
    models = tuple(m for m in cfg.models if m is not SchattenIndex.SPECTRAL)
    cfg = CVConfig(
        folds=cfg.folds, grid=cfg.grid, models=models,
        n_datasets=cfg.n_datasets, seed=cfg.seed, n_test=cfg.n_test,
    )
    seeds = child_seeds(cfg.seed, 2 * cfg.n_datasets)
    pairs = []
    for j in range(cfg.n_datasets):
        ds = make_rff_dataset(
            rff_cfg.d, rff_cfg.d_rbf, rff_cfg.n_obs, rff_cfg.n_test,
            rff_cfg.sigma, rff_cfg.bandwidth, seed=seeds[2 * j],
        )
        pairs.append((ds, seeds[2 * j + 1]))
    return _bench_over_datasets(pairs, cfg, with_ratio=True)


def aggregate_wins(report: BenchReport) -> tuple[str, str]:
    """(model with lowest average error, modal per-dataset winner); ties go to
    the lexicographically first model name."""
    if not report.models:
        raise InvalidConfig("empty report")
    best_avg = min(sorted(report.models), key=lambda m: report.avg_error[m])
    best_mode = max(sorted(report.models), key=lambda m: report.win_count[m])
    return best_avg, best_mode
