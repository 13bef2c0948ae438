"""Loss-basin geometry of error-vs-alpha curves.

The interesting quantity for cross-validation is not just how deep the
minimum of Err(alpha) is but how sharp: with a finite search over alpha the
expected achieved minimum is penalized by the curvature at the bottom of the
basin.  This module measures both and evaluates the closed-form penalty for
the idealized parabola model, together with its Monte-Carlo oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .exceptions import DegenerateFit

__all__ = [
    "BasinGeometry",
    "GeometryCell",
    "GeometryTable",
    "default_alpha_grid",
    "expected_cv_minimum",
    "geometry_table",
    "locate_min_and_curvature",
    "monte_carlo_parabola_min",
]

# 500 points, logarithmically spaced over [1e-3, 1e5].
DEFAULT_GRID_LO = 1e-3
DEFAULT_GRID_HI = 1e5
DEFAULT_GRID_N = 500
FIT_HALF_WINDOW = 5


def default_alpha_grid(
    lo: float = DEFAULT_GRID_LO, hi: float = DEFAULT_GRID_HI, n: int = DEFAULT_GRID_N
) -> np.ndarray:
    return np.logspace(np.log10(lo), np.log10(hi), n)


@dataclass(frozen=True)
class BasinGeometry:
    alpha_min: float
    err_min: float
    curvature: float  # Hessian of Err w.r.t. alpha at the minimum
    edge_minimum: bool = False  # argmin within the fit window of a grid edge

    @property
    def kappa(self) -> float:
        return float(np.sqrt(max(self.curvature, 0.0)))


def locate_min_and_curvature(
    curve_fn: Callable[[float], float] | None,
    grid: np.ndarray | None = None,
    values: np.ndarray | None = None,
) -> BasinGeometry:
    """Grid argmin plus curvature from a quadratic fit on an 11-point window.

    The quadratic is fit in alpha on the linear scale, centered at the grid
    argmin; the estimated Hessian is twice the quadratic coefficient.  Edge
    minima use a one-sided window and are flagged.
    """
    grid = default_alpha_grid() if grid is None else np.asarray(grid, dtype=float)
    if values is None:
        values = np.array([curve_fn(a) for a in grid])
    else:
        values = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise ValueError("curve values must be finite on the grid")
    i0 = int(np.argmin(values))
    lo = max(i0 - FIT_HALF_WINDOW, 0)
    hi = min(i0 + FIT_HALF_WINDOW, len(grid) - 1)
    edge = (i0 - FIT_HALF_WINDOW < 0) or (i0 + FIT_HALF_WINDOW > len(grid) - 1)
    x = grid[lo : hi + 1] - grid[i0]
    y = values[lo : hi + 1] - values[i0]
    if len(np.unique(x)) < 3:
        raise DegenerateFit("need at least 3 distinct grid points around the minimum")
    coeffs = np.polyfit(x, y, 2)
    return BasinGeometry(
        alpha_min=float(grid[i0]),
        err_min=float(values[i0]),
        curvature=float(2.0 * coeffs[0]),
        edge_minimum=edge,
    )


def expected_cv_minimum(mu: float, kappa: float, delta: float, n: int) -> float:
    """Expected achieved minimum of kappa^2 x^2 / 2 + mu over n uniform draws
    on [-delta, delta]: mu + (kappa delta)^2 / ((n+1)(n+2))."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if delta <= 0:
        raise ValueError("delta must be positive")
    return mu + (kappa * delta) ** 2 / ((n + 1) * (n + 2))


def monte_carlo_parabola_min(
    mu: float,
    kappa: float,
    delta: float,
    n: int,
    reps: int = 100_000,
    seed: int = 0,
) -> tuple[float, float]:
    """Monte-Carlo oracle for expected_cv_minimum: (mean, standard error)."""
    if reps < 1000:
        raise ValueError("reps must be >= 1000")
    rng = np.random.default_rng(seed)
    x = rng.uniform(-delta, delta, size=(reps, n))
    mins = (kappa * kappa * np.min(x * x, axis=1) / 2.0) + mu
    return float(np.mean(mins)), float(np.std(mins, ddof=1) / np.sqrt(reps))


@dataclass(frozen=True)
class GeometryCell:
    estimator: str
    sigma: float
    shape_param: float  # lam for spherical, gamma for diagonal
    depth_pct: float  # percent increase of min error vs Ridge
    curvature_pct: float  # percent increase of kappa vs Ridge
    edge_minimum: bool


@dataclass(frozen=True)
class GeometryTable:
    ensemble: str
    cells: Sequence[GeometryCell]


def geometry_table(
    curve_fns: dict[tuple[str, float, float], Callable[[float], float]],
    ensemble: str,
    grid: np.ndarray | None = None,
    base: str = "ridge",
) -> GeometryTable:
    """Depth / curvature percent increases relative to the Ridge estimator.

    curve_fns maps (estimator_name, sigma, shape_param) -> Err(alpha); every
    (sigma, shape_param) pair must include the base estimator.
    """
    grid = default_alpha_grid() if grid is None else grid
    geoms = {key: locate_min_and_curvature(fn, grid) for key, fn in curve_fns.items()}
    cells = []
    for (name, sigma, shape), geom in geoms.items():
        ref = geoms[(base, sigma, shape)]
        cells.append(
            GeometryCell(
                estimator=name,
                sigma=sigma,
                shape_param=shape,
                depth_pct=100.0 * (geom.err_min / ref.err_min - 1.0),
                curvature_pct=100.0 * (geom.kappa / ref.kappa - 1.0),
                edge_minimum=geom.edge_minimum or ref.edge_minimum,
            )
        )
    return GeometryTable(ensemble=ensemble, cells=cells)
