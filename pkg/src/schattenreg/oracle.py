"""Numeric solver for the bias-constrained variance minimization problem.

Solves  min_L Tr(L L^T)/2  s.t.  ||L X - I||_p <= C  at desk scale, as an
independent check on the closed-form estimators.  The search is carried out
in the bias variable B = L X - I: for fixed B the minimum-variance operator
is L = (I + B) G^{-1} X^T, giving the smooth convex objective
g(B) = Tr((I + B) G^{-1} (I + B)^T)/2 over the Schatten-p ball of radius C.
Accelerated projected gradient descent with exact singular-value projections
(soft-threshold for p=1, rescale for p=2, clip for p=inf) solves it quickly.
"""

from __future__ import annotations

import numpy as np

from .estimators import BiasBound
from .exceptions import DidNotConverge
from .spectrum import SchattenIndex

__all__ = ["project_schatten_ball", "solve_bias_constrained_numeric"]


def _project_l1_simplex_abs(s: np.ndarray, radius: float) -> np.ndarray:
    """Euclidean projection of a nonnegative vector onto {x >= 0, sum x <= radius}."""
    if s.sum() <= radius:
        return s
    u = np.sort(s)[::-1]
    css = np.cumsum(u) - radius
    idx = np.arange(1, len(u) + 1)
    rho = np.max(np.nonzero(u - css / idx > 0)[0]) + 1
    theta = css[rho - 1] / rho
    return np.maximum(s - theta, 0.0)


def project_schatten_ball(B: np.ndarray, p: SchattenIndex, radius: float) -> np.ndarray:
    """Euclidean (Frobenius) projection onto the Schatten-p ball of given radius."""
    if radius == 0:
        return np.zeros_like(B)
    if p is SchattenIndex.FROBENIUS:
        nrm = np.linalg.norm(B)
        return B if nrm <= radius else B * (radius / nrm)
    U, s, Vt = np.linalg.svd(B, full_matrices=False)
    if p is SchattenIndex.NUCLEAR:
        s_proj = _project_l1_simplex_abs(s, radius)
    else:
        s_proj = np.minimum(s, radius)
    return (U * s_proj) @ Vt


def solve_bias_constrained_numeric(
    X: np.ndarray,
    C: BiasBound | float,
    p: SchattenIndex,
    max_iter: int = 20000,
    tol: float = 1e-12,
    n_restarts: int = 5,
    seed: int = 0,
) -> np.ndarray:
    """Minimize Tr(L L^T)/2 subject to ||L X - I||_p <= C; returns L (d, N).

    The problem is convex, so the 5 random restarts are a consistency check
    rather than a necessity; the best objective across restarts is returned.
    Raises DidNotConverge if no restart reaches the relative-change tolerance
    within max_iter iterations.
    """
    X = np.asarray(X, dtype=float)
    N, d = X.shape
    c = C.value if isinstance(C, BiasBound) else float(C)
    if c < 0:
        raise ValueError("C must be nonnegative")
    if c >= p.identity_norm(d):
        # Constraint set contains B = -I, i.e. L = 0, the global minimizer.
        return np.zeros((d, N))

    G = X.T @ X
    Ginv = np.linalg.inv(G)
    eigs = np.linalg.eigvalsh(Ginv)
    step = 1.0 / eigs[-1]  # 1 / Lipschitz constant of the gradient
    eye = np.eye(d)

    def objective(B: np.ndarray) -> float:
        M = eye + B
        return float(np.sum((M @ Ginv) * M) / 2.0)

    rng = np.random.default_rng(seed)
    best_B, best_obj = None, np.inf
    any_converged = False
    for restart in range(n_restarts):
        if restart == 0:
            B = project_schatten_ball(-eye, p, c)
        else:
            B = project_schatten_ball(rng.standard_normal((d, d)), p, c)
        # FISTA with projection; momentum restarts are unnecessary here.
        Z = B.copy()
        t = 1.0
        prev_obj = objective(B)
        converged = False
        for _ in range(max_iter):
            grad = (eye + Z) @ Ginv
            B_next = project_schatten_ball(Z - step * grad, p, c)
            t_next = (1.0 + np.sqrt(1.0 + 4.0 * t * t)) / 2.0
            Z = B_next + ((t - 1.0) / t_next) * (B_next - B)
            B, t = B_next, t_next
            obj = objective(B)
            if abs(prev_obj - obj) <= tol * max(1.0, abs(obj)):
                converged = True
                break
            prev_obj = obj
        obj = objective(B)
        any_converged = any_converged or converged
        if obj < best_obj:
            best_obj, best_B = obj, B
    if not any_converged:
        raise DidNotConverge(
            f"objective still changing by more than {tol} after {max_iter} iterations"
        )
    return (eye + best_B) @ Ginv @ X.T
