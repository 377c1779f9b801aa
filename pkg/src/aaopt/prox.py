"""Proximal operators and projections used by the fixed-point algorithms."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .linalg import cg_solve_spd, matvec

__all__ = [
    "BoxBounds",
    "soft_threshold",
    "weighted_soft_threshold",
    "box_project",
    "nonneg_project",
    "prox_quadratic_ls",
]


@dataclass(frozen=True)
class BoxBounds:
    """Elementwise bounds l <= x <= u; entries may be infinite."""

    lower: np.ndarray | float
    upper: np.ndarray | float

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=float)
        hi = np.asarray(self.upper, dtype=float)
        if np.any(lo > hi):
            raise ValueError("BoxBounds: lower exceeds upper somewhere")


def _shrink(v: np.ndarray, thresh) -> np.ndarray:
    # three-branch shrinkage; ties |v| == thresh map to exactly 0
    return np.where(v > thresh, v - thresh, np.where(v < -thresh, v + thresh, 0.0))


def soft_threshold(v: np.ndarray, t: float) -> np.ndarray:
    """sign(v) * max(|v| - t, 0), i.e. the prox of t * ||.||_1."""
    if t < 0:
        raise ValueError("soft_threshold: threshold must be nonnegative")
    return _shrink(np.asarray(v, dtype=float), t)


def weighted_soft_threshold(v: np.ndarray, w: np.ndarray, s: float) -> np.ndarray:
    """Coordinatewise shrinkage with per-coordinate thresholds s * w_i.

    Minimizes 0.5*(t - v_i)^2 + s*w_i*|t| in each coordinate; the three cases
    are v_i - s*w_i above, v_i + s*w_i below, 0 in between (ties to 0).
    """
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    if s < 0:
        raise ValueError("weighted_soft_threshold: scale must be nonnegative")
    if np.any(w < 0):
        raise ValueError("weighted_soft_threshold: weights must be nonnegative")
    if w.shape != v.shape:
        raise ValueError("weighted_soft_threshold: weight shape %s != input shape %s" % (w.shape, v.shape))
    return _shrink(v, s * w)


def box_project(v: np.ndarray, bounds: BoxBounds) -> np.ndarray:
    """Euclidean projection onto the box."""
    return np.clip(np.asarray(v, dtype=float), bounds.lower, bounds.upper)


def nonneg_project(v: np.ndarray) -> np.ndarray:
    """Projection onto the nonnegative orthant."""
    return np.maximum(np.asarray(v, dtype=float), 0.0)


def prox_quadratic_ls(
    A,
    y: np.ndarray,
    lam: float,
    scale_m: float,
    beta: float,
    z: np.ndarray,
    tol: float = 1e-12,
    max_iter: int | None = None,
) -> np.ndarray:
    """Prox of f(x) = ||A x - y||^2 / (2*scale_m) + lam*||x||^2 at z, step beta.

    Solves the SPD system (I/beta + A.T A/scale_m + 2*lam*I) x = z/beta +
    A.T y/scale_m with conjugate gradients.  The returned x satisfies the
    first-order condition ||grad f(x) + (x - z)/beta|| <= tol * (1 + ||z||)
    unless CG hits its iteration cap, in which case a RuntimeWarning is
    emitted and the best iterate is returned.
    """
    if beta <= 0:
        raise ValueError("prox_quadratic_ls: beta must be positive")
    if scale_m <= 0:
        raise ValueError("prox_quadratic_ls: scale_m must be positive")
    z = np.asarray(z, dtype=float)
    rhs = z / beta + matvec(A, np.asarray(y, dtype=float), transpose=True) / scale_m

    def apply(v: np.ndarray) -> np.ndarray:
        return v / beta + matvec(A, matvec(A, v), transpose=True) / scale_m + 2.0 * lam * v

    nrhs = float(np.linalg.norm(rhs))
    if nrhs == 0.0:
        return np.zeros_like(z)
    # CG stops on ||S x - rhs|| <= tol_cg * ||rhs||; S x - rhs is exactly the
    # first-order residual grad f(x) + (x - z)/beta, so rescale the target.
    tol_cg = tol * (1.0 + float(np.linalg.norm(z))) / nrhs
    if max_iter is None:
        max_iter = max(200, 2 * z.shape[0])
    result = cg_solve_spd(apply, rhs, tol=tol_cg, max_iter=max_iter)
    if not result.converged:
        warnings.warn(
            "prox_quadratic_ls: CG stopped at %d iterations with residual %.3e"
            % (result.iterations, result.residual_norm),
            RuntimeWarning,
        )
    return result.x
