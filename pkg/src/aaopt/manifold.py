"""Active-manifold monitoring: sign/activity patterns and when they freeze."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .prox import BoxBounds

__all__ = ["pattern_of", "identification_iter", "support_size"]


def pattern_of(
    x: np.ndarray, zero_tol: float = 1e-9, bounds: BoxBounds | None = None
) -> np.ndarray:
    """Coordinatewise pattern as an int8 vector.

    Without bounds: -1 / 0 / +1 for negative / (within zero_tol of) zero /
    positive.  With bounds: -1 at the lower bound, +1 at the upper bound
    (within zero_tol; lower checked first), 0 in the interior.
    """
    if zero_tol < 0:
        raise ValueError("pattern_of: zero_tol must be nonnegative")
    x = np.asarray(x, dtype=float)
    if bounds is None:
        out = np.sign(x).astype(np.int8)
        out[np.abs(x) <= zero_tol] = 0
        return out
    lo = np.broadcast_to(np.asarray(bounds.lower, dtype=float), x.shape)
    hi = np.broadcast_to(np.asarray(bounds.upper, dtype=float), x.shape)
    out = np.zeros(x.shape, dtype=np.int8)
    at_upper = np.isfinite(hi) & (x >= hi - zero_tol)
    at_lower = np.isfinite(lo) & (x <= lo + zero_tol)
    out[at_upper] = 1
    out[at_lower] = -1  # lower wins when a degenerate box pins both
    return out


def identification_iter(patterns: Sequence[np.ndarray], window: int = 10) -> int | None:
    """First index k whose next ``window`` patterns all equal the final one.

    Returns None when no such run exists (including sequences shorter than
    the window).
    """
    if window < 1:
        raise ValueError("identification_iter: window must be >= 1")
    n = len(patterns)
    if n < window:
        return None
    final = np.asarray(patterns[-1])
    stable = [bool(np.array_equal(np.asarray(q), final)) for q in patterns]
    for k in range(n - window + 1):
        if all(stable[k : k + window]):
            return k
    return None


def support_size(pattern: np.ndarray) -> int:
    """Number of coordinates off the pattern's zero/interior symbol."""
    return int(np.count_nonzero(np.asarray(pattern)))
