"""Trend estimation for time-ordered directions.

Smooth the ``(n, q)`` matrix of observed directions with a linear smoother
and push each smoothed row back onto the sphere.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BadWindow, DimensionMismatch, NotSymmetric
from .estimators import MEAN_TOL
from .samples import as_points


@dataclass(frozen=True, eq=False)
class TrendResult:
    """Fitted directions, with NaN rows where ``undefined_mask`` is set."""

    fitted: np.ndarray
    undefined_mask: np.ndarray

    def __len__(self):
        return self.fitted.shape[0]


def moving_average_weights(n, window):
    """Row-normalized centered moving-average matrix, truncated at the ends.

    Rows near the boundary average over fewer neighbors, so the matrix is
    symmetric only away from the ends.
    """
    window = int(window)
    if window < 1 or window % 2 == 0:
        raise BadWindow(f"window must be an odd positive integer, got {window}")
    if window > n:
        raise BadWindow(f"window {window} exceeds the sample size {n}")
    h = window // 2
    i = np.arange(n)
    band = (np.abs(i[:, None] - i[None, :]) <= h).astype(float)
    return band / band.sum(axis=1, keepdims=True)


def _smooth(X, W):
    Y = W @ X
    norms = np.sqrt(np.sum(Y * Y, axis=1))
    mask = ~(norms > MEAN_TOL)
    fitted = Y / np.where(mask, 1.0, norms)[:, None]
    fitted[mask] = np.nan
    fitted.setflags(write=False)
    mask.setflags(write=False)
    return TrendResult(fitted, mask)


def linear_smoother_trend(sample, W, require_symmetric=True):
    """Normalized rows of ``W @ X``; rows of norm <= 1e-10 are masked.

    ``W`` must be an ``(n, n)`` matrix, symmetric within 1e-10 unless
    ``require_symmetric`` is False.
    """
    X = as_points(sample)
    W = np.asarray(W, dtype=float)
    n = X.shape[0]
    if W.shape != (n, n):
        raise DimensionMismatch(f"weight matrix shape {W.shape} does not match n = {n}")
    if require_symmetric and np.max(np.abs(W - W.T), initial=0.0) > 1e-10:
        raise NotSymmetric("weight matrix is not symmetric within 1e-10")
    return _smooth(X, W)


def running_mean_trend(sample, window):
    """Normalized centered running means over an odd ``window``.

    Windows are truncated at the series ends.  Equivalent to
    ``linear_smoother_trend(sample, moving_average_weights(n, window),
    require_symmetric=False)``.
    """
    X = as_points(sample)
    return _smooth(X, moving_average_weights(X.shape[0], window))
