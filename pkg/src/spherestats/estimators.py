"""Plug-in location and dispersion estimators for directions and axes.

Directional data: the resultant mean ``m = mean(x_i)``, the mean direction
``m / |m|`` and the dispersion ``2 (1 - |m|)``.  Axial data: the scatter
matrix ``M = mean(x_i x_i')``, its top eigenvector (the mean axis) and the
axial dispersion ``2 (1 - lambda_max)``.  Compact-set means project the
ordinary mean onto a constraint set.
"""

from typing import NamedTuple

import numpy as np

from .eigen import eigh_desc
from .errors import (
    DataError,
    DegenerateTopEigenvalue,
    DimensionMismatch,
    NonUniqueProjection,
    UndefinedMeanDirection,
)
from .geometry import canonicalize_axis, normalize
from .samples import as_points

# |m| at or below this leaves the mean direction undefined
MEAN_TOL = 1e-10
# minimum lambda_1 - lambda_2 for a well-defined mean axis
GAP_TOL = 1e-8


def resultant_mean(sample):
    """Mean vector ``n^-1 sum x_i`` of the sample rows."""
    return as_points(sample).mean(axis=0)


def _length(m):
    # same reduction as the batched bootstrap path, so results agree bitwise
    return np.sqrt(np.sum(m * m, axis=-1))


def _unit_or_raise(m, exc):
    r = _length(m)
    if not r > MEAN_TOL:
        raise exc(f"resultant length {r:.3g} is at or below {MEAN_TOL:g}")
    return m / r


def mean_direction(sample):
    """Sample mean direction ``m / |m|``.

    Raises
    ------
    UndefinedMeanDirection
        When ``|m| <= 1e-10``; every unit vector then minimizes the mean
        squared distance, so no single answer is returned.
    """
    return _unit_or_raise(resultant_mean(sample), UndefinedMeanDirection)


def directional_dispersion(sample):
    """``2 (1 - |m|)``, in [0, 2]; the minimum of ``mean |x_i - mu|^2`` over unit mu."""
    return 2.0 * (1.0 - _length(resultant_mean(sample)))


def scatter_matrix(sample):
    """``n^-1 sum x_i x_i'`` as a symmetric ``(q, q)`` array with unit trace."""
    X = as_points(sample)
    return np.einsum("ni,nj->ij", X, X) / X.shape[0]


class AxialLocation(NamedTuple):
    axis: np.ndarray
    lambda_max: float
    eigen_gap: float


def axial_location(M):
    """Top eigenpair of a scatter matrix, without the uniqueness check."""
    w, V = eigh_desc(M)
    return AxialLocation(canonicalize_axis(V[:, 0]), float(w[0]), float(w[0] - w[1]))


def mean_axis(sample):
    """Mean axis: canonical top eigenvector of the scatter matrix.

    Raises
    ------
    DegenerateTopEigenvalue
        When ``lambda_1 - lambda_2 < 1e-8``.
    """
    loc = axial_location(scatter_matrix(sample))
    if loc.eigen_gap < GAP_TOL:
        raise DegenerateTopEigenvalue(
            f"top eigenvalue gap {loc.eigen_gap:.3g} is below {GAP_TOL:g}"
        )
    return loc


def axial_dispersion(sample):
    """``2 (1 - lambda_max)``.  Tied top eigenvalues are fine here."""
    w, _ = eigh_desc(scatter_matrix(sample))
    return 2.0 * (1.0 - float(w[0]))


class CompactSet:
    """A nonempty compact subset of R^q that knows its Euclidean projection."""

    def project(self, z):
        raise NotImplementedError


class Sphere(CompactSet):
    """The unit sphere; projection is radial."""

    def project(self, z):
        return _unit_or_raise(np.asarray(z, dtype=float), NonUniqueProjection)


class Hemisphere(CompactSet):
    """Closed hemisphere ``{u : |u| = 1, u . center >= 0}`` of the unit sphere."""

    def __init__(self, center):
        self.center = normalize(center)

    def project(self, z):
        z = np.asarray(z, dtype=float)
        c = self.center
        if z @ c >= 0:
            return _unit_or_raise(z, NonUniqueProjection)
        # best point lies on the boundary great sphere
        return _unit_or_raise(z - (z @ c) * c, NonUniqueProjection)


class ClosedBall(CompactSet):
    def __init__(self, radius=1.0, center=None):
        if not radius >= 0:
            raise DataError(f"ball radius must be nonnegative, got {radius}")
        self.radius = float(radius)
        self.center = None if center is None else np.asarray(center, dtype=float)

    def project(self, z):
        z = np.asarray(z, dtype=float)
        c = np.zeros_like(z) if self.center is None else self.center
        d = z - c
        r = np.sqrt(d @ d)
        if r <= self.radius:
            return z
        return c + d * (self.radius / r)


class Box(CompactSet):
    """Axis-aligned box ``[lo, hi]``; projection clamps coordinatewise."""

    def __init__(self, lo, hi):
        self.lo = np.atleast_1d(np.asarray(lo, dtype=float))
        self.hi = np.atleast_1d(np.asarray(hi, dtype=float))
        if self.lo.shape != self.hi.shape or np.any(self.lo > self.hi):
            raise DataError("box needs lo <= hi with matching shapes")

    def project(self, z):
        return np.clip(np.asarray(z, dtype=float), self.lo, self.hi)


class UserProjection(CompactSet):
    """Wraps a caller-supplied projector; idempotence is checked on each query."""

    def __init__(self, projector, tol=1e-9):
        self.projector = projector
        self.tol = tol

    def project(self, z):
        p = np.asarray(self.projector(np.asarray(z, dtype=float)), dtype=float)
        pp = np.asarray(self.projector(p), dtype=float)
        if np.max(np.abs(pp - p), initial=0.0) > self.tol:
            raise DataError("user projector is not idempotent on the queried point")
        return p


def _cloud(points):
    # point clouds may be 1-d scalars: (n,) means n points in R^1
    X = np.asarray(points, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2 or X.shape[0] < 1 or not np.all(np.isfinite(X)):
        raise DataError("expected a nonempty finite (n, q) point cloud")
    return X


def constrained_mean(points, K):
    """Projection of the sample mean onto the compact set ``K``.

    For ``K = Sphere()`` this equals :func:`mean_direction` exactly.
    ``points`` may be any finite ``(n, q)`` array, or ``(n,)`` for scalars.
    """
    if not isinstance(points, np.ndarray) and hasattr(points, "points"):
        points = points.points
    X = _cloud(points)
    mu = np.asarray(K.project(X.mean(axis=0)), dtype=float)
    if mu.shape != (X.shape[1],):
        raise DimensionMismatch(f"projection returned shape {mu.shape}")
    return mu


def constrained_dispersion(points, K):
    """``sigma^2 + |m - mu_K|^2``, the minimum over K of ``mean |x_i - mu|^2``."""
    if not isinstance(points, np.ndarray) and hasattr(points, "points"):
        points = points.points
    X = _cloud(points)
    m = X.mean(axis=0)
    mu = constrained_mean(X, K)
    sigma2 = np.mean(np.sum((X - m) ** 2, axis=1))
    return float(sigma2 + np.sum((m - mu) ** 2))
