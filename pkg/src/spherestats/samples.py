"""Immutable containers for directional and axial samples."""

from dataclasses import dataclass

import numpy as np

from .errors import BadDimension, DimensionMismatch
from .geometry import canonicalize_axes, unit_rows


def _frozen_unit_rows(points):
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.ndim != 2 or pts.shape[0] < 1:
        raise DimensionMismatch(f"expected a nonempty (n, q) array, got shape {pts.shape}")
    if pts.shape[1] < 2:
        raise BadDimension(f"directions need q >= 2, got q = {pts.shape[1]}")
    pts = unit_rows(pts)
    pts.setflags(write=False)
    return pts


@dataclass(frozen=True, eq=False)
class DirectionSample:
    """An ordered sample of unit vectors in R^q, stored as an ``(n, q)`` array.

    Rows within 1e-6 of unit norm are renormalized on construction; the
    empirical distribution puts mass 1/n on every row.
    """

    points: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "points", _frozen_unit_rows(self.points))

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def dim(self):
        return self.points.shape[1]

    def __len__(self):
        return self.n

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.points, dtype=dtype)

    @classmethod
    def _trusted(cls, points):
        obj = object.__new__(cls)
        points.setflags(write=False)
        object.__setattr__(obj, "points", points)
        return obj

    def take(self, indices):
        """Sub-sample (with repetition) by row indices; rows are copied exactly."""
        return self._trusted(self.points[np.asarray(indices)])

    def rotated(self, R):
        return type(self)(self.points @ np.asarray(R, dtype=float).T)


@dataclass(frozen=True, eq=False)
class AxisSample(DirectionSample):
    """An ordered sample of axes; each row is the canonical representative
    (first entry above 1e-12 in magnitude is positive)."""

    def __post_init__(self):
        pts = canonicalize_axes(_frozen_unit_rows(self.points))
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)


def as_points(sample):
    """``(n, q)`` float array view of a sample or array-like."""
    if isinstance(sample, DirectionSample):
        return sample.points
    X = np.asarray(sample, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[0] < 1:
        raise DimensionMismatch(f"expected a nonempty (n, q) array, got shape {X.shape}")
    return X
