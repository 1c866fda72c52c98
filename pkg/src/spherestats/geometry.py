"""Unit vectors, axes, polar conversions and the Lambert equal-area projection.

Directions are plain 1-d float arrays of unit norm; an axis is a direction
whose first component of magnitude above ``SIGN_TOL`` is positive.  Most
functions also accept a stack of vectors as an ``(n, q)`` array.
"""

from typing import NamedTuple

import numpy as np

from .errors import (
    AngleOutOfRange,
    BadDimension,
    DimensionMismatch,
    NormTolerance,
    WrongHemisphere,
    ZeroVector,
)

ZERO_TOL = 1e-12
SIGN_TOL = 1e-12
# recorded data may drift this far from unit norm and is renormalized
INGEST_NORM_TOL = 1e-6

CONVENTIONS = ("angle-2d", "lonlat-3d", "declination-inclination-3d")


def normalize(v):
    """Return ``v / |v|``.

    Raises
    ------
    ZeroVector
        If ``|v| <= 1e-12``.
    """
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise DimensionMismatch(f"expected a 1-d vector, got shape {v.shape}")
    if v.size < 2:
        raise BadDimension(f"directions need q >= 2, got q = {v.size}")
    norm = np.linalg.norm(v)
    if not norm > ZERO_TOL:
        raise ZeroVector(f"cannot normalize vector of norm {norm:.3g}")
    return v / norm


def _first_significant_sign(X):
    # sign of the first entry per row with |x| > SIGN_TOL (0 when none)
    big = np.abs(X) > SIGN_TOL
    first = np.argmax(big, axis=-1)
    lead = np.take_along_axis(X, first[..., None], axis=-1)[..., 0]
    return np.where(big.any(axis=-1), np.sign(lead), 0.0)


def canonicalize_axis(v):
    """Unit representative of the axis through ``v``, first significant entry positive."""
    d = normalize(v)
    if _first_significant_sign(d) < 0:
        d = -d
    return d


def canonicalize_axes(X):
    """Row-wise :func:`canonicalize_axis` for an ``(n, q)`` array of unit vectors."""
    X = np.asarray(X, dtype=float)
    sign = _first_significant_sign(X)
    if np.any(sign == 0):
        raise ZeroVector("axis array contains a zero row")
    return X * sign[:, None]


def unit_rows(X, tol=INGEST_NORM_TOL):
    """Renormalize rows whose norm is within ``tol`` of one.

    Rows further from unit norm raise :class:`NormTolerance` naming the
    (0-based) row index.
    """
    X = np.array(X, dtype=float, copy=True)
    if X.ndim != 2:
        raise DimensionMismatch(f"expected an (n, q) array, got shape {X.shape}")
    norms = np.linalg.norm(X, axis=1)
    bad = np.flatnonzero(~(np.abs(norms - 1.0) <= tol))
    if bad.size:
        raise NormTolerance(int(bad[0]), float(norms[bad[0]]))
    return X / norms[:, None]


class PolarRecord(NamedTuple):
    """Angles in degrees under one of :data:`CONVENTIONS`.

    ``angle-2d`` holds ``(theta,)``; ``lonlat-3d`` holds ``(lon, lat)``;
    ``declination-inclination-3d`` holds ``(dec, inc)`` with declination
    clockwise from north and inclination positive downward.
    """

    convention: str
    angles: tuple


def _check_range(name, value, lo, hi, hi_open=False):
    ok = lo <= value < hi if hi_open else lo <= value <= hi
    if not (np.isfinite(value) and ok):
        bracket = ")" if hi_open else "]"
        raise AngleOutOfRange(f"{name} = {value} outside [{lo}, {hi}{bracket}")


def polar_to_cartesian(rec):
    """Convert a :class:`PolarRecord` to a unit vector.

    ``declination-inclination-3d`` maps to (north, east, down) coordinates
    ``(cos inc cos dec, cos inc sin dec, sin inc)``.
    """
    conv, angles = rec.convention, tuple(rec.angles)
    if conv == "angle-2d":
        if len(angles) != 1:
            raise DimensionMismatch("angle-2d takes a single angle")
        (theta,) = angles
        _check_range("theta", theta, -360.0, 360.0)
        t = np.radians(theta)
        return np.array([np.cos(t), np.sin(t)])
    if conv not in CONVENTIONS:
        raise ValueError(f"unknown convention {conv!r}")
    if len(angles) != 2:
        raise DimensionMismatch(f"{conv} takes two angles")
    if conv == "lonlat-3d":
        lon, lat = angles
        _check_range("lon", lon, -180.0, 360.0)
        _check_range("lat", lat, -90.0, 90.0)
    else:
        lon, lat = angles
        _check_range("dec", lon, 0.0, 360.0, hi_open=True)
        _check_range("inc", lat, -90.0, 90.0)
    a, b = np.radians(lon), np.radians(lat)
    return np.array([np.cos(b) * np.cos(a), np.cos(b) * np.sin(a), np.sin(b)])


def cartesian_to_polar(d, convention):
    """Inverse of :func:`polar_to_cartesian`.

    Longitudes are returned in (-180, 180], declinations in [0, 360).
    At the poles the azimuth is reported as 0.
    """
    d = np.asarray(d, dtype=float)
    if convention == "angle-2d":
        if d.shape != (2,):
            raise DimensionMismatch(f"angle-2d needs q = 2, got shape {d.shape}")
        return PolarRecord(convention, (float(np.degrees(np.arctan2(d[1], d[0]))),))
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    if d.shape != (3,):
        raise DimensionMismatch(f"{convention} needs q = 3, got shape {d.shape}")
    lat = float(np.degrees(np.arcsin(np.clip(d[2], -1.0, 1.0))))
    lon = float(np.degrees(np.arctan2(d[1], d[0])))
    if convention == "declination-inclination-3d":
        lon = lon % 360.0
        if lon >= 360.0:
            lon = 0.0
    return PolarRecord(convention, (lon, lat))


def tangent_frame(pole):
    """Orthonormal ``(e1, e2)`` spanning the plane orthogonal to ``pole``.

    ``e1`` is the coordinate axis least aligned with the pole, Gram-Schmidt
    orthogonalized against it (ties go to the lowest index); ``e2 = pole x e1``.
    """
    p = normalize(pole)
    if p.shape != (3,):
        raise DimensionMismatch("the Lambert projection is defined for q = 3")
    a = np.zeros(3)
    a[np.argmin(np.abs(p))] = 1.0
    e1 = a - (a @ p) * p
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(p, e1)
    return e1, e2


def lambert_project(d, pole):
    """Lambert azimuthal equal-area projection centered at ``pole``.

    A point at angular distance theta from the pole lands at planar radius
    ``2 sin(theta / 2)``; the equator maps to the circle of radius sqrt(2).
    ``d`` may be one vector or an ``(n, 3)`` array.

    Raises
    ------
    WrongHemisphere
        If any ``d . pole < -1e-12``.
    """
    d = np.asarray(d, dtype=float)
    if d.shape[-1] != 3:
        raise DimensionMismatch("the Lambert projection is defined for q = 3")
    p = normalize(pole)
    e1, e2 = tangent_frame(p)
    c = d @ p
    if np.any(c < -ZERO_TOL):
        raise WrongHemisphere("point lies in the hemisphere opposite the pole")
    scale = np.sqrt(2.0 / (1.0 + np.maximum(c, 0.0)))
    return np.stack([scale * (d @ e1), scale * (d @ e2)], axis=-1)


def lambert_unproject(xy, pole):
    """Map planar points of radius <= sqrt(2) back to the pole's hemisphere."""
    xy = np.asarray(xy, dtype=float)
    p = normalize(pole)
    e1, e2 = tangent_frame(p)
    r2 = np.sum(xy * xy, axis=-1)
    if np.any(r2 > 2.0 + 1e-12):
        raise WrongHemisphere("planar radius beyond sqrt(2) leaves the hemisphere")
    cos_t = 1.0 - r2 / 2.0
    k = np.sqrt(np.maximum(1.0 - r2 / 4.0, 0.0))
    x, y = xy[..., 0], xy[..., 1]
    return (
        (k * x)[..., None] * e1 + (k * y)[..., None] * e2 + cos_t[..., None] * p
    )
