"""Equal-area (Lambert) stereonet plots rendered as standalone SVG.

The primitive circle is the equator relative to the pole, projected radius
sqrt(2).  Points in the pole's hemisphere are drawn solid; points in the
opposite hemisphere are drawn hollow at the projection of their antipode.
"""

import math

import numpy as np

from .bootstrap import Cone, DoubleCone
from .errors import DimensionMismatch
from .geometry import lambert_project, normalize, tangent_frame
from .samples import as_points

SIZE = 400
MARGIN = 20
R_EQUATOR = math.sqrt(2.0)


def _xy(p):
    # planar (x, y) to SVG pixels; y grows downward in SVG
    scale = (SIZE / 2 - MARGIN) / R_EQUATOR
    return SIZE / 2 + scale * p[0], SIZE / 2 - scale * p[1]


def _fmt(v):
    return f"{v:.3f}"


def _split_hemispheres(X, pole):
    up = X @ pole >= 0
    return lambert_project(X[up], pole), lambert_project(-X[~up], pole)


def cone_boundary(apex, half_angle, m=361):
    """``m`` points on the sphere at angle ``half_angle`` from ``apex``."""
    a = normalize(apex)
    u, v = tangent_frame(a)
    phi = np.linspace(0.0, 2.0 * math.pi, m)
    ring = np.cos(phi)[:, None] * u + np.sin(phi)[:, None] * v
    return math.cos(half_angle) * a + math.sin(half_angle) * ring


def _boundary_paths(apex, half_angle, pole):
    """Polylines of the projected cone boundary, split where it crosses the
    equator; returns ``(points, lower)`` pairs."""
    ring = cone_boundary(apex, half_angle)
    up = ring @ pole >= 0
    paths = []
    start = 0
    for i in range(1, len(ring) + 1):
        if i == len(ring) or up[i] != up[start]:
            seg = ring[start:i]
            if len(seg) > 1:
                proj = lambert_project(seg if up[start] else -seg, pole)
                paths.append((proj, not up[start]))
            start = i
    return paths


def render_lambert(sample, summary=None, pole=(0.0, 0.0, 1.0)):
    """SVG text of an equal-area plot of ``sample`` about ``pole``.

    ``summary`` may be a :class:`~spherestats.bootstrap.Cone` or
    :class:`~spherestats.bootstrap.DoubleCone`; its apex is marked and its
    boundary drawn (nothing but the marker when the half-angle is 0).
    """
    X = as_points(sample)
    if X.shape[1] != 3:
        raise DimensionMismatch("Lambert plots need q = 3")
    pole = normalize(pole)
    cx, cy = _xy((0.0, 0.0))
    radius = _xy((R_EQUATOR, 0.0))[0] - cx
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<circle class="equator" cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(radius)}" '
        'fill="none" stroke="black" stroke-width="1"/>',
        f'<path class="pole" d="M{_fmt(cx - 4)},{_fmt(cy)}H{_fmt(cx + 4)}'
        f'M{_fmt(cx)},{_fmt(cy - 4)}V{_fmt(cy + 4)}" stroke="gray"/>',
    ]
    upper, lower = _split_hemispheres(X, pole)
    for p in upper:
        x, y = _xy(p)
        out.append(f'<circle class="upper" cx="{_fmt(x)}" cy="{_fmt(y)}" r="2.5" fill="black"/>')
    for p in lower:
        x, y = _xy(p)
        out.append(
            f'<circle class="lower" cx="{_fmt(x)}" cy="{_fmt(y)}" r="2.5" '
            'fill="none" stroke="black"/>'
        )
    if summary is not None:
        if isinstance(summary, Cone):
            apexes = [summary.apex]
        elif isinstance(summary, DoubleCone):
            apexes = [summary.axis, -summary.axis]
        else:
            raise TypeError("summary must be a Cone or DoubleCone")
        for a in apexes:
            if a @ pole < 0 and isinstance(summary, DoubleCone):
                continue
            p = lambert_project(a if a @ pole >= 0 else -a, pole)
            x, y = _xy(p)
            out.append(
                f'<path class="estimate" d="M{_fmt(x - 5)},{_fmt(y - 5)}L{_fmt(x + 5)},{_fmt(y + 5)}'
                f'M{_fmt(x - 5)},{_fmt(y + 5)}L{_fmt(x + 5)},{_fmt(y - 5)}" stroke="red" stroke-width="2"/>'
            )
            if summary.half_angle > 0:
                for proj, is_lower in _boundary_paths(a, summary.half_angle, pole):
                    pts = " ".join(f"{_fmt(px)},{_fmt(py)}" for px, py in map(_xy, proj))
                    dash = ' stroke-dasharray="4,3"' if is_lower else ""
                    out.append(
                        f'<polyline class="cone" points="{pts}" fill="none" stroke="red"{dash}/>'
                    )
    out.append("</svg>")
    return "\n".join(out) + "\n"
