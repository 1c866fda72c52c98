"""
Axes: mean axis, axial dispersion and a double cone
===================================================

Axial measurements (say, poles to planes) carry no sign.  Every axis is
stored on a canonical hemisphere, and the mean axis is the top
eigenvector of the scatter matrix.
"""

import math

import numpy as np

import spherestats as ss
from spherestats.estimators import scatter_matrix

axis = np.array([0.0, 1.0, 1.0]) / math.sqrt(2.0)
raw = ss.sample_axial_vmf(axis, 6.0, 60, seed=3)

# flipping signs does not change anything once the data are axes
flipped = raw.points * np.where(np.arange(60) % 2, -1.0, 1.0)[:, None]
axes = ss.AxisSample(flipped)
assert np.allclose(axes.points, ss.AxisSample(raw.points).points)

M = scatter_matrix(axes)
print("scatter matrix trace: %.12f" % np.trace(M))

loc = ss.mean_axis(axes)
print("mean axis:", np.round(loc.axis, 4))
print("largest eigenvalue %.4f, gap to the next %.4f" % (loc.lambda_max, loc.eigen_gap))
print("axial dispersion 2(1 - lambda_max): %.4f" % ss.axial_dispersion(axes))

dc = ss.confidence_double_cone(axes, beta=0.9, B=999, seed=5)
print("double cone half-angle (deg): %.2f" % math.degrees(dc.half_angle))
print("angle from the estimate to the true axis (deg): %.2f"
      % math.degrees(math.acos(min(1.0, abs(loc.axis @ axis)))))
# a 90% set misses the truth about one time in ten, as it does here
# membership only depends on the squared inner product
print("axis inside:", dc.contains(axis), "  antipode inside:", dc.contains(-axis))

iv = ss.dispersion_interval(axes, "axial", beta=0.9, B=999, seed=5)
print("90%% interval for the axial dispersion: [%.4f, %.4f]" % (iv.lo, iv.hi))
