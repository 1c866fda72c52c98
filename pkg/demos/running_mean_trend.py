"""
Trend in a time-ordered series of directions
============================================

Smooth the Cartesian coordinates with a running mean and project each
smoothed vector back onto the sphere.
"""

import math

import numpy as np

import spherestats as ss
from spherestats.trend import moving_average_weights

# a direction drifting along a great circle, with vMF scatter
n = 60
centres = np.array([[math.cos(a), math.sin(a), 0.0] for a in np.linspace(0, math.pi / 2, n)])
noisy = np.vstack([ss.sample_vmf(c, 40.0, 1, seed=(9, i)).points for i, c in enumerate(centres)])

fit = ss.running_mean_trend(noisy, window=9)
err_raw = np.degrees(np.arccos(np.clip(np.sum(noisy * centres, axis=1), -1, 1)))
err_fit = np.degrees(np.arccos(np.clip(np.sum(fit.fitted * centres, axis=1), -1, 1)))
print("median angular error, raw %.2f deg, smoothed %.2f deg" % (np.median(err_raw), np.median(err_fit)))

# the running mean is the linear smoother with a truncated moving-average matrix
W = moving_average_weights(n, 9)
same = ss.linear_smoother_trend(noisy, W, require_symmetric=False)
assert np.array_equal(same.fitted, fit.fitted)

# rows that average to the zero vector have no direction and are masked
flip = ss.running_mean_trend(np.array([[1.0, 0, 0], [-1.0, 0, 0], [0, 1.0, 0]]), window=3)
print("masked positions:", np.flatnonzero(flip.undefined_mask))
