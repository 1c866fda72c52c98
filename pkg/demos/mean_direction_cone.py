"""
Mean direction and a bootstrap confidence cone
==============================================

Draw directions around a known mean, estimate it, and put a bootstrap
confidence cone around the estimate.  The cone is written out as an
equal-area SVG plot.
"""

import math
import sys

import numpy as np

import spherestats as ss
from spherestats.plot import render_lambert

# 80 directions from a von Mises-Fisher law with concentration 8, centred
# 30 degrees away from the vertical
mu = np.array([math.sin(math.radians(30)), 0.0, math.cos(math.radians(30))])
sample = ss.sample_vmf(mu, 8.0, 80, seed=7)

mu_hat = ss.mean_direction(sample)
delta = ss.directional_dispersion(sample)
print("estimated mean direction:", np.round(mu_hat, 4))
print("angle to the truth (deg): %.2f" % math.degrees(math.acos(mu_hat @ mu)))
print("dispersion 2(1 - |m|): %.4f" % delta)

# 90% cone from 1999 resamples; the critical value c turns into the
# half-angle through mu_hat'mu >= 1 - c / (2n)
cone = ss.confidence_cone(sample, beta=0.9, B=1999, seed=11)
print("critical value: %.4f" % cone.critical)
print("half-angle (deg): %.2f" % math.degrees(cone.half_angle))
print("truth inside the cone:", cone.contains(mu))

# the same resampling streams give the same cone on every run
again = ss.confidence_cone(sample, beta=0.9, B=1999, seed=11, workers=4)
assert again.half_angle == cone.half_angle

out = sys.argv[1] if len(sys.argv) > 1 else "mean_direction_cone.svg"
with open(out, "w") as fh:
    fh.write(render_lambert(sample, cone))
print("plot written to", out)
