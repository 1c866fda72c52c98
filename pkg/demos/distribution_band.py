"""
A confidence set for the whole distribution
===========================================

The half-space distance compares two distributions through the largest
gap in probability they give to any half-space.  Bootstrapping it gives a
confidence set for the sampling distribution itself, which can be used
to check a fitted model.
"""

import numpy as np

import spherestats as ss
from spherestats.halfspace import uniform_cap_cdf

data = ss.sample_vmf([0.0, 0.0, 1.0], 5.0, 100, seed=21)

# one pool of random directions is shared by every replicate and every
# later membership query
band = ss.distribution_confidence(data, beta=0.9, B=499, seed=4)
print("pool size:", band.pool.k)
print("critical value %.4f, band half-width %.4f" % (band.critical, band.band_halfwidth))

# candidate 1: the generating law, represented by a large reference sample
reference = ss.sample_vmf([0.0, 0.0, 1.0], 5.0, 10_000, seed=22)
print("generating law: root %.3f, accepted %s" % (band.root(reference), band.contains(reference)))

# candidate 2: the uniform law, given exactly through its cap probabilities
uniform = uniform_cap_cdf(3)
print("uniform law:    root %.3f, accepted %s" % (band.root(uniform), band.contains(uniform)))

# candidate 3: a fitted model with the wrong concentration
loose = ss.sample_vmf([0.0, 0.0, 1.0], 2.0, 10_000, seed=23)
print("kappa = 2 fit:  root %.3f, accepted %s" % (band.root(loose), band.contains(loose)))

# the set also reads as simultaneous bounds on half-space probabilities
s, t = np.array([0.0, 0.0, 1.0]), 0.8
lo, hi = band.band(s, t)
print("P(z3 <= 0.8) lies in [%.3f, %.3f]" % (lo, hi))
