"""Seeded synthetic data and bootstrap resampling.

Every random operation takes a :class:`SeedSpec`.  The pair
``(master_seed, stream_index)`` selects a Philox counter-based stream: the
master seed is the Philox key and the stream index occupies the top word of
the 256-bit counter, so distinct pairs never share generator states and a
stream's output does not depend on which other streams were drawn, or in
what order.
"""

from typing import NamedTuple

import numpy as np

from .errors import BadDimension, DataError
from .geometry import canonicalize_axes, normalize
from .samples import AxisSample, DirectionSample, as_points

MAX_U64 = 2**64 - 1


class SeedSpec(NamedTuple):
    master_seed: int
    stream_index: int = 0


def as_seed(seed):
    """Coerce an int or ``(master, stream)`` pair to a :class:`SeedSpec`."""
    if isinstance(seed, SeedSpec):
        spec = seed
    elif isinstance(seed, (tuple, list)):
        spec = SeedSpec(*(int(s) for s in seed))
    else:
        spec = SeedSpec(int(seed), 0)
    for v in spec:
        if not 0 <= v <= MAX_U64:
            raise DataError(f"seed components must be unsigned 64-bit, got {v}")
    return spec


def generator(seed):
    """The ``numpy.random.Generator`` for one stream."""
    spec = as_seed(seed)
    bitgen = np.random.Philox(key=spec.master_seed, counter=[0, 0, 0, spec.stream_index])
    return np.random.Generator(bitgen)


def derive_seed(seed, *path):
    """A new 64-bit master seed hashed from ``seed`` and an integer path.

    Used to give nested tasks (e.g. the bootstrap inside one coverage trial)
    their own family of streams.
    """
    spec = as_seed(seed)
    ss = np.random.SeedSequence(spec.master_seed, spawn_key=(spec.stream_index, *path))
    return int(ss.generate_state(1, np.uint64)[0])


def _check_qn(q, n):
    if int(q) < 2:
        raise BadDimension(f"q must be >= 2, got {q}")
    if int(n) < 1:
        raise DataError(f"n must be >= 1, got {n}")


def _uniform_rows(rng, q, n):
    X = rng.standard_normal((n, q))
    norms = np.linalg.norm(X, axis=1)
    # a zero-norm Gaussian draw has probability zero; redraw rather than divide
    while np.any(norms < 1e-300):
        bad = norms < 1e-300
        X[bad] = rng.standard_normal((int(bad.sum()), q))
        norms = np.linalg.norm(X, axis=1)
    return X / norms[:, None]


def sample_uniform_sphere(q, n, seed):
    """``n`` uniform draws on the unit sphere in R^q (normalized Gaussians)."""
    _check_qn(q, n)
    return DirectionSample(_uniform_rows(generator(seed), int(q), int(n)))


def _wood_cosines(rng, kappa, q, n):
    """Cosines ``w = x . mu`` of vMF draws by Wood's rejection scheme.

    Written in terms of ``b`` only so that large ``kappa`` (``b -> 0``) does
    not lose precision to ``1 - x0`` cancellation.
    """
    m = q - 1.0
    b = m / (2.0 * kappa + np.sqrt(4.0 * kappa**2 + m**2))
    x0 = (1.0 - b) / (1.0 + b)
    c = kappa * x0 + m * np.log(4.0 * b / (1.0 + b) ** 2)
    out = np.empty(n)
    one_minus = np.empty(n)
    filled = 0
    while filled < n:
        k = max(16, int(1.2 * (n - filled)) + 8)
        z = rng.beta(m / 2.0, m / 2.0, size=k)
        u = rng.random(size=k)
        den = 1.0 - (1.0 - b) * z
        w = (1.0 - (1.0 + b) * z) / den
        log_term = np.log(2.0 * b / ((1.0 + b) * den))
        accept = kappa * w + m * log_term - c >= np.log(u)
        w, om = w[accept], (2.0 * b * z / den)[accept]
        take = min(n - filled, w.size)
        out[filled : filled + take] = w[:take]
        one_minus[filled : filled + take] = om[:take]
        filled += take
    return out, one_minus


def sample_vmf(mu, kappa, n, seed):
    """``n`` draws from the von Mises-Fisher distribution with mean ``mu``.

    ``kappa == 0`` returns exactly :func:`sample_uniform_sphere` for the same seed.
    """
    mu = normalize(mu)
    q = mu.size
    _check_qn(q, n)
    kappa = float(kappa)
    if not kappa >= 0:
        raise DataError(f"kappa must be nonnegative, got {kappa}")
    if kappa == 0.0:
        return sample_uniform_sphere(q, n, seed)
    rng = generator(seed)
    n = int(n)
    w, one_minus_w = _wood_cosines(rng, kappa, q, n)
    V = rng.standard_normal((n, q))
    V -= np.outer(V @ mu, mu)
    V /= np.linalg.norm(V, axis=1)[:, None]
    sin_t = np.sqrt(one_minus_w * (1.0 + w))
    X = w[:, None] * mu + sin_t[:, None] * V
    X /= np.linalg.norm(X, axis=1)[:, None]
    return DirectionSample(X)


def sample_axial_vmf(mu, kappa, n, seed):
    """Axial data from canonicalized vMF draws (mean axis ``+-mu``)."""
    return AxisSample(canonicalize_axes(sample_vmf(mu, kappa, n, seed).points))


def resample_indices(n, seed):
    """Indices of ``n`` draws with replacement from ``range(n)``."""
    if int(n) < 1:
        raise DataError("cannot resample an empty sample")
    return generator(seed).integers(0, int(n), size=int(n))


def resample(sample, seed):
    """Bootstrap resample: ``n`` i.i.d. draws from the sample's rows.

    Returns the same container type as the input (arrays come back as
    :class:`DirectionSample`).
    """
    if not isinstance(sample, DirectionSample):
        sample = DirectionSample(as_points(sample))
    return sample.take(resample_indices(sample.n, seed))
