"""Root-based bootstrap confidence sets and a coverage-simulation harness.

A root ``R_n(data, t)`` measures how far a hypothesized value ``t`` sits
from the data.  Its sampling distribution is approximated by resampling
the data and evaluating the root at the plug-in estimate of the original
sample; the confidence set collects every ``t`` whose root does not exceed
the ``beta`` quantile of those replicates.

Five roots are supported:

========================  ===========================================
tag                       root
========================  ===========================================
``mean-direction``        ``n |mu_hat - mu|^2 = 2n (1 - mu_hat'mu)``
``dispersion``            ``sqrt(n) |delta_hat - delta|``
``distribution``          ``sqrt(n) h_n(P_hat, P)``
``mean-axis``             ``n ||e_hat e_hat' - e e'||^2 = 2n (1 - (e_hat'e)^2)``
``axial-dispersion``      ``sqrt(n) |gamma_hat - gamma|``
========================  ===========================================

Replicate ``b`` always draws from stream ``(master_seed, b)``.  Replicates
are evaluated in fixed-size chunks, so the result is bit-identical for any
number of worker threads.
"""

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ive

from .eigen import eigh_desc
from .errors import (
    BadLevel,
    DataError,
    DimensionMismatch,
    KindMismatch,
    NumericDegeneracy,
)
from .estimators import (
    GAP_TOL,
    MEAN_TOL,
    axial_dispersion,
    directional_dispersion,
    mean_axis,
    mean_direction,
)
from .geometry import canonicalize_axes, normalize
from .halfspace import (
    DirectionPool,
    ResampledKS,
    default_pool_size,
    draw_pool,
    halfspace_distance,
    halfspace_distance_to_cdf,
    uniform_cap_cdf,
)
from .sampling import SeedSpec, as_seed, derive_seed, resample_indices, sample_vmf
from .samples import AxisSample, DirectionSample, as_points

MEAN_DIRECTION = "mean-direction"
DISPERSION = "dispersion"
DISTRIBUTION = "distribution"
MEAN_AXIS = "mean-axis"
AXIAL_DISPERSION = "axial-dispersion"
ROOT_TAGS = (MEAN_DIRECTION, DISPERSION, DISTRIBUTION, MEAN_AXIS, AXIAL_DISPERSION)
_AXIAL = {MEAN_AXIS, AXIAL_DISPERSION}

DEFAULT_B = 1999
DEFAULT_B_DISTRIBUTION = 499
# stream index reserved for the half-space direction pool
POOL_STREAM = 2**63
# replicates per work unit; fixed so results never depend on the thread count
CHUNK = 50
DEGENERATE_WARN_FRACTION = 0.01


class DegenerateReplicatesWarning(UserWarning):
    pass


@dataclass(frozen=True, eq=False)
class RootKind:
    """Root tag plus the hypothesized value it is evaluated at.

    Targets: a unit vector (``mean-direction``, ``mean-axis``), a real in
    [0, 2] (the dispersions), or for ``distribution`` either a reference
    sample or a callable ``cap_cdf(s, t)``.
    """

    tag: str
    target: object


def cone_root(n, estimate, target):
    """``n |estimate - target|^2``; vectorized over leading axes of ``estimate``."""
    d = np.asarray(estimate) - np.asarray(target)
    return n * np.sum(d * d, axis=-1)


def double_cone_root(n, estimate, target):
    """``n ||e e' - f f'||^2`` computed as ``n |e - f|^2 (1 + e'f)`` after
    aligning signs so that ``e'f >= 0`` (avoids ``1 - c^2`` cancellation)."""
    e = np.asarray(estimate)
    f = np.asarray(target)
    c = e @ f
    sign = np.where(c < 0, -1.0, 1.0)
    d = e - sign[..., None] * f if np.ndim(c) else e - sign * f
    return n * np.sum(d * d, axis=-1) * (1.0 + np.abs(c))


def _is_axial_sample(sample):
    return isinstance(sample, AxisSample)


def _check_kind(tag, sample):
    if tag not in ROOT_TAGS:
        raise KindMismatch(f"unknown root kind {tag!r}")
    if isinstance(sample, DirectionSample):
        axial = _is_axial_sample(sample)
        if axial and tag in (MEAN_DIRECTION, DISPERSION):
            raise KindMismatch(f"{tag} root needs directional data, got an AxisSample")
        if not axial and tag in _AXIAL:
            raise KindMismatch(f"{tag} root needs axial data, got a DirectionSample")


def _unit_target(target, q):
    t = np.asarray(target, dtype=float)
    if t.shape != (q,):
        raise KindMismatch(f"target must be a unit vector in R^{q}, got shape {t.shape}")
    return normalize(t)


def _scalar_target(target):
    try:
        v = float(target)
    except (TypeError, ValueError):
        raise KindMismatch(f"target must be a real number, got {target!r}") from None
    if not 0.0 <= v <= 2.0:
        raise KindMismatch(f"dispersion target {v} outside [0, 2]")
    return v


def candidate_distance(sample, candidate, pool):
    """``h_n`` from a sample to a candidate given as a sample or ``cap_cdf``."""
    if callable(candidate):
        return halfspace_distance_to_cdf(sample, candidate, pool)
    return halfspace_distance(sample, candidate, pool)


def evaluate_root(kind, sample, pool=None):
    """Value of the root ``kind.tag`` at ``kind.target`` for ``sample``."""
    _check_kind(kind.tag, sample)
    X = as_points(sample)
    n, q = X.shape
    if kind.tag == MEAN_DIRECTION:
        return float(cone_root(n, mean_direction(X), _unit_target(kind.target, q)))
    if kind.tag == DISPERSION:
        return math.sqrt(n) * abs(directional_dispersion(X) - _scalar_target(kind.target))
    if kind.tag == MEAN_AXIS:
        return float(double_cone_root(n, mean_axis(X).axis, _unit_target(kind.target, q)))
    if kind.tag == AXIAL_DISPERSION:
        return math.sqrt(n) * abs(axial_dispersion(X) - _scalar_target(kind.target))
    if pool is None:
        raise DataError("the distribution root needs a DirectionPool")
    if not callable(kind.target) and as_points(kind.target).shape[1] != q:
        raise DimensionMismatch("candidate sample dimension differs from the data")
    return math.sqrt(n) * candidate_distance(X, kind.target, pool)


def plug_in(tag, sample):
    """The estimate ``T(P_hat)`` that plays the true value in the bootstrap world."""
    _check_kind(tag, sample)
    X = as_points(sample)
    if tag == MEAN_DIRECTION:
        return mean_direction(X)
    if tag == DISPERSION:
        return directional_dispersion(X)
    if tag == MEAN_AXIS:
        return mean_axis(X).axis
    if tag == AXIAL_DISPERSION:
        return axial_dispersion(X)
    return X


@dataclass(frozen=True, eq=False)
class BootstrapDistribution:
    """Sorted bootstrap replicates of a root.

    ``n_degenerate`` counts replicates whose estimator was undefined; they
    carry the root's largest possible value.
    """

    root_values: np.ndarray
    tag: str
    seed: SeedSpec
    n: int
    n_degenerate: int = 0
    pool: DirectionPool = field(default=None, repr=False)

    @property
    def B(self):
        return self.root_values.size

    def cdf(self, x):
        """Left-continuous empirical cdf ``#{R_b < x} / B``."""
        return np.searchsorted(self.root_values, x, side="left") / self.B

    def quantile(self, beta):
        return critical_value(self, beta)


def _replicate_master(seed):
    spec = as_seed(seed)
    return spec.master_seed if spec.stream_index == 0 else derive_seed(spec)


def _pool_for(q, n, master, pool, kn):
    if pool is not None:
        if pool.dim != q:
            raise DimensionMismatch(f"pool dimension {pool.dim} vs data {q}")
        return pool
    k = default_pool_size(n) if kn is None else int(kn)
    return draw_pool(q, k, SeedSpec(master, POOL_STREAM))


def _chunk_roots(tag, X, target, master, start, stop, ks):
    n = X.shape[0]
    idx = np.stack([resample_indices(n, SeedSpec(master, b)) for b in range(start, stop)])
    if tag == DISTRIBUTION:
        roots = [math.sqrt(n) * ks.distance(np.bincount(row, minlength=n)) for row in idx]
        return np.array(roots), 0
    Xs = X[idx]
    if tag in (MEAN_DIRECTION, DISPERSION):
        m = Xs.mean(axis=1)
        r = np.sqrt(np.sum(m * m, axis=1))
        if tag == DISPERSION:
            return math.sqrt(n) * np.abs(2.0 * (1.0 - r) - target), 0
        bad = ~(r > MEAN_TOL)
        mu = m / np.where(bad, 1.0, r)[:, None]
        roots = np.where(bad, 4.0 * n, cone_root(n, mu, target))
        return roots, int(bad.sum())
    M = np.einsum("cni,cnj->cij", Xs, Xs) / n
    w, V = eigh_desc(M)
    if tag == AXIAL_DISPERSION:
        return math.sqrt(n) * np.abs(2.0 * (1.0 - w[:, 0]) - target), 0
    bad = (w[:, 0] - w[:, 1]) < GAP_TOL
    roots = np.where(bad, 2.0 * n, double_cone_root(n, V[:, :, 0], target))
    return roots, int(bad.sum())


def bootstrap_distribution(sample, tag, B, seed, pool=None, kn=None, workers=1):
    """Bootstrap distribution of root ``tag`` for ``sample``.

    Each of the ``B`` replicates resamples the data with stream
    ``(master_seed, b)`` and evaluates the root at the plug-in value from the
    original sample.  For ``distribution`` the same direction pool (drawn
    from stream ``(master_seed, 2**63)`` unless given) serves every replicate.

    Errors from the estimator on the original sample propagate; undefined
    replicates are replaced by the root's maximum (``4n`` for the cone,
    ``2n`` for the double cone) and counted.
    """
    B = int(B)
    if B < 1:
        raise DataError(f"B must be >= 1, got {B}")
    target = plug_in(tag, sample)
    X = as_points(sample)
    n, q = X.shape
    master = _replicate_master(seed)
    ks = None
    if tag == DISTRIBUTION:
        pool = _pool_for(q, n, master, pool, kn)
        ks = ResampledKS(X, pool)
    else:
        pool = None
    bounds = [(s, min(s + CHUNK, B)) for s in range(0, B, CHUNK)]

    def run(bound):
        return _chunk_roots(tag, X, target, master, bound[0], bound[1], ks)

    if workers and workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=int(workers)) as ex:
            parts = list(ex.map(run, bounds))
    else:
        parts = [run(b) for b in bounds]
    values = np.sort(np.concatenate([p[0] for p in parts]))
    values = np.maximum(values, 0.0)
    values.setflags(write=False)
    n_bad = sum(p[1] for p in parts)
    if n_bad > DEGENERATE_WARN_FRACTION * B:
        warnings.warn(
            f"{n_bad} of {B} bootstrap replicates had an undefined estimate",
            DegenerateReplicatesWarning,
            stacklevel=2,
        )
    return BootstrapDistribution(values, tag, SeedSpec(master, 0), n, n_bad, pool)


def critical_value(dist, beta):
    """Order statistic ``ceil(beta * B)`` (1-based) of the sorted replicates.

    This is the largest ``beta`` quantile of the left-continuous empirical cdf.
    """
    beta = float(beta)
    if not 0.0 < beta < 1.0:
        raise BadLevel(f"beta must lie in (0, 1), got {beta}")
    B = dist.B
    # round() absorbs representation error such as 0.95 * 20 = 19.000000000000004
    k = math.ceil(round(beta * B, 9))
    return float(dist.root_values[min(max(k, 1), B) - 1])


@dataclass(frozen=True, eq=False)
class Cone:
    """Cap ``{mu : angle(apex, mu) <= half_angle}`` for the mean direction."""

    apex: np.ndarray
    half_angle: float
    critical: float
    n: int
    beta: float
    B: int
    seed: SeedSpec
    n_degenerate: int = 0

    def root(self, mu):
        return float(cone_root(self.n, self.apex, normalize(mu)))

    def contains(self, mu):
        return self.root(mu) <= self.critical


@dataclass(frozen=True, eq=False)
class DoubleCone:
    """Antipodal pair of caps about the mean axis."""

    axis: np.ndarray
    half_angle: float
    critical: float
    n: int
    beta: float
    B: int
    seed: SeedSpec
    n_degenerate: int = 0

    def root(self, e):
        return float(double_cone_root(self.n, self.axis, normalize(e)))

    def contains(self, e):
        return self.root(e) <= self.critical


@dataclass(frozen=True, eq=False)
class Interval:
    """Dispersion interval ``[lo, hi]``; ``kind`` is directional or axial."""

    lo: float
    hi: float
    estimate: float
    critical: float
    n: int
    kind: str
    beta: float
    B: int
    seed: SeedSpec
    upper_limit: float = 2.0

    def root(self, theta):
        return math.sqrt(self.n) * abs(self.estimate - float(theta))

    def contains(self, theta):
        theta = float(theta)
        if not 0.0 <= theta <= self.upper_limit:
            return False
        return self.root(theta) <= self.critical


@dataclass(frozen=True, eq=False)
class DistributionBand:
    """Half-space confidence set for the whole distribution.

    Equivalently, simultaneous intervals ``P_hat(A) +- band_halfwidth`` for
    every half-space A probed by the pool.
    """

    critical: float
    band_halfwidth: float
    n: int
    beta: float
    B: int
    seed: SeedSpec
    sample: np.ndarray = field(repr=False)
    pool: DirectionPool = field(repr=False)

    def root(self, candidate):
        """``sqrt(n) h_n(P_hat, candidate)``; candidate is a sample or ``cap_cdf``."""
        if not callable(candidate):
            cand = as_points(candidate)
            if cand.shape[1] != self.sample.shape[1]:
                raise DimensionMismatch("candidate sample dimension differs from the data")
            if cand.shape[0] < 10 * self.n and np.unique(cand, axis=0).shape[0] > 1:
                warnings.warn(
                    f"reference sample of {cand.shape[0]} points is smaller than 10 n",
                    stacklevel=2,
                )
            candidate = cand
        return math.sqrt(self.n) * candidate_distance(self.sample, candidate, self.pool)

    def contains(self, candidate):
        return self.root(candidate) <= self.critical

    def band(self, s, t):
        """``(lo, hi)`` bounds on ``P(s'z <= t)`` implied by the set."""
        p = float(np.mean(self.sample @ np.asarray(s, dtype=float) <= t))
        return max(0.0, p - self.band_halfwidth), min(1.0, p + self.band_halfwidth)


def confidence_cone(sample, beta=0.9, B=DEFAULT_B, seed=0, workers=1):
    """Bootstrap confidence cone for the mean direction.

    ``mu`` is inside iff ``2n (1 - mu_hat'mu) <= c``, so the half-angle is
    ``arccos(max(-1, 1 - c / (2n)))``.
    """
    if _is_axial_sample(sample):
        raise KindMismatch("confidence_cone needs directional data")
    X = as_points(sample)
    n = X.shape[0]
    apex = mean_direction(X)
    dist = bootstrap_distribution(X, MEAN_DIRECTION, B, seed, workers=workers)
    c = critical_value(dist, beta)
    half = math.acos(min(1.0, max(-1.0, 1.0 - c / (2.0 * n))))
    return Cone(apex, half, c, n, float(beta), dist.B, dist.seed, dist.n_degenerate)


def confidence_double_cone(sample, beta=0.9, B=DEFAULT_B, seed=0, workers=1):
    """Bootstrap confidence double cone for the mean axis.

    ``+-e`` is inside iff ``(e_hat'e)^2 >= 1 - c / (2n)``.
    """
    X = as_points(sample)
    if not _is_axial_sample(sample):
        X = canonicalize_axes(X)
    n = X.shape[0]
    axis = mean_axis(X).axis
    dist = bootstrap_distribution(AxisSample(X), MEAN_AXIS, B, seed, workers=workers)
    c = critical_value(dist, beta)
    half = math.acos(math.sqrt(min(1.0, max(0.0, 1.0 - c / (2.0 * n)))))
    return DoubleCone(axis, half, c, n, float(beta), dist.B, dist.seed, dist.n_degenerate)


def dispersion_interval(sample, kind="directional", beta=0.9, B=DEFAULT_B, seed=0, workers=1):
    """Bootstrap interval ``[estimate - c/sqrt(n), estimate + c/sqrt(n)]``,
    clipped to the dispersion's range: [0, 2] for directions, [0, 2(1 - 1/q)]
    for axes."""
    X = as_points(sample)
    n, q = X.shape
    if kind == "directional":
        if _is_axial_sample(sample):
            raise KindMismatch("directional dispersion interval needs directional data")
        tag, est, upper = DISPERSION, directional_dispersion(X), 2.0
        data = X
    elif kind == "axial":
        tag, est, upper = AXIAL_DISPERSION, axial_dispersion(X), 2.0 * (1.0 - 1.0 / q)
        data = sample if _is_axial_sample(sample) else AxisSample(X)
    else:
        raise KindMismatch(f"interval kind must be 'directional' or 'axial', got {kind!r}")
    dist = bootstrap_distribution(data, tag, B, seed, workers=workers)
    c = critical_value(dist, beta)
    half = c / math.sqrt(n)
    lo, hi = max(0.0, est - half), min(upper, est + half)
    return Interval(lo, hi, est, c, n, kind, float(beta), dist.B, dist.seed, upper)


def distribution_confidence(
    sample, beta=0.9, B=DEFAULT_B_DISTRIBUTION, seed=0, pool=None, kn=None, workers=1
):
    """Half-space confidence set for the sampling distribution.

    The critical value bootstraps ``sqrt(n) h_n(P_hat*, P_hat)`` with one
    direction pool shared by all replicates and by later membership tests.
    Axial data should be passed as an :class:`AxisSample` so that every axis
    is represented on the canonical hemisphere.
    """
    X = as_points(sample)
    dist = bootstrap_distribution(X, DISTRIBUTION, B, seed, pool=pool, kn=kn, workers=workers)
    c = critical_value(dist, beta)
    n = X.shape[0]
    X = np.array(X)
    X.setflags(write=False)
    return DistributionBand(c, c / math.sqrt(n), n, float(beta), dist.B, dist.seed, X, dist.pool)


def vmf_mean_resultant_length(kappa, q):
    """``|E x|`` for vMF(kappa) on the sphere in R^q: ``I_{q/2} / I_{q/2-1}``."""
    if kappa == 0:
        return 0.0
    return float(ive(q / 2.0, kappa) / ive(q / 2.0 - 1.0, kappa))


SET_KINDS = ("cone", "interval", "axial-cone", "axial-interval", "dist")


@dataclass(frozen=True)
class VMFGenerator:
    """vMF synthetic data; the mean defaults to the last basis vector."""

    kappa: float
    q: int = 3
    mu: tuple = None

    @property
    def mean(self):
        if self.mu is not None:
            return normalize(self.mu)
        e = np.zeros(self.q)
        e[-1] = 1.0
        return e

    def draw(self, n, seed):
        return sample_vmf(self.mean, self.kappa, n, seed)

    def truth(self, set_kind, n, seed):
        a = vmf_mean_resultant_length(self.kappa, self.q)
        if set_kind == "cone":
            if self.kappa == 0:
                raise DataError("the uniform distribution has no mean direction")
            return self.mean
        if set_kind == "interval":
            return 2.0 * (1.0 - a)
        if set_kind == "axial-cone":
            if self.kappa == 0:
                raise DataError("the uniform distribution has no mean axis")
            return self.mean
        if set_kind == "axial-interval":
            if self.kappa == 0:
                return 2.0 * (1.0 - 1.0 / self.q)
            return 2.0 * (self.q - 1) * a / self.kappa
        if self.kappa == 0:
            return uniform_cap_cdf(self.q)
        ref = self.draw(max(10_000, 10 * n), seed)
        return ref.points


@dataclass(frozen=True)
class UniformGenerator:
    q: int = 3

    def draw(self, n, seed):
        return sample_vmf(np.eye(self.q)[-1], 0.0, n, seed)

    def truth(self, set_kind, n, seed):
        return VMFGenerator(0.0, self.q).truth(set_kind, n, seed)


def parse_generator(spec, q=3):
    """``'uniform'`` or ``'vmf:kappa=K'`` to a generator object."""
    spec = spec.strip()
    if spec == "uniform":
        return UniformGenerator(q)
    if spec.startswith("vmf"):
        params = {}
        for part in spec.partition(":")[2].split(","):
            if part:
                key, _, value = part.partition("=")
                params[key.strip()] = value.strip()
        if set(params) - {"kappa"} or "kappa" not in params:
            raise DataError(f"generator {spec!r}: expected vmf:kappa=K")
        try:
            kappa = float(params["kappa"])
        except ValueError:
            raise DataError(f"generator {spec!r}: kappa is not a number") from None
        return VMFGenerator(kappa, q)
    raise DataError(f"unknown generator {spec!r}; use 'uniform' or 'vmf:kappa=K'")


@dataclass(frozen=True)
class CoverageResult:
    set_kind: str
    n: int
    beta: float
    B: int
    trials: int
    covered: int
    errors: int

    @property
    def coverage(self):
        return self.covered / self.trials

    @property
    def standard_error(self):
        p = self.coverage
        return math.sqrt(p * (1.0 - p) / self.trials)


def _build_set(set_kind, sample, beta, B, seed, kn):
    if set_kind == "cone":
        return confidence_cone(sample, beta, B, seed)
    if set_kind == "interval":
        return dispersion_interval(sample, "directional", beta, B, seed)
    if set_kind == "axial-cone":
        return confidence_double_cone(sample, beta, B, seed)
    if set_kind == "axial-interval":
        return dispersion_interval(sample, "axial", beta, B, seed)
    return distribution_confidence(sample, beta, B, seed, kn=kn)


def coverage_simulation(generator, n, beta, B, trials, seed, set_kind, workers=1, kn=None):
    """Fraction of simulated data sets whose confidence set covers the truth.

    ``generator`` needs ``draw(n, seed)`` and ``truth(set_kind, n, seed)``.
    Trial ``t`` draws data from ``derive_seed(seed, t)`` and bootstraps with
    ``derive_seed(seed, t, 1)``; axial set kinds canonicalize the draws.
    Trials whose original-sample estimate is undefined count as not covered
    and are tallied in ``errors``.
    """
    if set_kind not in SET_KINDS:
        raise DataError(f"set kind must be one of {SET_KINDS}, got {set_kind!r}")
    if int(trials) < 1:
        raise DataError("trials must be >= 1")
    axial = set_kind.startswith("axial")

    def trial(t):
        data_seed = SeedSpec(derive_seed(seed, t), 0)
        boot_seed = SeedSpec(derive_seed(seed, t, 1), 0)
        sample = generator.draw(n, data_seed)
        if axial:
            sample = AxisSample(as_points(sample))
        truth = generator.truth(set_kind, n, SeedSpec(derive_seed(seed, t), 1))
        try:
            cset = _build_set(set_kind, sample, beta, B, boot_seed, kn)
        except NumericDegeneracy:
            return 0, 1
        return int(cset.contains(truth)), 0

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateReplicatesWarning)
        if workers and workers > 1:
            with ThreadPoolExecutor(max_workers=int(workers)) as ex:
                results = list(ex.map(trial, range(int(trials))))
        else:
            results = [trial(t) for t in range(int(trials))]
    covered = sum(r[0] for r in results)
    errors = sum(r[1] for r in results)
    return CoverageResult(set_kind, int(n), float(beta), int(B), int(trials), covered, errors)

