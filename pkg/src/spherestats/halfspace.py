"""Half-space distance between empirical distributions.

The half-space distance is the largest discrepancy two distributions assign
to any closed half-space ``{z : s'z <= t}``.  Along a fixed direction ``s``
it is the Kolmogorov-Smirnov distance of the projected samples, which is
computed exactly here; the supremum over directions is approximated by a
maximum over a pool of random directions.
"""

from dataclasses import dataclass

import numpy as np
from scipy.stats import beta

from .errors import DataError, DimensionMismatch
from .sampling import as_seed, sample_uniform_sphere
from .samples import as_points

# pooled projections x directions kept in memory per block
_BLOCK_ELEMS = 2_000_000


def default_pool_size(n):
    return max(1000, 10 * int(n))


@dataclass(frozen=True, eq=False)
class HalfSpace:
    s: np.ndarray
    t: float

    def contains(self, z):
        return np.asarray(z, dtype=float) @ self.s <= self.t


@dataclass(frozen=True, eq=False)
class DirectionPool:
    """``(k, q)`` array of unit directions plus the seed it was drawn from."""

    directions: np.ndarray
    seed: tuple = None

    def __post_init__(self):
        S = np.asarray(self.directions, dtype=float)
        if S.ndim != 2 or S.shape[0] < 1:
            raise DataError("a direction pool needs at least one direction")
        S = S / np.linalg.norm(S, axis=1)[:, None]
        S.setflags(write=False)
        object.__setattr__(self, "directions", S)

    @property
    def k(self):
        return self.directions.shape[0]

    @property
    def dim(self):
        return self.directions.shape[1]

    def __len__(self):
        return self.k

    def extend(self, other):
        """A pool holding these directions followed by ``other``'s."""
        other = other.directions if isinstance(other, DirectionPool) else other
        return DirectionPool(np.vstack([self.directions, other]), self.seed)

    def head(self, k):
        return DirectionPool(self.directions[:k], self.seed)


def draw_pool(q, k, seed):
    """``k`` i.i.d. uniform directions on the sphere in R^q."""
    spec = as_seed(seed)
    return DirectionPool(sample_uniform_sphere(q, k, spec).points, tuple(spec))


def _check_dims(A, B, q):
    if A.shape[1] != q or B.shape[1] != q:
        raise DimensionMismatch(
            f"dimensions disagree: {A.shape[1]}, {B.shape[1]} vs direction {q}"
        )


def projected_ks(sample_a, sample_b, s):
    """Exact ``sup_t |P_A(s'z <= t) - P_B(s'z <= t)|`` for one direction ``s``.

    Both empirical cdfs are right-continuous steps, so the supremum is
    attained at one of the pooled projection values; left limits coincide
    with the value at the preceding pooled point (or 0), so they are covered.
    """
    A, B = as_points(sample_a), as_points(sample_b)
    s = np.asarray(s, dtype=float)
    _check_dims(A, B, s.size)
    a, b = np.sort(A @ s), np.sort(B @ s)
    t = np.concatenate([a, b])
    fa = np.searchsorted(a, t, side="right") / a.size
    fb = np.searchsorted(b, t, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def _ks_rows_large(A, B, S):
    # Sort both projections; only the smaller sample's jump points (and their
    # left limits) need checking, since between them its cdf is constant and
    # the other cdf is monotone.
    if A.shape[0] > B.shape[0]:
        A, B = B, A
    na, nb = A.shape[0], B.shape[0]
    out = np.empty(S.shape[0])
    block = max(1, _BLOCK_ELEMS // (na + nb))
    for start in range(0, S.shape[0], block):
        Sb = S[start : start + block]
        PA = np.sort(Sb @ A.T, axis=1)
        PB = np.sort(Sb @ B.T, axis=1)
        for j in range(Sb.shape[0]):
            a, b = PA[j], PB[j]
            at = np.abs(np.searchsorted(a, a, "right") / na - np.searchsorted(b, a, "right") / nb)
            before = np.abs(np.searchsorted(a, a, "left") / na - np.searchsorted(b, a, "left") / nb)
            out[start + j] = max(at.max(), before.max())
    return out


def projected_ks_all(sample_a, sample_b, pool):
    """:func:`projected_ks` for every pool direction, as a length-k array."""
    A, B = as_points(sample_a), as_points(sample_b)
    S = pool.directions if isinstance(pool, DirectionPool) else np.atleast_2d(pool)
    _check_dims(A, B, S.shape[1])
    na, nb = A.shape[0], B.shape[0]
    if na + nb > 2000:
        return _ks_rows_large(A, B, S)
    is_a = np.concatenate([np.ones(na, dtype=np.int64), np.zeros(nb, dtype=np.int64)])
    AB = np.vstack([A, B])
    ranks = np.arange(1, na + nb + 1)
    block = max(1, _BLOCK_ELEMS // (na + nb))
    out = np.empty(S.shape[0])
    for start in range(0, S.shape[0], block):
        P = S[start : start + block] @ AB.T
        # order within a run of ties is irrelevant: only run ends are read
        order = np.argsort(P, axis=1)
        Ps = np.take_along_axis(P, order, axis=1)
        ca = np.cumsum(is_a[order], axis=1)
        diff = np.abs(ca / na - (ranks - ca) / nb)
        ends = np.ones_like(Ps, dtype=bool)
        ends[:, :-1] = Ps[:, 1:] != Ps[:, :-1]
        out[start : start + block] = np.max(np.where(ends, diff, 0.0), axis=1)
    return out


def halfspace_distance(sample_a, sample_b, pool):
    """Pool approximation ``max_k sup_t |P_A(A(s_k, t)) - P_B(A(s_k, t))|``.

    Never exceeds the exact half-space distance and never decreases when the
    pool is extended.
    """
    return float(np.max(projected_ks_all(sample_a, sample_b, pool)))


def halfspace_distance_to_cdf(sample, cap_cdf, pool):
    """Pool approximation of the distance from a sample to a distribution
    given by its half-space probabilities.

    ``cap_cdf(s, t)`` must return ``P(s'z <= t)`` for a direction ``s`` and
    an array of thresholds ``t``, and be continuous in ``t`` (distributions
    with atoms should be passed as reference samples instead).
    """
    X = as_points(sample)
    S = pool.directions if isinstance(pool, DirectionPool) else np.atleast_2d(pool)
    if X.shape[1] != S.shape[1]:
        raise DimensionMismatch(f"sample dimension {X.shape[1]} vs pool {S.shape[1]}")
    n = X.shape[0]
    best = 0.0
    for s in S:
        v = np.sort(X @ s)
        upper = np.searchsorted(v, v, side="right") / n
        lower = np.searchsorted(v, v, side="left") / n
        f0 = np.asarray(cap_cdf(s, v), dtype=float)
        best = max(best, float(np.max(np.maximum(np.abs(upper - f0), np.abs(lower - f0)))))
    return best


class ResampledKS:
    """Half-space distance between bootstrap resamples and their parent sample.

    A resample is encoded by its multiplicities ``counts`` over the parent
    rows, so both empirical cdfs live on the parent's projections; the sort
    order along every pool direction is computed once up front.
    """

    def __init__(self, sample, pool):
        X = as_points(sample)
        S = pool.directions if isinstance(pool, DirectionPool) else np.atleast_2d(pool)
        if X.shape[1] != S.shape[1]:
            raise DimensionMismatch(f"sample dimension {X.shape[1]} vs pool {S.shape[1]}")
        self.n = X.shape[0]
        P = X @ S.T
        self.order = np.argsort(P, axis=0, kind="stable")
        Ps = np.take_along_axis(P, self.order, axis=0)
        ends = np.ones_like(Ps, dtype=bool)
        ends[:-1] = Ps[1:] != Ps[:-1]
        self.ends = ends

    def distance(self, counts):
        w = (np.asarray(counts, dtype=np.int64) - 1)[self.order]
        cum = np.abs(np.cumsum(w, axis=0))
        return float(np.max(np.where(self.ends, cum, 0))) / self.n


def uniform_cap_cdf(q):
    """Exact half-space probabilities of the uniform distribution on S^{q-1}.

    The projection ``s'x`` has ``(1 + s'x) / 2 ~ Beta((q-1)/2, (q-1)/2)``.
    """
    dist = beta((q - 1) / 2.0, (q - 1) / 2.0)

    def cdf(s, t):
        return dist.cdf(np.clip((1.0 + np.asarray(t)) / 2.0, 0.0, 1.0))

    return cdf

