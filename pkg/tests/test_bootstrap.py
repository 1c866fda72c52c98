import math
import warnings

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import ive

from spherestats import bootstrap as bs
from spherestats.errors import BadLevel, DegenerateTopEigenvalue, KindMismatch, UndefinedMeanDirection
from spherestats.estimators import axial_dispersion, directional_dispersion, mean_axis, mean_direction
from spherestats.halfspace import draw_pool, uniform_cap_cdf
from spherestats.sampling import derive_seed, sample_axial_vmf, sample_uniform_sphere, sample_vmf
from spherestats.samples import AxisSample, DirectionSample

from conftest import random_rotation, random_unit_rows

MU = np.array([0.0, 0.0, 1.0])
BALANCED = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [1.0, 0.0]])


def _values(vals):
    v = np.sort(np.asarray(vals, dtype=float))
    return bs.BootstrapDistribution(v, bs.MEAN_DIRECTION, None, 10)


@pytest.fixture(scope="module")
def vmf100():
    return sample_vmf(MU, 5.0, 100, 77)


class TestRoots:
    def test_at_estimate(self, vmf100):
        mu = mean_direction(vmf100)
        assert bs.evaluate_root(bs.RootKind(bs.MEAN_DIRECTION, mu), vmf100) == pytest.approx(0, abs=1e-12)

    def test_orthogonal(self):
        X = np.tile([1.0, 0.0, 0.0], (10, 1))
        assert bs.evaluate_root(bs.RootKind(bs.MEAN_DIRECTION, [0, 1, 0]), X) == pytest.approx(20)

    def test_axis_sign(self):
        Y = AxisSample(sample_axial_vmf(MU, 8, 30, 1).points)
        e = mean_axis(Y).axis
        for t in (e, -e):
            assert bs.evaluate_root(bs.RootKind(bs.MEAN_AXIS, t), Y) == pytest.approx(0, abs=1e-12)

    def test_closed_forms_agree(self, rng):
        for _ in range(500):
            q = int(rng.choice([2, 3, 5]))
            n = int(rng.integers(3, 51))
            e, f = random_unit_rows(rng, 2, q)
            assert bs.cone_root(n, e, f) == pytest.approx(2 * n * (1 - e @ f), abs=1e-10)
            proj = np.outer(e, e) - np.outer(f, f)
            direct = n * np.sum(proj * proj)
            assert bs.double_cone_root(n, e, f) == pytest.approx(direct, abs=1e-10)
            assert bs.double_cone_root(n, e, f) == pytest.approx(2 * n * (1 - (e @ f) ** 2), abs=1e-10)

    def test_double_cone_root_batched(self, rng):
        E = random_unit_rows(rng, 7, 3)
        f = random_unit_rows(rng, 1, 3)[0]
        batch = bs.double_cone_root(5, E, f)
        np.testing.assert_allclose(batch, [bs.double_cone_root(5, e, f) for e in E], rtol=1e-15)

    def test_dispersion_roots(self, vmf100):
        d = directional_dispersion(vmf100)
        assert bs.evaluate_root(bs.RootKind(bs.DISPERSION, d + 0.1), vmf100) == pytest.approx(1.0)
        Y = AxisSample(vmf100.points)
        g = axial_dispersion(Y)
        assert bs.evaluate_root(bs.RootKind(bs.AXIAL_DISPERSION, g - 0.05), Y) == pytest.approx(0.5)

    def test_distribution_root(self, vmf100):
        pool = draw_pool(3, 500, 1)
        assert bs.evaluate_root(bs.RootKind(bs.DISTRIBUTION, vmf100.points), vmf100, pool) == 0
        far = np.tile(-MU, (10, 1))
        assert bs.evaluate_root(bs.RootKind(bs.DISTRIBUTION, far), vmf100, pool) == pytest.approx(10)

    def test_kind_mismatch(self, vmf100):
        with pytest.raises(KindMismatch):
            bs.evaluate_root(bs.RootKind(bs.MEAN_AXIS, MU), vmf100)
        with pytest.raises(KindMismatch):
            bs.evaluate_root(bs.RootKind(bs.MEAN_DIRECTION, MU), AxisSample(vmf100.points))
        with pytest.raises(KindMismatch):
            bs.evaluate_root(bs.RootKind(bs.DISPERSION, "x"), vmf100)
        with pytest.raises(KindMismatch):
            bs.evaluate_root(bs.RootKind("median", MU), vmf100)

    def test_errors_propagate(self):
        with pytest.raises(UndefinedMeanDirection):
            bs.evaluate_root(bs.RootKind(bs.MEAN_DIRECTION, MU), [[0, 0, 1], [0, 0, -1]])
        with pytest.raises(DegenerateTopEigenvalue):
            bs.evaluate_root(bs.RootKind(bs.MEAN_AXIS, MU), AxisSample(np.eye(3)))


class TestBootstrapDistribution:
    def test_identical_points(self):
        X = np.tile([0.6, 0.8, 0.0], (12, 1))
        d = bs.bootstrap_distribution(X, bs.MEAN_DIRECTION, 200, 3)
        assert d.B == 200 and np.all(d.root_values == 0)

    def test_single_replicate(self, vmf100):
        d = bs.bootstrap_distribution(vmf100, bs.DISPERSION, 1, 0)
        assert d.B == 1 and d.root_values[0] >= 0

    def test_sorted_nonnegative(self, vmf100):
        for tag, s in [(bs.MEAN_DIRECTION, vmf100), (bs.DISPERSION, vmf100),
                       (bs.MEAN_AXIS, AxisSample(vmf100.points)),
                       (bs.AXIAL_DISPERSION, AxisSample(vmf100.points))]:
            v = bs.bootstrap_distribution(s, tag, 120, 5).root_values
            assert np.all(np.diff(v) >= 0) and v[0] >= 0

    def test_matches_explicit_resampling(self, vmf100):
        from spherestats.sampling import resample_indices
        from spherestats.sampling import SeedSpec

        d = bs.bootstrap_distribution(vmf100, bs.MEAN_DIRECTION, 60, 9)
        mu = mean_direction(vmf100)
        direct = []
        for b in range(60):
            Xb = vmf100.points[resample_indices(100, SeedSpec(9, b))]
            direct.append(bs.evaluate_root(bs.RootKind(bs.MEAN_DIRECTION, mu), Xb))
        np.testing.assert_allclose(d.root_values, np.sort(direct), rtol=1e-12, atol=1e-12)

    def test_distribution_matches_explicit(self, vmf100):
        from spherestats.sampling import resample_indices
        from spherestats.sampling import SeedSpec

        pool = draw_pool(3, 300, 4)
        d = bs.bootstrap_distribution(vmf100, bs.DISTRIBUTION, 30, 2, pool=pool)
        direct = [
            bs.evaluate_root(bs.RootKind(bs.DISTRIBUTION, vmf100.points),
                             vmf100.points[resample_indices(100, SeedSpec(2, b))], pool)
            for b in range(30)
        ]
        np.testing.assert_allclose(d.root_values, np.sort(direct), atol=1e-13)

    def test_median_vs_direct_simulation(self):
        # sampling distribution of n |mu_hat - mu|^2 simulated from the generator
        n, reps = 100, 10_000
        X = sample_vmf(MU, 5.0, n * reps, 123).points.reshape(reps, n, 3)
        m = X.mean(axis=1)
        mu_hat = m / np.linalg.norm(m, axis=1)[:, None]
        oracle = np.median(n * np.sum((mu_hat - MU) ** 2, axis=1))
        # asymptotic chi^2_2 scaling: (1 - E(mu'x)^2) / ((q - 1) A^2) * 2 ln 2
        A = 1 / math.tanh(5.0) - 1 / 5.0
        assert oracle == pytest.approx((2 * A / 5.0) / (2 * A * A) * 2 * math.log(2), rel=0.05)
        # a single data set's bootstrap median scatters around the oracle
        medians = np.array([
            np.median(bs.bootstrap_distribution(sample_vmf(MU, 5.0, n, (500, k)), bs.MEAN_DIRECTION, 999, k).root_values)
            for k in range(20)
        ])
        assert np.mean(np.abs(medians - oracle) <= 0.2 * oracle) >= 0.7
        assert np.mean(medians) == pytest.approx(oracle, rel=0.05)

    def test_workers_bit_identical(self, vmf100):
        for tag, s in [(bs.MEAN_DIRECTION, vmf100), (bs.MEAN_AXIS, AxisSample(vmf100.points))]:
            a = bs.bootstrap_distribution(s, tag, 333, 17, workers=1)
            b = bs.bootstrap_distribution(s, tag, 333, 17, workers=8)
            assert a.root_values.tobytes() == b.root_values.tobytes()
        a = bs.bootstrap_distribution(vmf100, bs.DISTRIBUTION, 120, 17, kn=200, workers=1)
        b = bs.bootstrap_distribution(vmf100, bs.DISTRIBUTION, 120, 17, kn=200, workers=4)
        assert a.root_values.tobytes() == b.root_values.tobytes()

    def test_degenerate_replicates(self):
        # resamples {a, a, -a, -a} (probability 6/64) have no mean direction
        with pytest.warns(bs.DegenerateReplicatesWarning):
            d = bs.bootstrap_distribution(BALANCED, bs.MEAN_DIRECTION, 400, 1)
        assert 0.05 < d.n_degenerate / 400 < 0.15
        assert np.sum(d.root_values == 16.0) == d.n_degenerate

    def test_cdf_left_continuous(self):
        d = _values([1, 2, 2, 3])
        np.testing.assert_array_equal(d.cdf([0.5, 1, 2, 2.5, 3, 4]), [0, 0, 0.25, 0.75, 0.75, 1])


class TestCriticalValue:
    def test_examples(self):
        d = _values([1, 2, 3, 4])
        assert bs.critical_value(d, 0.5) == 2
        assert bs.critical_value(d, 0.95) == 4
        assert bs.critical_value(d, 0.75) == 3
        assert bs.critical_value(d, 0.01) == 1
        e = _values([0.7] * 9)
        for beta in (0.1, 0.5, 0.99):
            assert bs.critical_value(e, beta) == 0.7

    def test_exact_products(self):
        d = _values(np.arange(1, 21))
        assert bs.critical_value(d, 0.95) == 19
        assert bs.critical_value(_values(np.arange(1, 1000)), 0.9) == 900

    def test_bad_level(self):
        for beta in (0, 1, -0.1, 1.5):
            with pytest.raises(BadLevel):
                bs.critical_value(_values([1, 2]), beta)

    def test_largest_quantile(self, rng):
        v = np.sort(rng.integers(0, 5, size=37).astype(float))
        d = _values(v)
        for beta in np.linspace(0.01, 0.99, 50):
            c = bs.critical_value(d, beta)
            # c is the largest x with #{R < x}/B <= beta
            assert d.cdf(c) <= beta + 1e-12
            bigger = v[v > c]
            if bigger.size:
                assert d.cdf(bigger[0]) > beta


class TestSets:
    def test_cone_examples(self):
        def half(n, c):
            return math.acos(max(-1.0, 1 - c / (2 * n)))
        assert half(100, 2) == pytest.approx(math.acos(0.99))
        assert math.acos(0.99) == pytest.approx(0.1415, abs=1e-4)
        X = np.tile([0.0, 1.0, 0.0], (8, 1))
        cone = bs.confidence_cone(X, 0.9, 99, 0)
        assert cone.half_angle == 0 and cone.critical == 0
        assert cone.contains([0, 1, 0]) and not cone.contains([0, 0.999, 0.04])

    def test_cone_whole_sphere(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            cone = bs.confidence_cone(BALANCED, 0.99, 199, 4)
        assert cone.critical == 16.0 and cone.half_angle == math.pi
        assert cone.contains([0.0, -1.0])

    def test_double_cone(self):
        Y = AxisSample(np.tile([0.0, 0.0, 1.0], (6, 1)))
        dc = bs.confidence_double_cone(Y, 0.9, 99, 0)
        assert dc.half_angle == 0
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            full = bs.confidence_double_cone(AxisSample([[1, 0], [0, 1], [1, 1e-9]]), 0.999, 99, 1)
        assert full.critical == pytest.approx(6.0) and full.half_angle == math.pi / 2

    def test_identical_axes(self):
        Y = AxisSample(np.tile([0.0, 0.6, -0.8], (9, 1)))
        d = bs.bootstrap_distribution(Y, bs.MEAN_AXIS, 100, 3)
        assert np.all(d.root_values == 0)

    def test_double_cone_sign_invariant(self, rng):
        Y = AxisSample(sample_axial_vmf(MU, 4, 50, 8).points)
        dc = bs.confidence_double_cone(Y, 0.9, 299, 2)
        for e in random_unit_rows(rng, 200, 3):
            assert dc.contains(e) == dc.contains(-e)

    def test_double_cone_accepts_raw_directions(self):
        X = sample_axial_vmf(MU, 6, 40, 3).points
        a = bs.confidence_double_cone(X, 0.9, 99, 5)
        b = bs.confidence_double_cone(AxisSample(X), 0.9, 99, 5)
        assert a.half_angle == b.half_angle

    def test_interval_examples(self, vmf100):
        iv = bs.dispersion_interval(np.tile([1.0, 0, 0], (5, 1)), "directional", 0.9, 50, 0)
        assert iv.lo == iv.hi == iv.estimate == 0
        lo, hi = max(0, 0.5 - 1 / 10), min(2, 0.5 + 1 / 10)
        assert (lo, hi) == pytest.approx((0.4, 0.6))
        assert (max(0, 0.05 - 0.1), 0.05 + 0.1) == pytest.approx((0, 0.15))
        iv = bs.dispersion_interval(vmf100, "directional", 0.9, 199, 0)
        assert iv.lo <= iv.estimate <= iv.hi
        assert iv.hi - iv.lo == pytest.approx(2 * iv.critical / 10)

    def test_axial_interval_clip(self):
        Y = AxisSample(sample_uniform_sphere(3, 15, 2).points)
        iv = bs.dispersion_interval(Y, "axial", 0.99, 99, 0)
        assert iv.upper_limit == pytest.approx(4 / 3)
        assert iv.hi <= iv.upper_limit
        assert not iv.contains(1.5)

    def test_interval_kind_errors(self, vmf100):
        with pytest.raises(KindMismatch):
            bs.dispersion_interval(AxisSample(vmf100.points), "directional", 0.9, 10, 0)
        with pytest.raises(KindMismatch):
            bs.dispersion_interval(vmf100, "radial", 0.9, 10, 0)
        with pytest.raises(KindMismatch):
            bs.confidence_cone(AxisSample(vmf100.points), 0.9, 10, 0)

    def test_monotone_in_beta(self, vmf100):
        d = bs.bootstrap_distribution(vmf100, bs.MEAN_DIRECTION, 499, 3)
        betas = np.linspace(0.05, 0.95, 19)
        cs = [bs.critical_value(d, b) for b in betas]
        assert np.all(np.diff(cs) >= 0)
        halves = [bs.confidence_cone(vmf100, b, 499, 3).half_angle for b in betas[::3]]
        assert np.all(np.diff(halves) >= 0)

    def test_membership_consistency(self, vmf100, rng):
        cone = bs.confidence_cone(vmf100, 0.9, 499, 6)
        near = 0
        for mu in random_unit_rows(rng, 1000, 3) * [0.2, 0.2, 1] + [0, 0, 1]:
            mu = mu / np.linalg.norm(mu)
            root = cone.root(mu)
            if abs(root - cone.critical) < 1e-9:
                near += 1
                continue
            ang = math.acos(min(1.0, float(cone.apex @ mu)))
            assert (ang <= cone.half_angle) == (root <= cone.critical) == cone.contains(mu)
        assert near == 0
        iv = bs.dispersion_interval(vmf100, "directional", 0.9, 499, 6)
        for theta in rng.uniform(0, 2, 1000):
            if abs(iv.root(theta) - iv.critical) < 1e-9:
                continue
            assert (iv.lo <= theta <= iv.hi) == iv.contains(theta)

    def test_rotation_equivariance(self, vmf100):
        base = bs.confidence_cone(vmf100, 0.9, 499, 11)
        for seed in range(5):
            R = random_rotation(3, seed)
            rot = bs.confidence_cone(vmf100.rotated(R), 0.9, 499, 11)
            np.testing.assert_allclose(rot.apex, R @ base.apex, atol=1e-12)
            assert rot.half_angle == pytest.approx(base.half_angle, abs=1e-10)

    @pytest.mark.filterwarnings("ignore:reference sample")
    def test_distribution_band(self, vmf100):
        band = bs.distribution_confidence(vmf100, 0.9, 99, 1, kn=300)
        assert band.contains(vmf100.points)
        assert band.root(vmf100.points) == 0
        assert band.critical < math.sqrt(100)
        assert not band.contains(np.tile(-MU, (2000, 1)))
        assert band.band_halfwidth == pytest.approx(band.critical / 10, abs=1e-15)
        # half-space indicator probes: the band and the root give the same verdict
        ref = sample_vmf(MU, 5.0, 5000, 99).points
        inside = band.contains(ref)
        ok = True
        for s in band.pool.directions:
            for t in np.quantile(ref @ s, [0.1, 0.5, 0.9]):
                lo, hi = band.band(s, t)
                p = np.mean(ref @ s <= t)
                ok &= lo - 1e-12 <= p <= hi + 1e-12
        if inside:
            assert ok

    def test_small_reference_warns(self, vmf100):
        band = bs.distribution_confidence(vmf100, 0.9, 49, 1, kn=100)
        with pytest.warns(UserWarning):
            band.root(sample_vmf(MU, 5.0, 50, 2).points)

    def test_cap_cdf_candidate(self):
        X = sample_uniform_sphere(3, 100, 5)
        band = bs.distribution_confidence(X, 0.9, 99, 3, kn=200)
        assert band.root(uniform_cap_cdf(3)) < 2.5


class TestSimulation:
    def test_truth_axial_vs_quadrature(self):
        # for x ~ vMF(kappa) in R^3, lambda_max of E xx' is E[(mu'x)^2]
        for kappa in (0.5, 5.0, 40.0):
            dens = lambda t: np.exp(kappa * (t - 1))
            z = quad(dens, -1, 1)[0]
            m2 = quad(lambda t: t * t * dens(t), -1, 1)[0] / z
            gen = bs.VMFGenerator(kappa)
            assert gen.truth("axial-interval", 10, 0) == pytest.approx(2 * (1 - m2), abs=1e-10)
            a = quad(lambda t: t * dens(t), -1, 1)[0] / z
            assert gen.truth("interval", 10, 0) == pytest.approx(2 * (1 - a), abs=1e-10)

    def test_truth_higher_dim_formula(self):
        q, kappa = 5, 3.0
        a = ive(q / 2, kappa) / ive(q / 2 - 1, kappa)
        gen = bs.VMFGenerator(kappa, q)
        assert gen.truth("axial-interval", 10, 0) == pytest.approx(2 * (q - 1) * a / kappa)

    def test_parse_generator(self):
        assert bs.parse_generator("vmf:kappa=5") == bs.VMFGenerator(5.0, 3)
        assert isinstance(bs.parse_generator("uniform"), bs.UniformGenerator)
        for bad in ("vmf", "vmf:k=2", "gauss", "vmf:kappa=x"):
            with pytest.raises(Exception):
                bs.parse_generator(bad)

    def test_degenerate_generator_full_coverage(self):
        class PointMass:
            def draw(self, n, seed):
                return DirectionSample(np.tile(MU, (n, 1)))

            def truth(self, set_kind, n, seed):
                return MU

        res = bs.coverage_simulation(PointMass(), 20, 0.9, 200, 10, 1, "cone")
        assert res.coverage == 1.0 and res.errors == 0

    def test_errors_counted(self):
        class Antipodal:
            def draw(self, n, seed):
                return DirectionSample(np.vstack([np.tile(MU, (n // 2, 1)), np.tile(-MU, (n // 2, 1))]))

            def truth(self, set_kind, n, seed):
                return MU

        res = bs.coverage_simulation(Antipodal(), 10, 0.9, 20, 4, 1, "cone")
        assert res.errors == 4 and res.coverage == 0.0

    def test_deterministic(self):
        gen = bs.VMFGenerator(5.0)
        a = bs.coverage_simulation(gen, 30, 0.9, 99, 12, 7, "cone")
        b = bs.coverage_simulation(gen, 30, 0.9, 99, 12, 7, "cone", workers=4)
        assert a == b
        assert 0 <= a.coverage <= 1
        assert a.standard_error == pytest.approx(math.sqrt(a.coverage * (1 - a.coverage) / 12))

    def test_uniform_dispersion_truth(self):
        assert bs.UniformGenerator(3).truth("interval", 10, 0) == 2.0


@pytest.mark.slow
def test_cone_coverage_at_half_level():
    res = bs.coverage_simulation(bs.VMFGenerator(5.0, 3), 100, 0.5, 999, 500, 2024, "cone")
    assert 0.43 <= res.coverage <= 0.57
