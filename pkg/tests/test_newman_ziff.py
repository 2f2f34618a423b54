import numpy as np
import pytest

from percodetect import (
    BinaryImage,
    RngStream,
    Topology,
    binomial_pmf,
    build_lattice,
    convolve_cdf,
    estimate_cdf,
    label_components,
    nz_run,
    random_permutation,
    sweep,
)
from percodetect.newman_ziff import MaxSizeCurve, _convolve_values

from oracles import exact_max_cdf, lattice_adjacency_sets, subset_max_law

EXACT_2X2 = np.array([1, 7, 11, 15, 16]) / 16


@pytest.fixture(scope="module")
def lat22():
    return build_lattice(2, 2, Topology.FOUR)


class TestNzRun:
    def test_first_addition_is_one(self, lat22):
        for i in range(20):
            curve = nz_run(lat22, RngStream(0, i))
            assert curve.sizes[0] == 0
            assert curve.sizes[1] == 1

    def test_full_occupancy_on_connected_lattice(self):
        lat = build_lattice(4, 7, Topology.SIX)
        curve = nz_run(lat, RngStream(1))
        assert curve.sizes[-1] == lat.site_count

    def test_2x2_curve_shapes(self, lat22):
        # every visiting order gives (0, 1, x, 3, 4) with x = 2 exactly when
        # the first two visits are adjacent
        adjacency = lattice_adjacency_sets(lat22)
        seen_x = set()
        for i in range(200):
            stream = RngStream(5, i)
            curve = nz_run(lat22, stream)
            order = random_permutation(4, stream)
            expected_x = 2 if order[1] in adjacency[int(order[0])] else 1
            assert curve.sizes.tolist() == [0, 1, expected_x, 3, 4]
            seen_x.add(expected_x)
        assert seen_x == {1, 2}

    def test_monotone_and_bounded(self):
        lat = build_lattice(6, 5, Topology.EIGHT)
        curve = nz_run(lat, RngStream(9))
        sizes = curve.sizes
        assert (np.diff(sizes) >= 0).all()
        assert (sizes[1:] >= 1).all()
        assert (sizes[1:] <= np.arange(1, lat.site_count + 1)).all()

    @pytest.mark.parametrize("topology", list(Topology))
    def test_matches_fresh_labeling_of_prefixes(self, topology):
        lat = build_lattice(4, 4, topology)
        site_count = lat.site_count
        for i in range(10):
            stream = RngStream(31, i)
            curve = nz_run(lat, stream)
            order = random_permutation(site_count, stream)
            flags = np.zeros(site_count, dtype=np.uint8)
            for n in range(1, site_count + 1):
                flags[order[n - 1]] = 1
                relabeled = label_components(BinaryImage(4, 4, flags.copy()), lat)
                assert curve.sizes[n] == relabeled.largest


class TestBinomialPmf:
    def test_small_case(self):
        # log-space evaluation is exact only to ~1 ulp
        pmf = binomial_pmf(2, 0.5)
        assert np.allclose(pmf.weights, [0.25, 0.5, 0.25], rtol=1e-13, atol=0)

    def test_degenerate_p(self):
        pmf = binomial_pmf(5, 0.0)
        assert pmf.weights.tolist() == [1, 0, 0, 0, 0, 0]
        pmf = binomial_pmf(5, 1.0)
        assert pmf.weights.tolist() == [0, 0, 0, 0, 0, 1]

    def test_large_trials_normalized(self):
        pmf = binomial_pmf(3025, 0.5)
        assert abs(pmf.weights.sum() - 1.0) < 1e-12
        assert (pmf.weights >= 0).all()

    def test_invalid_p(self):
        with pytest.raises(ValueError):
            binomial_pmf(10, 1.5)


class TestConvolveCdf:
    def test_p_zero_is_all_ones(self, lat22):
        curve = nz_run(lat22, RngStream(0))
        est = convolve_cdf(curve, binomial_pmf(4, 0.0))
        assert est.values.tolist() == [1, 1, 1, 1, 1]

    def test_p_one_is_step_at_full_size(self, lat22):
        curve = nz_run(lat22, RngStream(0))
        est = convolve_cdf(curve, binomial_pmf(4, 1.0))
        assert est.values.tolist() == [0, 0, 0, 0, 1]

    def test_k_zero_is_empty_probability(self):
        lat = build_lattice(3, 3, Topology.SIX)
        p = 0.3
        curve = nz_run(lat, RngStream(2))
        est = convolve_cdf(curve, binomial_pmf(9, p))
        assert est.values[0] == pytest.approx((1 - p) ** 9, abs=1e-15)

    def test_length_mismatch(self, lat22):
        curve = nz_run(lat22, RngStream(0))
        with pytest.raises(ValueError):
            convolve_cdf(curve, binomial_pmf(5, 0.5))

    def test_matches_direct_indicator_sum(self):
        lat = build_lattice(3, 4, Topology.FOUR)
        pmf = binomial_pmf(12, 0.37)
        curve = nz_run(lat, RngStream(8))
        est = convolve_cdf(curve, pmf)
        direct = [
            sum(pmf.weights[n] for n in range(13) if curve.sizes[n] <= k)
            for k in range(13)
        ]
        assert np.allclose(est.values, direct, atol=1e-12)


class TestEstimateCdf:
    def test_2x2_matches_enumeration(self, lat22):
        est = estimate_cdf(lat22, 0.5, runs=3000, seed=1)
        assert np.abs(est.values - EXACT_2X2).max() <= 0.05

    def test_enumeration_oracle_agrees_with_frozen_values(self, lat22):
        exact = exact_max_cdf(lattice_adjacency_sets(lat22), 0.5)
        assert np.allclose(exact, EXACT_2X2, atol=1e-15)

    def test_monotone_bounded_terminal(self):
        lat = build_lattice(4, 5, Topology.SIX)
        est = estimate_cdf(lat, 0.44, runs=50, seed=3)
        assert (np.diff(est.values) >= -1e-15).all()
        assert est.values[0] >= 0
        assert est.values[-1] == 1.0

    def test_invalid_runs(self, lat22):
        with pytest.raises(ValueError):
            estimate_cdf(lat22, 0.5, runs=0, seed=0)

    def test_deterministic_across_threads(self):
        lat = build_lattice(4, 4, Topology.SIX)
        a = estimate_cdf(lat, 0.5, runs=40, seed=7, threads=1)
        b = estimate_cdf(lat, 0.5, runs=40, seed=7, threads=4)
        assert np.array_equal(a.values, b.values)

    def test_metadata(self, lat22):
        est = estimate_cdf(lat22, 0.5, runs=5, seed=11)
        assert (est.rows, est.cols, est.topology) == (2, 2, Topology.FOUR)
        assert (est.runs, est.seed, est.p) == (5, 11, 0.5)

    def test_averaging_linearity(self):
        # averaging per-run convolved cdfs equals convolving the averaged
        # indicator
        lat = build_lattice(3, 3, Topology.FOUR)
        runs, seed, p = 50, 13, 0.41
        pmf = binomial_pmf(9, p)
        est = estimate_cdf(lat, p, runs=runs, seed=seed)
        indicator_mean = np.zeros((10, 10))
        for i in range(runs):
            sizes = nz_run(lat, RngStream(seed, i)).sizes
            indicator_mean += sizes[None, :] <= np.arange(10)[:, None]
        indicator_mean /= runs
        other = indicator_mean @ pmf.weights / pmf.weights.sum()
        assert np.abs(est.values - other).max() <= 1e-12


class TestSweep:
    def test_singleton_equals_estimate(self, lat22):
        single = sweep(lat22, [0.5], runs=30, seed=2)[0]
        direct = estimate_cdf(lat22, 0.5, runs=30, seed=2)
        assert np.array_equal(single.values, direct.values)

    def test_duplicates_identical_with_reuse(self, lat22):
        a, b = sweep(lat22, [0.3, 0.3], runs=25, seed=4)
        assert np.array_equal(a.values, b.values)

    def test_fresh_ensembles_differ(self, lat22):
        a, b = sweep(lat22, [0.3, 0.3], runs=25, seed=4, reuse_curves=False)
        assert not np.array_equal(a.values, b.values)

    def test_probability_count(self):
        lat = build_lattice(3, 3, Topology.SIX)
        estimates = sweep(lat, [0.1, 0.5, 0.9], runs=10, seed=0)
        assert [e.p for e in estimates] == [0.1, 0.5, 0.9]

    def test_empty_probabilities(self, lat22):
        with pytest.raises(ValueError):
            sweep(lat22, [], runs=10, seed=0)


def test_lemma_equivalence_small():
    # the law of the running maximum at each occupation count matches the
    # uniform-subset law (exhaustive); full-scale version in acceptance
    lat = build_lattice(2, 2, Topology.FOUR)
    adjacency = lattice_adjacency_sets(lat)
    runs = 2000
    counts = np.zeros((5, 5))
    for i in range(runs):
        sizes = nz_run(lat, RngStream(77, i)).sizes
        for n in range(1, 5):
            counts[n, sizes[n]] += 1
    for n in range(1, 5):
        law = subset_max_law(adjacency, n)
        assert np.abs(counts[n] / runs - law).max() <= 0.05


def test_convolve_values_helper_matches_public():
    lat = build_lattice(3, 3, Topology.SIX)
    curve = nz_run(lat, RngStream(0))
    pmf = binomial_pmf(9, 0.6)
    assert np.array_equal(
        _convolve_values(curve.sizes, pmf), convolve_cdf(curve, pmf).values
    )


def test_max_size_curve_type():
    lat = build_lattice(1, 1, Topology.FOUR)
    curve = nz_run(lat, RngStream(0))
    assert isinstance(curve, MaxSizeCurve)
    assert curve.sizes.tolist() == [0, 1]
