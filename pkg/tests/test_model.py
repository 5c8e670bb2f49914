import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from support_limits import model as md


class TestDims:
    def test_validation(self):
        with pytest.raises(ValueError):
            md.ProblemDims(p=5, k=6, n=1)
        with pytest.raises(ValueError):
            md.ProblemDims(p=5, k=2, n=1, d_max=2)
        md.ProblemDims(p=5, k=2, n=0, d_max=1)


class TestModelSpec:
    def test_pairings(self):
        with pytest.raises(ValueError):
            md.ModelSpec(channel=md.LINEAR, design=md.BERNOULLI)
        with pytest.raises(ValueError):
            md.ModelSpec(channel=md.GROUP_TESTING, design=md.GAUSSIAN_UNIT)
        with pytest.raises(ValueError):
            md.ModelSpec.group_testing(rho=0.5)
        md.ModelSpec.group_testing(rho=0.49)

    def test_prior_pairing(self):
        with pytest.raises(ValueError):
            md.validate_pairing(md.ModelSpec.group_testing(), md.SignalPrior.fixed([1.0]), 1)
        with pytest.raises(ValueError):
            md.validate_pairing(md.ModelSpec.linear(1.0), md.SignalPrior.all_ones(), 2)
        with pytest.raises(ValueError):  # nu/k > 1
            md.validate_pairing(md.ModelSpec.group_testing(nu=3.0), md.SignalPrior.all_ones(), 2)


class TestPartition:
    def test_invariants(self):
        with pytest.raises(ValueError):
            md.Partition(s_dif=(), s_eq=(1, 2))
        with pytest.raises(ValueError):
            md.Partition(s_dif=(1,), s_eq=(1, 2))
        with pytest.raises(ValueError):
            md.Partition(s_dif=(1,), s_eq=(3,))
        part = md.Partition(s_dif=(2, 1), s_eq=(3,))
        assert part.s_dif == (1, 2) and part.ell == 2 and part.k == 3


class TestMinInfoPartition:
    def test_smallest_magnitude(self):
        assert md.min_info_partition([3, 1, 2], 1).s_dif == (2,)

    def test_tie_break_lowest_index(self):
        assert md.min_info_partition([4.0, 4.0, 4.0], 2).s_dif == (1, 2)

    def test_magnitude_ignores_sign(self):
        assert md.min_info_partition([-5, 0.1, 4], 2).s_dif == (2, 3)

    @settings(max_examples=40, deadline=None)
    @given(
        st.lists(st.floats(min_value=-5, max_value=5), min_size=2, max_size=8),
        st.integers(min_value=1, max_value=8),
    )
    def test_minimizes_energy_over_all_partitions(self, b, ell):
        ell = min(ell, len(b))
        b_arr = np.asarray(b)
        mine = float(np.sum(b_arr[md.min_info_partition(b, ell).dif_index()] ** 2))
        brute = min(
            float(np.sum(b_arr[p.dif_index()] ** 2))
            for p in md.enumerate_partitions(len(b), [ell])
        )
        assert mine <= brute + 1e-12
        assert md.min_info_partition(b, ell).ell == ell


class TestEnumeratePartitions:
    def test_counts(self):
        assert sum(1 for _ in md.enumerate_partitions(2)) == 3
        assert sum(1 for _ in md.enumerate_partitions(3, [3])) == 1
        assert sum(1 for _ in md.enumerate_partitions(10)) == 1023

    def test_guard(self):
        with pytest.raises(md.GuardError):
            list(md.enumerate_partitions(25))


class TestSnr:
    def test_zero_db(self):
        prior = md.SignalPrior.iid_gaussian(0.25)
        assert md.snr_db(prior, md.ModelSpec.linear(1.0), 4) == pytest.approx(0.0, abs=1e-12)

    def test_ten_db(self):
        prior = md.SignalPrior.iid_gaussian(10.0 / 3.0)
        assert md.snr_db(prior, md.ModelSpec.linear(1.0), 3) == pytest.approx(10.0, abs=1e-12)

    def test_round_trip(self):
        for snr in (-13.0, 0.0, 27.5):
            c_beta = md.c_beta_from_snr(snr)
            prior = md.SignalPrior.iid_gaussian(c_beta / 5)
            assert md.snr_db(prior, md.ModelSpec.linear(1.0), 5) == pytest.approx(snr, abs=1e-12)


class TestSampler:
    def test_reproducible(self):
        dims = md.ProblemDims(p=20, k=3, n=15)
        m = md.ModelSpec.one_bit(0.5)
        pr = md.SignalPrior.permuted([1.0, -2.0, 1.0])
        a = md.sample_realization(dims, m, pr, seed=99)
        b = md.sample_realization(dims, m, pr, seed=99)
        assert a.support == b.support
        assert np.array_equal(a.x, b.x) and np.array_equal(a.y, b.y)
        c = md.sample_realization(dims, m, pr, seed=100)
        assert not np.array_equal(a.x, c.x)

    def test_gt_all_zero_rows_give_zero_output(self):
        m = md.ModelSpec.group_testing(rho=0.0)
        y = md.channel_output(m, np.zeros((6, 3)), np.ones(3), md.rng_stream(0))
        assert np.array_equal(y, np.zeros(6))

    def test_linear_noiseless_limit(self):
        dims = md.ProblemDims(p=10, k=2, n=7)
        m = md.ModelSpec.linear(1e-12)
        pr = md.SignalPrior.fixed([1.5, -0.3])
        r = md.sample_realization(dims, m, pr, seed=5)
        assert np.max(np.abs(r.y - r.x @ r.beta)) < 1e-10

    def test_one_bit_alphabet(self):
        dims = md.ProblemDims(p=6, k=2, n=1000)
        r = md.sample_realization(dims, md.ModelSpec.one_bit(1.0), md.SignalPrior.fixed([1.0, 1.0]), seed=3)
        assert set(np.unique(r.y)) <= {-1.0, 1.0}

    def test_sign_zero_convention(self):
        assert np.array_equal(md.one_bit_sign([0.0, 1e-300, -1e-300]), [1.0, 1.0, -1.0])

    def test_support_uniformity(self):
        dims = md.ProblemDims(p=6, k=2, n=0)
        m = md.ModelSpec.linear(1.0)
        pr = md.SignalPrior.fixed([1.0, 2.0])
        counts = {}
        n_seeds = 10**4
        for s in range(n_seeds):
            sup = md.sample_realization(dims, m, pr, seed=s).support
            counts[sup] = counts.get(sup, 0) + 1
        assert len(counts) == 15
        expect = n_seeds / 15
        sd = math.sqrt(n_seeds * (1 / 15) * (14 / 15))
        assert all(abs(c - expect) <= 4 * sd for c in counts.values())

    def test_permuted_prior_preserves_multiset(self):
        dims = md.ProblemDims(p=9, k=4, n=2)
        pr = md.SignalPrior.permuted([1.0, 1.0, -2.0, 0.5])
        for s in range(100):
            r = md.sample_realization(dims, md.ModelSpec.linear(1.0), pr, seed=s)
            assert sorted(r.b_support()) == sorted(pr.b)

    def test_json_round_trip_shape(self):
        import json

        dims = md.ProblemDims(p=5, k=2, n=3)
        r = md.sample_realization(dims, md.ModelSpec.linear(1.0), md.SignalPrior.fixed([1, 2]), 0)
        blob = json.loads(r.to_json())
        assert set(blob) == {"support", "beta", "x", "y"}
        assert len(blob["beta"]) == 5 and len(blob["y"]) == 3


class TestPriorAccessors:
    def test_m_beta_and_extremes(self):
        pr = md.SignalPrior.permuted([1.0, -1.0, 2.0, 1.0])
        assert pr.m_beta == 3
        assert pr.b_min == 1.0 and pr.b_max == 2.0

    def test_gt_uses_bernoulli_probability(self):
        m = md.ModelSpec.group_testing(nu=math.log(2.0))
        assert m.bernoulli_p(10) == pytest.approx(math.log(2.0) / 10)
