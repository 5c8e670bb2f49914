import math

import numpy as np
import pytest

from support_limits import conc, info
from support_limits import model as md

LN2 = math.log(2.0)


class TestChebyshev:
    def test_zero_variance(self):
        assert conc.psi_chebyshev(1.0, 0.0, 100, 0.5) == 0.0

    def test_direct_value(self):
        assert conc.psi_chebyshev(1.0, 1.0, 100, 1.0) == pytest.approx(0.01)

    def test_clipped_to_one(self):
        assert conc.psi_chebyshev(0.1, 50.0, 3, 0.5) == 1.0


class TestVarianceCap:
    def test_binary_value(self):
        assert conc.variance_cap_discrete(2) == pytest.approx(2 * (4 / math.e) ** 2)
        assert conc.variance_cap_discrete(2) == pytest.approx(4.330, abs=1e-3)

    def test_linear_in_alphabet(self):
        assert conc.variance_cap_discrete(6) == pytest.approx(3 * conc.variance_cap_discrete(2))

    def test_gt_variances_below_cap(self):
        cap = conc.variance_cap_discrete(2)
        for k in (4, 8):
            for ell in (1, k // 2, k):
                for rho in (0.0, 0.11, 0.25):
                    part = md.min_info_partition([1.0] * k, ell)
                    _, v = info._gt_moments(md.ModelSpec.group_testing(rho=rho), part)
                    assert v <= cap


class TestBernsteinDiscrete:
    def test_direct_value(self):
        # delta2 I = 1, |Y| = 2, n = 1000
        assert conc.psi_bernstein_discrete(2.0, 2, 1000, 0.5) == pytest.approx(
            2 * math.exp(-1000 / 36), rel=1e-12
        )

    def test_decreasing_to_zero(self):
        vals = [conc.psi_bernstein_discrete(0.5, 2, n, 0.5) for n in (10, 100, 1000, 10**5)]
        assert all(b <= a for a, b in zip(vals, vals[1:]))
        assert vals[-1] < 1e-6


class TestBernsteinLinear:
    def test_degenerate_dif(self):
        part = md.Partition(s_dif=(1,), s_eq=(2,))
        assert conc.psi_bernstein_linear([0.0, 1.0], 1.0, part, 100, 0.5) == 0.0

    def test_alpha_at_equal_scales(self):
        part = md.Partition(s_dif=(1,), s_eq=(2,))
        # s = sigma gives alpha = 2 s (s + s) / (2 s^2) = 2
        assert conc.alpha_dif_linear([1.0, 0.0], 1.0, part) == pytest.approx(2.0)
        a = conc.alpha_dif_linear([3.0, 0.0], 3.0, part)
        assert a == pytest.approx(2.0)

    def test_formula_assembly(self):
        part = md.Partition(s_dif=(1,), s_eq=(2,))
        b = [1.0, 0.5]
        n, d2 = 2000, 0.4
        a = conc.alpha_dif_linear(b, 1.0, part)
        I = 0.5 * math.log1p(1.0)
        d = d2 * I
        expect = 2 * math.exp(-(d * d) * n / (2 * (4 * a * a + d * a)))
        assert expect < 1.0
        assert conc.psi_bernstein_linear(b, 1.0, part, n, d2) == pytest.approx(expect, rel=1e-12)


class TestChernoffGt:
    def test_small_delta_limit(self):
        assert conc.psi_chernoff_gt(LN2, 100, 1, 10**4, 1e-9) == pytest.approx(1.0, abs=1e-4)

    def test_direct_arithmetic(self):
        nu, k, ell, d2, eps, n = LN2, 100, 1, 0.9, 0.1, 10**4
        h = 0.1 * math.log(0.1) + 0.9
        expect = math.exp(-n * (ell / k) * math.exp(-nu) * nu * h * (1 - eps))
        assert conc.psi_chernoff_gt(nu, k, ell, n, d2, eps) == pytest.approx(expect, rel=1e-12)

    def test_log_linear_in_ell(self):
        b1 = conc.psi_chernoff_gt(LN2, 100, 1, 500, 0.9)
        b2 = conc.psi_chernoff_gt(LN2, 100, 2, 500, 0.9)
        assert math.log(b2) / math.log(b1) == pytest.approx(2.0, rel=1e-9)


class TestBennettGtNoisy:
    def test_pure_noise_limit(self):
        assert conc.psi_bennett_gt_noisy(LN2, 0.4999, 100, 2, 10**5, 0.9) > 0.99

    def test_shared_prefactor_with_chernoff(self):
        # both exponents scale linearly in (ell/k) e^-nu nu
        b1 = conc.psi_bennett_gt_noisy(LN2, 0.11, 100, 1, 800, 0.9)
        b2 = conc.psi_bennett_gt_noisy(LN2, 0.11, 100, 3, 800, 0.9)
        assert math.log(b2) / math.log(b1) == pytest.approx(3.0, rel=1e-9)
        c1 = conc.psi_chernoff_gt(LN2, 100, 1, 800, 0.9)
        c3 = conc.psi_chernoff_gt(LN2, 100, 3, 800, 0.9)
        assert math.log(c3) / math.log(c1) == pytest.approx(3.0, rel=1e-9)


class TestRemainder:
    def _specs(self, k):
        return conc.gt_tail_specs(LN2, k)

    def test_vacuous_target(self):
        dims = md.ProblemDims(p=1000, k=10, n=0)
        assert conc.remainder_n_required(self._specs(10), dims, range(1, 11), 1.0) == 0

    def test_monotone_in_target(self):
        dims = md.ProblemDims(p=10**4, k=20, n=0)
        specs = self._specs(20)
        ns = [conc.remainder_n_required(specs, dims, range(1, 21), t) for t in (0.5, 0.1, 0.01)]
        assert ns[0] <= ns[1] <= ns[2]

    def test_unbounded_sentinel(self):
        spec = conc.TailBoundSpec(
            kind="chebyshev", delta2=0.5, params={"mi": lambda l: 1.0, "var": lambda l: 1e30}
        )
        dims = md.ProblemDims(p=100, k=2, n=0)
        assert conc.remainder_n_required(spec, dims, [1, 2], 0.01, n_cap=10**6) == conc.UNBOUNDED

    def test_exact_integer_boundary(self):
        spec = conc.TailBoundSpec(
            kind="bernstein-discrete",
            delta2=0.5,
            params={"mi": lambda l: 0.5, "alphabet_size": 2},
        )
        dims = md.ProblemDims(p=100, k=2, n=0)
        n = conc.remainder_n_required(spec, dims, [1, 2], 0.05)
        assert conc.remainder_sum(spec, dims, [1, 2], n) <= 0.05
        assert conc.remainder_sum(spec, dims, [1, 2], n - 1) > 0.05


class TestFamilyProperties:
    def test_all_bounds_in_unit_interval_and_nonincreasing(self):
        part = md.Partition(s_dif=(1,), s_eq=(2, 3))
        b = [0.8, 1.0, -0.4]
        ns = [1, 10, 100, 1000, 10**4]
        families = [
            lambda n: conc.psi_chebyshev(0.2, 1.0, n, 0.5),
            lambda n: conc.psi_bernstein_discrete(0.2, 2, n, 0.5),
            lambda n: conc.psi_bernstein_linear(b, 1.0, part, n, 0.5),
            lambda n: conc.psi_chernoff_gt(LN2, 50, 1, n, 0.9),
            lambda n: conc.psi_bennett_gt_noisy(LN2, 0.11, 50, 1, n, 0.9),
        ]
        for fam in families:
            vals = [fam(n) for n in ns]
            assert all(0.0 <= v <= 1.0 for v in vals)
            assert all(b2 <= a + 1e-15 for a, b2 in zip(vals, vals[1:]))

    def test_bernstein_vs_chebyshev_weak_regime(self):
        # when n (delta2 I)^2 <= 1, both bounds exceed 1/2 (sanity cross-check)
        I, d2 = 0.2, 0.5
        n = int(1.0 / (d2 * I) ** 2)
        cap = conc.variance_cap_discrete(2)
        assert conc.psi_chebyshev(I, cap, n, d2) > 0.5
        assert conc.psi_bernstein_discrete(I, 2, n, d2) > 0.5


def _gt_density_sums(m, part, n, trials, seed):
    k = part.k
    xi, m0, m1, probs, vals = info._gt_case_table(m.bernoulli_p(k), part.ell, m.rho)
    q0 = (1.0 - m.bernoulli_p(k)) ** (k - part.ell)
    cats = np.concatenate([[1.0 - q0], q0 * probs])
    vvals = np.concatenate([[0.0], vals])
    keep = cats > 0
    rng = md.rng_stream(seed)
    counts = rng.multinomial(n, cats[keep] / cats[keep].sum(), size=trials)
    return counts @ vvals[keep]


class TestEmpiricalDomination:
    def test_chebyshev_gt_tail(self):
        m = md.ModelSpec.group_testing(rho=0.11)
        part = md.min_info_partition([1.0] * 8, 2)
        st = info.mutual_information(m, part)
        n, d2 = 500, 0.5
        sums = _gt_density_sums(m, part, n, 10**4, 33)
        freq = float(np.mean(np.abs(sums - n * st.mi) >= n * d2 * st.mi))
        se = math.sqrt(max(freq * (1 - freq), 1e-4) / 10**4)
        assert freq <= conc.psi_chebyshev(st.mi, st.var, n, d2) + 3 * se

    def test_chernoff_gt_lower_tail(self):
        m = md.ModelSpec.group_testing(rho=0.0)
        part = md.min_info_partition([1.0] * 100, 2)
        st = info.mutual_information(m, part)
        n, d2 = 900, 0.85
        sums = _gt_density_sums(m, part, n, 10**4, 34)
        freq = float(np.mean(sums <= n * st.mi * (1 - d2)))
        se = math.sqrt(max(freq * (1 - freq), 1e-4) / 10**4)
        assert freq <= conc.psi_chernoff_gt(m.nu, 100, 2, n, d2) + 3 * se
