"""
Named verification checks: every derived oracle and invariant the package
relies on, runnable as one suite from the CLI (`support-limits verify`).

Each check recomputes its target through an independent route (brute-force
enumeration, Monte Carlo, dense quadrature, finite differences of closed
forms) and compares against the library path at a stated tolerance.  A check
returns (measured, tolerance, passed); the CLI emits one line per check and
a machine-readable JSON report.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, asdict
from typing import Callable

import numpy as np
from scipy.special import ndtr

from . import bounds, conc, info, model as md, numerics as nm, sim

SEED = 20240917


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""
    seconds: float = 0.0

    def to_dict(self):
        return asdict(self)


_REGISTRY: dict[str, Callable[[], tuple[float, float, str]]] = {}


def check(name: str):
    def deco(fn):
        _REGISTRY[name] = fn
        return fn

    return deco


def available_checks() -> list[str]:
    return sorted(_REGISTRY)


def run_checks(only: str | None = None) -> list[CheckResult]:
    names = [only] if only else available_checks()
    out = []
    for name in names:
        if name not in _REGISTRY:
            raise KeyError(f"unknown check {name!r}; see available_checks()")
        t0 = time.perf_counter()
        try:
            measured, tol, detail = _REGISTRY[name]()
            passed = measured <= tol
        except Exception as exc:  # surface as a failed check, not a crash
            measured, tol, detail, passed = math.inf, 0.0, f"exception: {exc}", False
        out.append(
            CheckResult(
                name=name,
                passed=passed,
                measured=measured,
                tolerance=tol,
                detail=detail,
                seconds=time.perf_counter() - t0,
            )
        )
    return out


# --- numerics ---------------------------------------------------------------


@check("q-symmetry")
def _q_symmetry():
    xs = np.linspace(-8, 8, 1601)
    err = float(np.max(np.abs(nm.q_function(xs) + nm.q_function(-xs) - 1.0)))
    return err, 1e-14, "max |Q(x)+Q(-x)-1|"


@check("q-tail-value")
def _q_tail():
    # complementary-error-function series oracle at x = 1.2816 (~0.1000)
    from scipy.special import erfc

    oracle = 0.5 * erfc(1.2816 / math.sqrt(2.0))
    return abs(nm.q_function(1.2816) - oracle), 1e-6, "Q(1.2816) vs erfc series"


@check("chi2-identity")
def _chi2_identity():
    us = np.linspace(0.0, 25.0, 501)
    err = float(np.max(np.abs(nm.chi2_cdf_1dof(us) - (1.0 - 2.0 * nm.q_function(np.sqrt(us))))))
    return err, 1e-12, "F(u) vs 1 - 2Q(sqrt(u))"


@check("chi2-mc")
def _chi2_mc():
    rng = md.rng_stream(SEED, 1)
    n = 10**7
    w = rng.standard_normal(n)
    emp = float(np.mean(w * w <= 1.0))
    se = math.sqrt(emp * (1 - emp) / n)
    return abs(nm.chi2_cdf_1dof(1.0) - emp), 3 * se, "F(1) vs 1e7-sample MC"


@check("g-endpoints")
def _g_endpoints():
    return max(abs(nm.g_alpha(0.0)), abs(nm.g_alpha(1.0) - 1.0)), 1e-9, "g(0)=0, g(1)=1"


@check("g-monotone")
def _g_monotone():
    grid = np.linspace(0.0, 1.0, 101)
    vals = np.array([nm.g_alpha(float(a)) for a in grid])
    worst = float(np.max(np.maximum(0.0, -np.diff(vals))))
    return worst, 0.0, "nondecreasing on 101-point grid"


@check("g-sort-oracle")
def _g_sort_oracle():
    # sort-based oracle: mean of the smallest half of 1e6 squared normals
    devs = []
    for s in range(5):
        rng = md.rng_stream(SEED, 2, s)
        sq = np.sort(rng.standard_normal(10**6) ** 2)
        devs.append(abs(float(np.mean(sq[: 500000])) * 0.5 - nm.g_alpha(0.5)))
    return max(devs), 1e-3, "g(0.5) vs sorted-squares MC, 5 seeds"


@check("g-quadrature-vs-closed")
def _g_quad():
    quad = nm.QuadratureSpec(scheme="adaptive-simpson", abs_tol=1e-12)
    grid = np.linspace(0.05, 0.95, 19)
    err = max(abs(nm.g_alpha(float(a), quad) - nm.g_alpha(float(a))) for a in grid)
    return err, 1e-9, "adaptive Simpson route vs closed form"


@check("stein-constant")
def _stein():
    # Stein identity: E[W logit(1-Q)] = E[phi(W)/(Q(W)(1-Q(W)))], dense grid;
    # Q(t)(1-Q(t)) is even, so evaluate it at |t| where Q is the small factor
    t = np.linspace(-10, 10, 2000001)
    phi = np.exp(-0.5 * t * t) / math.sqrt(2 * math.pi)
    qm = ndtr(-np.abs(t))
    oracle = float(np.trapezoid(phi * phi / (qm * (1.0 - qm)), t))
    mine = info.gaussian_logit_slope_constant()
    return abs(mine - oracle), 1e-4, f"oracle {oracle:.6f}"


@check("gauss-exp-odd")
def _odd_function():
    v = nm.gaussian_expectation(lambda w: w**3)
    v2 = nm.gaussian_expectation(
        lambda w: w**3, nm.QuadratureSpec(scheme="adaptive-simpson", abs_tol=1e-10)
    )
    return max(abs(v), abs(v2)), 1e-9, "E[W^3] = 0 both schemes"


@check("gh-entropy-vs-mc")
def _gh_vs_mc():
    # E[H2(Q(cW))] by 96-node quadrature vs 1e7-sample Monte Carlo
    rng = md.rng_stream(SEED, 3)
    w = rng.standard_normal(10**7)
    devs = []
    for c in (0.5, 2.0, 20.0):
        samples = nm.binary_entropy(np.clip(ndtr(-c * w), 1e-300, 1 - 1e-16))
        se = float(np.std(samples) / math.sqrt(w.size))
        dev = abs(float(np.mean(samples)) - nm.mean_entropy_q_scaled(c))
        devs.append(dev - 3 * se)
    return max(devs), 0.0, "3-SE agreement at c in {0.5, 2, 20}"


@check("log-binomial-stirling")
def _log_binom_stirling():
    exact = nm.log_binomial(10**6, 10**3)
    oracle = float(sum(math.log(10**6 - i) - math.log(i + 1) for i in range(10**3)))
    return abs(exact - oracle) / abs(oracle), 1e-10, "log-sum oracle, relative"


@check("entropy-even-in-x")
def _entropy_even():
    xs = np.linspace(0.0, 5.0, 51)
    err = max(
        abs(nm.binary_entropy(nm.q_function(float(x))) - nm.binary_entropy(nm.q_function(float(-x))))
        for x in xs
    )
    return err, 1e-12, "H2(Q(x)) even"


# --- model -----------------------------------------------------------------


@check("support-uniformity")
def _support_uniform():
    dims = md.ProblemDims(p=6, k=2, n=0)
    m = md.ModelSpec.linear(1.0)
    pr = md.SignalPrior.fixed([1.0, 2.0])
    counts = {}
    n_seeds = 10**4
    for s in range(n_seeds):
        r = md.sample_realization(dims, m, pr, seed=s)
        counts[r.support] = counts.get(r.support, 0) + 1
    expect = n_seeds / 15.0
    sd = math.sqrt(n_seeds * (1 / 15) * (14 / 15))
    worst = max(abs(c - expect) for c in counts.values())
    return worst, 4 * sd, f"15 supports, worst dev {worst:.0f}"


@check("permuted-multiset")
def _permuted_multiset():
    dims = md.ProblemDims(p=9, k=4, n=2)
    m = md.ModelSpec.linear(1.0)
    pr = md.SignalPrior.permuted([1.0, 1.0, -2.0, 0.5])
    bad = 0
    for s in range(200):
        r = md.sample_realization(dims, m, pr, seed=s)
        if sorted(r.b_support()) != sorted(pr.b):
            bad += 1
    return float(bad), 0.0, "non-zero values preserve the multiset"


@check("min-info-partition-bruteforce")
def _min_partition_brute():
    rng = md.rng_stream(SEED, 4)
    worst = 0.0
    for k in (3, 5, 8):
        b = rng.standard_normal(k)
        for ell in range(1, k + 1):
            target = float(np.sum(b[md.min_info_partition(b, ell).dif_index()] ** 2))
            brute = min(
                float(np.sum(b[p.dif_index()] ** 2))
                for p in md.enumerate_partitions(k, [ell])
            )
            worst = max(worst, target - brute)
    return worst, 1e-12, "min-energy split over all partitions"


# --- info ------------------------------------------------------------------


def _gt_mi_exhaustive(nu, k, ell, rho):
    """Exhaustive joint enumeration over X in {0,1}^k (and Y) from first
    principles; independent of the case-table path."""
    p1 = nu / k
    dif = list(range(ell))
    I = 0.0
    for bits in range(2**k):
        x = [(bits >> i) & 1 for i in range(k)]
        px = math.prod(p1 if xi else 1 - p1 for xi in x)
        clean = 1 if any(x) else 0
        eq_any = any(x[ell:])
        # P[y | x_eq] marginalizing x_dif
        xi_l = (1 - p1) ** ell
        for y in (0, 1):
            py_num = (1 - rho) if y == clean else rho
            if py_num == 0.0:
                continue
            if eq_any:
                py_den = (1 - rho) if y == 1 else rho
            else:
                py_den = xi_l * ((1 - rho) if y == 0 else rho) + (1 - xi_l) * (
                    (1 - rho) if y == 1 else rho
                )
            I += px * py_num * math.log(py_num / py_den)
    return I


@check("gt-mi-enumeration")
def _gt_mi_enum():
    worst = 0.0
    for k in range(1, 13):
        for ell in range(1, k + 1):
            for nu in (0.3, math.log(2.0), 1.5):
                if nu > k:  # nu/k > 1 is not a valid Bernoulli design
                    continue
                for rho in (0.0, 0.11, 0.25):
                    closed = info.gt_mi_closed_form(nu, k, ell, rho)
                    brute = _gt_mi_exhaustive(nu, k, ell, rho)
                    worst = max(worst, abs(closed - brute))
    return worst, 1e-12, "closed form vs exhaustive joint enumeration"


@check("info-density-mean-linear")
def _idens_mean_linear():
    m = md.ModelSpec.linear(0.8)
    b = np.array([1.0, -0.6, 0.3])
    part = md.min_info_partition(b, 2)
    mc = info.variance_mc(m, part, b, trials=10**6, seed=SEED + 5)
    closed = info.mutual_information(m, part, b).mi
    return abs(mc.mi - closed), 3 * mc.std_err, "1e6-sample density mean vs closed form"


@check("info-density-mean-1bit")
def _idens_mean_1bit():
    m = md.ModelSpec.one_bit(1.0)
    b = np.array([1.0, 1.0, -0.5])
    part = md.min_info_partition(b, 1)
    mc = info.variance_mc(m, part, b, trials=10**6, seed=SEED + 6)
    quad = info.mutual_information(m, part, b).mi
    return abs(mc.mi - quad), 3 * mc.std_err, "1e6-sample density mean vs quadrature"


@check("info-density-mean-gt")
def _idens_mean_gt():
    m = md.ModelSpec.group_testing(rho=0.11)
    part = md.min_info_partition([1.0] * 4, 2)
    mc = info.variance_mc(m, part, None, trials=10**6, seed=SEED + 7)
    closed = info.mutual_information(m, part).mi
    return abs(mc.mi - closed), 3 * mc.std_err, "1e6-sample density mean vs closed form"


@check("gt-variance-enumeration")
def _gt_var_enum():
    worst = 0.0
    for k in (4, 8):
        for ell in (1, k // 2, k):
            part = md.min_info_partition([1.0] * k, ell)
            m = md.ModelSpec.group_testing(rho=0.11)
            _, var_table = info._gt_moments(m, part)
            mc = info.variance_mc(m, part, None, trials=2 * 10**5, seed=SEED + k + ell)
            se = mc.var * math.sqrt(2.0 / (mc.trials - 1))
            worst = max(worst, abs(var_table - mc.var) - 3 * se)
    return worst, 0.0, "case-table variance vs MC, 3 SE"


@check("onebit-mi-le-log2-and-dpi")
def _onebit_dpi():
    rng = md.rng_stream(SEED, 8)
    worst = -math.inf
    for _ in range(20):
        k = int(rng.integers(2, 6))
        b = rng.normal(0, 1.2, k)
        ell = int(rng.integers(1, k + 1))
        part = md.min_info_partition(b, ell)
        sigma = float(rng.uniform(0.5, 2.0))
        one = info.mutual_information(md.ModelSpec.one_bit(sigma), part, b).mi
        lin = info.mutual_information(md.ModelSpec.linear(sigma), part, b).mi
        worst = max(worst, one - nm.LOG2, one - lin)
    return worst, 1e-9, "1-bit MI <= log 2 and <= linear MI"


@check("gt-mi-rho-monotone")
def _gt_rho_monotone():
    part = md.min_info_partition([1.0] * 6, 3)
    rhos = np.linspace(0.0, 0.49, 50)
    vals = [info.mutual_information(md.ModelSpec.group_testing(rho=float(r)), part).mi for r in rhos]
    worst = max(max(0.0, vals[i + 1] - vals[i]) for i in range(len(vals) - 1))
    return worst, 1e-12, "GT MI decreasing in rho"


@check("min-partition-minimizes-mi")
def _min_partition_mi():
    rng = md.rng_stream(SEED, 9)
    worst = 0.0
    for model in (md.ModelSpec.linear(1.0), md.ModelSpec.one_bit(1.0)):
        for k in (4, 6, 8):
            b = rng.normal(0, 1, k)
            for ell in (1, k // 2, k - 1):
                mine = info.mutual_information(model, md.min_info_partition(b, ell), b).mi
                brute = min(
                    info.mutual_information(model, p, b).mi
                    for p in md.enumerate_partitions(k, [ell])
                )
                worst = max(worst, mine - brute)
    return worst, 1e-9, "min-info split minimizes MI (brute force)"


@check("variance-bound-1bit-c0")
def _var_bound_1bit():
    # MC variance <= c0 x structural bound with c0 = 16 across a (b, sigma) grid
    worst = -math.inf
    for sigma in (0.5, 1.0, 2.0):
        for scale in (0.3, 1.0, 2.0):
            b = scale * np.array([1.0, -0.7, 0.4])
            part = md.min_info_partition(b, 2)
            m = md.ModelSpec.one_bit(sigma)
            mc = info.variance_mc(m, part, b, trials=10**5, seed=SEED)
            bound = info.variance_bound_1bit(b, sigma, part, c0=16.0)
            worst = max(worst, mc.var - bound)
    return worst, 0.0, "MC variance within c0=16 x structural bound"


@check("i0-bound-mc")
def _i0_mc():
    # empirical I0 (log-ratio of exact Gaussian densities) <= closed bound
    k, n, sbsq, sigma = 3, 10, 0.1, 1.0
    dims = md.ProblemDims(p=5, k=k, n=n)
    m = md.ModelSpec.linear(sigma)
    pr = md.SignalPrior.iid_gaussian(sbsq)
    rng = md.rng_stream(SEED, 10)
    vals = np.empty(4000)
    for t in range(vals.size):
        x = rng.standard_normal((n, k))
        b = rng.normal(0, math.sqrt(sbsq), k)
        y = x @ b + sigma * rng.standard_normal(n)
        num = -0.5 * np.sum((y - x @ b) ** 2) / sigma**2 - 0.5 * n * math.log(
            2 * math.pi * sigma**2
        )
        den = info.log_marginal_likelihood(m, pr, x, y)
        vals[t] = num - den
    bound, _, _ = info.prior_divergence_stats(m, pr, dims)
    se = float(np.std(vals) / math.sqrt(vals.size))
    return float(np.mean(vals)) - bound - 3 * se, 0.0, f"I0 MC {np.mean(vals):.3f} <= {bound:.3f}"


@check("marginal-gaussian-2d")
def _marginal_2d():
    m = md.ModelSpec.linear(0.7)
    pr = md.SignalPrior.iid_gaussian(0.5)
    x = np.array([[1.3], [-0.4]])
    y = np.array([0.2, 1.1])
    cov = 0.49 * np.eye(2) + 0.5 * np.outer(x[:, 0], x[:, 0])
    oracle = -0.5 * y @ np.linalg.solve(cov, y) - 0.5 * math.log(
        (2 * math.pi) ** 2 * np.linalg.det(cov)
    )
    return abs(info.log_marginal_likelihood(m, pr, x, y) - oracle), 1e-10, "2-D Gaussian oracle"


# --- concentration ----------------------------------------------------------


def _gt_density_sums(m: md.ModelSpec, part: md.Partition, n: int, trials: int, seed: int):
    """i^n samples for GT by multinomial draws over the finite case table."""
    k = part.k
    xi, m0, m1, probs, vals = info._gt_case_table(m.bernoulli_p(k), part.ell, m.rho)
    q0 = (1.0 - m.bernoulli_p(k)) ** (k - part.ell)
    cats = np.concatenate([[1.0 - q0], q0 * probs])
    vvals = np.concatenate([[0.0], vals])
    keep = cats > 0
    rng = md.rng_stream(seed)
    counts = rng.multinomial(n, cats[keep] / cats[keep].sum(), size=trials)
    return counts @ vvals[keep]


def _tail_freq(sums: np.ndarray, n: int, I: float, delta2: float, two_sided: bool):
    if two_sided:
        hits = np.abs(sums - n * I) >= n * delta2 * I
    else:
        hits = sums <= n * I * (1.0 - delta2)
    p = float(np.mean(hits))
    se = math.sqrt(max(p * (1 - p), 1.0 / hits.size) / hits.size)
    return p, se


@check("psi-chebyshev-domination")
def _psi_cheby_dom():
    worst = -math.inf
    m = md.ModelSpec.group_testing(rho=0.11)
    for ell, n, d2 in ((2, 500, 0.5), (3, 300, 0.6), (1, 800, 0.7)):
        part = md.min_info_partition([1.0] * 8, ell)
        st = info.mutual_information(m, part)
        sums = _gt_density_sums(m, part, n, 10**4, SEED + ell)
        p, se = _tail_freq(sums, n, st.mi, d2, two_sided=True)
        bound = conc.psi_chebyshev(st.mi, st.var, n, d2)
        worst = max(worst, p - bound - 3 * se)
    return worst, 0.0, "empirical two-sided tail <= Chebyshev"


@check("psi-bernstein-discrete-domination")
def _psi_bd_dom():
    worst = -math.inf
    m = md.ModelSpec.one_bit(1.0)
    b = np.array([2.0, 2.0, 2.0])
    rng = md.rng_stream(SEED, 11)
    for ell, n, d2 in ((3, 300, 0.9), (2, 500, 0.8), (1, 900, 0.9)):
        part = md.min_info_partition(b, ell)
        st = info.mutual_information(m, part, b)
        x = rng.standard_normal((10**4, n, 3)).reshape(-1, 3)
        y = np.where(x @ b + rng.standard_normal(x.shape[0]) >= 0, 1.0, -1.0)
        dens = info.density_rows(m, part, b, x, y).reshape(10**4, n)
        p, se = _tail_freq(dens.sum(axis=1), n, st.mi, d2, two_sided=True)
        bound = conc.psi_bernstein_discrete(st.mi, 2, n, d2)
        worst = max(worst, p - bound - 3 * se)
    return worst, 0.0, "empirical tail <= discrete Bernstein"


@check("psi-bernstein-linear-domination")
def _psi_bl_dom():
    worst = -math.inf
    m = md.ModelSpec.linear(1.0)
    b = np.array([1.0, -0.8, 0.6])
    rng = md.rng_stream(SEED, 12)
    for ell, n, d2 in ((3, 60, 0.9), (2, 120, 0.9), (1, 400, 0.9)):
        part = md.min_info_partition(b, ell)
        st = info.mutual_information(m, part, b)
        x = rng.standard_normal((10**4 * n, 3))
        y = x @ b + rng.standard_normal(x.shape[0])
        dens = info.density_rows(m, part, b, x, y).reshape(10**4, n)
        p, se = _tail_freq(dens.sum(axis=1), n, st.mi, d2, two_sided=True)
        bound = conc.psi_bernstein_linear(b, 1.0, part, n, d2)
        worst = max(worst, p - bound - 3 * se)
    return worst, 0.0, "empirical tail <= linear Bernstein"


@check("psi-chernoff-gt-domination")
def _psi_chernoff_dom():
    worst = -math.inf
    m = md.ModelSpec.group_testing(rho=0.0)
    for ell, n, d2 in ((1, 1500, 0.9), (2, 900, 0.85), (3, 600, 0.9)):
        part = md.min_info_partition([1.0] * 100, ell)
        st = info.mutual_information(m, part)
        sums = _gt_density_sums(m, part, n, 10**4, SEED + 13 + ell)
        p, se = _tail_freq(sums, n, st.mi, d2, two_sided=False)
        bound = conc.psi_chernoff_gt(m.nu, 100, ell, n, d2)
        worst = max(worst, p - bound - 3 * se)
    return worst, 0.0, "empirical lower tail <= Chernoff"


@check("psi-bennett-gt-domination")
def _psi_bennett_dom():
    worst = -math.inf
    m = md.ModelSpec.group_testing(rho=0.11)
    for ell, n, d2 in ((2, 1200, 0.9), (1, 2500, 0.9), (3, 900, 0.85)):
        part = md.min_info_partition([1.0] * 100, ell)
        st = info.mutual_information(m, part)
        sums = _gt_density_sums(m, part, n, 10**4, SEED + 17 + ell)
        p, se = _tail_freq(sums, n, st.mi, d2, two_sided=False)
        bound = conc.psi_bennett_gt_noisy(m.nu, 0.11, 100, ell, n, d2)
        worst = max(worst, p - bound - 3 * se)
    return worst, 0.0, "empirical lower tail <= Bennett"


@check("variance-cap-discrete")
def _var_cap():
    cap = conc.variance_cap_discrete(2)
    worst = -math.inf
    for k in (4, 6, 8):
        for ell in (1, k // 2, k):
            for rho in (0.0, 0.11, 0.25):
                part = md.min_info_partition([1.0] * k, ell)
                _, v = info._gt_moments(md.ModelSpec.group_testing(rho=rho), part)
                worst = max(worst, v - cap)
    return worst, 0.0, f"GT variances <= |Y|(4/e)^2 = {cap:.3f}"


@check("remainder-monotone")
def _remainder_monotone():
    dims = md.ProblemDims(p=10**4, k=20, n=0)
    specs = conc.gt_tail_specs(math.log(2.0), 20)
    ns = [
        conc.remainder_n_required(specs, dims, range(1, 21), t)
        for t in (0.5, 0.1, 0.01)
    ]
    ok = ns[0] <= ns[1] <= ns[2]
    return 0.0 if ok else 1.0, 0.0, f"n(0.5..0.01) = {ns}"


@check("remainder-gt-scaling")
def _remainder_scaling():
    # computed n consistent with k log(p/k) scaling along k = sqrt(p)
    xs, ys = [], []
    for p in (10**3, 10**4, 10**5):
        k = round(math.sqrt(p))
        dims = md.ProblemDims(p=p, k=k, n=0)
        specs = conc.gt_tail_specs(math.log(2.0), k)
        n = float(conc.remainder_n_required(specs, dims, range(1, k + 1), 0.01))
        xs.append(math.log(k * math.log(p / k)))
        ys.append(math.log(n))
    slope = float(np.polyfit(xs, ys, 1)[0])
    return abs(slope - 1.0), 0.5, f"regression slope {slope:.3f} vs 1 (k log(p/k) scaling)"


# --- bounds -----------------------------------------------------------------


@check("cor-gt-noiseless-third")
def _cor6_third():
    worst = 0.0
    for theta in np.arange(0.05, 1.0 / 3.0 + 1e-12, 0.05):
        res = bounds.cor_gt_noiseless(float(theta))
        worst = max(worst, abs(res.coef_ach - 1.0 / nm.LOG2))
    return worst, 1e-9, "coef_ach = 1/log2 for theta <= 1/3"


@check("cor-gt-noisy-term-compare")
def _gt_term_compare():
    rhos = np.arange(0.001, 0.5, 0.001)
    worst = min(bounds.gt_logit_entropy_margin(float(r)) for r in rhos)
    return -worst, 1e-12, "(1-2r) log((1-r)/r) >= 4(log2 - H2(r))"


@check("cor-linear-lasso-constant")
def _lasso():
    worst = 0.0
    for cb in (2.0, 10.0, 100.0):
        val, arg = bounds.lasso_comparison_constant(cb)
        worst = max(worst, abs(val - 2.0 / math.log1p(cb)), abs(arg - 1.0))
    return worst, 1e-6, "sup_alpha ratio = 2/log(1+c) at alpha = 1"


@check("onebit-pi-over-2")
def _pi_over_2():
    p, k = 10**6, 3
    b = [1e-3] * k
    one = bounds.cor_1bit_exact_lowsnr(b, 1.0, p, k)
    lin = bounds.cor_linear_exact(b, 1.0, p, k)
    ratio = one.n_ach / lin.n_ach
    return abs(ratio / (math.pi / 2.0) - 1.0), 0.01, f"ratio {ratio:.5f}"


@check("fano-weaker-than-converse")
def _fano_weaker():
    b = [1.0, -0.5, 2.0]
    m = md.ModelSpec.linear(1.0)
    conv = bounds.converse_threshold_generic(m, b, md.ProblemDims(p=200, k=3, n=0))
    dims = md.ProblemDims(p=200, k=3, n=1)
    _, region = bounds.fano_lower_bound(m, b, dims, delta2=0.5)
    return region.boundary_n - conv.n_conv, 1e-9, "Fano region boundary <= strong-converse n"


@check("cor-ach-ge-conv-grids")
def _ach_ge_conv():
    worst = -math.inf
    for theta in (0.1, 0.3, 0.5, 0.7):
        r = bounds.cor_gt_noiseless(theta)
        worst = max(worst, r.coef_conv - r.coef_ach)
        rn = bounds.cor_gt_noisy(theta, 0.11)
        worst = max(worst, rn.coef_conv - rn.coef_ach)
    for cb in (0.1, 10.0, 1e4):
        lp = bounds.cor_linear_partial(cb, grid_points=501)
        worst = max(worst, lp.coef_conv - lp.coef_ach)
        ob = bounds.cor_1bit_partial(cb, grid_points=501)
        worst = max(worst, ob.coef_conv - ob.coef_ach)
    a, c = bounds.cor_gt_partial(0.11, 0.1)
    worst = max(worst, c - a)
    return worst, 1e-12, "coef_ach >= coef_conv on corollary grids"


@check("psi1bit-range-monotone")
def _psi_range():
    worst = 0.0
    for cb in (0.1, 1.0, 100.0):
        prev = -1.0
        for a in np.linspace(0.01, 1.0, 50):
            v = bounds.psi_function_1bit(float(a), cb)
            worst = max(worst, -v, v - nm.LOG2, prev - v - 1e-12)
            prev = v
    return worst, 1e-9, "Psi in [0, log2], nondecreasing in alpha"


@check("gen-finite-converse-limit")
def _gen_finite():
    # eps -> infinity removes the additive denominator term and recovers the
    # plain converse; at finite eps the term scales as n^{-1/2}
    m = md.ModelSpec.group_testing(rho=0.11)
    dims = md.ProblemDims(p=10**6, k=100, n=0)
    n_limit = bounds.cor_general_discrete_converse(m, None, dims, 2, delta1=0.01, eps=1e18)
    plain = bounds.converse_threshold_generic(
        m, None, dims, bounds.BoundOptions(delta1=0.01)
    ).n_conv
    rel = abs(n_limit - plain) / plain
    term = lambda eps, n: math.sqrt(2.0 / (n * eps))
    scaling = abs(term(0.005, 1000.0) / term(0.01, 1000.0) - math.sqrt(2.0))
    return max(rel, scaling), 1e-6, f"eps->inf limit {n_limit:.1f} vs plain {plain:.1f}"


# --- simulation -------------------------------------------------------------


@check("ml-phase-monotone-small")
def _ml_phase():
    m = md.ModelSpec.group_testing(rho=0.0)
    pr = md.SignalPrior.all_ones()
    dims = md.ProblemDims(p=16, k=2, n=0)
    reports = sim.phase_sweep(
        m, pr, dims, [0, 8, 16, 24], sim.DecoderSpec(kind="exhaustive-ml"), 200, SEED
    )
    worst = -math.inf
    for a, b2 in zip(reports, reports[1:]):
        se = math.sqrt(
            a.pe_hat * (1 - a.pe_hat) / a.trials + b2.pe_hat * (1 - b2.pe_hat) / b2.trials
        )
        worst = max(worst, b2.pe_hat - a.pe_hat - 3 * max(se, 1.0 / a.trials))
    return worst, 0.0, "pe_hat nonincreasing up to 3 SE"


@check("threshold-union-bound")
def _thresh_union():
    m = md.ModelSpec.group_testing(rho=0.0)
    pr = md.SignalPrior.all_ones()
    dims = md.ProblemDims(p=12, k=2, n=60)
    p1, se1, term2 = sim.threshold_union_bound(m, pr, dims, trials=400, seed=SEED)
    rep = sim.run_cell(m, pr, dims, sim.DecoderSpec(kind="threshold"), 400, SEED + 1)
    se = math.sqrt(rep.pe_hat * (1 - rep.pe_hat) / rep.trials + se1**2)
    return rep.pe_hat - (p1 + term2) - 3 * max(se, 1.0 / rep.trials), 0.0, (
        f"pe {rep.pe_hat:.3f} <= bound {p1 + term2:.3f}"
    )


@check("comp-vs-ml")
def _comp_vs_ml():
    m = md.ModelSpec.group_testing(rho=0.0)
    pr = md.SignalPrior.all_ones()
    dims = md.ProblemDims(p=12, k=2, n=14)
    err_ml = err_comp = 0
    trials = 10**3
    for t in range(trials):
        real = md.sample_realization(dims, m, pr, SEED, stream=(0, t))
        true = real.support_set()
        err_ml += sim.decode_ml(real, m, pr, dims) != true
        err_comp += sim.decode_comp(real, dims) != true
    se = math.sqrt(2.0 * 0.25 / trials)
    return (err_ml - err_comp) / trials - 3 * se, 0.0, (
        f"pe(ML) {err_ml/trials:.3f} <= pe(COMP) {err_comp/trials:.3f} + 3 SE"
    )


@check("empirical-g-convergence")
def _emp_g():
    worst = 0.0
    for s in range(5):
        table = sim.empirical_g_check(10**6, 1, SEED + s)
        worst = max(worst, max(abs(emp - g) for _, emp, g in table))
    return worst, 0.01, "max |empirical - g| at k = 1e6, 5 seeds"


@check("determinism")
def _determinism():
    m = md.ModelSpec.group_testing(rho=0.11)
    pr = md.SignalPrior.all_ones()
    dims = md.ProblemDims(p=10, k=2, n=12)
    a = sim.run_cell(m, pr, dims, sim.DecoderSpec(kind="exhaustive-ml"), 50, SEED)
    b = sim.run_cell(m, pr, dims, sim.DecoderSpec(kind="exhaustive-ml"), 50, SEED)
    return 0.0 if a == b else 1.0, 0.0, "identical (config, seed) => identical report"
