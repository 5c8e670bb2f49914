"""
Acceptance suite: one test per numbered criterion, each printing a single
PASS/FAIL line with the measured quantity and its stated tolerance.

Criteria 6 and 11 currently fail at their stated tolerances; the analysis of
why the stated numbers are unattainable under the implemented formulas is
recorded outside the package (see the project notes).  The tests state the
criteria faithfully rather than loosening them.
"""
import math
import time

import numpy as np

from support_limits import bounds, info, sim, verify
from support_limits import model as md
from support_limits import numerics as nm

LN2 = math.log(2.0)
SEED = 20240917


def _report(num: int, ok: bool, limit_s: float, elapsed: float, detail: str) -> None:
    status = "PASS" if ok and elapsed < limit_s else "FAIL"
    print(f"ACCEPTANCE {num:02d} {status} [{elapsed:6.2f}s/{limit_s:g}s] {detail}")
    assert ok, f"criterion {num}: {detail}"
    assert elapsed < limit_s, f"criterion {num} exceeded {limit_s}s ({elapsed:.1f}s)"


def test_criterion_01_gt_noiseless_thresholds():
    t0 = time.perf_counter()
    thetas = [0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 1.0 / 3.0]
    worst = 0.0
    for theta in thetas:
        res = bounds.cor_gt_noiseless(theta)
        worst = max(worst, abs(res.coef_ach - 1.0 / LN2), abs(res.coef_conv - 1.0 / LN2))
    gap_04 = bounds.cor_gt_noiseless(0.4).coef_ach - 1.0 / LN2
    ok = worst < 1e-9 and gap_04 >= 1e-3
    _report(
        1, ok, 1.0, time.perf_counter() - t0,
        f"coef dev {worst:.1e} (tol 1e-9), theta=0.4 excess {gap_04:.4f} (>= 1e-3)",
    )


def test_criterion_02_figure3_reproduction():
    t0 = time.perf_counter()
    thetas = [0.05 * i for i in range(1, 20)]
    rows = bounds.figure_curves(bounds.FIG_GT_NOISELESS, {"theta": thetas})
    ach = {x: y for x, c, y in rows if c == "ach-rate-log2"}
    conv = [y for _, c, y in rows if c == "conv-rate-log2"]
    ok = all(abs(y - 1.0) < 1e-9 for x, y in ach.items() if x <= 1 / 3 + 1e-12)
    beyond = sorted((x, y) for x, y in ach.items() if x > 1 / 3 + 1e-12)
    ok &= all(b < a - 1e-9 for (_, a), (_, b) in zip(beyond, beyond[1:]))
    ok &= all(abs(y - 1.0) < 1e-12 for y in conv)
    _report(
        2, ok, 1.0, time.perf_counter() - t0,
        f"rate 1.0 through theta=1/3, strictly decreasing beyond ({len(rows)} rows)",
    )


def test_criterion_03_gt_noisy_floor_and_term_compare():
    t0 = time.perf_counter()
    worst_floor = 0.0
    for rho in (0.05, 0.11, 0.25):
        floor = 1.0 / (LN2 - nm.binary_entropy(rho))
        res = bounds.cor_gt_noisy(0.01, rho)
        worst_floor = max(worst_floor, abs(res.coef_ach - floor))
    margins = [bounds.gt_logit_entropy_margin(float(r)) for r in np.arange(0.001, 0.5, 0.001)]
    min_margin = min(margins)
    ok = worst_floor < 1e-9 and min_margin >= -1e-12
    _report(
        3, ok, 5.0, time.perf_counter() - t0,
        f"floor dev {worst_floor:.1e} (tol 1e-9), min term-compare margin {min_margin:.1e}",
    )


def test_criterion_04_one_bit_pi_over_two():
    t0 = time.perf_counter()
    p, k = 10**6, 3
    b = [1e-3] * k  # b_i^2 = 1e-6
    one = bounds.cor_1bit_exact_lowsnr(b, 1.0, p, k)
    lin = bounds.cor_linear_exact(b, 1.0, p, k)
    ratio = one.n_ach / lin.n_ach
    ok = abs(ratio / (math.pi / 2.0) - 1.0) < 0.01
    _report(
        4, ok, 1.0, time.perf_counter() - t0,
        f"1-bit/linear threshold ratio {ratio:.5f} vs pi/2 = {math.pi/2:.5f} (tol 1%)",
    )


def test_criterion_05_linear_partial_ratio():
    t0 = time.perf_counter()
    res = bounds.cor_linear_partial(10**6, 1.0, 0.1, grid_points=4001)
    ratio = res.coef_ach / res.coef_conv
    target = 1.0 / 0.9
    ok = abs(ratio / target - 1.0) < 0.02
    _report(
        5, ok, 5.0, time.perf_counter() - t0,
        f"coef_ach/coef_conv {ratio:.5f} vs 1/(1-0.1) = {target:.5f} (tol 2%)",
    )


def test_criterion_06_one_bit_saturation():
    t0 = time.perf_counter()
    ob4 = bounds.cor_1bit_partial(1e4, grid_points=4001).coef_ach
    ob6 = bounds.cor_1bit_partial(1e6, grid_points=4001).coef_ach
    lin4 = bounds.cor_linear_partial(1e4, grid_points=4001).coef_ach
    lin6 = bounds.cor_linear_partial(1e6, grid_points=4001).coef_ach
    one_bit_change = abs(ob4 - ob6) / ob4
    linear_drop = (lin4 - lin6) / lin4
    ok = one_bit_change < 0.01 and linear_drop > 0.10
    _report(
        6, ok, 10.0, time.perf_counter() - t0,
        f"1-bit coef change {one_bit_change:.1%} (stated < 1%), "
        f"linear drop {linear_drop:.1%} (stated > 10%)",
    )


def _gt_mi_exhaustive(nu, k, ell, rho):
    """Exhaustive joint enumeration over X in {0,1}^k and Y."""
    p1 = nu / k
    out = 0.0
    for bits in range(2**k):
        x = [(bits >> i) & 1 for i in range(k)]
        px = math.prod(p1 if xi else 1 - p1 for xi in x)
        clean = 1 if any(x) else 0
        eq_any = any(x[ell:])
        xi_l = (1 - p1) ** ell
        for y in (0, 1):
            p_num = (1 - rho) if y == clean else rho
            if p_num == 0.0:
                continue
            if eq_any:
                p_den = (1 - rho) if y == 1 else rho
            else:
                p_den = xi_l * ((1 - rho) if y == 0 else rho) + (1 - xi_l) * (
                    (1 - rho) if y == 1 else rho
                )
            out += px * p_num * math.log(p_num / p_den)
    return out


def test_criterion_07_mi_oracle_equivalence():
    t0 = time.perf_counter()
    worst_gt = 0.0
    for k in range(1, 13):
        for ell in range(1, k + 1):
            for nu in (0.3, LN2, 1.5):
                if nu > k:  # invalid Bernoulli design
                    continue
                for rho in (0.0, 0.11, 0.25):
                    closed = info.gt_mi_closed_form(nu, k, ell, rho)
                    worst_gt = max(worst_gt, abs(closed - _gt_mi_exhaustive(nu, k, ell, rho)))
    b = np.array([1.0, -0.6, 0.3])
    part = md.min_info_partition(b, 2)
    lin_mc = info.variance_mc(md.ModelSpec.linear(0.8), part, b, 10**6, SEED)
    lin_closed = info.mutual_information(md.ModelSpec.linear(0.8), part, b).mi
    lin_ok = abs(lin_mc.mi - lin_closed) <= 3 * lin_mc.std_err
    ob_mc = info.variance_mc(md.ModelSpec.one_bit(1.0), part, b, 10**6, SEED + 1)
    ob_quad = info.mutual_information(md.ModelSpec.one_bit(1.0), part, b).mi
    ob_ok = abs(ob_mc.mi - ob_quad) <= 3 * ob_mc.std_err
    ok = worst_gt <= 1e-12 and lin_ok and ob_ok
    _report(
        7, ok, 60.0, time.perf_counter() - t0,
        f"GT enum dev {worst_gt:.1e} (tol 1e-12), linear MC dev "
        f"{abs(lin_mc.mi - lin_closed):.1e} <= {3 * lin_mc.std_err:.1e}, 1-bit MC dev "
        f"{abs(ob_mc.mi - ob_quad):.1e} <= {3 * ob_mc.std_err:.1e}",
    )


def test_criterion_08_special_functions():
    t0 = time.perf_counter()
    g1_dev = abs(nm.g_alpha(1.0) - 1.0)
    sort_dev = 0.0
    for s in range(5):
        rng = md.rng_stream(SEED, 101, s)
        sq = np.sort(rng.standard_normal(10**6) ** 2)
        sort_dev = max(sort_dev, abs(float(np.mean(sq[:500_000])) * 0.5 - nm.g_alpha(0.5)))
    t = np.linspace(-10, 10, 2_000_001)
    phi = np.exp(-0.5 * t * t) / math.sqrt(2 * math.pi)
    qm = nm.q_function(np.abs(t))
    stein_oracle = float(np.trapezoid(phi * phi / (qm * (1 - qm)), t))
    stein_dev = abs(info.gaussian_logit_slope_constant() - stein_oracle)
    ok = g1_dev < 1e-9 and sort_dev < 1e-3 and stein_dev < 1e-4
    _report(
        8, ok, 30.0, time.perf_counter() - t0,
        f"g(1) dev {g1_dev:.1e} (tol 1e-9), g(0.5) sort-MC dev {sort_dev:.1e} "
        f"(tol 1e-3), Stein dev {stein_dev:.1e} (tol 1e-4)",
    )


def test_criterion_09_concentration_domination():
    t0 = time.perf_counter()
    names = [
        "psi-chebyshev-domination",
        "psi-bernstein-discrete-domination",
        "psi-bernstein-linear-domination",
        "psi-chernoff-gt-domination",
        "psi-bennett-gt-domination",
    ]
    results = [verify.run_checks(n)[0] for n in names]
    ok = all(r.passed for r in results)
    worst = max(r.measured for r in results)
    _report(
        9, ok, 120.0, time.perf_counter() - t0,
        f"five psi families, 1e4 trials, >= 3 settings each; worst "
        f"(tail - bound - 3 SE) = {worst:.3e} (must be <= 0)",
    )


def test_criterion_10_simulation_phase_behavior():
    t0 = time.perf_counter()
    m = md.ModelSpec.group_testing(rho=0.0)
    pr = md.SignalPrior.all_ones()
    dims = md.ProblemDims(p=16, k=2, n=0)
    grid = list(range(0, 44, 4))
    reports = sim.phase_sweep(m, pr, dims, grid, sim.DecoderSpec(kind="exhaustive-ml"), 500, SEED)
    monotone = True
    for a, b in zip(reports, reports[1:]):
        se = math.sqrt(
            a.pe_hat * (1 - a.pe_hat) / a.trials + b.pe_hat * (1 - b.pe_hat) / b.trials
        )
        if b.pe_hat > a.pe_hat + 3 * max(se, 1.0 / a.trials):
            monotone = False
    endpoints_ok = reports[0].pe_hat >= 0.99 and reports[-1].pe_hat <= 0.05

    dims12 = md.ProblemDims(p=12, k=2, n=60)
    p1, se1, term2 = sim.threshold_union_bound(m, pr, dims12, trials=400, seed=SEED)
    rep = sim.run_cell(m, pr, dims12, sim.DecoderSpec(kind="threshold"), 500, SEED + 1)
    se = math.sqrt(rep.pe_hat * (1 - rep.pe_hat) / rep.trials + se1**2)
    union_ok = rep.pe_hat <= p1 + term2 + 3 * max(se, 1.0 / rep.trials)
    ok = monotone and endpoints_ok and union_ok
    _report(
        10, ok, 120.0, time.perf_counter() - t0,
        f"pe(0)={reports[0].pe_hat:.3f} (>=0.99), pe(40)={reports[-1].pe_hat:.3f} "
        f"(<=0.05), monotone={monotone}, threshold pe {rep.pe_hat:.4f} <= union "
        f"bound {p1 + term2:.4f} + 3 SE",
    )


def test_criterion_11_generic_vs_corollary():
    t0 = time.perf_counter()
    # clause 1: generic achievability (exact binomials) within 5% of the
    # noiseless-GT corollary closed form at p = 1e9, k = p^0.2
    p = 10**9
    k = round(p**0.2)
    m = md.ModelSpec.group_testing(rho=0.0, nu=LN2)
    gen = bounds.achievability_threshold_generic(
        m, None, md.ProblemDims(p=p, k=k, n=0), bounds.BoundOptions(gamma_rule="zero")
    )
    theta = math.log(k) / math.log(p)
    n_cor = bounds.cor_gt_noiseless(theta).coef_ach * k * math.log(p / k)
    gap = abs(gen.n_ach - n_cor) / n_cor
    clause1 = gap < 0.05

    # clause 2: n_ach >= n_conv across the corollary grids
    clause2 = True
    for th in (0.05, 0.2, 1 / 3, 0.5, 0.8):
        r = bounds.cor_gt_noiseless(th)
        clause2 &= r.coef_ach >= r.coef_conv - 1e-12
        rn = bounds.cor_gt_noisy(th, 0.11)
        clause2 &= rn.coef_ach >= rn.coef_conv - 1e-12
    for a_star in (0.1, 0.5):
        a, c = bounds.cor_gt_partial(0.11, a_star)
        clause2 &= a >= c
    for cb in (0.1, 10.0, 1e4, 1e6):
        lp = bounds.cor_linear_partial(cb, grid_points=801)
        clause2 &= lp.coef_ach >= lp.coef_conv - 1e-12
        ob = bounds.cor_1bit_partial(cb, grid_points=801)
        clause2 &= ob.coef_ach >= ob.coef_conv - 1e-12
    r1b = bounds.cor_1bit_exact_lowsnr([1e-3] * 3, 1.0, 10**6, 3)
    clause2 &= r1b.n_ach >= r1b.n_conv - 1e-9
    # the linear exact pair's eta-free display inverts (conv binomial is the
    # larger one), with |ratio - 1| <= 1e-2 at p = 1e9
    rle = bounds.cor_linear_exact([1.0, 0.5, 2.0], 1.0, 10**9, 3)
    clause2 &= abs(rle.n_ach / rle.n_conv - 1.0) <= 1e-2

    ok = clause1 and clause2
    _report(
        11, ok, 10.0, time.perf_counter() - t0,
        f"generic vs closed-form gap {gap:.1%} (stated < 5%), binding l={gen.binding}; "
        f"ach>=conv invariant across grids: {clause2}",
    )
