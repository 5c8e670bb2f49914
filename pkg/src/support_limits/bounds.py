"""
Necessary and sufficient measurement counts for exact and partial support
recovery, assembled from the generic max-ratio conditions

    achievability   n >= max_ell [ log C(p-k, l) + log(k^2/d1^2 C(k,l)^2) + gamma ]
                              / [ I_l (1 - d2) ]
    converse        n <= max_ell [ log C(p-k+l, l) - log d1 ] / [ I_l (1 + d2) ]

(partial recovery restricts l > d_max and subtracts
log sum_{d <= d_max} C(p-k, d) C(l, d) from the converse numerator), plus the
per-model corollaries with explicit constants:

    linear exact / partial, 1-bit low-SNR exact / high-SNR converse / partial,
    group testing noiseless / noisy / partial, general finite-alphabet converse.

Asymptotic coefficients for the partial-recovery and group-testing cases
multiply k log(p/k); the "rate" normalization used by the figure tables is
k log2(p/k) / n = 1 / (coef * log 2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .conc import TailBoundSpec, gt_tail_specs, remainder_n_required
from .info import (
    gaussian_logit_slope_constant,
    gt_mi_closed_form,
    mutual_information,
    prior_divergence_stats,
)
from .model import (
    GROUP_TESTING,
    ONE_BIT,
    ModelSpec,
    ProblemDims,
    SignalPrior,
    max_info_partition,
    min_info_partition,
)
from .numerics import (
    LOG2,
    DEFAULT_QUAD,
    NonConvergenceError,
    QuadratureSpec,
    binary_entropy,
    g_alpha,
    log_binomial,
    mean_entropy_q_scaled,
)

INFINITE = float("inf")


@dataclass(frozen=True)
class BoundOptions:
    """Slack parameters for the generic threshold formulas.

    delta1/eta default to the formula-evaluation convention (1e-3 and 0); the
    corollaries report eta-free max-ratios and callers scale by (1 +/- eta).
    delta2 enters the denominators as (1 -/+ delta2); 0 gives the bare ratio.
    gamma_rule: discrete | chebyshev | markov | zero.
    remainder_target, when set, folds the tail-bound side condition into
    n_ach by max; when None the side condition is reported only.
    """

    delta1: float = 1e-3
    delta2: float = 0.0
    gamma_rule: str = "zero"
    delta0: float = 0.01
    eta: float = 0.0
    asymptotic: bool = False
    remainder_target: float | None = None
    delta2_schedule: object = None
    ell_set: tuple[int, ...] | None = None


@dataclass(frozen=True)
class ThresholdResult:
    """Measurement count with its per-ell diagnostic table.

    breakdown rows are (ell, numerator, mi, ratio); binding is the arg-max
    ell (ties to the smallest).  remainder_n carries the tail-bound side
    condition when one was computed.
    """

    n_ach: float = INFINITE
    n_conv: float = INFINITE
    binding: int | float | None = None
    breakdown: tuple = ()
    remainder_n: float | None = None


def gamma_select(
    rule: str,
    model: ModelSpec,
    prior: SignalPrior,
    dims: ProblemDims,
    delta0: float = 0.01,
) -> float:
    """Offset gamma controlling the prior-averaging remainder P0(gamma).

    discrete  -> log(1 / min-prob): 0 for deterministic entries, k log m_beta
                 for a permuted vector with m_beta distinct values;
    chebyshev -> I0_bound + sqrt(V0_bound / delta0);
    markov    -> I0+_bound / delta0;
    zero      -> 0 (deterministic beta, e.g. group testing).
    """
    if rule == "zero":
        return 0.0
    if rule == "discrete":
        if prior.variant in ("fixed-vector", "all-ones"):
            return 0.0
        if prior.variant == "permuted-vector":
            return dims.k * math.log(prior.m_beta)
        raise ValueError("discrete gamma rule needs a discrete prior")
    if rule == "chebyshev":
        i0, v0, _ = prior_divergence_stats(model, prior, dims)
        return i0 + math.sqrt(v0 / delta0)
    if rule == "markov":
        _, _, i0p = prior_divergence_stats(model, prior, dims)
        return i0p / delta0
    raise ValueError(f"unknown gamma rule {rule!r}")


def _per_ell_mi(model: ModelSpec, b, dims: ProblemDims, quad: QuadratureSpec):
    """Worst-case (minimum) mutual information per ell."""
    if model.channel == GROUP_TESTING:
        return {
            ell: gt_mi_closed_form(model.nu, dims.k, ell, model.rho)
            for ell in range(1, dims.k + 1)
        }
    b = np.asarray(b, dtype=float)
    return {
        ell: mutual_information(model, min_info_partition(b, ell), b, quad).mi
        for ell in range(1, dims.k + 1)
    }


def _default_tail_specs(model: ModelSpec, b, dims: ProblemDims, mi_map, opts: BoundOptions):
    if opts.delta2_schedule is not None:
        sched = opts.delta2_schedule
        if isinstance(sched, (list, tuple)) and all(
            isinstance(s, TailBoundSpec) for s in sched
        ):
            return list(sched)
    if model.channel == GROUP_TESTING:
        return gt_tail_specs(model.nu, dims.k, model.rho)
    mi_fn = lambda ell: mi_map[ell]
    if model.channel == ONE_BIT:
        return [
            TailBoundSpec(
                kind="bernstein-discrete",
                delta2=opts.delta2_schedule or 0.5,
                params={"mi": mi_fn, "alphabet_size": 2},
            )
        ]
    return [
        TailBoundSpec(
            kind="bernstein-linear",
            delta2=opts.delta2_schedule or 0.5,
            params={"b": np.asarray(b, dtype=float), "sigma": model.sigma},
        )
    ]


def _stirling_log_binom(N: float, r: float) -> float:
    """Leading-order r log(N/r) used by the asymptotic mode."""
    return r * math.log(N / r) if r > 0 else 0.0


def achievability_threshold_generic(
    model: ModelSpec,
    b,
    dims: ProblemDims,
    opts: BoundOptions = BoundOptions(),
    prior: SignalPrior | None = None,
    quad: QuadratureSpec = DEFAULT_QUAD,
) -> ThresholdResult:
    """Sufficient measurement count: max-ratio over ell in {d_max+1..k} with
    the worst-case (min-info) partition per ell.

    Returns an infinite threshold (unrecoverable sentinel) if some required
    ell has zero mutual information.  The tail-bound side condition is
    reported in remainder_n, and folded into n_ach only when
    opts.remainder_target is set.
    """
    k, p = dims.k, dims.p
    gamma = _resolve_gamma(model, b, dims, opts, prior)
    mi_map = _per_ell_mi(model, b, dims, quad)
    ells = range(dims.d_max + 1, k + 1)
    rows = []
    best = (None, -INFINITE)
    for ell in ells:
        if opts.asymptotic:
            num = _stirling_log_binom(p - k, ell) + gamma
        else:
            num = (
                log_binomial(p - k, ell)
                + 2.0 * math.log(k / opts.delta1)
                + 2.0 * log_binomial(k, ell)
                + gamma
            )
        mi = mi_map[ell]
        if mi <= 0.0:
            rows.append((ell, num, mi, INFINITE))
            best = (ell, INFINITE)
            continue
        ratio = num / (mi * (1.0 - opts.delta2))
        rows.append((ell, num, mi, ratio))
        if ratio > best[1]:
            best = (ell, ratio)
    n_formula = best[1] * (1.0 + opts.eta)
    remainder = None
    if math.isfinite(n_formula):
        specs = _default_tail_specs(model, b, dims, mi_map, opts)
        target = opts.remainder_target if opts.remainder_target is not None else 1e-2
        remainder = remainder_n_required(specs, dims, list(ells), target)
    n_ach = n_formula
    if opts.remainder_target is not None and remainder is not None:
        n_ach = max(n_ach, float(remainder))
    return ThresholdResult(
        n_ach=n_ach,
        n_conv=INFINITE,
        binding=best[0],
        breakdown=tuple(rows),
        remainder_n=None if remainder is None else float(remainder),
    )


def _resolve_gamma(model, b, dims, opts: BoundOptions, prior):
    if opts.gamma_rule == "zero":
        return 0.0
    if prior is None:
        raise ValueError(f"gamma rule {opts.gamma_rule!r} needs the prior")
    return gamma_select(opts.gamma_rule, model, prior, dims, opts.delta0)


def log_partial_conv_subtraction(p: int, k: int, ell: int, d_max: int) -> float:
    """log sum_{d=0..d_max} C(p-k, d) C(ell, d), via log-sum-exp over d.

    Terms with d > p - k or d > ell vanish (zero binomial coefficients).
    """
    terms = [
        log_binomial(p - k, d) + log_binomial(ell, d)
        for d in range(0, min(d_max, ell, p - k) + 1)
    ]
    m = max(terms)
    return m + math.log(sum(math.exp(t - m) for t in terms))


def converse_threshold_generic(
    model: ModelSpec,
    b,
    dims: ProblemDims,
    opts: BoundOptions = BoundOptions(),
    quad: QuadratureSpec = DEFAULT_QUAD,
) -> ThresholdResult:
    """Necessary measurement count (strong-converse sense): max-ratio over
    ell in the restriction set with converse numerators.

    Partial recovery (d_max > 0) subtracts the confusable-set mass
    log sum_d C(p-k, d) C(ell, d); an ell whose subtracted mass reaches the
    main term is recorded as vacuous and skipped.
    """
    k, p = dims.k, dims.p
    mi_map = _per_ell_mi(model, b, dims, quad)
    ells = (
        list(opts.ell_set)
        if opts.ell_set is not None
        else list(range(dims.d_max + 1, k + 1))
    )
    rows = []
    best = (None, -INFINITE)
    for ell in ells:
        if opts.asymptotic:
            main = _stirling_log_binom(p - k, ell)
        else:
            main = log_binomial(p - k + ell, ell)
        num = main - math.log(opts.delta1)
        if dims.d_max > 0:
            sub = log_partial_conv_subtraction(p, k, ell, dims.d_max)
            if sub >= main - 1e-9 * max(1.0, abs(main)):
                rows.append((ell, num, mi_map[ell], "converse vacuous at this ell"))
                continue
            num -= sub
        mi = mi_map[ell]
        if mi <= 0.0:
            rows.append((ell, num, mi, INFINITE))
            best = (ell, INFINITE)
            continue
        ratio = num / (mi * (1.0 + opts.delta2))
        rows.append((ell, num, mi, ratio))
        if ratio > best[1]:
            best = (ell, ratio)
    if best[0] is None:
        # every ell was vacuous: the bound makes no converse claim
        return ThresholdResult(n_ach=INFINITE, n_conv=0.0, binding=None, breakdown=tuple(rows))
    return ThresholdResult(
        n_ach=INFINITE,
        n_conv=best[1] * (1.0 - opts.eta),
        binding=best[0],
        breakdown=tuple(rows),
    )


@dataclass(frozen=True)
class FanoRegion:
    boundary_n: float
    description: str


def fano_lower_bound(
    model: ModelSpec,
    b,
    dims: ProblemDims,
    delta2: float,
    quad: QuadratureSpec = DEFAULT_QUAD,
) -> tuple[float, FanoRegion]:
    """Fano-style baseline: delta2 1{n <= boundary} - 1/log(p - k + 1) with
    boundary = min over partitions of log C(p-k+l, l) (1 - delta2) / I.

    For deterministic b the probability term is an indicator.  Clamped at 0;
    reported alongside the strong converse, which it never exceeds.
    """
    k, p = dims.k, dims.p
    boundary = INFINITE
    for ell in range(1, k + 1):
        if model.channel == GROUP_TESTING:
            mi = gt_mi_closed_form(model.nu, k, ell, model.rho)
        else:
            part = max_info_partition(b, ell)
            mi = mutual_information(model, part, b, quad).mi
        if mi <= 0.0:
            continue
        boundary = min(boundary, log_binomial(p - k + ell, ell) * (1.0 - delta2) / mi)
    indicator = 1.0 if dims.n <= boundary else 0.0
    pe = max(0.0, delta2 * indicator - 1.0 / math.log(p - k + 1))
    return pe, FanoRegion(
        boundary_n=boundary,
        description=f"indicator {'on' if indicator else 'off'} at n={dims.n}",
    )


# ---------------------------------------------------------------------------
# Corollaries: linear model
# ---------------------------------------------------------------------------


def cor_linear_exact(
    b: Sequence[float], sigma: float, p: int, k: int, eta: float = 0.0
) -> ThresholdResult:
    """Exact-recovery thresholds for the linear channel with fixed entries.

    n_ach = max_ell log C(p-k, l) / ((1/2) log(1 + sum_l-smallest b^2/sigma^2))
    scaled by (1 + eta); n_conv replaces C(p-k, l) by C(p-k+l, l) and scales
    by (1 - eta).
    """
    b = np.asarray(b, dtype=float)
    rows = []
    best_a = (None, -INFINITE)
    best_c = -INFINITE
    for ell in range(1, k + 1):
        s_sq = float(np.sum(np.sort(b**2)[:ell]))
        mi = 0.5 * math.log1p(s_sq / sigma**2)
        if mi <= 0.0:
            return ThresholdResult(binding=ell, breakdown=tuple(rows))
        ra = log_binomial(p - k, ell) / mi
        rc = log_binomial(p - k + ell, ell) / mi
        rows.append((ell, log_binomial(p - k, ell), mi, ra))
        if ra > best_a[1]:
            best_a = (ell, ra)
        best_c = max(best_c, rc)
    return ThresholdResult(
        n_ach=best_a[1] * (1.0 + eta),
        n_conv=best_c * (1.0 - eta),
        binding=best_a[0],
        breakdown=tuple(rows),
    )


def validity_conditions_linear(b, p: int, k: int) -> dict[str, bool]:
    """Informational flags for the asymptotic regimes (i)-(iv) under which
    the exact-recovery achievability constant is tight, as finite-size
    proxies: (i) bounded k; (ii) k well below log p with few distinct
    values; (iii) equal entries; (iv) equal entries with b_min^2 near
    log(k)/k."""
    b = np.asarray(b, dtype=float)
    m_beta = len(set(np.round(b, 12).tolist()))
    b_min_sq = float(np.min(b**2))
    logp, logk = math.log(p), math.log(max(k, 2))
    return {
        "i_k_constant": k <= 8,
        "ii_k_small_mbeta_const": logk <= 0.5 * logp and m_beta <= 4,
        "iii_k_polylog_equal": m_beta == 1,
        "iv_k_poly_bmin_logk_over_k": m_beta == 1
        and abs(b_min_sq - logk / k) <= 0.5 * logk / k,
    }


def lasso_comparison_constant(c_beta: float, grid_points: int = 10**4) -> tuple[float, float]:
    """sup_{alpha in (0,1]} alpha / ((1/2) log(1 + c_beta alpha)) and argmax.

    The supremum is attained at alpha = 1, giving 2 / log(1 + c_beta).
    """
    alphas = np.linspace(1.0 / grid_points, 1.0, grid_points)
    vals = alphas / (0.5 * np.log1p(c_beta * alphas))
    i = int(np.argmax(vals))
    return float(vals[i]), float(alphas[i])


@dataclass(frozen=True)
class PartialCurves:
    """Asymptotic partial-recovery coefficients of k log(p/k)."""

    coef_ach: float
    coef_conv: float
    alpha_ach: float
    alpha_conv: float
    curves: tuple  # rows (alpha, denominator, ach_objective, conv_objective)


def _maximize_partial(
    denom: Callable[[float], float], alpha_star: float, grid_points: int = 10**4
) -> PartialCurves:
    """Maximize alpha/denom and (alpha - alpha*)/denom over [alpha*, 1] on a
    grid refined by golden-section; ties resolve to the smaller alpha."""
    alphas = np.linspace(alpha_star, 1.0, grid_points)
    dens = np.array([denom(a) for a in alphas])
    with np.errstate(divide="ignore"):
        obj_a = np.where(dens > 0, alphas / dens, INFINITE)
        obj_c = np.where(dens > 0, (alphas - alpha_star) / dens, 0.0)
    obj_c[0] = 0.0 if dens[0] > 0 else 0.0
    ia, ic = int(np.argmax(obj_a)), int(np.argmax(obj_c))
    a_a, v_a = _golden_refine(lambda a: a / denom(a), alphas, ia)
    a_c, v_c = _golden_refine(lambda a: (a - alpha_star) / denom(a), alphas, ic)
    curves = tuple(
        (float(a), float(d), float(oa), float(oc))
        for a, d, oa, oc in zip(alphas, dens, obj_a, obj_c)
    )
    return PartialCurves(
        coef_ach=v_a, coef_conv=v_c, alpha_ach=a_a, alpha_conv=a_c, curves=curves
    )


def _golden_refine(f, grid: np.ndarray, i: int, tol: float = 1e-10):
    """Golden-section maximization bracketed by the grid neighbors of i."""
    lo = grid[max(0, i - 1)]
    hi = grid[min(len(grid) - 1, i + 1)]
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = float(lo), float(hi)
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = c if fc >= fd else d
    return float(x), float(max(fc, fd))


def cor_linear_partial(
    c_beta: float,
    sigma: float = 1.0,
    alpha_star: float = 0.1,
    eta: float = 0.0,
    grid_points: int = 10**4,
) -> PartialCurves:
    """Partial-recovery coefficients for the linear channel, Gaussian prior:

        coef_ach  = max_{a in [a*,1]}  a / ((1/2) log(1 + c_beta g(a)/sigma^2))
        coef_conv = max_{a in [a*,1]} (a - a*) / (same denominator),

    both multiplying k log(p/k); eta scales them by (1 +/- eta).
    """
    denom = lambda a: 0.5 * math.log1p(c_beta * g_alpha(a) / sigma**2)
    out = _maximize_partial(denom, alpha_star, grid_points)
    if eta:
        out = PartialCurves(
            coef_ach=out.coef_ach * (1.0 + eta),
            coef_conv=out.coef_conv * (1.0 - eta),
            alpha_ach=out.alpha_ach,
            alpha_conv=out.alpha_conv,
            curves=out.curves,
        )
    return out


# ---------------------------------------------------------------------------
# Corollaries: 1-bit model
# ---------------------------------------------------------------------------


def cor_1bit_exact_lowsnr(
    b: Sequence[float], sigma: float, p: int, k: int, eta: float = 0.0
) -> ThresholdResult:
    """Low-SNR 1-bit thresholds (k fixed, entries o(1)): both directions equal

        max_ell (ell log p) / ((1/(pi sigma^2)) sum_{ell smallest} b^2),

    scaled by (1 + eta) / (1 - eta) respectively.  Ties go to the smallest
    ell.
    """
    b = np.asarray(b, dtype=float)
    best = (None, -INFINITE)
    rows = []
    for ell in range(1, k + 1):
        s_sq = float(np.sum(np.sort(b**2)[:ell]))
        mi = s_sq / (math.pi * sigma**2)
        if mi <= 0.0:
            return ThresholdResult(binding=ell, breakdown=tuple(rows))
        ratio = ell * math.log(p) / mi
        rows.append((ell, ell * math.log(p), mi, ratio))
        if ratio > best[1]:
            best = (ell, ratio)
    return ThresholdResult(
        n_ach=best[1] * (1.0 + eta),
        n_conv=best[1] * (1.0 - eta),
        binding=best[0],
        breakdown=tuple(rows),
    )


def cor_1bit_highsnr_converse(
    b0: float,
    sigma: float,
    p: int,
    k: int,
    eta: float = 0.0,
    quad: QuadratureSpec = DEFAULT_QUAD,
) -> float:
    """High-SNR 1-bit necessary count (k proportional to p, equal entries):

        log p / [ (1/2) (b0^2/sigma^2) / sqrt(2 pi k b0^2/sigma^2)
                  E[W log((1-Q(W))/Q(W))] ] * (1 - eta).
    """
    snr = b0**2 / sigma**2
    denom = 0.5 * snr / math.sqrt(2.0 * math.pi * k * snr)
    denom *= gaussian_logit_slope_constant(quad)
    return math.log(p) / denom * (1.0 - eta)


def psi_function_1bit(
    alpha: float, c_beta: float, sigma: float = 1.0, quad: QuadratureSpec = DEFAULT_QUAD
) -> float:
    """Psi(alpha, c_beta, sigma) =
        E[H2(Q(W sqrt(c_beta (1-g)/(sigma^2 + c_beta g))))]
        - E[H2(Q(W sqrt(c_beta)/sigma))],  g = g_alpha(alpha).

    Always in [0, log 2].
    """
    g = g_alpha(alpha)
    a1 = math.sqrt(c_beta * (1.0 - g) / (sigma**2 + c_beta * g))
    a2 = math.sqrt(c_beta) / sigma
    return max(0.0, mean_entropy_q_scaled(a1, quad) - mean_entropy_q_scaled(a2, quad))


def cor_1bit_partial(
    c_beta: float,
    sigma: float = 1.0,
    alpha_star: float = 0.1,
    eta: float = 0.0,
    grid_points: int = 10**4,
    quad: QuadratureSpec = DEFAULT_QUAD,
) -> PartialCurves:
    """Partial-recovery coefficients for the 1-bit channel: as the linear
    case with denominator Psi(alpha, c_beta, sigma)."""
    denom = lambda a: psi_function_1bit(a, c_beta, sigma, quad)
    out = _maximize_partial(denom, alpha_star, grid_points)
    if eta:
        out = PartialCurves(
            coef_ach=out.coef_ach * (1.0 + eta),
            coef_conv=out.coef_conv * (1.0 - eta),
            alpha_ach=out.alpha_ach,
            alpha_conv=out.alpha_conv,
            curves=out.curves,
        )
    return out


# ---------------------------------------------------------------------------
# Corollaries: group testing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GtNoiselessResult:
    coef_ach: float
    coef_conv: float
    nu_star: float


def cor_gt_noiseless(theta: float, eta: float = 0.0) -> GtNoiselessResult:
    """Noiseless group-testing coefficients of k log(p/k) at sparsity
    exponent theta:

        coef_ach  = inf_{nu>0} max{ theta/(e^-nu nu (1-theta)), 1/H2(e^-nu) }
        coef_conv = 1 / log 2.

    The second term is globally minimized at nu = log 2 where H2(e^-nu)
    attains log 2, so the infimum equals 1/log 2 exactly whenever the first
    term allows it (theta <= 1/3).
    """
    if not 0.0 < theta < 1.0:
        raise ValueError("theta must lie in (0, 1)")

    def objective(nu: float) -> float:
        t1 = theta / (math.exp(-nu) * nu * (1.0 - theta))
        t2 = 1.0 / binary_entropy(math.exp(-nu))
        return max(t1, t2)

    grid = np.linspace(1e-3, 5.0, 256)
    vals = [objective(float(nu)) for nu in grid]
    i = int(np.argmin(vals))
    nu_star, best = _golden_refine_min(objective, grid, i)
    # nu = log 2 minimizes the second term exactly; prefer it when optimal
    at_log2 = objective(LOG2)
    if at_log2 <= best + 1e-15:
        nu_star, best = LOG2, at_log2
    return GtNoiselessResult(
        coef_ach=best * (1.0 + eta),
        coef_conv=(1.0 / LOG2) * (1.0 - eta),
        nu_star=nu_star,
    )


def _golden_refine_min(f, grid, i, tol: float = 1e-10):
    x, v = _golden_refine(lambda t: -f(t), grid, i, tol)
    return x, -v


def gt_noisy_zeta(rho: float, delta2: float, theta: float) -> float:
    """Concentration-side coefficient for noisy group testing at nu = log 2:

        zeta = (2/log 2) max{ 2 (1 + delta2 (1-2 rho)/3) theta/(1-theta)
                                  / (delta2^2 (1-2 rho)^2),
                              ((1+4 theta)/(1-theta))
                                  / ((1-2 rho) log((1-rho)/rho) (1-delta2)) }.
    """
    gap = 1.0 - 2.0 * rho
    t1 = 2.0 * (1.0 + delta2 * gap / 3.0) * (theta / (1.0 - theta)) / (delta2**2 * gap**2)
    t2 = ((1.0 + 4.0 * theta) / (1.0 - theta)) / (gap * math.log((1.0 - rho) / rho) * (1.0 - delta2))
    return (2.0 / LOG2) * max(t1, t2)


@dataclass(frozen=True)
class GtNoisyResult:
    coef_ach: float
    coef_conv: float
    delta2_star: float


def cor_gt_noisy(theta: float, rho: float, eta: float = 0.0) -> GtNoisyResult:
    """Noisy group-testing coefficients (nu = log 2):

        coef_ach  = inf_{delta2 in (0,1)} max{ zeta(rho, delta2, theta),
                                               1/(log 2 - H2(rho)) }
        coef_conv = 1 / (log 2 - H2(rho)).
    """
    if not 0.0 < rho < 0.5:
        raise ValueError("rho must lie in (0, 0.5)")
    if not 0.0 < theta < 1.0:
        raise ValueError("theta must lie in (0, 1)")
    floor = 1.0 / (LOG2 - binary_entropy(rho))
    grid = np.linspace(1e-4, 1.0 - 1e-4, 256)
    zetas = [gt_noisy_zeta(rho, float(d2), theta) for d2 in grid]
    i = int(np.argmin(zetas))
    d2_star, zeta_min = _golden_refine_min(
        lambda d2: gt_noisy_zeta(rho, d2, theta), grid, i
    )
    # the converse-matching floor is exact whenever some delta2 drives the
    # concentration side below it
    coef = floor if zeta_min <= floor else max(zeta_min, floor)
    return GtNoisyResult(
        coef_ach=coef * (1.0 + eta),
        coef_conv=floor * (1.0 - eta),
        delta2_star=d2_star,
    )


def cor_gt_partial(rho: float, alpha_star: float, eta: float = 0.0) -> tuple[float, float]:
    """Partial-recovery group-testing coefficients (possibly noiseless):

        coef_ach  = 1 / (log 2 - H2(rho))
        coef_conv = (1 - alpha*) / (log 2 - H2(rho)).
    """
    if not 0.0 <= rho < 0.5:
        raise ValueError("rho must lie in [0, 0.5)")
    base = 1.0 / (LOG2 - binary_entropy(rho))
    return base * (1.0 + eta), (1.0 - alpha_star) * base * (1.0 - eta)


def gt_logit_entropy_margin(rho: float) -> float:
    """(1 - 2 rho) log((1-rho)/rho) - 4 (log 2 - H2(rho)); >= 0 on (0, 0.5)."""
    return (1.0 - 2.0 * rho) * math.log((1.0 - rho) / rho) - 4.0 * (
        LOG2 - binary_entropy(rho)
    )


# ---------------------------------------------------------------------------
# General finite-alphabet converse
# ---------------------------------------------------------------------------


def cor_general_discrete_converse(
    model: ModelSpec,
    b,
    dims: ProblemDims,
    alphabet_size: int,
    delta1: float = 0.01,
    eps: float = 0.01,
    quad: QuadratureSpec = DEFAULT_QUAD,
    max_iter: int = 500,
    tol: float = 1e-9,
) -> float:
    """Largest n violating

        n >= max_ell [log C(p-k+l, l) - log delta1] / [I_l + sqrt(|Y|/(n eps))]

    solved by fixed-point iteration on n (the additive denominator term
    decays as n^{-1/2}).
    """
    mi_map = _per_ell_mi(model, b, dims, quad)
    nums = {
        ell: log_binomial(dims.p - dims.k + ell, ell) - math.log(delta1)
        for ell in range(1, dims.k + 1)
    }

    def rhs(n: float) -> float:
        extra = math.sqrt(alphabet_size / (n * eps))
        return max(nums[ell] / (mi_map[ell] + extra) for ell in nums)

    n = max(rhs(1.0), 1.0)
    for _ in range(max_iter):
        n_next = rhs(n)
        if abs(n_next - n) <= tol * max(1.0, n):
            return n_next
        n = n_next
    raise NonConvergenceError(
        "fixed-point iteration for the finite-alphabet converse did not converge"
    )


# ---------------------------------------------------------------------------
# Figure tables
# ---------------------------------------------------------------------------

FIG_PARTIAL = "partial-recovery-snr"
FIG_GT_NOISELESS = "gt-noiseless-theta"
FIG_GT_NOISY = "gt-noisy-theta"


def figure_curves(figure: str, grid: dict) -> list[tuple[float, str, float]]:
    """(x, curve-name, y) rows behind the three numeric figures; the curve
    name states the unit.

    partial-recovery-snr: y = n/(k log(p/k)) coefficients in nats vs SNR in
    dB, four curves (linear/1-bit x ach/conv), alpha* and sigma from the
    grid.  gt-noiseless-theta / gt-noisy-theta: y = base-2 rate
    k log2(p/k)/n vs theta, achievability and converse curves (per rho for
    the noisy figure).
    """
    rows: list[tuple[float, str, float]] = []
    if figure == FIG_PARTIAL:
        alpha_star = grid.get("alpha_star", 0.1)
        sigma = grid.get("sigma", 1.0)
        gp = grid.get("grid_points", 2001)
        for snr in grid["snr_db"]:
            c_beta = sigma**2 * 10.0 ** (snr / 10.0)
            lin = cor_linear_partial(c_beta, sigma, alpha_star, grid_points=gp)
            ob = cor_1bit_partial(c_beta, sigma, alpha_star, grid_points=gp)
            rows += [
                (snr, "linear-ach-coef-nats", lin.coef_ach),
                (snr, "linear-conv-coef-nats", lin.coef_conv),
                (snr, "1bit-ach-coef-nats", ob.coef_ach),
                (snr, "1bit-conv-coef-nats", ob.coef_conv),
            ]
        return rows
    if figure == FIG_GT_NOISELESS:
        for theta in grid["theta"]:
            res = cor_gt_noiseless(theta)
            rows += [
                (theta, "ach-rate-log2", 1.0 / (res.coef_ach * LOG2)),
                (theta, "conv-rate-log2", 1.0 / (res.coef_conv * LOG2)),
            ]
        return rows
    if figure == FIG_GT_NOISY:
        for rho in grid.get("rho", (0.11,)):
            for theta in grid["theta"]:
                res = cor_gt_noisy(theta, rho)
                rows += [
                    (theta, f"ach-rate-log2 rho={rho:g}", 1.0 / (res.coef_ach * LOG2)),
                    (theta, f"conv-rate-log2 rho={rho:g}", 1.0 / (res.coef_conv * LOG2)),
                ]
        return rows
    raise ValueError(f"unknown figure {figure!r}")
