"""
Seeded Monte Carlo estimation of the exact and partial error probabilities
for explicit decoders at desk scale.

Decoders:

- threshold: searches for the unique candidate support whose beta-averaged
  information density exceeds the combined per-size threshold

      gamma_l + gamma'_l = log((k/d1) C(p-k, l) C(k, l)) + log((k/d1) C(k, l))

  for every partition of the candidate; "none" and "multiple" outcomes both
  count as errors.
- exhaustive-ml: argmax of the beta-averaged likelihood over all C(p, k)
  candidate supports, lexicographic tie-break.
- comp-gt: rules out any item appearing in a negative test, then keeps the k
  items occurring most often in positive tests (group testing only).

Exhaustive decoding is guarded at C(p, k) <= 10^6 and k <= 12; the guards
are hard errors, not warnings.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from .info import (
    NEG_INF,
    density_rows,
    log_conditional_likelihood,
    log_marginal_likelihood,
    prior_atoms,
)
from .model import (
    ALL_ONES,
    GROUP_TESTING,
    GuardError,
    ModelSpec,
    ProblemDims,
    Realization,
    SignalPrior,
    enumerate_partitions,
    rng_stream,
    sample_realization,
)
from .numerics import g_alpha, log_binomial

CANDIDATE_CAP = 10**6
K_CAP = 12


@dataclass(frozen=True)
class DecoderSpec:
    """kind: threshold | exhaustive-ml | comp-gt."""

    kind: str
    delta1: float = 0.1
    gamma_rule: str = "discrete"


@dataclass(frozen=True)
class DecodeOutcome:
    estimate: frozenset[int] | None
    status: str  # "unique" | "none" | "multiple"
    candidates_passing: int = 0


@dataclass(frozen=True)
class SimReport:
    """Error counts for one (n, trials) cell with a Wilson 95% interval."""

    n: int
    trials: int
    errors_exact: int
    errors_partial: int
    pe_hat: float
    ci_lo: float
    ci_hi: float
    mean_decode_candidates: float
    seed: int

    def as_csv_row(self) -> list:
        return [
            self.n,
            self.trials,
            self.errors_exact,
            self.errors_partial,
            f"{self.pe_hat:.6f}",
            f"{self.ci_lo:.6f}",
            f"{self.ci_hi:.6f}",
            self.seed,
        ]


CSV_HEADER = ["n", "trials", "errors_exact", "errors_partial", "pe_hat", "ci_lo", "ci_hi", "seed"]


def wilson_interval(errors: int, trials: int, z: float = 1.959963984540054):
    """Wilson score 95% interval for a binomial proportion."""
    if trials == 0:
        return 0.0, 1.0
    p = errors / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z2 / (4 * trials**2)) / denom
    lo = 0.0 if errors == 0 else max(0.0, center - half)
    hi = 1.0 if errors == trials else min(1.0, center + half)
    return lo, hi


def _guard_candidates(dims: ProblemDims) -> None:
    if dims.k > K_CAP:
        raise GuardError(f"exhaustive decoding limited to k <= {K_CAP}, got {dims.k}")
    if log_binomial(dims.p, dims.k) > math.log(CANDIDATE_CAP):
        raise GuardError(
            f"C({dims.p}, {dims.k}) exceeds the {CANDIDATE_CAP} candidate cap"
        )


def candidate_supports(dims: ProblemDims):
    _guard_candidates(dims)
    return itertools.combinations(range(1, dims.p + 1), dims.k)


# ---------------------------------------------------------------------------
# Threshold decoder
# ---------------------------------------------------------------------------


def combined_thresholds(dims: ProblemDims, delta1: float, gamma: float = 0.0):
    """gamma_l + gamma'_l (+ gamma) for l = 1..k."""
    k, p = dims.k, dims.p
    out = {}
    for ell in range(1, k + 1):
        g1 = math.log(k / delta1) + log_binomial(p - k, ell) + log_binomial(k, ell)
        g2 = math.log(k / delta1) + log_binomial(k, ell)
        out[ell] = g1 + g2 + gamma
    return out


def _averaged_partition_density(model, prior, x_cand, y, partition) -> float:
    """Beta-averaged statistic log P(y|x_s) - log P(y|x_eq) for one partition."""
    atoms = prior_atoms(prior, x_cand.shape[1])
    num_terms = []
    den_terms = []
    for lw, b in atoms:
        num = log_conditional_likelihood(model, x_cand, b, y)
        num_terms.append(lw + num)
        if np.isneginf(num):
            dens = None
        else:
            dens = density_rows(model, partition, b, x_cand, y)
        if dens is not None and np.all(np.isfinite(dens)):
            den_terms.append(lw + num - float(np.sum(dens)))
        else:
            from .info import _log_marginal_rows_direct

            den_terms.append(lw + _log_marginal_rows_direct(model, partition, x_cand, b, y))
    num_total = float(logsumexp(num_terms))
    if np.isneginf(num_total):
        return NEG_INF  # zero-likelihood candidate: eliminated
    return num_total - float(logsumexp(den_terms))


def decode_threshold(
    realization: Realization,
    model: ModelSpec,
    prior: SignalPrior,
    dims: ProblemDims,
    delta1: float = 0.1,
    gamma_rule: str = "discrete",
) -> DecodeOutcome:
    """Unique candidate passing the combined threshold test on every
    partition; "none" or "multiple" otherwise (both are errors)."""
    from .bounds import gamma_select

    gamma = gamma_select(gamma_rule, model, prior, dims) if gamma_rule != "zero" else 0.0
    thresholds = combined_thresholds(dims, delta1, gamma)
    x, y = realization.x, realization.y
    partitions = list(enumerate_partitions(dims.k))
    winners = []
    for cand in candidate_supports(dims):
        x_cand = x[:, np.asarray(cand, dtype=int) - 1]
        ok = True
        for part in partitions:
            stat = _averaged_partition_density(model, prior, x_cand, y, part)
            if not stat > thresholds[part.ell]:
                ok = False
                break
        if ok:
            winners.append(frozenset(cand))
            if len(winners) > 1:
                break
    if len(winners) == 1:
        return DecodeOutcome(estimate=winners[0], status="unique", candidates_passing=1)
    status = "none" if not winners else "multiple"
    return DecodeOutcome(estimate=None, status=status, candidates_passing=len(winners))


def threshold_union_bound(
    model: ModelSpec,
    prior: SignalPrior,
    dims: ProblemDims,
    delta1: float = 0.1,
    gamma_rule: str = "discrete",
    trials: int = 2000,
    seed: int = 0,
) -> tuple[float, float, float]:
    """Numeric evaluation of the two-term union bound on the threshold
    decoder's error: (true-support failure probability estimated by Monte
    Carlo, its standard error, exact wrong-support mass
    sum_l C(p-k,l) C(k,l) e^{-t_l})."""
    from .bounds import gamma_select

    gamma = gamma_select(gamma_rule, model, prior, dims) if gamma_rule != "zero" else 0.0
    thresholds = combined_thresholds(dims, delta1, gamma)
    partitions = list(enumerate_partitions(dims.k))
    fails = 0
    for t in range(trials):
        real = sample_realization(dims, model, prior, seed, stream=(7, t))
        x_true = real.x[:, np.asarray(real.support, dtype=int) - 1]
        ok = True
        for part in partitions:
            stat = _averaged_partition_density(model, prior, x_true, real.y, part)
            if not stat > thresholds[part.ell]:
                ok = False
                break
        fails += 0 if ok else 1
    p1 = fails / trials
    se = math.sqrt(max(p1 * (1 - p1), 1.0 / trials) / trials)
    term2 = sum(
        math.exp(
            log_binomial(dims.p - dims.k, ell)
            + log_binomial(dims.k, ell)
            - thresholds[ell]
        )
        for ell in range(1, dims.k + 1)
    )
    return p1, se, term2


# ---------------------------------------------------------------------------
# Exhaustive ML decoder
# ---------------------------------------------------------------------------


def _ml_fast_gt(model, x, y, cands):
    """Vectorized all-ones GT likelihood over candidate index tuples."""
    xb = x.astype(bool)
    hits = np.stack([xb[:, np.asarray(c) - 1].any(axis=1) for c in cands])
    match = hits == (y > 0.5)[None, :]
    if model.rho == 0.0:
        ok = match.all(axis=1)
        return np.where(ok, 0.0, NEG_INF)
    n_miss = (~match).sum(axis=1)
    n = y.size
    return (n - n_miss) * math.log(1 - model.rho) + n_miss * math.log(model.rho)


def decode_ml(
    realization: Realization,
    model: ModelSpec,
    prior: SignalPrior,
    dims: ProblemDims,
) -> frozenset[int]:
    """Exhaustive maximum-likelihood support estimate, lexicographic ties."""
    cands = list(candidate_supports(dims))
    x, y = realization.x, realization.y
    if model.channel == GROUP_TESTING and prior.variant == ALL_ONES:
        scores = _ml_fast_gt(model, x, y, cands)
        best = int(np.argmax(scores))  # argmax takes the first (lexicographic) max
        return frozenset(cands[best])
    best_score = -math.inf
    best_cand = cands[0]
    for cand in cands:
        x_cand = x[:, np.asarray(cand, dtype=int) - 1]
        score = log_marginal_likelihood(model, prior, x_cand, y)
        if score > best_score:
            best_score, best_cand = score, cand
    return frozenset(best_cand)


def decode_comp(realization: Realization, dims: ProblemDims) -> frozenset[int]:
    """COMP baseline: items in any negative test are non-defective; the k
    highest positive-test membership counts win, lexicographic ties."""
    x = realization.x.astype(bool)
    y = realization.y > 0.5
    excluded = x[~y].any(axis=0) if (~y).any() else np.zeros(dims.p, dtype=bool)
    scores = x[y].sum(axis=0).astype(float) if y.any() else np.zeros(dims.p)
    scores[excluded] = -1.0
    # stable sort on (-score, index) gives highest scores, ties to low index
    order = np.lexsort((np.arange(dims.p), -scores))
    return frozenset(int(i) + 1 for i in order[: dims.k])


# ---------------------------------------------------------------------------
# Phase sweeps
# ---------------------------------------------------------------------------


def _decode(decoder: DecoderSpec, real, model, prior, dims) -> DecodeOutcome:
    if decoder.kind == "threshold":
        return decode_threshold(real, model, prior, dims, decoder.delta1, decoder.gamma_rule)
    if decoder.kind == "exhaustive-ml":
        est = decode_ml(real, model, prior, dims)
        return DecodeOutcome(estimate=est, status="unique", candidates_passing=1)
    if decoder.kind == "comp-gt":
        if model.channel != GROUP_TESTING:
            raise ValueError("comp-gt requires the group-testing model")
        est = decode_comp(real, dims)
        return DecodeOutcome(estimate=est, status="unique", candidates_passing=1)
    raise ValueError(f"unknown decoder kind {decoder.kind!r}")


def run_cell(
    model: ModelSpec,
    prior: SignalPrior,
    dims: ProblemDims,
    decoder: DecoderSpec,
    trials: int,
    seed: int,
    n_index: int = 0,
) -> SimReport:
    """One (n, trials) simulation cell with per-(n, trial) derived streams."""
    errors_exact = 0
    errors_partial = 0
    cand_total = 0.0
    n_candidates = math.comb(dims.p, dims.k)
    for t in range(trials):
        real = sample_realization(dims, model, prior, seed, stream=(n_index, t))
        out = _decode(decoder, real, model, prior, dims)
        true = real.support_set()
        if out.status != "unique" or out.estimate != true:
            errors_exact += 1
        if out.status != "unique":
            errors_partial += 1
        else:
            missed = len(true - out.estimate)
            extra = len(out.estimate - true)
            if missed > dims.d_max or extra > dims.d_max:
                errors_partial += 1
        cand_total += out.candidates_passing if decoder.kind == "threshold" else n_candidates
    pe = errors_exact / trials
    lo, hi = wilson_interval(errors_exact, trials)
    return SimReport(
        n=dims.n,
        trials=trials,
        errors_exact=errors_exact,
        errors_partial=errors_partial,
        pe_hat=pe,
        ci_lo=lo,
        ci_hi=hi,
        mean_decode_candidates=cand_total / trials,
        seed=seed,
    )


def phase_sweep(
    model: ModelSpec,
    prior: SignalPrior,
    dims: ProblemDims,
    n_grid: Sequence[int],
    decoder: DecoderSpec,
    trials: int,
    seed: int,
) -> list[SimReport]:
    """One SimReport per n in n_grid; streams derived from (seed, n_index,
    trial) so reports are independent and reproducible."""
    reports = []
    for i, n in enumerate(n_grid):
        cell_dims = ProblemDims(p=dims.p, k=dims.k, n=int(n), d_max=dims.d_max)
        reports.append(run_cell(model, prior, cell_dims, decoder, trials, seed, n_index=i))
    return reports


def empirical_g_check(k: int, trials: int, seed: int, alphas: Sequence[float] = ()):
    """Sorted squared-Gaussian partial means against g(alpha).

    Draws k squares per trial, sorts, and reports the average over trials of
    (1/k) sum of the floor(alpha k) smallest, next to g(alpha).
    """
    if not alphas:
        alphas = tuple(np.linspace(0.1, 1.0, 10))
    rng = rng_stream(seed)
    acc = np.zeros(len(alphas))
    for _ in range(trials):
        sq = np.sort(rng.standard_normal(k) ** 2)
        csum = np.concatenate([[0.0], np.cumsum(sq)])
        for j, a in enumerate(alphas):
            acc[j] += csum[int(math.floor(a * k))] / k
    acc /= trials
    return [(float(a), float(emp), g_alpha(float(a))) for a, emp in zip(alphas, acc)]
