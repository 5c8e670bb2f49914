"""
Special functions and quadrature primitives.

Everything downstream (mutual informations, tail bounds, threshold formulas)
is built from a small set of scalar functions:

    H2(rho)        binary entropy in nats, with the 0 log 0 = 0 convention
    Q(x)           standard normal upper tail P[W >= x]
    log Q(x)       finite for |x| <= 40 (naive log(Q(x)) underflows near 38)
    F_chi2(u)      CDF of W^2 for W ~ N(0,1); equals 1 - 2 Q(sqrt(u))
    g(alpha)       int_0^inf [alpha - F_chi2(u)]^+ du

and two expectation drivers over W ~ N(0,1):

    gaussian_expectation(f)          E[f(W)] by Gauss-Hermite or adaptive Simpson
    mean_entropy_q_scaled(a)         E[H2(Q(a W))], robust for all a >= 0

The last one needs care: the integrand H2(Q(a w)) is a spike of width ~1/a
around w = 0, so plain Gauss-Hermite in w under-resolves it once a exceeds a
few units.  For large a we substitute r = a w, giving

    E[H2(Q(aW))] = (1/a) E_R[ exp(r^2/2 (1 - 1/a^2)) H2(Q(R)) ],  R ~ N(0,1),

whose integrand grows only polynomially and is evaluated in the log domain.

All entropies and information measures are in nats (base-e logs); base-2
conversion happens only at the CLI reporting layer.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial.hermite import hermgauss
from scipy.special import gammaln, log_ndtr, ndtr, ndtri

LOG2 = float(np.log(2.0))
_SQRT_2PI = float(np.sqrt(2.0 * np.pi))

# Relative fault-injection knob for the verification suite's sensitivity
# canary (CLI --perturb): entropies are scaled by (1 + eps).  Always 0.0 in
# normal operation.  Additive offsets would cancel in entropy differences.
_ENTROPY_PERTURBATION = 0.0


class NonConvergenceError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


def set_entropy_perturbation(eps: float) -> None:
    """Inject a relative fault into the entropy routines (verify canary)."""
    global _ENTROPY_PERTURBATION
    _ENTROPY_PERTURBATION = float(eps)


@dataclass(frozen=True)
class QuadratureSpec:
    """Configuration for expectations over W ~ N(0,1).

    node_count applies to the gauss-hermite scheme (>= 16); abs_tol to the
    adaptive-simpson scheme (> 0, tails truncated at |w| = 10).
    """

    node_count: int = 96
    scheme: str = "gauss-hermite"
    abs_tol: float = 1e-10

    def __post_init__(self):
        if self.scheme not in ("gauss-hermite", "adaptive-simpson"):
            raise ValueError(f"unknown quadrature scheme {self.scheme!r}")
        if self.scheme == "gauss-hermite" and self.node_count < 16:
            raise ValueError("gauss-hermite requires node_count >= 16")
        if self.scheme == "adaptive-simpson" and not self.abs_tol > 0:
            raise ValueError("adaptive-simpson requires abs_tol > 0")


DEFAULT_QUAD = QuadratureSpec()

_HERMITE_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def gauss_hermite_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes z and weights w with E[f(W)] ~ sum(w * f(z)), sum(w) = 1."""
    if n not in _HERMITE_CACHE:
        x, w = hermgauss(n)
        _HERMITE_CACHE[n] = (np.sqrt(2.0) * x, w / np.sqrt(np.pi))
    return _HERMITE_CACHE[n]


def binary_entropy(rho):
    """Binary entropy -rho log rho - (1-rho) log(1-rho) in nats.

    Accepts scalars or arrays; raises on values outside [0, 1].
    """
    r = np.asarray(rho, dtype=float)
    if np.any(r < 0.0) or np.any(r > 1.0):
        raise ValueError(f"binary_entropy argument outside [0, 1]: {rho!r}")
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -np.where(r > 0.0, r * np.log(r), 0.0)
        h -= np.where(r < 1.0, (1.0 - r) * np.log1p(-r), 0.0)
    h = h * (1.0 + _ENTROPY_PERTURBATION)
    return float(h) if np.isscalar(rho) or np.ndim(rho) == 0 else h


def q_function(x):
    """Standard normal upper tail Q(x) = P[W >= x]."""
    return ndtr(-np.asarray(x, dtype=float)) if np.ndim(x) else float(ndtr(-x))


def log_q_function(x):
    """log Q(x); stays finite for |x| <= 40 where Q itself underflows."""
    return log_ndtr(-np.asarray(x, dtype=float)) if np.ndim(x) else float(log_ndtr(-x))


def inverse_normal_cdf(p):
    """Quantile function of N(0,1) (rational approximation via ndtri)."""
    return ndtri(p)


def chi2_cdf_1dof(u):
    """CDF of W^2, W ~ N(0,1): P[W^2 <= u] = 1 - 2 Q(sqrt(u))."""
    uu = np.asarray(u, dtype=float)
    if np.any(uu < 0.0):
        raise ValueError(f"chi2_cdf_1dof argument must be >= 0, got {u!r}")
    out = 1.0 - 2.0 * ndtr(-np.sqrt(uu))
    return float(out) if np.ndim(u) == 0 else out


def g_alpha(alpha: float, quad: QuadratureSpec | None = None) -> float:
    """Truncated chi-square mean g(alpha) = int_0^inf [alpha - F_chi2(u)]^+ du.

    The integrand vanishes past u_a with F_chi2(u_a) = alpha, where
    u_a = (Phi^{-1}((1+alpha)/2))^2.  Integrating by parts collapses the
    integral to the exact closed form

        g(alpha) = alpha - 2 t phi(t),   t = Phi^{-1}((1+alpha)/2),

    i.e. the mean of W^2 restricted to W^2 <= u_a.  An adaptive-simpson quad
    argument switches to direct numerical integration of [alpha - F]^+ over
    [0, u_a]; the two routes agree to the requested tolerance.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"g_alpha argument outside [0, 1]: {alpha!r}")
    if alpha == 0.0:
        return 0.0
    if alpha == 1.0:
        return 1.0
    t = float(ndtri((1.0 + alpha) / 2.0))
    if quad is not None and quad.scheme == "adaptive-simpson":
        # substitute u = s^2: removes the sqrt(u) kink of F_chi2 at zero
        return _adaptive_simpson(
            lambda s: (alpha - chi2_cdf_1dof(s * s)) * 2.0 * s, 0.0, t, quad.abs_tol
        )
    return alpha - 2.0 * t * np.exp(-0.5 * t * t) / _SQRT_2PI


def gaussian_expectation(f: Callable, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """E[f(W)] for W ~ N(0,1); f must accept numpy arrays."""
    if quad.scheme == "gauss-hermite":
        z, w = gauss_hermite_nodes(quad.node_count)
        return float(np.sum(w * np.asarray(f(z), dtype=float)))
    phi = lambda w: np.exp(-0.5 * w * w) / _SQRT_2PI
    return _adaptive_simpson(lambda w: f(w) * phi(w), -10.0, 10.0, quad.abs_tol)


def _adaptive_simpson(f, a: float, b: float, tol: float, max_depth: int = 48) -> float:
    def simp(lo, mid, hi, flo, fmid, fhi):
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)

    def recurse(lo, hi, flo, fmid, fhi, whole, tol, depth):
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = float(f(lm)), float(f(rm))
        left = simp(lo, lm, mid, flo, flm, fmid)
        right = simp(mid, rm, hi, fmid, frm, fhi)
        if depth >= max_depth:
            raise NonConvergenceError(
                f"adaptive Simpson: depth {max_depth} exceeded on [{lo}, {hi}]"
            )
        if abs(left + right - whole) <= 15.0 * tol:
            return left + right + (left + right - whole) / 15.0
        return recurse(lo, mid, flo, flm, fmid, left, tol / 2.0, depth + 1) + recurse(
            mid, hi, fmid, frm, fhi, right, tol / 2.0, depth + 1
        )

    mid = 0.5 * (a + b)
    fa, fm, fb = float(f(a)), float(f(mid)), float(f(b))
    whole = simp(a, mid, b, fa, fm, fb)
    return recurse(a, b, fa, fm, fb, whole, tol, 0)


def log_binomial(n: int, r: int) -> float:
    """log C(n, r) in nats via log-gamma; requires 0 <= r <= n."""
    if r < 0 or n < 0 or r > n:
        raise ValueError(f"log_binomial requires 0 <= r <= n, got n={n}, r={r}")
    return float(gammaln(n + 1) - gammaln(r + 1) - gammaln(n - r + 1))


def _log_h2_of_q(z: np.ndarray) -> np.ndarray:
    """log H2(Q(z)) for z >= 0, stable far into the tail.

    For tiny Q, H2(Q) = Q (1 - log Q) + O(Q^2 log Q), so the log is computed
    from log Q directly rather than from an underflowing Q.
    """
    lq = log_ndtr(-z)
    q = np.exp(lq)
    out = np.empty_like(z)
    small = q < 1e-8
    out[small] = lq[small] + np.log1p(-lq[small])
    qs = np.clip(q[~small], 1e-300, 1.0 - 1e-16)
    out[~small] = np.log(-qs * np.log(qs) - (1.0 - qs) * np.log1p(-qs))
    return out


def mean_entropy_q_scaled(a: float, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """E[H2(Q(a W))] for W ~ N(0,1), accurate uniformly in a >= 0.

    Direct Gauss-Hermite in w for a <= 1 (the integrand is then wider than
    the node spacing); the r = a w substitution described in the module
    docstring otherwise.  Both branches agree to ~1e-15 at the crossover.
    """
    a = abs(float(a))
    scale = 1.0 + _ENTROPY_PERTURBATION
    if a == 0.0:
        return LOG2 * scale
    z, w = gauss_hermite_nodes(
        quad.node_count if quad.scheme == "gauss-hermite" else DEFAULT_QUAD.node_count
    )
    if a <= 1.0:
        q = np.clip(ndtr(-a * z), 1e-300, 1.0 - 1e-16)
        h = -q * np.log(q) - (1.0 - q) * np.log1p(-q)
        return float(np.sum(w * h)) * scale
    za = np.abs(z)
    t = 0.5 * za * za * (1.0 - 1.0 / (a * a))
    return float(np.sum(w * np.exp(t + _log_h2_of_q(za))) / a) * scale
