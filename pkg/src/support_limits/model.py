"""
Domain types for the recovery problem and seeded samplers.

Conventions used throughout the package:

- Index sets are 1-based: a support is a subset of {1..p}, a partition splits
  the canonical support positions {1..k}.  Numpy indexing subtracts 1.
- The support is split into (s_dif, s_eq) with s_dif nonempty; all
  information measures are indexed by ell = |s_dif|.
- Randomness comes from the counter-based Philox generator keyed by
  (seed, *stream), so parallel trials are reproducible and independent.

Observation channels:

    linear          y = <x, beta> + z,      z ~ N(0, sigma^2), x ~ N(0,1)
    one-bit         y = sign(<x, beta> + z) in {-1, +1}, sign(0) = +1
    group-testing   y = 1{any tested item defective} xor Bernoulli(rho),
                    x ~ Bernoulli(nu/k) in {0,1}
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

LINEAR = "linear"
ONE_BIT = "one-bit"
GROUP_TESTING = "group-testing"

GAUSSIAN_UNIT = "gaussian-unit"
BERNOULLI = "bernoulli"


class GuardError(ValueError):
    """A desk-scale guard refused an exponentially large computation."""


def rng_stream(seed: int, *stream: int) -> np.random.Generator:
    """Counter-based generator for (seed, stream...); reproducible splitting."""
    ss = np.random.SeedSequence([int(seed) & (2**63 - 1), *[int(s) for s in stream]])
    return np.random.Generator(np.random.Philox(key=ss.generate_state(2, np.uint64)))


@dataclass(frozen=True)
class ProblemDims:
    """Ambient dimension p, sparsity k, measurements n, allowed misses d_max."""

    p: int
    k: int
    n: int = 0
    d_max: int = 0

    def __post_init__(self):
        if not 1 <= self.k <= self.p:
            raise ValueError(f"need 1 <= k <= p, got k={self.k}, p={self.p}")
        if self.n < 0:
            raise ValueError("n must be >= 0")
        if not 0 <= self.d_max <= self.k - 1:
            raise ValueError(f"need 0 <= d_max <= k-1, got d_max={self.d_max}")


@dataclass(frozen=True)
class ModelSpec:
    """Observation channel plus measurement design.

    linear/one-bit pair with the unit Gaussian design; group testing pairs
    with the Bernoulli(nu/k) design.
    """

    channel: str
    design: str
    sigma: float = 1.0
    rho: float = 0.0
    nu: float = float(np.log(2.0))

    def __post_init__(self):
        if self.channel in (LINEAR, ONE_BIT):
            if self.design != GAUSSIAN_UNIT:
                raise ValueError(f"{self.channel} requires the gaussian-unit design")
            if not self.sigma > 0:
                raise ValueError("noise std sigma must be > 0")
        elif self.channel == GROUP_TESTING:
            if self.design != BERNOULLI:
                raise ValueError("group testing requires the Bernoulli design")
            if not 0.0 <= self.rho < 0.5:
                raise ValueError(f"crossover rho must lie in [0, 0.5), got {self.rho}")
            if not self.nu > 0:
                raise ValueError("Bernoulli design intensity nu must be > 0")
        else:
            raise ValueError(f"unknown channel {self.channel!r}")

    @staticmethod
    def linear(sigma: float) -> "ModelSpec":
        return ModelSpec(channel=LINEAR, design=GAUSSIAN_UNIT, sigma=sigma)

    @staticmethod
    def one_bit(sigma: float) -> "ModelSpec":
        return ModelSpec(channel=ONE_BIT, design=GAUSSIAN_UNIT, sigma=sigma)

    @staticmethod
    def group_testing(rho: float = 0.0, nu: float = float(np.log(2.0))) -> "ModelSpec":
        return ModelSpec(channel=GROUP_TESTING, design=BERNOULLI, rho=rho, nu=nu)

    def bernoulli_p(self, k: int) -> float:
        """Per-entry design probability nu/k for group testing."""
        p1 = self.nu / k
        if p1 > 1.0:
            raise ValueError(f"nu/k = {p1} exceeds 1; invalid Bernoulli design")
        return p1


FIXED_VECTOR = "fixed-vector"
PERMUTED_VECTOR = "permuted-vector"
IID_GAUSSIAN = "iid-gaussian"
ALL_ONES = "all-ones"


@dataclass(frozen=True)
class SignalPrior:
    """Distribution of the non-zero entries beta_S (permutation-invariant)."""

    variant: str
    b: tuple[float, ...] = ()
    sigma_beta_sq: float = 0.0

    def __post_init__(self):
        if self.variant in (FIXED_VECTOR, PERMUTED_VECTOR):
            if len(self.b) == 0:
                raise ValueError(f"{self.variant} prior needs a non-empty vector b")
        elif self.variant == IID_GAUSSIAN:
            if not self.sigma_beta_sq > 0:
                raise ValueError("iid-gaussian prior needs sigma_beta_sq > 0")
        elif self.variant != ALL_ONES:
            raise ValueError(f"unknown prior variant {self.variant!r}")

    @staticmethod
    def fixed(b: Sequence[float]) -> "SignalPrior":
        return SignalPrior(variant=FIXED_VECTOR, b=tuple(float(x) for x in b))

    @staticmethod
    def permuted(b: Sequence[float]) -> "SignalPrior":
        return SignalPrior(variant=PERMUTED_VECTOR, b=tuple(float(x) for x in b))

    @staticmethod
    def iid_gaussian(sigma_beta_sq: float) -> "SignalPrior":
        return SignalPrior(variant=IID_GAUSSIAN, sigma_beta_sq=float(sigma_beta_sq))

    @staticmethod
    def all_ones() -> "SignalPrior":
        return SignalPrior(variant=ALL_ONES)

    @property
    def m_beta(self) -> int:
        """Number of distinct values among the fixed entries."""
        if self.variant in (FIXED_VECTOR, PERMUTED_VECTOR):
            return len(set(self.b))
        if self.variant == ALL_ONES:
            return 1
        raise ValueError("m_beta is only defined for discrete priors")

    @property
    def b_min(self) -> float:
        return min(abs(x) for x in self.b) if self.b else 1.0

    @property
    def b_max(self) -> float:
        return max(abs(x) for x in self.b) if self.b else 1.0


def validate_pairing(model: ModelSpec, prior: SignalPrior, k: int) -> None:
    if model.channel == GROUP_TESTING:
        if prior.variant != ALL_ONES:
            raise ValueError("group testing pairs only with the all-ones prior")
        model.bernoulli_p(k)
    else:
        if prior.variant == ALL_ONES:
            raise ValueError("the all-ones prior pairs only with group testing")
        if prior.variant in (FIXED_VECTOR, PERMUTED_VECTOR) and len(prior.b) != k:
            raise ValueError(f"prior vector length {len(prior.b)} != k = {k}")


@dataclass(frozen=True)
class Partition:
    """Split of the canonical support positions {1..k} with s_dif nonempty."""

    s_dif: tuple[int, ...]
    s_eq: tuple[int, ...]

    def __post_init__(self):
        dif, eq = set(self.s_dif), set(self.s_eq)
        if not dif:
            raise ValueError("s_dif must be nonempty")
        if dif & eq:
            raise ValueError("s_dif and s_eq must be disjoint")
        k = len(dif) + len(eq)
        if dif | eq != set(range(1, k + 1)):
            raise ValueError("s_dif and s_eq must partition {1..k}")
        object.__setattr__(self, "s_dif", tuple(sorted(dif)))
        object.__setattr__(self, "s_eq", tuple(sorted(eq)))

    @property
    def ell(self) -> int:
        return len(self.s_dif)

    @property
    def k(self) -> int:
        return len(self.s_dif) + len(self.s_eq)

    def dif_index(self) -> np.ndarray:
        """0-based numpy index array for s_dif."""
        return np.asarray(self.s_dif, dtype=int) - 1

    def eq_index(self) -> np.ndarray:
        return np.asarray(self.s_eq, dtype=int) - 1


def min_info_partition(b: Sequence[float], ell: int) -> Partition:
    """Partition putting the ell smallest-magnitude entries into s_dif.

    This minimizes sum_{i in s_dif} b_i^2 at fixed ell (ties broken by lowest
    index), which minimizes the conditional mutual information for the linear
    and 1-bit channels and is the canonical per-ell representative for group
    testing, where all partitions of a given size are equivalent.
    """
    b = np.asarray(b, dtype=float)
    k = b.size
    if not 1 <= ell <= k:
        raise ValueError(f"need 1 <= ell <= k, got ell={ell}, k={k}")
    order = np.argsort(np.abs(b), kind="stable")
    dif = tuple(sorted(int(i) + 1 for i in order[:ell]))
    eq = tuple(sorted(int(i) + 1 for i in order[ell:]))
    return Partition(s_dif=dif, s_eq=eq)


def max_info_partition(b: Sequence[float], ell: int) -> Partition:
    """Partition putting the ell largest-magnitude entries into s_dif."""
    b = np.asarray(b, dtype=float)
    k = b.size
    order = np.argsort(np.abs(b), kind="stable")
    dif = tuple(sorted(int(i) + 1 for i in order[k - ell :]))
    eq = tuple(sorted(int(i) + 1 for i in order[: k - ell]))
    return Partition(s_dif=dif, s_eq=eq)


def enumerate_partitions(k: int, ell_set: Sequence[int] | None = None) -> Iterator[Partition]:
    """Yield every partition with |s_dif| in ell_set exactly once.

    Guarded at k <= 24: there are 2^k - 1 partitions in total.
    """
    if k > 24:
        raise GuardError(f"enumerate_partitions is limited to k <= 24, got k={k}")
    ells = sorted(set(ell_set)) if ell_set is not None else list(range(1, k + 1))
    universe = range(1, k + 1)
    for ell in ells:
        if not 1 <= ell <= k:
            raise ValueError(f"ell={ell} outside 1..k")
        for dif in itertools.combinations(universe, ell):
            eq = tuple(i for i in universe if i not in dif)
            yield Partition(s_dif=dif, s_eq=eq)


def snr_db(prior: SignalPrior, model: ModelSpec, k: int) -> float:
    """Per-sample SNR 10 log10(k sigma_beta^2 / sigma^2) for Gaussian priors."""
    if prior.variant != IID_GAUSSIAN:
        raise ValueError("snr_db is defined for the iid-gaussian prior")
    return 10.0 * float(np.log10(k * prior.sigma_beta_sq / model.sigma**2))


def c_beta_from_snr(snr: float, sigma: float = 1.0) -> float:
    """Inverse of snr_db at fixed sigma: c_beta = k sigma_beta^2."""
    return sigma**2 * 10.0 ** (snr / 10.0)


@dataclass(frozen=True)
class Realization:
    """One (S, beta, X, Y) draw; support is a sorted 1-based tuple."""

    support: tuple[int, ...]
    beta: np.ndarray
    x: np.ndarray
    y: np.ndarray

    def support_set(self) -> frozenset[int]:
        return frozenset(self.support)

    def x_support(self) -> np.ndarray:
        """Measurement columns restricted to the support, in support order."""
        return self.x[:, np.asarray(self.support, dtype=int) - 1]

    def b_support(self) -> np.ndarray:
        return self.beta[np.asarray(self.support, dtype=int) - 1]

    def to_json(self) -> str:
        """Debugging serialization; not a stability contract."""
        return json.dumps(
            {
                "support": list(self.support),
                "beta": self.beta.tolist(),
                "x": self.x.tolist(),
                "y": self.y.tolist(),
            }
        )


def one_bit_sign(v) -> np.ndarray:
    """Sign with the non-negative convention: sign(0) = +1."""
    return np.where(np.asarray(v) >= 0.0, 1.0, -1.0)


def channel_output(
    model: ModelSpec, x_s: np.ndarray, b_s: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """Draw y | x_s, b_s for n rows of support-restricted measurements."""
    n = x_s.shape[0]
    if model.channel == LINEAR:
        return x_s @ b_s + model.sigma * rng.standard_normal(n)
    if model.channel == ONE_BIT:
        return one_bit_sign(x_s @ b_s + model.sigma * rng.standard_normal(n))
    hit = (x_s.astype(bool).any(axis=1)).astype(np.int8)
    if model.rho > 0.0:
        flips = (rng.random(n) < model.rho).astype(np.int8)
        hit = hit ^ flips
    return hit.astype(float)


def sample_realization(
    dims: ProblemDims,
    model: ModelSpec,
    prior: SignalPrior,
    seed: int,
    stream: tuple[int, ...] = (),
) -> Realization:
    """Draw (S, beta, X, Y): S uniform over k-subsets, X i.i.d. from the
    design, beta_S from the prior, Y conditionally i.i.d. per row.

    Deterministic given (seed, stream).
    """
    validate_pairing(model, prior, dims.k)
    rng = rng_stream(seed, *stream)
    support = tuple(sorted(int(i) + 1 for i in rng.choice(dims.p, size=dims.k, replace=False)))

    if prior.variant == FIXED_VECTOR:
        b_s = np.asarray(prior.b, dtype=float)
    elif prior.variant == PERMUTED_VECTOR:
        b_s = rng.permutation(np.asarray(prior.b, dtype=float))
    elif prior.variant == IID_GAUSSIAN:
        b_s = rng.normal(0.0, np.sqrt(prior.sigma_beta_sq), size=dims.k)
    else:
        b_s = np.ones(dims.k)

    if model.design == GAUSSIAN_UNIT:
        x = rng.standard_normal((dims.n, dims.p))
    else:
        x = (rng.random((dims.n, dims.p)) < model.bernoulli_p(dims.k)).astype(float)

    beta = np.zeros(dims.p)
    beta[np.asarray(support, dtype=int) - 1] = b_s
    y = channel_output(model, x[:, np.asarray(support, dtype=int) - 1], b_s, rng)
    return Realization(support=support, beta=beta, x=x, y=y)
