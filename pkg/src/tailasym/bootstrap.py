"""Multiplier bootstrap tests and confidence intervals for the tail statistics.

Each replicate perturbs every observation with an iid positive multiplier and
recomputes the statistic with weighted ranks throughout: weighted reverse
ranks, a weighted cutoff in place of the literal top k, and multiplier
products in the double sum.  Centered replicate deviations emulate the
sampling fluctuation of the statistic itself, which yields p-values for
"eta = 0" (one-sided) and "delta = 0" (two-sided) without any variance
formula, plus normal-style confidence intervals from the replicate spread.

Replicate b always draws its multipliers from a stream derived from
(seed, b), so tests that share a seed and replicate count see identical
weights -- in particular the eta and delta tests are coupled, and results are
reproducible bit for bit across runs and platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _kernels
from .errors import DomainError, InvalidB, LengthMismatch, NonFinite, TiesPresent
from .estimators import Direction, _check_k, _check_kgrid, _coerce_direction, eta_sweep
from .ranks import PairedSample


@dataclass(frozen=True)
class MultiplierScheme:
    """A named distribution of positive iid bootstrap multipliers."""

    name: str
    draw: Callable


def unit_exponential_scheme() -> MultiplierScheme:
    """Standard exponential multipliers (mean 1, variance 1) -- the default."""
    return MultiplierScheme(
        name="unit_exponential", draw=lambda rng, n: rng.standard_exponential(n)
    )


def draw_multipliers(scheme: MultiplierScheme, n, seed) -> np.ndarray:
    """One batch of n multipliers from the scheme, seeded and reproducible."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"need n >= 1 multipliers, got {n!r}")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy=seed)))
    return _checked_draw(scheme, rng, int(n))


def _replicate_rng(seed, b):
    seq = np.random.SeedSequence(entropy=seed, spawn_key=(0, b))
    return np.random.Generator(np.random.Philox(seq))


def _checked_draw(scheme, rng, n):
    w = np.asarray(scheme.draw(rng, n), dtype=np.float64)
    if w.shape != (n,):
        raise DomainError(
            f"multiplier scheme {scheme.name!r} returned shape {w.shape}, wanted ({n},)"
        )
    if np.any(~np.isfinite(w)):
        raise NonFinite(f"multiplier scheme {scheme.name!r} produced non-finite draws")
    # An exact floating-point zero is astronomically unlikely but would break
    # the positivity contract, so nudge it to the smallest normal instead.
    w[w == 0.0] = np.finfo(np.float64).tiny
    if np.any(w < 0.0):
        raise DomainError(f"multiplier scheme {scheme.name!r} produced negative draws")
    return w


def _normalized_weights(weights, n):
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1 or w.size != n:
        raise LengthMismatch(f"need {n} weights, got shape {w.shape}")
    if np.any(~np.isfinite(w)):
        raise NonFinite("multiplier weights must be finite")
    if np.any(w <= 0.0):
        raise DomainError("multiplier weights must be strictly positive")
    return w / w.mean()


def weighted_reverse_rank(values, weights) -> np.ndarray:
    """Weight-smoothed reverse ranks: entry i sums normalized weights of values > values[i].

    With equal weights this is exactly reverse_ranks(values) - 1.  Values must
    be tie-free; weights strictly positive (they are normalized to mean one
    internally).
    """
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise DomainError("values must be a nonempty one-dimensional array")
    if np.any(~np.isfinite(v)):
        raise NonFinite("values must be finite")
    wo = _normalized_weights(weights, v.size)
    order = np.argsort(v, kind="stable")
    if np.any(v[order][1:] == v[order][:-1]):
        raise TiesPresent("values contain ties")
    ws = wo[order]
    greater = np.cumsum(ws[::-1])[::-1] - ws
    out = np.empty(v.size, dtype=np.float64)
    out[order] = greater
    return out


class _DirectionPlan:
    """Weight-independent sort structure for one direction of the statistic.

    Holds the ascending order of the ranked series and the descending order of
    the conditioning series; each replicate only needs cumulative sums and
    gathers on top of these, plus one sort of the weighted ranks.
    """

    def __init__(self, ranked, conditioning):
        self.value_order = np.argsort(ranked, kind="stable")
        self.y_order = np.argsort(-conditioning, kind="stable")

    def replicate_inputs(self, wo):
        n = wo.size
        ws = wo[self.value_order]
        greater = np.cumsum(ws[::-1])[::-1] - ws
        r = np.empty(n, dtype=np.float64)
        r[self.value_order] = greater
        rx = r[self.y_order]
        wy = wo[self.y_order]
        excl = np.concatenate(([0.0], np.cumsum(wy)[:-1]))
        order = np.argsort(rx, kind="stable")
        return rx[order], order.astype(np.int64), wy[order], excl


def _plan_for(sample: PairedSample, direction: Direction) -> _DirectionPlan:
    if direction is Direction.X_GIVEN_Y:
        return _DirectionPlan(sample.x, sample.y)
    return _DirectionPlan(sample.y, sample.x)


def _weighted_values(plan, wo, ks):
    kf = ks.astype(np.float64)
    rx_s, ypos_s, w_s, excl = plan.replicate_inputs(wo)
    taus = np.searchsorted(excl, kf, side="left").astype(np.int64)
    sums = _kernels.weighted_eta_grid_sums(rx_s, ypos_s, w_s, taus, ks)
    return (3.0 * sums) / kf**3


def bootstrap_eta(sample, k, weights, direction=Direction.X_GIVEN_Y) -> float:
    """One multiplier-weighted eta replicate at tail size k."""
    direction = _coerce_direction(direction)
    k = _check_k(k, sample.n)
    wo = _normalized_weights(weights, sample.n)
    ks = np.asarray([k], dtype=np.int64)
    return float(_weighted_values(_plan_for(sample, direction), wo, ks)[0])


def bootstrap_delta(sample, k, weights) -> float:
    """One multiplier-weighted delta replicate at tail size k (shared weights)."""
    return bootstrap_eta(sample, k, weights, Direction.X_GIVEN_Y) - bootstrap_eta(
        sample, k, weights, Direction.Y_GIVEN_X
    )


@dataclass(frozen=True)
class TestResult:
    """Bootstrap test outcome at one tail size."""

    k: int
    statistic: float
    p_value: float
    boot_sd: float
    ci_low: float
    ci_high: float
    B: int
    alpha: float


@dataclass(frozen=True)
class SweepVerdict:
    """Aggregate decision over a k-grid of bootstrap tests."""

    fraction_below_alpha: float
    reject: bool
    threshold: float
    n_k: int


def _check_B(B):
    if isinstance(B, bool) or not isinstance(B, (int, np.integer)) or B < 1:
        raise InvalidB(f"B must be a positive integer, got {B!r}")
    return int(B)


def _check_alpha(alpha):
    if not (isinstance(alpha, (int, float)) and 0.0 < alpha < 1.0):
        raise DomainError(f"alpha must lie strictly between 0 and 1, got {alpha!r}")
    return float(alpha)


def _replicate_matrices(sample, ks, B, scheme, seed, directions):
    out = {d: np.empty((B, ks.size), dtype=np.float64) for d in directions}
    plans = {d: _plan_for(sample, d) for d in directions}
    for b in range(1, B + 1):
        rng = _replicate_rng(seed, b)
        wo = _checked_draw(scheme, rng, sample.n)
        wo = wo / wo.mean()
        for d in directions:
            out[d][b - 1, :] = _weighted_values(plans[d], wo, ks)
    return out


def _assemble(plain, boot, ks, B, alpha, two_sided):
    z = normal_quantile(alpha / 2.0)
    results = []
    for j, k in enumerate(ks):
        stat = float(plain[j])
        col = boot[:, j]
        if two_sided:
            exceed = int(np.count_nonzero(np.abs(col - stat) > abs(stat)))
        else:
            exceed = int(np.count_nonzero(col - stat > stat))
        # boot_sd estimates the SD of the limit normal of sqrt(k) * (replicate
        # - statistic); the replicate values themselves fluctuate at scale
        # 1/sqrt(k), hence the sqrt(k) rescaling here and the matching /sqrt(k)
        # in the interval half-width.
        root_k = math.sqrt(int(k))
        sd = root_k * float(np.std(col, ddof=1)) if B > 1 else 0.0
        half = z * sd / root_k
        results.append(
            TestResult(
                k=int(k),
                statistic=stat,
                p_value=exceed / B,
                boot_sd=sd,
                ci_low=stat - half,
                ci_high=stat + half,
                B=B,
                alpha=alpha,
            )
        )
    return results


def test_eta_zero(
    sample,
    kgrid,
    B=100,
    alpha=0.05,
    seed=0,
    direction=Direction.X_GIVEN_Y,
    scheme=None,
):
    """One-sided multiplier test of 'no extreme-tail association' over a k-grid.

    At each k the p-value is the fraction of replicates whose centered value
    exceeds the observed statistic; under tail independence the statistic
    concentrates near zero, so large observed values are rarely exceeded.
    Returns one TestResult per k, in grid order.
    """
    direction = _coerce_direction(direction)
    ks = _check_kgrid(kgrid, sample.n)
    B = _check_B(B)
    alpha = _check_alpha(alpha)
    scheme = scheme if scheme is not None else unit_exponential_scheme()
    plain = [e.value for e in eta_sweep(sample, ks, direction)]
    boot = _replicate_matrices(sample, ks, B, scheme, seed, (direction,))[direction]
    return _assemble(plain, boot, ks, B, alpha, two_sided=False)


def test_delta_zero(sample, kgrid, B=100, alpha=0.05, seed=0, scheme=None):
    """Two-sided multiplier test of 'both tails equally dependent' over a k-grid.

    Each replicate uses one shared multiplier batch for both directions, so
    the replicate delta is the difference of coupled weighted statistics.  The
    p-value at k is the fraction of replicates with |centered delta| above the
    observed |delta|.
    """
    ks = _check_kgrid(kgrid, sample.n)
    B = _check_B(B)
    alpha = _check_alpha(alpha)
    scheme = scheme if scheme is not None else unit_exponential_scheme()
    exy = [e.value for e in eta_sweep(sample, ks, Direction.X_GIVEN_Y)]
    eyx = [e.value for e in eta_sweep(sample, ks, Direction.Y_GIVEN_X)]
    plain = [a - b for a, b in zip(exy, eyx)]
    mats = _replicate_matrices(
        sample, ks, B, scheme, seed, (Direction.X_GIVEN_Y, Direction.Y_GIVEN_X)
    )
    boot = mats[Direction.X_GIVEN_Y] - mats[Direction.Y_GIVEN_X]
    return _assemble(plain, boot, ks, B, alpha, two_sided=True)


def summarize_rejection(results, threshold=0.75) -> SweepVerdict:
    """Fraction of grid points with p < alpha, and the reject/accept verdict."""
    if not results:
        raise DomainError("cannot summarize an empty result list")
    if not (isinstance(threshold, (int, float)) and 0.0 < threshold <= 1.0):
        raise DomainError(f"threshold must lie in (0, 1], got {threshold!r}")
    frac = sum(1 for r in results if r.p_value < r.alpha) / len(results)
    return SweepVerdict(
        fraction_below_alpha=frac,
        reject=frac >= threshold,
        threshold=float(threshold),
        n_k=len(results),
    )


# --- standard normal quantile ------------------------------------------------
#
# Rational initial guess (relative error ~1e-9 everywhere) polished with one
# Halley step against the erfc form of the normal CDF, which lands within a
# few ulps of the true quantile.  Kept dependency-free on purpose: the tests
# cross-check it against an independent implementation.

_CENTRAL_NUM = (
    -3.969683028665376e01,
    2.209460984245205e02,
    -2.759285104469687e02,
    1.383577518672690e02,
    -3.066479806614716e01,
    2.506628277459239e00,
)
_CENTRAL_DEN = (
    -5.447609879822406e01,
    1.615858368580409e02,
    -1.556989798598866e02,
    6.680131188771972e01,
    -1.328068155288572e01,
)
_TAIL_NUM = (
    -7.784894002430293e-03,
    -3.223964580411365e-01,
    -2.400758277161838e00,
    -2.549732539343734e00,
    4.374664141464968e00,
    2.938163982698783e00,
)
_TAIL_DEN = (
    7.784695709041462e-03,
    3.224671290700398e-01,
    2.445134137142996e00,
    3.754408661907416e00,
)

_P_LOW = 0.02425


def _tail_guess(q):
    c1, c2, c3, c4, c5, c6 = _TAIL_NUM
    d1, d2, d3, d4 = _TAIL_DEN
    num = ((((c1 * q + c2) * q + c3) * q + c4) * q + c5) * q + c6
    den = (((d1 * q + d2) * q + d3) * q + d4) * q + 1.0
    return num / den


def _lower_quantile(p):
    # Reflect the upper half onto the lower: 1 - p is exact here (both
    # operands lie within a factor of two), and the Halley step below is only
    # well conditioned for p <= 1/2, where Phi(x) - p does not cancel.
    if p > 0.5:
        return -_lower_quantile(1.0 - p)
    if p < _P_LOW:
        x = _tail_guess(math.sqrt(-2.0 * math.log(p)))
    else:
        a1, a2, a3, a4, a5, a6 = _CENTRAL_NUM
        b1, b2, b3, b4, b5 = _CENTRAL_DEN
        q = p - 0.5
        r = q * q
        num = (((((a1 * r + a2) * r + a3) * r + a4) * r + a5) * r + a6) * q
        den = ((((b1 * r + b2) * r + b3) * r + b4) * r + b5) * r + 1.0
        x = num / den
    # Halley refinement on Phi(x) - p = 0.
    err = 0.5 * math.erfc(-x / math.sqrt(2.0)) - p
    u = err * math.sqrt(2.0 * math.pi) * math.exp(0.5 * x * x)
    return x - u / (1.0 + 0.5 * x * u)


def normal_quantile(p) -> float:
    """Upper-tail standard normal quantile: the z with P(Z > z) = p.

    normal_quantile(0.5) is 0; normal_quantile(0.025) is 1.95996...;
    p must lie strictly in (0, 1).
    """
    if not (isinstance(p, (int, float)) and 0.0 < p < 1.0):
        raise DomainError(f"p must lie strictly between 0 and 1, got {p!r}")
    return 0.0 - _lower_quantile(float(p))
