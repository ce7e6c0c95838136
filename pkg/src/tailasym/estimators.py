"""Rank-based tail association estimators.

The central quantity is eta_kn, a directional coefficient built from the top-k
concomitant reverse ranks: it is 0 when the k largest values of the
conditioning series pair with uniformly small values of the other series, and
attains a closed-form maximum (eta_upper_bound) exactly when the top ranks
match perfectly.  delta_kn is the difference between the two directions and
measures asymmetry of extreme-tail dependence.

Heavy lifting happens in integer arithmetic inside the kernel backend, so the
estimator value is a single correctly-rounded division of exact integers: the
"exact equality" guarantees in the tests are meaningful, not wishful.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, KOutOfRange
from .ranks import PairedSample, concomitant_ranks


class Direction(enum.Enum):
    """Which series is conditioned on: X_GIVEN_Y ranks x along the top of y."""

    X_GIVEN_Y = "x_given_y"
    Y_GIVEN_X = "y_given_x"


def _coerce_direction(direction) -> Direction:
    if isinstance(direction, Direction):
        return direction
    try:
        return Direction(direction)
    except ValueError:
        raise DomainError(f"unknown direction: {direction!r}") from None


def _oriented(sample: PairedSample, direction: Direction) -> PairedSample:
    return sample if direction is Direction.X_GIVEN_Y else sample.swapped()


def _check_k(k, n) -> int:
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)):
        raise KOutOfRange(f"k must be an integer, got {k!r}")
    k = int(k)
    if k < 2:
        raise KOutOfRange(f"k must be at least 2, got {k}")
    if k > n:
        raise KOutOfRange(f"k must not exceed the sample size {n}, got {k}")
    return k


def _check_kgrid(kgrid, n) -> np.ndarray:
    ks = [_check_k(k, n) for k in kgrid]
    if not ks:
        raise KOutOfRange("k grid is empty")
    arr = np.asarray(ks, dtype=np.int64)
    if np.any(np.diff(arr) <= 0):
        raise KOutOfRange("k grid must be strictly increasing")
    return arr


def _rank_positions(rho: np.ndarray) -> np.ndarray:
    """Inverse permutation: pos[v-1] is the 0-based position of rank value v."""
    pos = np.empty(rho.size, dtype=np.int64)
    pos[rho - 1] = np.arange(rho.size, dtype=np.int64)
    return pos


@dataclass(frozen=True)
class EtaEstimate:
    """One directional tail-association estimate."""

    value: float
    k: int
    n: int
    direction: Direction


@dataclass(frozen=True)
class DeltaEstimate:
    """Tail-asymmetry estimate: eta in direction x|y minus eta in y|x."""

    value: float
    k: int
    n: int
    eta_xy: float
    eta_yx: float


def eta_upper_bound(k) -> float:
    """Largest attainable value of the eta statistic at tail size k.

    Equals (1 - 1/k)(1 + 5/(2k) - 3/k^2); computed here as one division of
    exact integers so that a perfectly concordant sample reproduces it bit for
    bit.  The bound is below 9/8 for every k and tends to 1 from above.
    """
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)):
        raise KOutOfRange(f"k must be an integer, got {k!r}")
    k = int(k)
    if k < 2:
        raise KOutOfRange(f"k must be at least 2, got {k}")
    return (k - 1) * (2 * k * k + 5 * k - 6) / (2 * k**3)


def _eta_values(sample: PairedSample, ks: np.ndarray, direction: Direction):
    cr = concomitant_ranks(_oriented(sample, direction))
    pos = _rank_positions(cr.rho)
    sums = _kernels.eta_grid_sums(pos, ks)
    return [3 * int(s) / int(k) ** 3 for s, k in zip(sums, ks)]


def eta_kn(sample: PairedSample, k, direction=Direction.X_GIVEN_Y) -> EtaEstimate:
    """Directional tail-association coefficient at tail size k.

    Requires 2 <= k <= n.  The value lies in [0, eta_upper_bound(k)]; it is a
    function of the concomitant reverse ranks only.
    """
    direction = _coerce_direction(direction)
    k = _check_k(k, sample.n)
    ks = np.asarray([k], dtype=np.int64)
    value = _eta_values(sample, ks, direction)[0]
    return EtaEstimate(value=value, k=k, n=sample.n, direction=direction)


def eta_sweep(sample: PairedSample, kgrid, direction=Direction.X_GIVEN_Y):
    """eta_kn over a strictly increasing grid of tail sizes (one rank pass)."""
    direction = _coerce_direction(direction)
    ks = _check_kgrid(kgrid, sample.n)
    values = _eta_values(sample, ks, direction)
    return [
        EtaEstimate(value=v, k=int(k), n=sample.n, direction=direction)
        for v, k in zip(values, ks)
    ]


def delta_kn(sample: PairedSample, k) -> DeltaEstimate:
    """Tail-asymmetry statistic: eta_kn(x|y) - eta_kn(y|x)."""
    exy = eta_kn(sample, k, Direction.X_GIVEN_Y)
    eyx = eta_kn(sample, k, Direction.Y_GIVEN_X)
    return DeltaEstimate(
        value=exy.value - eyx.value,
        k=exy.k,
        n=sample.n,
        eta_xy=exy.value,
        eta_yx=eyx.value,
    )


def delta_sweep(sample: PairedSample, kgrid):
    """delta_kn over a strictly increasing grid of tail sizes."""
    exy = eta_sweep(sample, kgrid, Direction.X_GIVEN_Y)
    eyx = eta_sweep(sample, kgrid, Direction.Y_GIVEN_X)
    return [
        DeltaEstimate(
            value=a.value - b.value, k=a.k, n=a.n, eta_xy=a.value, eta_yx=b.value
        )
        for a, b in zip(exy, eyx)
    ]


@dataclass(frozen=True, eq=False)
class TailCopulaGrid:
    """Piecewise-constant empirical tail-copula slice u -> Lambda(u, 1).

    The function is 0 on [0, breakpoints[0]), jumps by 1/k at each breakpoint,
    and takes the value values[j] on (breakpoints[j], breakpoints[j+1]]; it is
    left-continuous at its jumps (the indicator underneath is strict).
    """

    k: int
    n: int
    breakpoints: np.ndarray
    values: np.ndarray

    def evaluate(self, u):
        """Value of the slice at u (scalar or array), u in [0, 1]."""
        ua = np.asarray(u, dtype=np.float64)
        if np.any(~np.isfinite(ua)) or np.any(ua < 0.0) or np.any(ua > 1.0):
            raise DomainError("slice argument must lie in [0, 1]")
        out = np.searchsorted(self.breakpoints, ua, side="left") / self.k
        return float(out) if ua.ndim == 0 else out


def empirical_tail_copula_slice(
    sample: PairedSample, k, direction=Direction.X_GIVEN_Y
) -> TailCopulaGrid:
    """Empirical tail-copula slice built from the top-(k-1) concomitant ranks.

    Each concomitant rank r <= k among the first k-1 contributes a jump of 1/k
    at u = (r-1)/k; integrating the square of the result and scaling by 3
    reproduces eta_kn exactly (see eta_from_tail_copula).
    """
    direction = _coerce_direction(direction)
    k = _check_k(k, sample.n)
    cr = concomitant_ranks(_oriented(sample, direction))
    top = cr.rho[: k - 1]
    contributing = np.sort(top[top <= k])
    breakpoints = (contributing - 1) / k
    values = np.arange(1, contributing.size + 1, dtype=np.float64) / k
    breakpoints.flags.writeable = False
    values.flags.writeable = False
    return TailCopulaGrid(k=k, n=sample.n, breakpoints=breakpoints, values=values)


def eta_from_tail_copula(grid: TailCopulaGrid) -> float:
    """3 times the exact integral of the squared slice over [0, 1].

    Piecewise-constant integration: values[j] holds on (breakpoints[j], b_next]
    with b_next the following breakpoint or 1.  Agrees with eta_kn to float
    precision; a constant slice c on all of [0, 1] integrates to 3 c^2.
    """
    edges = np.append(grid.breakpoints, 1.0)
    lengths = np.diff(edges)
    return 3.0 * float(np.dot(grid.values * grid.values, lengths))
